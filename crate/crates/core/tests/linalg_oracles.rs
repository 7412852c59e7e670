use g2d_core::linalg::{
    circulant_interval, circulant_interval_eigenvalues, determinant, kron, kron_power, lower_triangular_ones,
    nuclear_norm, psd_project, singular_values, sn_tridiagonal, svd, symmetric_eigen, text,
    tn_singular_values_closed_form, Matrix,
};
use proptest::prelude::*;

/// Laplace expansion along the first row.
fn cofactor_det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 0 {
        return 1.0;
    }
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<f64>> = a[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                .collect();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * a[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn to_rows(m: &Matrix<f64>) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix<f64>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3.0f64..3.0, r * c).prop_map(move |v| Matrix::from_vec(r, c, v).unwrap())
    })
}

fn square_pair(max: usize) -> impl Strategy<Value = (Matrix<f64>, Matrix<f64>)> {
    (1..=max).prop_flat_map(|n| {
        (
            prop::collection::vec(-2.0f64..2.0, n * n),
            prop::collection::vec(-2.0f64..2.0, n * n),
        )
            .prop_map(move |(a, b)| (Matrix::from_vec(n, n, a).unwrap(), Matrix::from_vec(n, n, b).unwrap()))
    })
}

#[test]
fn tn_closed_form_matches_svd() {
    for n in 1..=64 {
        let numeric = singular_values(&lower_triangular_ones::<f64>(n)).unwrap();
        let mut closed = tn_singular_values_closed_form::<f64>(n);
        closed.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (x, y) in numeric.iter().zip(&closed) {
            assert!((x - y).abs() <= 1e-8 * y, "n={n}: {x} vs {y}");
        }
    }
}

#[test]
fn sn_inverts_tn_gram() {
    for n in 1..=64 {
        let t = lower_triangular_ones::<f64>(n);
        let g = t.try_matmul(&t.transpose()).unwrap();
        let prod = sn_tridiagonal::<f64>(n).try_matmul(&g).unwrap();
        assert!(prod.max_abs_diff(&Matrix::identity(n)).unwrap() < 1e-10, "n={n}");
    }
    let s2 = sn_tridiagonal::<f64>(2);
    assert_eq!(s2, Matrix::from_f64(&[&[2.0, -1.0], &[-1.0, 1.0]]));
}

#[test]
fn sn_eigenvalues_give_tn_singular_values() {
    let n = 6;
    let eig = symmetric_eigen(&sn_tridiagonal::<f64>(n)).unwrap();
    let mut from_eig: Vec<f64> = eig.values.iter().map(|l| l.powf(-0.5)).collect();
    from_eig.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut closed = tn_singular_values_closed_form::<f64>(n);
    closed.sort_by(|a, b| b.partial_cmp(a).unwrap());
    for (x, y) in from_eig.iter().zip(&closed) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn circulant_spectrum_and_blocks() {
    let n = 8;
    let c = circulant_interval::<f64>(n);
    let fourier: f64 = circulant_interval_eigenvalues::<f64>(n)
        .iter()
        .map(|(re, im)| re.hypot(*im))
        .sum();
    let nuc = nuclear_norm(&c).unwrap();
    assert!((fourier - nuc).abs() < 1e-8, "{fourier} vs {nuc}");
    assert_eq!(circulant_interval_eigenvalues::<f64>(n)[0].0, (n + 1) as f64);
    for n in 2..=12 {
        let c = circulant_interval::<f64>(n);
        let t = nuclear_norm(&lower_triangular_ones::<f64>(n)).unwrap();
        assert!(nuclear_norm(&c).unwrap() <= 4.0 * t + 1e-9);
    }
}

#[test]
fn eigenvalues_are_squared_singular_values() {
    let a: Matrix<f64> = Matrix::from_fn(7, 4, |i, j| ((i * 5 + j * 3) % 7) as f64 - 3.0);
    let mut eig = symmetric_eigen(&a.gram()).unwrap().values;
    eig.reverse();
    let sv = singular_values(&a).unwrap();
    for (l, s) in eig.iter().zip(&sv) {
        assert!((l - s * s).abs() < 1e-9 * eig[0]);
    }
}

#[test]
fn psd_projection_beats_sampled_psd_matrices() {
    let s: Matrix<f64> = Matrix::from_f64(&[&[1.0, 2.0, 0.0], &[2.0, -1.0, 0.5], &[0.0, 0.5, -2.0]]);
    let p = psd_project(&s).unwrap();
    let d = s.try_sub(&p).unwrap().frobenius_norm();
    let mut seed = 99u64;
    let mut next = || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    for _ in 0..500 {
        let b: Matrix<f64> = Matrix::from_fn(3, 2, |_, _| 2.0 * next());
        let y = b.try_matmul(&b.transpose()).unwrap();
        assert!(s.try_sub(&y).unwrap().frobenius_norm() >= d - 1e-12);
    }
    assert!(symmetric_eigen(&p).unwrap().values[0] >= -1e-12);
}

#[test]
fn grid_incidence_is_kron_power() {
    let t = lower_triangular_ones::<f64>(3);
    let k2 = kron_power(&t, 2, 1000).unwrap();
    assert_eq!(k2, kron(&t, &t).unwrap());
    assert!(kron_power(&t, 30, 1000).unwrap_err().is_cap_refusal());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn svd_reconstructs(a in matrix_strategy(7, 7)) {
        let d = svd(&a).unwrap();
        let resid = d.reconstruct().try_sub(&a).unwrap().frobenius_norm();
        prop_assert!(resid <= 1e-10 * a.frobenius_norm().max(1.0));
        let k = a.rows().min(a.cols());
        prop_assert!(d.left_vectors.gram().max_abs_diff(&Matrix::identity(k)).unwrap() < 1e-10);
        prop_assert!(d.right_vectors.gram().max_abs_diff(&Matrix::identity(k)).unwrap() < 1e-10);
    }

    #[test]
    fn nuclear_norm_transpose_invariant(a in matrix_strategy(6, 6)) {
        let x = nuclear_norm(&a).unwrap();
        let y = nuclear_norm(&a.transpose()).unwrap();
        prop_assert!((x - y).abs() <= 1e-10 * x.max(1.0));
    }

    #[test]
    fn determinant_matches_cofactor_and_is_multiplicative((a, b) in square_pair(5)) {
        let da = determinant(&a).unwrap();
        let reference = cofactor_det(&to_rows(&a));
        prop_assert!((da - reference).abs() <= 1e-9 * reference.abs().max(1.0));
        let db = determinant(&b).unwrap();
        let dab = determinant(&a.try_matmul(&b).unwrap()).unwrap();
        prop_assert!((dab - da * db).abs() <= 1e-8 * (da * db).abs().max(1.0));
    }

    #[test]
    fn kron_mixed_product((a, c) in square_pair(3), (b, d) in square_pair(3)) {
        let lhs = kron(&a, &b).unwrap().try_matmul(&kron(&c, &d).unwrap()).unwrap();
        let rhs = kron(&a.try_matmul(&c).unwrap(), &b.try_matmul(&d).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-10 * rhs.max_abs().max(1.0));
    }

    #[test]
    fn text_format_round_trips(a in matrix_strategy(5, 5)) {
        let back: Matrix<f64> = text::parse_matrix(&text::write_matrix(&a)).unwrap();
        prop_assert_eq!(back, a);
    }
}
