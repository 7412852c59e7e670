use g2d_core::gamma2::{
    ellipsoid_sum, gamma2, gamma2_lower_dual, gamma2_upper, weighted_nuclear_norm, DualWeights, Ellipsoid,
    EllipsoidSide, Gamma2Options, PrimalMethod,
};
use g2d_core::linalg::{kron, lower_triangular_ones, nuclear_norm, singular_values, svd, Matrix};
use g2d_core::oracles::{detlb_exact, herdisc_exact};
use g2d_core::setsystems::subcubes;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-4;

fn opts() -> Gamma2Options<f64> {
    Gamma2Options::default().with_tol(TOL)
}

fn solve(a: &Matrix<f64>) -> f64 {
    let c = gamma2(a, &opts()).unwrap();
    assert!(c.verify(a, 1e-6).unwrap().is_empty(), "certificate fails for {a:?}");
    c.upper
}

#[test]
fn all_ones_and_identity() {
    assert!((solve(&Matrix::ones(4, 4)) - 1.0).abs() <= TOL);
    for n in [1, 3, 6] {
        assert!((solve(&Matrix::identity(n)) - 1.0).abs() <= TOL);
    }
    let j = Matrix::<f64>::ones(3, 5);
    let point = DualWeights {
        p: vec![1.0, 0.0, 0.0],
        q: vec![0.0, 0.0, 1.0, 0.0, 0.0],
    };
    assert!((weighted_nuclear_norm(&j, &point).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn single_subcube_value_and_ellipse() {
    let a: Matrix<f64> = subcubes(1).unwrap().incidence();
    let c = gamma2(&a, &opts()).unwrap();
    assert!((c.upper - 2.0 / 3f64.sqrt()).abs() <= 1e-4);
    assert_eq!(c.side, EllipsoidSide::Rows);
    let d = c.ellipsoid.dual_matrix();
    let want: Matrix<f64> = Matrix::from_f64(&[&[4.0 / 3.0, 2.0 / 3.0], &[2.0 / 3.0, 4.0 / 3.0]]);
    assert!(d.max_abs_diff(&want).unwrap() < 1e-2, "{d:?}");
    for v in [[1.0, 1.0], [1.0, 0.0], [0.0, 1.0]] {
        assert!(c.ellipsoid.contains(&v, 1e-6).unwrap());
    }
}

#[test]
fn t2_dual_witness() {
    let t2: Matrix<f64> = lower_triangular_ones(2);
    let w = DualWeights {
        p: vec![1.0 / 3.0, 2.0 / 3.0],
        q: vec![2.0 / 3.0, 1.0 / 3.0],
    };
    let sp: Vec<f64> = w.p.iter().map(|x: &f64| x.sqrt()).collect();
    let sq: Vec<f64> = w.q.iter().map(|x: &f64| x.sqrt()).collect();
    let sv = singular_values(&t2.scale_rows_cols(&sp, &sq)).unwrap();
    let r3 = 1.0 / 3f64.sqrt();
    assert!((sv[0] - (r3 + 1.0 / 3.0)).abs() < 1e-10);
    assert!((sv[1] - (r3 - 1.0 / 3.0)).abs() < 1e-10);
    assert!((weighted_nuclear_norm(&t2, &w).unwrap() - 2.0 * r3).abs() < 1e-10);
}

#[test]
fn uniform_weights_give_scaled_nuclear_norm() {
    for n in [2, 5, 16] {
        let t: Matrix<f64> = lower_triangular_ones(n);
        let v = weighted_nuclear_norm(&t, &DualWeights::uniform(n, n)).unwrap();
        assert!((v - nuclear_norm(&t).unwrap() / n as f64).abs() < 1e-12);
    }
}

#[test]
fn t16_inside_window() {
    let t: Matrix<f64> = lower_triangular_ones(16);
    let c = gamma2(&t, &opts()).unwrap();
    let lower = nuclear_norm(&t).unwrap() / 16.0;
    assert!(lower <= c.lower + 1e-12 && c.lower <= c.upper && c.upper <= 5.0);
    assert!(c.converged);
}

#[test]
fn block_diagonal_takes_max() {
    let t4: Matrix<f64> = lower_triangular_ones(4);
    let b = t4.block_diag(&Matrix::ones(3, 3));
    let g = solve(&b);
    let gt = solve(&t4);
    assert!((g - gt.max(1.0)).abs() <= 2.0 * TOL * g);
}

#[test]
fn standalone_dual_is_valid_lower_bound() {
    let a: Matrix<f64> = subcubes(2).unwrap().incidence();
    let o = opts().with_restarts(3);
    let dual = gamma2_lower_dual(&a, &o).unwrap();
    let upper = gamma2_upper(&a, &o).unwrap();
    assert!(dual.value <= upper.value * (1.0 + 1e-12));
    let again = weighted_nuclear_norm(&a, &dual.weights).unwrap();
    assert!((again - dual.value).abs() < 1e-10);
    assert!(dual.value >= upper.value * (1.0 - 1e-3));
    assert_eq!(gamma2_lower_dual(&a, &o).unwrap().value, dual.value);
}

#[test]
fn dykstra_route_agrees_with_balancing() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..4 {
        let (m, n) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let a: Matrix<f64> = Matrix::from_fn(m, n, |_, _| rng.random_range(0..2) as f64);
        if a.is_zero() {
            continue;
        }
        let o = Gamma2Options::default().with_tol(1e-5);
        let bal = gamma2_upper(&a, &o).unwrap().value;
        let dyk = gamma2_upper(&a, &o.clone().with_primal(PrimalMethod::Dykstra)).unwrap().value;
        assert!((bal - dyk).abs() <= 1e-3 * bal, "{a:?}: {bal} vs {dyk}");
    }
}

#[test]
fn ellipsoid_inf_norm_matches_boundary_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let b: Matrix<f64> = Matrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
        let d = b
            .try_matmul(&b.transpose())
            .unwrap()
            .try_add(&Matrix::identity(3).scaled(0.5))
            .unwrap();
        let e = Ellipsoid::new(d.clone()).unwrap();
        // boundary points D x / sqrt(x^T D x) for x on the unit sphere
        let mut best: f64 = 0.0;
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let dx = d.mul_vec(&x);
            let q: f64 = x.iter().zip(&dx).map(|(a, b)| a * b).sum();
            if q <= 0.0 {
                continue;
            }
            let z: Vec<f64> = dx.iter().map(|v| v / q.sqrt()).collect();
            assert!(e.contains(&z, 1e-9).unwrap());
            best = best.max(z.iter().fold(0.0, |m, v| m.max(v.abs())));
        }
        assert!(best <= e.inf_norm() + 1e-12);
        assert!(e.inf_norm() - best <= 1e-3 * e.inf_norm(), "{} vs {best}", e.inf_norm());
    }
}

#[test]
fn ellipsoid_sum_contains_both_column_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        // four rows and more columns than rows keeps both certificates on the column side
        let a: Matrix<f64> = Matrix::from_fn(4, 5, |_, _| rng.random_range(0..2) as f64);
        let b: Matrix<f64> = Matrix::from_fn(4, 6, |_, _| rng.random_range(0..2) as f64);
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let ca = gamma2(&a, &opts()).unwrap();
        let cb = gamma2(&b, &opts()).unwrap();
        let s = ellipsoid_sum(&ca.ellipsoid, &cb.ellipsoid).unwrap();
        let g = s.gauge().unwrap();
        for m in [&a, &b] {
            for j in 0..m.cols() {
                assert!(g.contains(&m.col(j), 1e-6));
            }
        }
        assert!(s.inf_norm() <= (ca.upper.powi(2) + cb.upper.powi(2)).sqrt() + 1e-9);
    }
}

#[test]
fn kronecker_of_random_real_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..5 {
        let a: Matrix<f64> = Matrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
        let b: Matrix<f64> = Matrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
        let prod = solve(&kron(&a, &b).unwrap());
        let sep = solve(&a) * solve(&b);
        assert!((prod - sep).abs() <= 5e-3 * sep, "{prod} vs {sep}");
    }
}

#[test]
fn f32_instantiation_tracks_f64() {
    let a32: Matrix<f32> = lower_triangular_ones(8);
    let a64: Matrix<f64> = lower_triangular_ones(8);
    let c32 = gamma2(&a32, &Gamma2Options::default().with_tol(1e-3)).unwrap();
    let c64 = gamma2(&a64, &opts()).unwrap();
    assert!((c32.upper as f64 - c64.upper).abs() < 5e-3 * c64.upper);
    assert!(svd(&a32).is_ok());
}

fn binary_matrix(max: usize) -> impl Strategy<Value = Matrix<f64>> {
    (1..=max, 1..=max).prop_flat_map(|(m, n)| {
        prop::collection::vec(0u8..2, m * n)
            .prop_map(move |v| Matrix::from_vec(m, n, v.into_iter().map(f64::from).collect()).unwrap())
    })
}

fn nonzero(a: &Matrix<f64>) -> bool {
    !a.is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn transpose_invariance(a in binary_matrix(6).prop_filter("nonzero", nonzero)) {
        let x = solve(&a);
        let y = solve(&a.transpose());
        prop_assert!((x - y).abs() <= 2.0 * TOL * x.max(y));
    }

    #[test]
    fn removing_a_column_never_increases(a in binary_matrix(6).prop_filter("two columns", |a| a.cols() >= 2 && !a.is_zero()), drop in 0usize..6) {
        let drop = drop % a.cols();
        let keep: Vec<usize> = (0..a.cols()).filter(|&j| j != drop).collect();
        let sub = a.select_cols(&keep);
        let full = solve(&a);
        let part = if sub.is_zero() { 0.0 } else { solve(&sub) };
        prop_assert!(part <= full * (1.0 + TOL));
    }

    #[test]
    fn triangle_inequality(a in binary_matrix(5).prop_filter("nonzero", nonzero), flips in prop::collection::vec(0u8..2, 25)) {
        let b = Matrix::from_fn(a.rows(), a.cols(), |i, j| f64::from(flips[(i * a.cols() + j) % 25]));
        let sum = a.try_add(&b).unwrap();
        let gb = if b.is_zero() { 0.0 } else { solve(&b) };
        prop_assert!(solve(&sum) <= (solve(&a) + gb) * (1.0 + 3.0 * TOL));
    }

    #[test]
    fn column_union_root_sum_square(a in binary_matrix(5).prop_filter("nonzero", nonzero), extra in prop::collection::vec(0u8..2, 1..20)) {
        let cols = (extra.len() / a.rows()).max(1);
        let b = Matrix::from_fn(a.rows(), cols, |i, j| f64::from(extra[(i * cols + j) % extra.len()]));
        let c = a.hstack(&b).unwrap();
        let ga = solve(&a);
        let gb = if b.is_zero() { 0.0 } else { solve(&b) };
        prop_assert!(solve(&c) <= (ga * ga + gb * gb).sqrt() * (1.0 + 2.0 * TOL));
    }

    #[test]
    fn row_union_root_sum_square(a in binary_matrix(5).prop_filter("nonzero", nonzero), b in binary_matrix(5).prop_filter("nonzero", nonzero)) {
        let b = Matrix::from_fn(b.rows(), a.cols(), |i, j| b[(i, j % b.cols())]);
        let ga = solve(&a);
        let gb = if b.is_zero() { 0.0 } else { solve(&b) };
        prop_assert!(solve(&a.vstack(&b).unwrap()) <= (ga * ga + gb * gb).sqrt() * (1.0 + 2.0 * TOL));
    }

    #[test]
    fn block_diagonal_max_rule(a in binary_matrix(5).prop_filter("nonzero", nonzero), b in binary_matrix(4).prop_filter("nonzero", nonzero)) {
        let g = solve(&a.block_diag(&b));
        let want = solve(&a).max(solve(&b));
        prop_assert!((g - want).abs() <= 2.0 * TOL * g);
    }

    #[test]
    fn weak_duality_and_detlb(a in binary_matrix(6).prop_filter("nonzero", nonzero)) {
        let c = gamma2(&a, &opts()).unwrap();
        prop_assert!(c.lower <= c.upper * (1.0 + 1e-12));
        prop_assert!(c.verify(&a, 1e-6).unwrap().is_empty());
        let det = detlb_exact(&a, 6).unwrap().value;
        prop_assert!(det <= c.upper + TOL);
        let herdisc = herdisc_exact(&a).unwrap().value;
        prop_assert!(det <= 2.0 * herdisc + 1e-12);
    }
}
