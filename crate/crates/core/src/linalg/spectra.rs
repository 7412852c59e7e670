//! Closed-form matrices and spectra around the initial-segment matrix `T_n`.

use std::f64::consts::PI;

use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// `T_n`: ones on and below the diagonal, zeros above.
pub fn lower_triangular_ones<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| if j <= i { T::one() } else { T::zero() })
}

/// The singular values of `T_n`, `1 / (2 sin((2j-1)π / (4n+2)))` for
/// `j = 1..=n`, nonincreasing.
pub fn tn_singular_values_closed_form<T: Scalar>(n: usize) -> Vec<T> {
    let denom = (4 * n + 2) as f64;
    (1..=n)
        .map(|j| T::c(1.0 / (2.0 * ((2 * j - 1) as f64 * PI / denom).sin())))
        .collect()
}

/// `S_n = (T_n T_n^T)^{-1}`: tridiagonal with `2` on the diagonal except a `1`
/// in the lower-right corner, and `-1` on both off-diagonals.
pub fn sn_tridiagonal<T: Scalar>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            if i + 1 == n {
                T::one()
            } else {
                T::c(2.0)
            }
        } else if i.abs_diff(j) == 1 {
            -T::one()
        } else {
            T::zero()
        }
    })
}

/// The `2n x 2n` circulant `C_{n+1,2n}` whose first column is `n+1` ones
/// followed by `n-1` zeros; equals `[[T_n, T_n^T], [T_n^T, T_n]]`.
pub fn circulant_interval<T: Scalar>(n: usize) -> Matrix<T> {
    let size = 2 * n;
    let ones = n + 1;
    Matrix::from_fn(size, size, |i, j| {
        if (i + size - j) % size < ones {
            T::one()
        } else {
            T::zero()
        }
    })
}

/// Eigenvalues `ĉ_j = (ω^{js} - 1) / (ω^j - 1)` of [`circulant_interval`], as
/// `(re, im)` pairs, with `s = n + 1`, `ω = exp(-2πi / 2n)` and `ĉ_0 = s`.
pub fn circulant_interval_eigenvalues<T: Scalar>(n: usize) -> Vec<(T, T)> {
    let size = 2 * n;
    let s = (n + 1) as f64;
    (0..size)
        .map(|j| {
            if j == 0 {
                return (T::c(s), T::zero());
            }
            let theta = -2.0 * PI * j as f64 / size as f64;
            let num = (( theta * s).cos() - 1.0, (theta * s).sin());
            let den = (theta.cos() - 1.0, theta.sin());
            let d2 = den.0 * den.0 + den.1 * den.1;
            let re = (num.0 * den.0 + num.1 * den.1) / d2;
            let im = (num.1 * den.0 - num.0 * den.1) / d2;
            (T::c(re), T::c(im))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c46_layout() {
        let c: Matrix<f64> = circulant_interval(3);
        let expect = Matrix::from_f64(&[
            &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0],
            &[1.0, 1.0, 0.0, 0.0, 1.0, 1.0],
            &[1.0, 1.0, 1.0, 0.0, 0.0, 1.0],
            &[1.0, 1.0, 1.0, 1.0, 0.0, 0.0],
            &[0.0, 1.0, 1.0, 1.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0, 1.0, 1.0, 1.0],
        ]);
        assert_eq!(c, expect);
    }

    #[test]
    fn circulant_blocks_are_tn() {
        let n = 5;
        let c: Matrix<f64> = circulant_interval(n);
        let t: Matrix<f64> = lower_triangular_ones(n);
        let idx: Vec<usize> = (0..n).collect();
        let hi: Vec<usize> = (n..2 * n).collect();
        assert_eq!(c.submatrix(&idx, &idx), t);
        assert_eq!(c.submatrix(&idx, &hi), t.transpose());
        assert_eq!(c.submatrix(&hi, &idx), t.transpose());
        assert_eq!(c.submatrix(&hi, &hi), t);
    }

    #[test]
    fn small_closed_forms() {
        let one: Vec<f64> = tn_singular_values_closed_form(1);
        assert!((one[0] - 1.0).abs() < 1e-15);
        let s2: Matrix<f64> = sn_tridiagonal(2);
        assert_eq!(s2, Matrix::from_f64(&[&[2.0, -1.0], &[-1.0, 1.0]]));
        let e: Vec<(f64, f64)> = circulant_interval_eigenvalues(4);
        assert_eq!(e[0], (5.0, 0.0));
    }
}
