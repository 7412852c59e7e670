//! Thin singular value decomposition.
//!
//! The input is oriented so the Jacobi iteration runs on the smaller
//! dimension: a Householder QR of the tall orientation is taken first and
//! one-sided (Hestenes) Jacobi rotations then orthogonalize the columns of the
//! square triangular factor.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Sweep cap for the Jacobi iteration.
pub const MAX_SWEEPS: usize = 60;

/// `A = U diag(σ) V^T` with `k = min(m, n)` columns in `U` and `V`.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition<T> {
    /// Nonincreasing, nonnegative.
    pub singular_values: Vec<T>,
    /// `m x k`, orthonormal columns.
    pub left_vectors: Matrix<T>,
    /// `n x k`, orthonormal columns.
    pub right_vectors: Matrix<T>,
}

impl<T: Scalar> SpectralDecomposition<T> {
    /// Number of singular values above `rel_cutoff * σ_1`.
    pub fn rank(&self, rel_cutoff: T) -> usize {
        let top = self.singular_values.first().copied().unwrap_or_else(T::zero);
        if top == T::zero() {
            return 0;
        }
        self.singular_values
            .iter()
            .take_while(|&&s| s > rel_cutoff * top)
            .count()
    }

    pub fn nuclear_norm(&self) -> T {
        self.singular_values.iter().copied().sum()
    }

    pub fn reconstruct(&self) -> Matrix<T> {
        let u = &self.left_vectors;
        let v = &self.right_vectors;
        Matrix::from_fn(u.rows(), v.rows(), |i, j| {
            (0..self.singular_values.len())
                .map(|k| u[(i, k)] * self.singular_values[k] * v[(j, k)])
                .sum()
        })
    }
}

pub fn svd<T: Scalar>(a: &Matrix<T>) -> Result<SpectralDecomposition<T>> {
    if !a.is_finite() {
        return Err(Error::invalid("non-finite entries in SVD input"));
    }
    let (m, n) = a.shape();
    if m < n {
        let t = svd_tall(&a.transpose())?;
        return Ok(SpectralDecomposition {
            singular_values: t.singular_values,
            left_vectors: t.right_vectors,
            right_vectors: t.left_vectors,
        });
    }
    svd_tall(a)
}

/// Singular values only; same algorithm, no vectors returned.
pub fn singular_values<T: Scalar>(a: &Matrix<T>) -> Result<Vec<T>> {
    Ok(svd(a)?.singular_values)
}

pub fn nuclear_norm<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    Ok(svd(a)?.nuclear_norm())
}

fn svd_tall<T: Scalar>(a: &Matrix<T>) -> Result<SpectralDecomposition<T>> {
    let (m, n) = a.shape();
    if n == 0 {
        return Ok(SpectralDecomposition {
            singular_values: vec![],
            left_vectors: Matrix::zeros(m, 0),
            right_vectors: Matrix::zeros(0, 0),
        });
    }
    let (q, r) = householder_qr(a);

    // Rows of `w` are the columns of R; rows of `vt` the columns of V.
    let mut w = r.transpose();
    let mut vt: Matrix<T> = Matrix::identity(n);
    let tol = T::epsilon() * T::c(4.0);
    let total: T = w.as_slice().iter().map(|&x| x * x).sum();
    let negligible = total * T::epsilon() * T::epsilon() * T::from_usize_lossy(n);
    let mut converged = n == 1;
    let mut worst = T::zero();
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        worst = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                let (alpha, beta, gamma) = {
                    let (wi, wj) = (w.row(i), w.row(j));
                    let mut alpha = T::zero();
                    let mut beta = T::zero();
                    let mut gamma = T::zero();
                    for (&x, &y) in wi.iter().zip(wj) {
                        alpha = alpha + x * x;
                        beta = beta + y * y;
                        gamma = gamma + x * y;
                    }
                    (alpha, beta, gamma)
                };
                // columns at rounding level relative to the whole matrix carry no information
                if alpha <= negligible || beta <= negligible {
                    continue;
                }
                let off = gamma.abs() / (alpha.sqrt() * beta.sqrt());
                worst = worst.max(off);
                if off <= tol {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::c(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate_rows(&mut w, i, j, c, s);
                rotate_rows(&mut vt, i, j, c, s);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "Jacobi SVD",
            iterations: MAX_SWEEPS,
            residual: worst.as_f64(),
        });
    }

    let norms: Vec<T> = w.row_norms();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite norms"));
    let singular_values: Vec<T> = order.iter().map(|&k| norms[k]).collect();

    // Left vectors of R, one per row of `ur`; zero directions completed below.
    let top = singular_values[0];
    let floor = top * T::epsilon() * T::from_usize_lossy(n);
    let mut ur: Matrix<T> = Matrix::zeros(n, n);
    let mut filled = vec![false; n];
    for (pos, &k) in order.iter().enumerate() {
        let s = norms[k];
        if s > floor && s > T::min_positive_value() {
            for (dst, &x) in ur.row_mut(pos).iter_mut().zip(w.row(k)) {
                *dst = x / s;
            }
            filled[pos] = true;
        }
    }
    complete_orthonormal_rows(&mut ur, &filled);

    let v = Matrix::from_fn(n, n, |i, j| vt[(order[j], i)]);
    let u = &q * &ur.transpose();
    Ok(SpectralDecomposition {
        singular_values,
        left_vectors: u,
        right_vectors: v,
    })
}

#[inline]
fn rotate_rows<T: Scalar>(m: &mut Matrix<T>, i: usize, j: usize, c: T, s: T) {
    let cols = m.cols();
    let data = m.as_mut_slice();
    let (head, tail) = data.split_at_mut(j * cols);
    let ri = &mut head[i * cols..(i + 1) * cols];
    let rj = &mut tail[..cols];
    for (x, y) in ri.iter_mut().zip(rj.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}

/// Fills the rows not marked `filled` so that all rows are orthonormal,
/// by Gram-Schmidt against standard basis vectors.
fn complete_orthonormal_rows<T: Scalar>(m: &mut Matrix<T>, filled: &[bool]) {
    let n = m.cols();
    let mut basis = 0;
    for r in 0..m.rows() {
        if filled[r] {
            continue;
        }
        loop {
            assert!(basis < n, "ran out of basis vectors completing an orthonormal set");
            let mut cand = vec![T::zero(); n];
            cand[basis] = T::one();
            basis += 1;
            for _ in 0..2 {
                for o in 0..m.rows() {
                    if o == r || !(filled[o] || o < r) {
                        continue;
                    }
                    let row = m.row(o);
                    let dot: T = row.iter().zip(&cand).map(|(&a, &b)| a * b).sum();
                    for (c, &x) in cand.iter_mut().zip(row) {
                        *c = *c - dot * x;
                    }
                }
            }
            let norm = cand.iter().map(|&x| x * x).sum::<T>().sqrt();
            if norm > T::c(0.5) {
                for (dst, x) in m.row_mut(r).iter_mut().zip(cand) {
                    *dst = x / norm;
                }
                break;
            }
        }
    }
}

/// Thin Householder QR of a tall matrix: `A = Q R`, `Q` is `m x n`, `R` is `n x n`.
pub fn householder_qr<T: Scalar>(a: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
    let (m, n) = a.shape();
    assert!(m >= n, "householder_qr expects a tall matrix");
    let mut w = a.clone();
    let mut reflectors: Vec<Vec<T>> = Vec::with_capacity(n);
    let two = T::c(2.0);
    let mut s = vec![T::zero(); n];
    for k in 0..n {
        let norm = (k..m).map(|i| w[(i, k)] * w[(i, k)]).sum::<T>().sqrt();
        let mut v = vec![T::zero(); m - k];
        if norm == T::zero() {
            reflectors.push(v);
            continue;
        }
        let x0 = w[(k, k)];
        let alpha = if x0 > T::zero() { -norm } else { norm };
        for i in k..m {
            v[i - k] = w[(i, k)];
        }
        v[0] = v[0] - alpha;
        let vnorm = v.iter().map(|&x| x * x).sum::<T>().sqrt();
        if vnorm == T::zero() {
            reflectors.push(vec![T::zero(); m - k]);
            continue;
        }
        for x in v.iter_mut() {
            *x = *x / vnorm;
        }
        apply_reflector(&mut w, &v, k, k, &mut s[k..], two);
        reflectors.push(v);
    }
    let r = Matrix::from_fn(n, n, |i, j| if j >= i { w[(i, j)] } else { T::zero() });
    let mut q = Matrix::zeros(m, n);
    for i in 0..n {
        q[(i, i)] = T::one();
    }
    for k in (0..n).rev() {
        let v = &reflectors[k];
        if v.iter().all(|&x| x == T::zero()) {
            continue;
        }
        apply_reflector(&mut q, v, k, k, &mut s[k..], two);
    }
    (q, r)
}

/// Applies `I - 2 v v^T` (acting on rows `row0..`) to columns `col0..` of `w`.
fn apply_reflector<T: Scalar>(w: &mut Matrix<T>, v: &[T], row0: usize, col0: usize, s: &mut [T], two: T) {
    let cols = w.cols();
    for x in s.iter_mut() {
        *x = T::zero();
    }
    for (off, &vi) in v.iter().enumerate() {
        if vi == T::zero() {
            continue;
        }
        let row = &w.row(row0 + off)[col0..cols];
        for (acc, &x) in s.iter_mut().zip(row) {
            *acc = *acc + vi * x;
        }
    }
    for (off, &vi) in v.iter().enumerate() {
        if vi == T::zero() {
            continue;
        }
        let f = two * vi;
        let row = &mut w.row_mut(row0 + off)[col0..cols];
        for (x, &acc) in row.iter_mut().zip(s.iter()) {
            *x = *x - f * acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg_matrix(rows: usize, cols: usize, mut seed: u64) -> Matrix<f64> {
        Matrix::from_fn(rows, cols, |_, _| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
    }

    fn check(a: &Matrix<f64>) {
        let d = svd(a).unwrap();
        let k = a.rows().min(a.cols());
        assert_eq!(d.singular_values.len(), k);
        assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let resid = d.reconstruct().try_sub(a).unwrap().frobenius_norm();
        assert!(resid <= 1e-10 * a.frobenius_norm().max(1.0), "residual {resid}");
        let eye: Matrix<f64> = Matrix::identity(k);
        assert!(d.left_vectors.gram().max_abs_diff(&eye).unwrap() < 1e-10);
        assert!(d.right_vectors.gram().max_abs_diff(&eye).unwrap() < 1e-10);
    }

    #[test]
    fn random_shapes() {
        check(&lcg_matrix(4, 6, 1));
        check(&lcg_matrix(6, 4, 2));
        check(&lcg_matrix(9, 9, 3));
        check(&lcg_matrix(1, 5, 4));
        check(&lcg_matrix(30, 3, 5));
    }

    #[test]
    fn rank_deficient_inputs() {
        check(&Matrix::ones(4, 4));
        check(&Matrix::zeros(3, 2));
        let mut a = lcg_matrix(5, 3, 9);
        for i in 0..5 {
            a[(i, 2)] = a[(i, 0)] + a[(i, 1)];
        }
        check(&a);
        let d = svd(&Matrix::<f64>::ones(4, 4)).unwrap();
        assert!((d.singular_values[0] - 4.0).abs() < 1e-12);
        assert_eq!(d.rank(1e-10), 1);
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let d = svd(&Matrix::<f64>::identity(5)).unwrap();
        assert!(d.singular_values.iter().all(|&s| (s - 1.0).abs() < 1e-15));
    }

    #[test]
    fn works_in_single_precision() {
        let a: Matrix<f32> = lcg_matrix(5, 4, 7).cast();
        let d = svd(&a).unwrap();
        let resid = d.reconstruct().try_sub(&a).unwrap().frobenius_norm();
        assert!(resid < 1e-5 * a.frobenius_norm());
    }
}
