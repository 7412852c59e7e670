//! Dual weights and the weighted nuclear norm `||P^{1/2} A Q^{1/2}||_*`.

use crate::error::{Error, Result};
use crate::linalg::{svd, Matrix};
use crate::scalar::Scalar;

/// Relative singular-value cutoff used when building a factorization from a
/// weighted SVD. Much smaller than the pseudo-inverse cutoff so that weakly
/// weighted rows are not dropped; the residual check catches any loss.
pub(crate) const FACTOR_CUTOFF: f64 = 1e-14;

/// Probability weights on the rows (`p`) and columns (`q`) of a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DualWeights<T> {
    pub p: Vec<T>,
    pub q: Vec<T>,
}

impl<T: Scalar> DualWeights<T> {
    pub fn uniform(rows: usize, cols: usize) -> Self {
        DualWeights {
            p: vec![T::one() / T::from_usize_lossy(rows.max(1)); rows],
            q: vec![T::one() / T::from_usize_lossy(cols.max(1)); cols],
        }
    }

    /// `(1 - eps) w + eps * uniform`, componentwise on both sides.
    pub fn mixed_with_uniform(&self, eps: T) -> Self {
        let mix = |w: &[T]| -> Vec<T> {
            let u = T::one() / T::from_usize_lossy(w.len().max(1));
            w.iter().map(|&x| (T::one() - eps) * x + eps * u).collect()
        };
        DualWeights {
            p: mix(&self.p),
            q: mix(&self.q),
        }
    }

    pub(crate) fn check(&self, a: &Matrix<T>) -> Result<()> {
        if self.p.len() != a.rows() || self.q.len() != a.cols() {
            return Err(Error::DimensionMismatch(format!(
                "weights of length {}/{} for a {}x{} matrix",
                self.p.len(),
                self.q.len(),
                a.rows(),
                a.cols()
            )));
        }
        Ok(())
    }

    /// Largest violation of nonnegativity or of the unit sums.
    pub fn simplex_violation(&self) -> T {
        let side = |w: &[T]| {
            let neg = w.iter().fold(T::zero(), |m, &x| m.max(-x));
            let sum: T = w.iter().copied().sum();
            if w.is_empty() {
                neg
            } else {
                neg.max((sum - T::one()).abs())
            }
        };
        side(&self.p).max(side(&self.q))
    }
}

/// `||P^{1/2} A Q^{1/2}||_*` for the given weights.
pub fn weighted_nuclear_norm<T: Scalar>(a: &Matrix<T>, w: &DualWeights<T>) -> Result<T> {
    w.check(a)?;
    let sp = sqrt_weights(&w.p);
    let sq = sqrt_weights(&w.q);
    Ok(svd(&a.scale_rows_cols(&sp, &sq))?.nuclear_norm())
}

fn sqrt_weights<T: Scalar>(w: &[T]) -> Vec<T> {
    w.iter().map(|&x| x.max(T::zero()).sqrt()).collect()
}

/// Everything derived from one weighted SVD: the dual value, a candidate
/// factorization `A = B C`, and the squared row/column norms that form the
/// supergradient.
#[derive(Clone, Debug)]
pub(crate) struct Evaluation<T> {
    /// Nuclear norm of the weighted matrix.
    pub value: T,
    /// `m x r`.
    pub left: Matrix<T>,
    /// `r x n`.
    pub right: Matrix<T>,
    /// `||b_i||^2` for the rows of `left`.
    pub row_sq: Vec<T>,
    /// `||c_j||^2` for the columns of `right`.
    pub col_sq: Vec<T>,
}

impl<T: Scalar> Evaluation<T> {
    /// `max ||b_i|| * max ||c_j||`.
    pub fn factor_bound(&self) -> T {
        let r = self.row_sq.iter().fold(T::zero(), |m, &x| m.max(x));
        let c = self.col_sq.iter().fold(T::zero(), |m, &x| m.max(x));
        (r * c).sqrt()
    }

    /// True when `left * right` reproduces `a` to relative accuracy `tol`.
    pub fn reproduces(&self, a: &Matrix<T>, tol: T) -> bool {
        match self.left.try_matmul(&self.right) {
            Ok(bc) => {
                let err = bc.try_sub(a).map(|d| d.frobenius_norm());
                err.is_ok_and(|e| e <= tol * a.frobenius_norm().max(T::min_positive_value()))
            }
            Err(_) => false,
        }
    }
}

/// With `M = P^{1/2} A Q^{1/2} = U S V^T`, returns `B = A Q^{1/2} V S^{-1/2}`
/// and `C = S^{-1/2} U^T P^{1/2} A`, so that `B C = A` whenever the retained
/// rank captures `A`.
pub(crate) fn evaluate<T: Scalar>(a: &Matrix<T>, w: &DualWeights<T>) -> Result<Evaluation<T>> {
    let (m, n) = a.shape();
    let sp = sqrt_weights(&w.p);
    let sq = sqrt_weights(&w.q);
    let ones_m = vec![T::one(); m];
    let ones_n = vec![T::one(); n];
    let aq = a.scale_rows_cols(&ones_m, &sq);
    let pa = a.scale_rows_cols(&sp, &ones_n);
    let weighted = a.scale_rows_cols(&sp, &sq);
    let dec = svd(&weighted)?;
    let value = dec.nuclear_norm();
    let r = dec.rank(T::c(FACTOR_CUTOFF).max(T::epsilon() * T::c(4.0)));
    let inv_sqrt: Vec<T> = dec.singular_values[..r]
        .iter()
        .map(|&s| T::one() / s.sqrt())
        .collect();
    let vs = Matrix::from_fn(n, r, |j, k| dec.right_vectors[(j, k)] * inv_sqrt[k]);
    let su = Matrix::from_fn(r, m, |k, i| dec.left_vectors[(i, k)] * inv_sqrt[k]);
    let left = aq.try_matmul(&vs)?;
    let right = su.try_matmul(&pa)?;
    let row_sq = left
        .row_norms()
        .into_iter()
        .map(|x| x * x)
        .collect();
    let col_sq = right
        .col_norms()
        .into_iter()
        .map(|x| x * x)
        .collect();
    Ok(Evaluation {
        value,
        left,
        right,
        row_sq,
        col_sq,
    })
}

/// Euclidean projection onto the probability simplex (sort and threshold).
pub fn project_simplex<T: Scalar>(v: &[T]) -> Vec<T> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cum = T::zero();
    let mut theta = T::zero();
    for (k, &x) in sorted.iter().enumerate() {
        cum = cum + x;
        let t = (cum - T::one()) / T::from_usize_lossy(k + 1);
        if x - t > T::zero() {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(T::zero())).collect()
}
