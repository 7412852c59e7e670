//! Upper bounds: factorizations `A = B C` and the ellipsoids they induce.

use crate::error::{Error, Result};
use crate::gamma2::balance::balance;
use crate::gamma2::ellipsoid::{Ellipsoid, Gauge};
use crate::gamma2::options::{Gamma2Options, PrimalMethod};
use crate::gamma2::weights::{weighted_nuclear_norm, DualWeights};
use crate::linalg::{psd_project, symmetric_eigen, Matrix};
use crate::scalar::Scalar;

/// Which vectors the certificate ellipsoid contains. The ellipsoid is placed
/// on the smaller dimension of `A`: columns of an `m x n` matrix with
/// `m <= n`, rows otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EllipsoidSide {
    /// `m x m` dual matrix containing every column of `A`.
    Columns,
    /// `n x n` dual matrix containing every row of `A`.
    Rows,
}

impl EllipsoidSide {
    pub fn for_shape(rows: usize, cols: usize) -> Self {
        if rows <= cols {
            EllipsoidSide::Columns
        } else {
            EllipsoidSide::Rows
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EllipsoidSide::Columns => "columns",
            EllipsoidSide::Rows => "rows",
        }
    }
}

/// A certified upper bound: `value = max ||b_i|| * max ||c_j||` with
/// `left * right = A`, and an ellipsoid with `||E||_inf <= value` containing
/// the columns (or rows) of `A`.
#[derive(Clone, Debug)]
pub struct PrimalBound<T> {
    pub value: T,
    pub ellipsoid: Ellipsoid<T>,
    pub side: EllipsoidSide,
    /// `m x r`, every row of norm at most `sqrt(value)`.
    pub left: Matrix<T>,
    /// `r x n`, every column of norm at most `sqrt(value)`.
    pub right: Matrix<T>,
    /// Dual weights found along the way, with their value, when the solver produced any.
    pub weights: Option<(DualWeights<T>, T)>,
    pub iterations: usize,
}

/// Upper bound via the configured primal method.
pub fn gamma2_upper<T: Scalar>(a: &Matrix<T>, opts: &Gamma2Options<T>) -> Result<PrimalBound<T>> {
    if !a.is_finite() {
        return Err(Error::invalid("non-finite entries in gamma2 input"));
    }
    if a.is_empty() || a.is_zero() {
        return Ok(zero_bound(a));
    }
    match opts.primal {
        PrimalMethod::Balancing => upper_by_balancing(a, opts),
        PrimalMethod::Dykstra => upper_by_dykstra(a, opts),
    }
}

fn zero_bound<T: Scalar>(a: &Matrix<T>) -> PrimalBound<T> {
    let (m, n) = a.shape();
    let side = EllipsoidSide::for_shape(m, n);
    let dim = match side {
        EllipsoidSide::Columns => m,
        EllipsoidSide::Rows => n,
    };
    PrimalBound {
        value: T::zero(),
        ellipsoid: Ellipsoid::zero(dim),
        side,
        left: Matrix::zeros(m, 1),
        right: Matrix::zeros(1, n),
        weights: None,
        iterations: 0,
    }
}

/// Builds the bound for a verified factorization, rescaling so the row
/// norms of `left` and column norms of `right` share the same maximum.
pub fn bound_from_factors<T: Scalar>(left: Matrix<T>, right: Matrix<T>) -> PrimalBound<T> {
    let (m, n) = (left.rows(), right.cols());
    let rb = left.row_norms().into_iter().fold(T::zero(), T::max);
    let cc = right.col_norms().into_iter().fold(T::zero(), T::max);
    let value = rb * cc;
    let side = EllipsoidSide::for_shape(m, n);
    if value == T::zero() {
        let mut z = zero_bound(&Matrix::zeros(m, n));
        z.iterations = 0;
        return z;
    }
    let left = left.scaled((cc / rb).sqrt());
    let right = right.scaled((rb / cc).sqrt());
    let ellipsoid = match side {
        EllipsoidSide::Columns => Ellipsoid::from_factor(&left, value),
        EllipsoidSide::Rows => Ellipsoid::from_factor(&right.transpose(), value),
    };
    PrimalBound {
        value,
        ellipsoid,
        side,
        left,
        right,
        weights: None,
        iterations: 0,
    }
}

/// `A = I A` bounds by the largest column norm, `A = A I` by the largest row norm.
fn trivial_bound<T: Scalar>(a: &Matrix<T>) -> PrimalBound<T> {
    let col = a.col_norms().into_iter().fold(T::zero(), T::max);
    let row = a.row_norms().into_iter().fold(T::zero(), T::max);
    if col <= row {
        bound_from_factors(Matrix::identity(a.rows()), a.clone())
    } else {
        bound_from_factors(a.clone(), Matrix::identity(a.cols()))
    }
}

fn upper_by_balancing<T: Scalar>(a: &Matrix<T>, opts: &Gamma2Options<T>) -> Result<PrimalBound<T>> {
    let (m, n) = a.shape();
    let col = a.col_norms().into_iter().fold(T::zero(), T::max);
    let row = a.row_norms().into_iter().fold(T::zero(), T::max);
    let trivial = col.min(row);
    let run = balance(
        a,
        DualWeights::uniform(m, n),
        opts.tol,
        opts.max_iter,
        opts.factor_tol,
        None,
    )?;
    let mut iterations = run.iterations;
    let weights = Some((run.weights.clone(), run.lower));
    let mut best = run.factor;
    if best.is_none() {
        // weak rows or columns may have been truncated; retry with weights
        // pulled towards uniform
        for eps in [1e-6, 1e-3, 1e-1] {
            let retry = balance(
                a,
                run.weights.mixed_with_uniform(T::c(eps)),
                opts.tol,
                1,
                opts.factor_tol,
                None,
            )?;
            iterations += retry.iterations;
            if retry.factor.is_some() {
                best = retry.factor;
                break;
            }
        }
    }
    let mut bound = match best {
        Some((l, r, v)) if v < trivial => bound_from_factors(l, r),
        _ => trivial_bound(a),
    };
    bound.weights = weights;
    bound.iterations = iterations;
    Ok(bound)
}

/// Factorization from a PSD matrix `D` on the column side that contains the
/// columns of `a` after scaling: `B = V L^{1/2}`, `C = L^{-1/2} V^T A`.
pub(crate) fn bound_from_psd<T: Scalar>(a: &Matrix<T>, d: &Matrix<T>) -> Result<Option<PrimalBound<T>>> {
    let gauge = Gauge::new(d)?;
    let mut scale = T::zero();
    for j in 0..a.cols() {
        match gauge.squared(&a.col(j)) {
            Some(g) => scale = scale.max(g),
            None => return Ok(None),
        }
    }
    if scale == T::zero() {
        return Ok(None);
    }
    let ds = d.symmetrized().scaled(scale);
    let eig = symmetric_eigen(&ds)?;
    let top = eig.values.last().copied().unwrap_or_else(T::zero);
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&k| eig.values[k] > top * T::c(super::ellipsoid::RANK_CUTOFF))
        .collect();
    let m = a.rows();
    let left = Matrix::from_fn(m, keep.len(), |i, c| {
        eig.vectors[(i, keep[c])] * eig.values[keep[c]].sqrt()
    });
    let proj = Matrix::from_fn(keep.len(), m, |c, i| {
        eig.vectors[(i, keep[c])] / eig.values[keep[c]].sqrt()
    });
    let right = proj.try_matmul(a)?;
    Ok(Some(bound_from_factors(left, right)))
}

fn transpose_bound<T: Scalar>(b: PrimalBound<T>) -> PrimalBound<T> {
    let side = match b.side {
        EllipsoidSide::Columns => EllipsoidSide::Rows,
        EllipsoidSide::Rows => EllipsoidSide::Columns,
    };
    PrimalBound {
        value: b.value,
        ellipsoid: b.ellipsoid,
        side,
        left: b.right.transpose(),
        right: b.left.transpose(),
        weights: b
            .weights
            .map(|(w, v)| (DualWeights { p: w.q, q: w.p }, v)),
        iterations: b.iterations,
    }
}

/// Bisection on `t`, each probe running Dykstra's alternating projections
/// between the PSD cone and `{X : X_ii <= t, X_{i,m+j} = a_ij}`.
fn upper_by_dykstra<T: Scalar>(a: &Matrix<T>, opts: &Gamma2Options<T>) -> Result<PrimalBound<T>> {
    if a.rows() > a.cols() {
        return Ok(transpose_bound(upper_by_dykstra(&a.transpose(), opts)?));
    }
    let (m, n) = a.shape();
    let mut best = trivial_bound(a);
    let mut lo = weighted_nuclear_norm(a, &DualWeights::uniform(m, n))?.max(a.max_abs());
    let mut hi = best.value;
    let mut x = Matrix::zeros(m + n, m + n);
    let mut iterations = 0;
    let feas_tol = T::c(1e-9).max(T::epsilon() * T::c(100.0)) * a.frobenius_norm().max(T::one());
    for _ in 0..60 {
        if hi - lo <= opts.tol * hi {
            break;
        }
        let t = (lo + hi) * T::c(0.5);
        let (psd, residual, its) = dykstra_probe(a, t, &x, opts.dykstra_iters, feas_tol)?;
        iterations += its;
        let certified = if residual <= feas_tol {
            let w1 = Matrix::from_fn(m, m, |i, j| psd[(i, j)]);
            bound_from_psd(a, &w1)?
        } else {
            None
        };
        match certified {
            Some(b) => {
                if b.value < best.value {
                    best = b;
                }
                hi = t.max(lo);
                x = psd;
            }
            None => lo = t,
        }
    }
    best.iterations = iterations;
    Ok(best)
}

fn project_affine<T: Scalar>(y: &Matrix<T>, a: &Matrix<T>, t: T) -> Matrix<T> {
    let m = a.rows();
    let mut x = y.clone();
    for i in 0..x.rows() {
        x[(i, i)] = x[(i, i)].min(t);
    }
    for i in 0..m {
        for j in 0..a.cols() {
            x[(i, m + j)] = a[(i, j)];
            x[(m + j, i)] = a[(i, j)];
        }
    }
    x
}

/// Returns the final PSD iterate, its distance to the affine set, and the
/// number of sweeps.
fn dykstra_probe<T: Scalar>(
    a: &Matrix<T>,
    t: T,
    start: &Matrix<T>,
    max_iter: usize,
    feas_tol: T,
) -> Result<(Matrix<T>, T, usize)> {
    let size = start.rows();
    let mut x = start.clone();
    let mut corr_affine = Matrix::zeros(size, size);
    let mut corr_psd = Matrix::zeros(size, size);
    let mut residual = T::infinity();
    for it in 1..=max_iter {
        let y = x.try_add(&corr_affine)?;
        let xa = project_affine(&y, a, t);
        corr_affine = y.try_sub(&xa)?;
        let z = xa.try_add(&corr_psd)?;
        let xp = psd_project(&z)?;
        corr_psd = z.try_sub(&xp)?;
        residual = project_affine(&xp, a, t).try_sub(&xp)?.frobenius_norm();
        x = xp;
        if residual <= feas_tol {
            return Ok((x, residual, it));
        }
    }
    Ok((x, residual, max_iter))
}
