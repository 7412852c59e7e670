//! The γ₂ factorization norm.
//!
//! `γ₂(A) = min { max_i ||b_i|| * max_j ||c_j|| : A = B C }`, equivalently
//! the smallest `||E||_inf` over centered ellipsoids containing the columns
//! of `A`. Upper bounds come with an explicit factorization and ellipsoid;
//! lower bounds come from dual weights via `max ||P^{1/2} A Q^{1/2}||_*`.

mod balance;
mod certificate;
mod dual;
mod ellipsoid;
mod options;
mod primal;
mod weights;

pub use certificate::{Gamma2Certificate, Violation};
pub use dual::{gamma2_lower_dual, supergradient_ascent, DualBound};
pub use ellipsoid::{
    block_diag_ellipsoid, ellipsoid_contains, ellipsoid_inf_norm, ellipsoid_sum, Ellipsoid, Gauge,
    RANK_CUTOFF,
};
pub use options::{Gamma2Options, PrimalMethod};
pub use primal::{bound_from_factors, gamma2_upper, EllipsoidSide, PrimalBound};
pub use weights::{project_simplex, weighted_nuclear_norm, DualWeights};

use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Solves for γ₂(A) to relative gap `opts.tol`, returning both certificates.
///
/// The primal solve usually closes the gap by itself; the randomized dual
/// ascent only runs when it did not.
pub fn gamma2<T: Scalar>(a: &Matrix<T>, opts: &Gamma2Options<T>) -> Result<Gamma2Certificate<T>> {
    let primal = gamma2_upper(a, opts)?;
    let (mut weights, mut lower) = match &primal.weights {
        Some((w, v)) => (w.clone(), *v),
        None => (DualWeights::uniform(a.rows(), a.cols()), T::zero()),
    };
    if primal.weights.is_none() && !a.is_empty() {
        lower = weighted_nuclear_norm(a, &weights)?;
    }
    let met = |lower: T| primal.value - lower <= opts.tol * primal.value;
    let mut iterations = primal.iterations;
    if !met(lower) {
        let mut starts = vec![weights.clone()];
        starts.extend(dual::starting_points(a.rows(), a.cols(), opts.restarts, opts.seed));
        let dual = dual::lower_from_starts(a, opts, starts, Some(primal.value))?;
        iterations += opts.restarts + 1;
        if dual.value > lower {
            lower = dual.value;
            weights = dual.weights;
        }
    }
    Ok(Gamma2Certificate {
        upper: primal.value,
        lower,
        converged: met(lower),
        iterations,
        ellipsoid: primal.ellipsoid,
        side: primal.side,
        left: primal.left,
        right: primal.right,
        weights,
    })
}
