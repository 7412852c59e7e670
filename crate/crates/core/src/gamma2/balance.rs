//! Multiplicative weight balancing.
//!
//! At weights `(p, q)` the weighted SVD yields the dual value `f` and a
//! factorization `A = B C` whose squared row norms `r_i` and column norms
//! `c_j` satisfy `sum p_i r_i = sum q_j c_j = f`. The weights are pushed
//! towards rows and columns with large norms, `p_i <- p_i (r_i / f)^eta`,
//! which equalizes the norms on the support. `max r_i` and `max c_j` then
//! meet `f`, closing the gap between the certified upper bound and `f`.

use crate::error::Result;
use crate::gamma2::weights::{evaluate, DualWeights, Evaluation};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

const LOG_CLIP: f64 = 50.0;
const WEIGHT_FLOOR: f64 = 1e-280;
/// Total mass reserved for weights the iteration would drive to zero. Rows
/// of a dominated block otherwise decay until their factor is lost to
/// rounding and no later factorization verifies. Clipped rows have norms
/// below `f`, so they never set the upper bound; the dual value loses at
/// most this fraction.
const RESERVED_MASS: f64 = 1e-7;
const ETA_GROWTH: f64 = 1.5;
const ETA_MAX: f64 = 12.0;

#[derive(Clone, Debug)]
pub(crate) struct BalanceOutcome<T> {
    /// Weights achieving `lower`.
    pub weights: DualWeights<T>,
    pub lower: T,
    /// Best verified factorization, if any reproduced `A`.
    pub factor: Option<(Matrix<T>, Matrix<T>, T)>,
    pub iterations: usize,
}

impl<T: Scalar> BalanceOutcome<T> {
    pub fn upper(&self) -> Option<T> {
        self.factor.as_ref().map(|f| f.2)
    }
}

fn reweight<T: Scalar>(w: &[T], gains: &[T], value: T, eta: T) -> Vec<T> {
    let floor = T::c(WEIGHT_FLOOR).max(T::min_positive_value());
    let clip = T::c(LOG_CLIP);
    let logs: Vec<T> = w
        .iter()
        .zip(gains)
        .map(|(&x, &g)| {
            let ratio = (g / value).max(floor);
            x.max(floor).ln() + (eta * ratio.ln()).max(-clip).min(clip)
        })
        .collect();
    let top = logs.iter().fold(T::neg_infinity(), |m, &x| m.max(x));
    let raw: Vec<T> = logs.iter().map(|&l| (l - top).exp().max(floor)).collect();
    let total: T = raw.iter().copied().sum();
    let reserve = T::c(RESERVED_MASS) / T::from_usize_lossy(w.len().max(1));
    let clipped: Vec<T> = raw.into_iter().map(|x| (x / total).max(reserve)).collect();
    let total: T = clipped.iter().copied().sum();
    clipped.into_iter().map(|x| x / total).collect()
}

fn step<T: Scalar>(cur: &DualWeights<T>, e: &Evaluation<T>, eta: T) -> DualWeights<T> {
    DualWeights {
        p: reweight(&cur.p, &e.row_sq, e.value, eta),
        q: reweight(&cur.q, &e.col_sq, e.value, eta),
    }
}

/// Runs the balancing iteration from `start` until the certified gap falls
/// below `tol` (relative to the upper bound) or `max_iter` evaluations pass.
/// `external_upper` seeds the stopping test with an already known bound.
pub(crate) fn balance<T: Scalar>(
    a: &Matrix<T>,
    start: DualWeights<T>,
    tol: T,
    max_iter: usize,
    factor_tol: T,
    external_upper: Option<T>,
) -> Result<BalanceOutcome<T>> {
    let mut cur = start;
    let mut eval = evaluate(a, &cur)?;
    let mut out = BalanceOutcome {
        weights: cur.clone(),
        lower: eval.value,
        factor: None,
        iterations: 1,
    };
    consider(&mut out, a, &eval, factor_tol);
    let eta_max = T::c(ETA_MAX);
    let mut eta = T::one();
    while out.iterations < max_iter {
        let upper = match (out.upper(), external_upper) {
            (Some(u), Some(x)) => u.min(x),
            (Some(u), None) => u,
            (None, Some(x)) => x,
            (None, None) => T::infinity(),
        };
        if upper - out.lower <= tol * upper || eval.value <= T::zero() {
            break;
        }
        let mut next;
        let mut next_eval;
        loop {
            next = step(&cur, &eval, eta);
            next_eval = evaluate(a, &next)?;
            out.iterations += 1;
            consider(&mut out, a, &next_eval, factor_tol);
            if next_eval.value >= eval.value || eta <= T::one() {
                break;
            }
            eta = T::one();
        }
        let improved = next_eval.value >= eval.value;
        cur = next;
        eval = next_eval;
        if eval.value > out.lower {
            out.lower = eval.value;
            out.weights = cur.clone();
        }
        if improved {
            eta = (eta * T::c(ETA_GROWTH)).min(eta_max);
        }
    }
    Ok(out)
}

fn consider<T: Scalar>(out: &mut BalanceOutcome<T>, a: &Matrix<T>, e: &Evaluation<T>, factor_tol: T) {
    let bound = e.factor_bound();
    if !bound.is_finite() || out.upper().is_some_and(|u| u <= bound) {
        return;
    }
    if e.reproduces(a, factor_tol) {
        out.factor = Some((e.left.clone(), e.right.clone(), bound));
    }
}
