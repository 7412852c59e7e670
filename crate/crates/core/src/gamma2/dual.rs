//! Lower bounds from the dual program `max ||P^{1/2} A Q^{1/2}||_*` over
//! probability weights.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::error::Result;
use crate::gamma2::balance::balance;
use crate::gamma2::options::Gamma2Options;
use crate::gamma2::weights::{evaluate, project_simplex, DualWeights};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A certified lower bound together with the weights attaining it.
#[derive(Clone, Debug)]
pub struct DualBound<T> {
    pub value: T,
    pub weights: DualWeights<T>,
}

/// Projected supergradient ascent with step `c / sqrt(k)` along the
/// normalized supergradient. Returns the best iterate seen.
pub fn supergradient_ascent<T: Scalar>(
    a: &Matrix<T>,
    start: DualWeights<T>,
    iterations: usize,
    step_scale: T,
) -> Result<DualBound<T>> {
    start.check(a)?;
    let mut cur = DualWeights {
        p: project_simplex(&start.p),
        q: project_simplex(&start.q),
    };
    let mut best = DualBound {
        value: evaluate(a, &cur)?.value,
        weights: cur.clone(),
    };
    let half = T::c(0.5);
    for k in 1..=iterations {
        let e = evaluate(a, &cur)?;
        if e.value > best.value {
            best = DualBound {
                value: e.value,
                weights: cur.clone(),
            };
        }
        // d f / d p_i = ||b_i||^2 / 2, and likewise for q
        let norm: T = e
            .row_sq
            .iter()
            .chain(&e.col_sq)
            .map(|&g| g * half * g * half)
            .sum::<T>()
            .sqrt();
        if norm <= T::zero() || !norm.is_finite() {
            break;
        }
        let len = step_scale / T::from_usize_lossy(k).sqrt() / norm;
        let move_side = |w: &[T], g: &[T]| -> Vec<T> {
            let moved: Vec<T> = w.iter().zip(g).map(|(&x, &gi)| x + len * gi * half).collect();
            project_simplex(&moved)
        };
        cur = DualWeights {
            p: move_side(&cur.p, &e.row_sq),
            q: move_side(&cur.q, &e.col_sq),
        };
    }
    let last = evaluate(a, &cur)?.value;
    if last > best.value {
        best = DualBound {
            value: last,
            weights: cur,
        };
    }
    Ok(best)
}

/// Dirichlet(1) sample of the given length.
fn dirichlet<T: Scalar>(rng: &mut ChaCha8Rng, len: usize) -> Vec<T> {
    let raw: Vec<f64> = (0..len).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| T::c(x / total)).collect()
}

/// Starting points: uniform first, then `restarts` Dirichlet samples drawn
/// from a generator seeded by `seed`.
pub(crate) fn starting_points<T: Scalar>(
    rows: usize,
    cols: usize,
    restarts: usize,
    seed: u64,
) -> Vec<DualWeights<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![DualWeights::uniform(rows, cols)];
    for _ in 0..restarts {
        let p = dirichlet(&mut rng, rows);
        let q = dirichlet(&mut rng, cols);
        out.push(DualWeights { p, q });
    }
    out
}

/// Best lower bound over the uniform start and `opts.restarts` random starts;
/// each start runs supergradient ascent followed by balancing refinement.
/// Starts are independent and run in parallel; ties go to the earliest start.
pub fn gamma2_lower_dual<T: Scalar>(a: &Matrix<T>, opts: &Gamma2Options<T>) -> Result<DualBound<T>> {
    lower_from_starts(a, opts, starting_points(a.rows(), a.cols(), opts.restarts, opts.seed), None)
}

pub(crate) fn lower_from_starts<T: Scalar>(
    a: &Matrix<T>,
    opts: &Gamma2Options<T>,
    starts: Vec<DualWeights<T>>,
    known_upper: Option<T>,
) -> Result<DualBound<T>> {
    if a.is_empty() || a.is_zero() {
        return Ok(DualBound {
            value: T::zero(),
            weights: DualWeights::uniform(a.rows(), a.cols()),
        });
    }
    let results: Vec<Result<DualBound<T>>> = starts
        .into_par_iter()
        .map(|s| refine(a, opts, s, known_upper))
        .collect();
    let mut best: Option<DualBound<T>> = None;
    for r in results {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one start"))
}

pub(crate) fn refine<T: Scalar>(
    a: &Matrix<T>,
    opts: &Gamma2Options<T>,
    start: DualWeights<T>,
    known_upper: Option<T>,
) -> Result<DualBound<T>> {
    let ascended = supergradient_ascent(a, start, opts.ascent_iters, opts.step_scale)?;
    let polished = balance(
        a,
        ascended.weights.mixed_with_uniform(T::c(1e-9)),
        opts.tol,
        opts.max_iter,
        opts.factor_tol,
        known_upper,
    )?;
    Ok(if polished.lower >= ascended.value {
        DualBound {
            value: polished.lower,
            weights: polished.weights,
        }
    } else {
        ascended
    })
}
