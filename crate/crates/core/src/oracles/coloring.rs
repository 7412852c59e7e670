//! Exhaustive discrepancy oracles over `{-1, +1}` colorings.

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Largest ground set accepted by [`disc_exact`].
pub const DISC_CAP: usize = 26;
/// Largest ground set accepted by [`herdisc_exact`].
pub const HERDISC_CAP: usize = 16;
/// Largest ground set accepted by [`disc_p_exact`].
pub const DISC_P_CAP: usize = 24;

/// Number of leading free coordinates fixed per parallel task.
const SPLIT_DEPTH: usize = 8;

/// Which norm of `A x` a coloring result measures.
#[derive(Clone, Debug, PartialEq)]
pub enum NormKind<T> {
    Linf,
    /// `(1/m sum |(Ax)_i|^p)^{1/p}`.
    Lp(T),
    /// `(1/m sum w_i |(Ax)_i|^p)^{1/p}` with `sum w_i = m`.
    WeightedLp { p: T, weights: Vec<T> },
}

impl<T: Scalar> NormKind<T> {
    /// Evaluates the norm of `y = A x`.
    pub fn evaluate(&self, y: &[T]) -> T {
        let m = T::from_usize_lossy(y.len().max(1));
        match self {
            NormKind::Linf => y.iter().fold(T::zero(), |acc, &v| acc.max(v.abs())),
            NormKind::Lp(p) if p.is_infinite() => NormKind::Linf.evaluate(y),
            NormKind::WeightedLp { p, weights } if p.is_infinite() => y
                .iter()
                .zip(weights)
                .filter(|(_, &w)| w > T::zero())
                .fold(T::zero(), |acc, (&v, _)| acc.max(v.abs())),
            NormKind::Lp(p) => {
                if y.is_empty() {
                    return T::zero();
                }
                (y.iter().map(|&v| v.abs().powf(*p)).sum::<T>() / m).powf(T::one() / *p)
            }
            NormKind::WeightedLp { p, weights } => {
                if y.is_empty() {
                    return T::zero();
                }
                let s: T = y
                    .iter()
                    .zip(weights)
                    .map(|(&v, &w)| w * v.abs().powf(*p))
                    .sum();
                (s / m).powf(T::one() / *p)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColoringResult<T> {
    pub value: T,
    /// Entries are `-1` or `+1`.
    pub coloring: Vec<i8>,
    pub norm: NormKind<T>,
}

impl<T: Scalar> ColoringResult<T> {
    /// The norm of `a * coloring`, computed from scratch.
    pub fn recompute(&self, a: &Matrix<T>) -> T {
        self.norm.evaluate(&apply(a, &self.coloring))
    }
}

/// `A x` for a sign vector.
pub fn apply<T: Scalar>(a: &Matrix<T>, x: &[i8]) -> Vec<T> {
    (0..a.rows())
        .map(|i| {
            a.row(i)
                .iter()
                .zip(x)
                .map(|(&v, &s)| if s > 0 { v } else { -v })
                .sum()
        })
        .collect()
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::TooLarge {
            what,
            size: n as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}

/// `min_x ||A x||_inf` over colorings with `x_1 = +1`; ties go to the
/// lexicographically smallest coloring (with `-1 < +1`).
pub fn disc_exact<T: Scalar>(a: &Matrix<T>) -> Result<ColoringResult<T>> {
    check_cap("disc_exact ground set", a.cols(), DISC_CAP)?;
    let (value, coloring) = BranchAndBound::new(a).solve_parallel();
    Ok(ColoringResult {
        value,
        coloring,
        norm: NormKind::Linf,
    })
}

/// Depth-first search over colorings in lexicographic order, pruning with
/// `max_i (|s_i| - sum of |a_ij| over unassigned j)`.
struct BranchAndBound<T> {
    m: usize,
    n: usize,
    /// Column-major copy of `A`.
    cols: Vec<T>,
    /// `slack[k * m + i] = sum_{j >= k} |a_ij|`.
    slack: Vec<T>,
}

struct Search<'a, T> {
    bb: &'a BranchAndBound<T>,
    best: T,
    best_x: Option<Vec<i8>>,
    shared: Option<&'a AtomicU64>,
}

impl<T: Scalar> BranchAndBound<T> {
    fn new(a: &Matrix<T>) -> Self {
        let (m, n) = a.shape();
        let mut cols = Vec::with_capacity(m * n);
        for j in 0..n {
            cols.extend(a.col(j));
        }
        let mut slack = vec![T::zero(); (n + 1) * m];
        for k in (0..n).rev() {
            for i in 0..m {
                slack[k * m + i] = slack[(k + 1) * m + i] + cols[k * m + i].abs();
            }
        }
        BranchAndBound { m, n, cols, slack }
    }

    fn col(&self, j: usize) -> &[T] {
        &self.cols[j * self.m..(j + 1) * self.m]
    }

    fn solve_sequential(&self) -> (T, Vec<i8>) {
        if self.n == 0 {
            return (T::zero(), Vec::new());
        }
        let mut x = vec![1i8; self.n];
        let sums: Vec<T> = self.col(0).to_vec();
        let mut search = Search {
            bb: self,
            best: T::infinity(),
            best_x: None,
            shared: None,
        };
        search.dfs(1, &mut x, sums);
        (search.best, search.best_x.expect("some leaf is reached"))
    }

    fn solve_parallel(&self) -> (T, Vec<i8>) {
        let free = self.n.saturating_sub(1);
        let depth = free.min(SPLIT_DEPTH);
        if depth < 4 {
            return self.solve_sequential();
        }
        let shared = AtomicU64::new(f64::INFINITY.to_bits());
        let results: Vec<Option<(T, Vec<i8>)>> = (0..1usize << depth)
            .into_par_iter()
            .map(|prefix| {
                let mut x = vec![1i8; self.n];
                let mut sums: Vec<T> = self.col(0).to_vec();
                for d in 0..depth {
                    // most significant bit first so prefix order is lexicographic
                    let plus = (prefix >> (depth - 1 - d)) & 1 == 1;
                    x[1 + d] = if plus { 1 } else { -1 };
                    for (s, &v) in sums.iter_mut().zip(self.col(1 + d)) {
                        *s = if plus { *s + v } else { *s - v };
                    }
                }
                let mut search = Search {
                    bb: self,
                    best: T::infinity(),
                    best_x: None,
                    shared: Some(&shared),
                };
                search.dfs(1 + depth, &mut x, sums);
                search.best_x.map(|bx| (search.best, bx))
            })
            .collect();
        let mut best: Option<(T, Vec<i8>)> = None;
        for r in results.into_iter().flatten() {
            if best.as_ref().is_none_or(|b| r.0 < b.0) {
                best = Some(r);
            }
        }
        best.expect("the optimal prefix is never pruned")
    }
}

impl<T: Scalar> Search<'_, T> {
    fn dfs(&mut self, k: usize, x: &mut [i8], sums: Vec<T>) {
        let bb = self.bb;
        let m = bb.m;
        let bound = sums
            .iter()
            .zip(&bb.slack[k * m..(k + 1) * m])
            .fold(T::zero(), |acc, (&s, &r)| acc.max(s.abs() - r));
        if bound >= self.best {
            return;
        }
        if let Some(g) = self.shared {
            // strict: equal values must survive so ties resolve lexicographically
            if bound.as_f64() > f64::from_bits(g.load(Ordering::Relaxed)) {
                return;
            }
        }
        if k == bb.n {
            self.best = bound;
            self.best_x = Some(x.to_vec());
            if let Some(g) = self.shared {
                g.fetch_min(bound.as_f64().to_bits(), Ordering::Relaxed);
            }
            return;
        }
        let col = bb.col(k);
        for sign in [-1i8, 1] {
            x[k] = sign;
            let next: Vec<T> = sums
                .iter()
                .zip(col)
                .map(|(&s, &v)| if sign > 0 { s + v } else { s - v })
                .collect();
            self.dfs(k + 1, x, next);
        }
        x[k] = 1;
    }
}

/// Hereditary discrepancy with a maximizing column subset.
#[derive(Clone, Debug, PartialEq)]
pub struct HerdiscResult<T> {
    pub value: T,
    /// Columns of the maximizing restriction (the first one found in
    /// increasing bitmask order).
    pub subset: Vec<usize>,
}

/// `max_J disc(A_J)` over nonempty column subsets.
pub fn herdisc_exact<T: Scalar>(a: &Matrix<T>) -> Result<HerdiscResult<T>> {
    check_cap("herdisc_exact ground set", a.cols(), HERDISC_CAP)?;
    let n = a.cols();
    if n == 0 {
        return Ok(HerdiscResult {
            value: T::zero(),
            subset: Vec::new(),
        });
    }
    let values: Vec<T> = (1usize..1 << n)
        .into_par_iter()
        .map(|mask| {
            let cols: Vec<usize> = (0..n).filter(|&j| mask >> j & 1 == 1).collect();
            BranchAndBound::new(&a.select_cols(&cols)).solve_sequential().0
        })
        .collect();
    let (idx, value) = values
        .iter()
        .enumerate()
        .fold((0, T::neg_infinity()), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
    let mask = idx + 1;
    Ok(HerdiscResult {
        value,
        subset: (0..n).filter(|&j| mask >> j & 1 == 1).collect(),
    })
}

/// Exact minimizer of the (optionally weighted) normalized `L_p` discrepancy.
/// `p = +inf` selects the weighted maximum over rows with positive weight.
/// Weights are rescaled to sum to the number of rows.
pub fn disc_p_exact<T: Scalar>(a: &Matrix<T>, p: T, weights: Option<&[T]>) -> Result<ColoringResult<T>> {
    check_cap("disc_p_exact ground set", a.cols(), DISC_P_CAP)?;
    if p.is_nan() || p < T::one() {
        return Err(Error::invalid(format!("p must be at least 1, got {p}")));
    }
    let m = a.rows();
    let norm = match weights {
        None => NormKind::Lp(p),
        Some(w) => {
            if w.len() != m {
                return Err(Error::DimensionMismatch(format!("{} weights for {m} rows", w.len())));
            }
            if w.iter().any(|&x| x < T::zero() || !x.is_finite()) {
                return Err(Error::invalid("weights must be finite and nonnegative"));
            }
            let total: T = w.iter().copied().sum();
            if total <= T::zero() {
                return Err(Error::invalid("weight vector is identically zero"));
            }
            let scale = T::from_usize_lossy(m) / total;
            NormKind::WeightedLp {
                p,
                weights: w.iter().map(|&x| x * scale).collect(),
            }
        }
    };
    let n = a.cols();
    if n == 0 {
        return Ok(ColoringResult {
            value: norm.evaluate(&vec![T::zero(); m]),
            coloring: Vec::new(),
            norm,
        });
    }
    let row_weights: Vec<T> = match &norm {
        NormKind::WeightedLp { weights, .. } => weights.clone(),
        _ => vec![T::one(); m],
    };
    let infinite = p.is_infinite();
    // monotone surrogate of the objective: sum w |y|^p, or max over weighted rows
    let score = |y: &[T]| -> T {
        if infinite {
            y.iter()
                .zip(&row_weights)
                .filter(|(_, &w)| w > T::zero())
                .fold(T::zero(), |acc, (&v, _)| acc.max(v.abs()))
        } else {
            y.iter().zip(&row_weights).map(|(&v, &w)| w * v.abs().powf(p)).sum()
        }
    };
    let cols: Vec<Vec<T>> = (0..n).map(|j| a.col(j)).collect();
    let free = n - 1;
    let chunk_bits = free.min(SPLIT_DEPTH);
    let per_chunk = 1usize << (free - chunk_bits);
    // Gray-code walk over the free coordinates x_2..x_n within each chunk
    let results: Vec<(T, Vec<i8>)> = (0..1usize << chunk_bits)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * per_chunk;
            let to_x = |g: usize| -> Vec<i8> {
                let mut x = vec![1i8; n];
                for (b, xi) in x[1..].iter_mut().enumerate() {
                    // bit for coordinate 2 is the most significant
                    if g >> (free - 1 - b) & 1 == 0 {
                        *xi = -1;
                    }
                }
                x
            };
            let mut g = start ^ (start >> 1);
            let mut x = to_x(g);
            let mut y = apply(a, &x);
            let mut best = (score(&y), x.clone());
            for k in start + 1..start + per_chunk {
                let g_next = k ^ (k >> 1);
                let bit = (g ^ g_next).trailing_zeros() as usize;
                let coord = free - bit;
                x[coord] = -x[coord];
                let two = T::c(2.0);
                for (yi, &v) in y.iter_mut().zip(&cols[coord]) {
                    *yi = if x[coord] > 0 { *yi + two * v } else { *yi - two * v };
                }
                g = g_next;
                let s = score(&y);
                if s < best.0 || (s == best.0 && x < best.1) {
                    best = (s, x.clone());
                }
            }
            best
        })
        .collect();
    let best = results
        .into_iter()
        .reduce(|b, r| if r.0 < b.0 || (r.0 == b.0 && r.1 < b.1) { r } else { b })
        .expect("nonempty");
    let coloring = best.1;
    let value = norm.evaluate(&apply(a, &coloring));
    Ok(ColoringResult { value, coloring, norm })
}
