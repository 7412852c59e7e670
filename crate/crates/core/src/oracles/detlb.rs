//! Determinant lower bounds: exhaustive `detlb`, `detlb_2`, and the
//! bucketing witness extracted from dual weights.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{complete_pivot_order, determinant, svd, Matrix};
use crate::scalar::Scalar;

/// Enumeration budget shared by the exhaustive determinant oracles.
pub const DETLB_BUDGET: u128 = 10_000_000;

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Number of square submatrices of size at most `k_max`.
pub fn detlb_work(m: usize, n: usize, k_max: usize) -> u128 {
    (1..=k_max.min(m).min(n))
        .map(|k| binomial(m, k).saturating_mul(binomial(n, k)))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// Number of column subsets of size at most `k_max`.
pub fn detlb2_work(n: usize, k_max: usize) -> u128 {
    (1..=k_max.min(n))
        .map(|k| binomial(n, k))
        .fold(0u128, |a, b| a.saturating_add(b))
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    loop {
        out.push(c.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < n - k + i {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        c[i] += 1;
        for t in i + 1..k {
            c[t] = c[t - 1] + 1;
        }
    }
}

/// A square submatrix certifying a determinant lower bound.
#[derive(Clone, Debug, PartialEq)]
pub struct DetWitness<T> {
    /// `|det A_{rows, cols}|^{1 / k}`.
    pub value: T,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl<T: Scalar> DetWitness<T> {
    fn empty() -> Self {
        DetWitness {
            value: T::zero(),
            rows: Vec::new(),
            cols: Vec::new(),
        }
    }

    fn better(self, other: Self) -> Self {
        if other.value > self.value {
            other
        } else {
            self
        }
    }
}

fn root_abs_det<T: Scalar>(a: &Matrix<T>, rows: &[usize], cols: &[usize]) -> T {
    let k = rows.len();
    let d = determinant(&a.submatrix(rows, cols)).map(|d| d.abs()).unwrap_or_else(|_| T::zero());
    if d == T::zero() {
        T::zero()
    } else {
        d.powf(T::one() / T::from_usize_lossy(k))
    }
}

/// `max_{k <= k_max} max |det B|^{1/k}` over `k x k` submatrices `B`.
pub fn detlb_exact<T: Scalar>(a: &Matrix<T>, k_max: usize) -> Result<DetWitness<T>> {
    let (m, n) = a.shape();
    let work = detlb_work(m, n, k_max);
    if work > DETLB_BUDGET {
        return Err(Error::TooLarge {
            what: "detlb_exact submatrix enumeration",
            size: work,
            cap: DETLB_BUDGET,
        });
    }
    let mut best = DetWitness::empty();
    for k in 1..=k_max.min(m).min(n) {
        let row_sets = combinations(m, k);
        let col_sets = combinations(n, k);
        let found = row_sets
            .par_iter()
            .map(|rows| {
                col_sets
                    .iter()
                    .map(|cols| DetWitness {
                        value: root_abs_det(a, rows, cols),
                        rows: rows.clone(),
                        cols: cols.clone(),
                    })
                    .fold(DetWitness::empty(), DetWitness::better)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(DetWitness::empty(), DetWitness::better);
        best = best.better(found);
    }
    Ok(best)
}

/// `sqrt(|J| / m) * |det A_J^T A_J|^{1 / (2|J|)}` for one column subset.
pub fn detlb2_term<T: Scalar>(a: &Matrix<T>, cols: &[usize]) -> T {
    let k = cols.len();
    if k == 0 || a.rows() == 0 {
        return T::zero();
    }
    let gram = a.select_cols(cols).gram();
    let d = determinant(&gram).map(|d| d.abs()).unwrap_or_else(|_| T::zero());
    if d == T::zero() {
        return T::zero();
    }
    let kk = T::from_usize_lossy(k);
    (kk / T::from_usize_lossy(a.rows())).sqrt() * d.powf(T::one() / (kk + kk))
}

/// Maximum of [`detlb2_term`] over nonempty column subsets of size at most `k_max`.
pub fn detlb2_exact<T: Scalar>(a: &Matrix<T>, k_max: usize) -> Result<(T, Vec<usize>)> {
    let n = a.cols();
    let work = detlb2_work(n, k_max);
    if work > DETLB_BUDGET {
        return Err(Error::TooLarge {
            what: "detlb2_exact column-subset enumeration",
            size: work,
            cap: DETLB_BUDGET,
        });
    }
    let mut best = (T::zero(), Vec::new());
    for k in 1..=k_max.min(n) {
        let found = combinations(n, k)
            .into_par_iter()
            .map(|cols| (detlb2_term(a, &cols), cols))
            .collect::<Vec<_>>()
            .into_iter()
            .fold((T::zero(), Vec::new()), |x, y| if y.0 > x.0 { y } else { x });
        if found.0 > best.0 {
            best = found;
        }
    }
    Ok(best)
}

/// Output of [`detlb_bucketing`].
#[derive(Clone, Debug, PartialEq)]
pub struct BucketingWitness<T> {
    pub witness: DetWitness<T>,
    /// Number of singular values of the weighted matrix at or above the
    /// lower end of the chosen dyadic bucket.
    pub bucket_rank: usize,
    /// Sum of the singular values inside the chosen bucket.
    pub bucket_mass: T,
}

/// Buckets the singular values of `P^{1/2} A Q^{1/2}` by factors of two,
/// picks the bucket with the largest total, and searches greedy
/// (complete-pivoting) index sets for a large `|det A_{I,J}|^{1/k}`. The
/// result is always a valid determinant lower bound for `A`.
pub fn detlb_bucketing<T: Scalar>(a: &Matrix<T>, p: &[T], q: &[T]) -> Result<BucketingWitness<T>> {
    let (m, n) = a.shape();
    if p.len() != m || q.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "weights of length {}/{} for a {m}x{n} matrix",
            p.len(),
            q.len()
        )));
    }
    if p.iter().chain(q).any(|&w| w < T::zero() || !w.is_finite()) {
        return Err(Error::invalid("weights must be finite and nonnegative"));
    }
    let sp: Vec<T> = p.iter().map(|&w| w.sqrt()).collect();
    let sq: Vec<T> = q.iter().map(|&w| w.sqrt()).collect();
    let weighted = a.scale_rows_cols(&sp, &sq);
    let dec = svd(&weighted)?;
    let top = dec.singular_values.first().copied().unwrap_or_else(T::zero);
    if top == T::zero() {
        return Err(Error::invalid("detlb_bucketing needs a matrix of positive weighted rank"));
    }
    let cutoff = top * T::c(1e-12);
    let mut masses: Vec<T> = Vec::new();
    let mut ends: Vec<usize> = Vec::new();
    for (i, &s) in dec.singular_values.iter().enumerate() {
        if s <= cutoff {
            break;
        }
        let b = (top / s).log2().floor().to_usize().unwrap_or(0);
        if masses.len() <= b {
            masses.resize(b + 1, T::zero());
            ends.resize(b + 1, 0);
        }
        masses[b] = masses[b] + s;
        ends[b] = i + 1;
    }
    let (bucket, &mass) = masses
        .iter()
        .enumerate()
        .fold((0, &T::zero()), |acc, (b, s)| if *s > *acc.1 { (b, s) } else { acc });
    let k = ends[bucket];

    let mut candidates: Vec<Vec<(usize, usize)>> = Vec::new();
    // route 1: complete pivoting directly on the weighted matrix
    candidates.push(complete_pivot_order(&weighted, T::c(1e-12)));
    // route 2: pick columns spanning the leading right singular subspace,
    // then rows on those columns
    let lead = Matrix::from_fn(k, n, |r, j| dec.right_vectors[(j, r)] * dec.singular_values[r]);
    let col_pick: Vec<usize> = complete_pivot_order(&lead, T::c(1e-12))
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    if !col_pick.is_empty() {
        let sub = a.select_cols(&col_pick);
        candidates.push(
            complete_pivot_order(&sub, T::c(1e-12))
                .into_iter()
                .map(|(r, c)| (r, col_pick[c]))
                .collect(),
        );
    }
    let mut best = DetWitness::empty();
    for pivots in &candidates {
        for size in 1..=pivots.len() {
            let rows: Vec<usize> = pivots[..size].iter().map(|&(r, _)| r).collect();
            let cols: Vec<usize> = pivots[..size].iter().map(|&(_, c)| c).collect();
            let value = root_abs_det(a, &rows, &cols);
            best = best.better(DetWitness { value, rows, cols });
        }
    }
    Ok(BucketingWitness {
        witness: best,
        bucket_rank: k,
        bucket_mass: mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_and_combinations() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(detlb_work(6, 6, 6), 923);
    }

    #[test]
    fn remark_examples() {
        let a: Matrix<f64> = Matrix::from_f64(&[&[1.0, 1.0], &[0.0, 1.0]]);
        let b: Matrix<f64> = Matrix::from_f64(&[&[1.0, 0.0], &[-1.0, 1.0]]);
        let s: Matrix<f64> = Matrix::from_f64(&[&[2.0, 1.0], &[-1.0, 2.0]]);
        assert!((detlb_exact(&a, 2).unwrap().value - 1.0).abs() < 1e-15);
        assert!((detlb_exact(&b, 2).unwrap().value - 1.0).abs() < 1e-15);
        assert!((detlb_exact(&s, 2).unwrap().value - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn budget_refusal() {
        let a: Matrix<f64> = Matrix::ones(30, 30);
        assert!(detlb_exact(&a, 10).unwrap_err().is_cap_refusal());
        assert!(detlb2_exact(&Matrix::<f64>::ones(2, 40), 40).unwrap_err().is_cap_refusal());
    }

    #[test]
    fn detlb2_trivial_cases() {
        let i: Matrix<f64> = Matrix::identity(4);
        assert!((detlb2_exact(&i, 4).unwrap().0 - 1.0).abs() < 1e-15);
        let col: Matrix<f64> = Matrix::from_f64(&[&[3.0], &[4.0], &[0.0], &[0.0]]);
        assert!((detlb2_exact(&col, 1).unwrap().0 - 5.0 / 2.0).abs() < 1e-14);
    }

    #[test]
    fn bucketing_on_identity() {
        let i: Matrix<f64> = Matrix::identity(5);
        let u = vec![0.2; 5];
        let w = detlb_bucketing(&i, &u, &u).unwrap();
        assert_eq!(w.witness.value, 1.0);
        assert_eq!(w.bucket_rank, 5);
        assert!(detlb_bucketing(&Matrix::<f64>::zeros(2, 2), &[0.5; 2], &[0.5; 2]).is_err());
    }
}
