use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Determinant by LU factorization with partial pivoting.
pub fn determinant<T: Scalar>(a: &Matrix<T>) -> Result<T> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let mut w = a.clone();
    let mut det = T::one();
    for k in 0..n {
        let (p, pivot) = (k..n)
            .map(|i| (i, w[(i, k)].abs()))
            .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot == T::zero() {
            return Ok(T::zero());
        }
        if p != k {
            for j in 0..n {
                let tmp = w[(k, j)];
                w[(k, j)] = w[(p, j)];
                w[(p, j)] = tmp;
            }
            det = -det;
        }
        let d = w[(k, k)];
        det = det * d;
        for i in k + 1..n {
            let f = w[(i, k)] / d;
            if f == T::zero() {
                continue;
            }
            for j in k + 1..n {
                w[(i, j)] = w[(i, j)] - f * w[(k, j)];
            }
        }
    }
    Ok(det)
}

/// Pivot sequence of Gaussian elimination with complete pivoting.
///
/// Returns `(row, col)` pairs in elimination order; stops at the first pivot
/// with magnitude `<= rel_cutoff * |first pivot|`.
pub fn complete_pivot_order<T: Scalar>(a: &Matrix<T>, rel_cutoff: T) -> Vec<(usize, usize)> {
    let (m, n) = a.shape();
    let mut w = a.clone();
    let mut rows: Vec<usize> = (0..m).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    let mut first = T::zero();
    for k in 0..m.min(n) {
        let mut best = (k, k, T::zero());
        for i in k..m {
            for j in k..n {
                let v = w[(rows[i], cols[j])].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        if k == 0 {
            first = best.2;
        }
        if best.2 == T::zero() || best.2 <= rel_cutoff * first {
            break;
        }
        rows.swap(k, best.0);
        cols.swap(k, best.1);
        let (pr, pc) = (rows[k], cols[k]);
        out.push((pr, pc));
        let d = w[(pr, pc)];
        for &r in &rows[k + 1..] {
            let f = w[(r, pc)] / d;
            if f == T::zero() {
                continue;
            }
            for &c in &cols[k..] {
                w[(r, c)] = w[(r, c)] - f * w[(pr, c)];
            }
        }
    }
    out
}
