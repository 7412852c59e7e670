use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Default element cap for Kronecker products and products of set systems.
pub const DEFAULT_ELEMENT_CAP: usize = 40_000_000;

/// Kronecker product with the default element cap.
pub fn kron<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    kron_with_cap(a, b, DEFAULT_ELEMENT_CAP)
}

/// `a ⊗ b`: block `(i, j)` of the result is `a[i, j] * b`.
pub fn kron_with_cap<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>, cap: usize) -> Result<Matrix<T>> {
    let (m, n) = a.shape();
    let (p, q) = b.shape();
    let rows = (m as u128) * (p as u128);
    let cols = (n as u128) * (q as u128);
    let size = rows * cols;
    if size > cap as u128 {
        return Err(Error::TooLarge {
            what: "Kronecker product entries",
            size,
            cap: cap as u128,
        });
    }
    let (rows, cols) = (m * p, n * q);
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..m {
        for j in 0..n {
            let aij = a[(i, j)];
            if aij == T::zero() {
                continue;
            }
            for k in 0..p {
                let dst = &mut out.row_mut(i * p + k)[j * q..(j + 1) * q];
                for (d, &x) in dst.iter_mut().zip(b.row(k)) {
                    *d = aij * x;
                }
            }
        }
    }
    Ok(out)
}

/// `a ⊗ a ⊗ ... ⊗ a` (`d` factors, `d >= 1`).
pub fn kron_power<T: Scalar>(a: &Matrix<T>, d: usize, cap: usize) -> Result<Matrix<T>> {
    if d == 0 {
        return Err(Error::invalid("Kronecker power needs d >= 1"));
    }
    let mut acc = a.clone();
    for _ in 1..d {
        acc = kron_with_cap(&acc, a, cap)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_triangle_examples() {
        let i2: Matrix<f64> = Matrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), Matrix::identity(4));
        let t2: Matrix<f64> = Matrix::from_f64(&[&[1.0, 0.0], &[1.0, 1.0]]);
        let expect = Matrix::from_f64(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[1.0, 1.0, 0.0, 0.0],
            &[1.0, 0.0, 1.0, 0.0],
            &[1.0, 1.0, 1.0, 1.0],
        ]);
        assert_eq!(kron(&t2, &t2).unwrap(), expect);
    }

    #[test]
    fn cap_is_enforced() {
        let a: Matrix<f64> = Matrix::ones(10, 10);
        let err = kron_with_cap(&a, &a, 9_999).unwrap_err();
        assert!(err.is_cap_refusal());
        assert!(kron_with_cap(&a, &a, 10_000).is_ok());
        assert!(kron_power(&a, 3, 10_000).is_err());
    }
}
