use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::scalar::Scalar;

/// Relative asymmetry tolerated before symmetrizing.
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Checks near-symmetry (`max |s - s^T| <= 1e-9 ||s||_F`) and returns the
/// symmetric part.
pub fn symmetric_part<T: Scalar>(s: &Matrix<T>) -> Result<Matrix<T>> {
    let asym = s.asymmetry().ok_or(Error::NotSquare {
        rows: s.rows(),
        cols: s.cols(),
    })?;
    let tol = T::c(SYMMETRY_TOL).max(T::epsilon() * T::c(16.0)) * s.frobenius_norm();
    if asym > tol {
        return Err(Error::invalid(format!(
            "matrix is not symmetric (asymmetry {asym:e} > {tol:e})"
        )));
    }
    Ok(s.symmetrized())
}

/// Nearest positive-semidefinite matrix in Frobenius norm: negative
/// eigenvalues are clipped to zero.
pub fn psd_project<T: Scalar>(s: &Matrix<T>) -> Result<Matrix<T>> {
    let sym = symmetric_part(s)?;
    let eig = symmetric_eigen(&sym)?;
    Ok(eig.reconstruct_with(|l| l.max(T::zero())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clips_negative_eigenvalue() {
        let s: Matrix<f64> = Matrix::from_diag(&[1.0, -1.0]);
        let p = psd_project(&s).unwrap();
        assert!(p.max_abs_diff(&Matrix::from_diag(&[1.0, 0.0])).unwrap() < 1e-15);
    }

    #[test]
    fn rejects_asymmetric() {
        let s: Matrix<f64> = Matrix::from_f64(&[&[1.0, 2.0], &[0.0, 1.0]]);
        assert!(psd_project(&s).is_err());
        assert!(psd_project(&Matrix::<f64>::zeros(2, 3)).is_err());
    }
}
