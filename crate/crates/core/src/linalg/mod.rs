//! Dense linear algebra: matrices, SVD, symmetric eigensolver, determinants,
//! Kronecker products and the closed-form spectra of `T_n`.

mod eigen;
mod kron;
mod lu;
mod matrix;
mod psd;
pub mod spectra;
mod svd;
pub mod text;

pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use kron::{kron, kron_power, kron_with_cap, DEFAULT_ELEMENT_CAP};
pub use lu::{complete_pivot_order, determinant};
pub use matrix::Matrix;
pub use psd::{psd_project, symmetric_part, SYMMETRY_TOL};
pub use spectra::{
    circulant_interval, circulant_interval_eigenvalues, lower_triangular_ones, sn_tridiagonal,
    tn_singular_values_closed_form,
};
pub use svd::{householder_qr, nuclear_norm, singular_values, svd, SpectralDecomposition};
