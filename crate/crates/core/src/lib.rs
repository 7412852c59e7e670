//! Factorization-norm (γ₂) computations for discrepancy theory.
//!
//! The crate bundles a dense linear-algebra layer, constructors for the
//! classical set systems (initial segments, anchored grids, subcubes,
//! arithmetic progressions, permutation prefixes), a certified γ₂ solver that
//! returns both an ellipsoid/factorization upper bound and a nuclear-norm lower
//! bound, and exhaustive discrepancy and determinant oracles.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the `f64` instantiation used by the CLI and reports.

pub mod error;
pub mod gamma2;
pub mod linalg;
pub mod oracles;
mod scalar;
pub mod setsystems;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use setsystems::SetSystem;

pub type Matrix = linalg::Matrix<f64>;
pub type MatrixF32 = linalg::Matrix<f32>;
pub type SpectralDecomposition = linalg::SpectralDecomposition<f64>;
pub type Ellipsoid = gamma2::Ellipsoid<f64>;
pub type Gamma2Certificate = gamma2::Gamma2Certificate<f64>;
pub type Gamma2Options = gamma2::Gamma2Options<f64>;
pub type ColoringResult = oracles::ColoringResult<f64>;
pub type BoundsReport = oracles::BoundsReport<f64>;
