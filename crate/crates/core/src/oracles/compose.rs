//! Composition rules for γ₂ values of combined set systems.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Composition {
    /// Union of the systems on a common ground set.
    Union,
    /// Sets formed as unions of one set from each system, on disjoint ground sets.
    DisjointPieces,
    /// Cartesian products of one set from each system.
    Product,
}

/// A composed γ₂-level bound and the matching herdisc window shapes
/// `γ₂ / log₂ m` and `γ₂ sqrt(log₂ m)` (absolute constants not included).
#[derive(Clone, Debug, PartialEq)]
pub struct ComposedBound<T> {
    pub gamma2: T,
    /// Set count of the composed system.
    pub sets: u128,
    pub herdisc_lower_shape: Option<T>,
    pub herdisc_upper_shape: Option<T>,
}

/// Combines `(γ₂ value, set count)` pairs: root-sum-of-squares for unions,
/// sums for disjoint pieces, products for products.
pub fn compose_bounds<T: Scalar>(kind: Composition, parts: &[(T, usize)]) -> Result<ComposedBound<T>> {
    if parts.is_empty() {
        return Err(Error::invalid("compose_bounds needs at least one part"));
    }
    if parts.iter().any(|&(v, _)| v < T::zero() || !v.is_finite()) {
        return Err(Error::invalid("γ₂ values must be finite and nonnegative"));
    }
    let (gamma2, sets) = match kind {
        Composition::Union => (
            parts.iter().map(|&(v, _)| v * v).sum::<T>().sqrt(),
            parts.iter().map(|&(_, m)| m as u128).sum(),
        ),
        Composition::DisjointPieces => (
            parts.iter().map(|&(v, _)| v).sum(),
            parts.iter().fold(1u128, |acc, &(_, m)| acc.saturating_mul(m as u128)),
        ),
        Composition::Product => (
            parts.iter().fold(T::one(), |acc, &(v, _)| acc * v),
            parts.iter().fold(1u128, |acc, &(_, m)| acc.saturating_mul(m as u128)),
        ),
    };
    let log_m = T::c((sets as f64).log2());
    let (lo, hi) = if sets >= 2 {
        (Some(gamma2 / log_m), Some(gamma2 * log_m.sqrt()))
    } else {
        (None, None)
    };
    Ok(ComposedBound {
        gamma2,
        sets,
        herdisc_lower_shape: lo,
        herdisc_upper_shape: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_arithmetic() {
        let u = compose_bounds(Composition::Union, &[(2.0f64, 4); 9]).unwrap();
        assert!((u.gamma2 - 6.0).abs() < 1e-12);
        assert_eq!(u.sets, 36);
        let p = compose_bounds(Composition::Product, &[(1.5f64, 3), (2.0, 5)]).unwrap();
        assert_eq!(p.gamma2, 3.0);
        assert_eq!(p.sets, 15);
        let d = compose_bounds(Composition::DisjointPieces, &[(1.0f64, 2); 3]).unwrap();
        assert_eq!(d.gamma2, 3.0);
        assert!(compose_bounds::<f64>(Composition::Union, &[]).is_err());
        let single = compose_bounds(Composition::Union, &[(1.0f64, 1)]).unwrap();
        assert!(single.herdisc_lower_shape.is_none());
    }
}
