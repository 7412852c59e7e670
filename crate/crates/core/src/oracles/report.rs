//! Side-by-side bounds for one matrix.

use crate::error::Result;
use crate::gamma2::{gamma2, weighted_nuclear_norm, DualWeights, Gamma2Options};
use crate::linalg::Matrix;
use crate::oracles::coloring::{disc_exact, herdisc_exact, DISC_CAP, HERDISC_CAP};
use crate::oracles::detlb::{detlb2_exact, detlb2_work, detlb_exact, detlb_work, DETLB_BUDGET};
use crate::scalar::Scalar;

/// Settings for [`BoundsReport::compute`].
#[derive(Clone, Debug)]
pub struct BoundsConfig<T> {
    pub gamma2: Gamma2Options<T>,
    /// Largest submatrix size for the exhaustive determinant bounds; the
    /// size actually used shrinks until the enumeration fits the budget.
    pub detlb_k_max: usize,
    pub with_disc: bool,
    pub with_herdisc: bool,
}

impl<T: Scalar> Default for BoundsConfig<T> {
    fn default() -> Self {
        BoundsConfig {
            gamma2: Gamma2Options::default(),
            detlb_k_max: usize::MAX,
            with_disc: true,
            with_herdisc: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BoundsReport<T> {
    pub gamma2_lower: T,
    pub gamma2_upper: T,
    pub detlb: T,
    /// Submatrix size bound `detlb` was computed with.
    pub detlb_k: usize,
    pub detlb2: T,
    pub detlb2_k: usize,
    /// `||A||_* / sqrt(m n)`, the dual value at uniform weights.
    pub nuclear_uniform: T,
    pub disc_exact: Option<T>,
    pub herdisc_exact: Option<T>,
    pub ratios: Vec<(String, T)>,
}

fn fitting_k(k_max: usize, mut work: impl FnMut(usize) -> u128) -> usize {
    let mut k = k_max;
    while k > 0 && work(k) > DETLB_BUDGET {
        k -= 1;
    }
    k
}

impl<T: Scalar> BoundsReport<T> {
    pub fn compute(a: &Matrix<T>, cfg: &BoundsConfig<T>) -> Result<Self> {
        let (m, n) = a.shape();
        let cert = gamma2(a, &cfg.gamma2)?;
        let nuclear_uniform = if a.is_empty() {
            T::zero()
        } else {
            weighted_nuclear_norm(a, &DualWeights::uniform(m, n))?
        };
        let cap = cfg.detlb_k_max.min(m).min(n);
        let detlb_k = fitting_k(cap, |k| detlb_work(m, n, k));
        let detlb = detlb_exact(a, detlb_k)?.value;
        let detlb2_k = fitting_k(cfg.detlb_k_max.min(n), |k| detlb2_work(n, k));
        let detlb2 = detlb2_exact(a, detlb2_k)?.0;
        let disc = if cfg.with_disc && n <= DISC_CAP {
            Some(disc_exact(a)?.value)
        } else {
            None
        };
        let herdisc = if cfg.with_herdisc && n <= HERDISC_CAP {
            Some(herdisc_exact(a)?.value)
        } else {
            None
        };
        let mut ratios = Vec::new();
        if detlb > T::zero() {
            ratios.push(("gamma2/detlb".to_string(), cert.upper / detlb));
        }
        if let Some(h) = herdisc {
            if cert.upper > T::zero() {
                ratios.push(("herdisc/gamma2".to_string(), h / cert.upper));
            }
        }
        Ok(BoundsReport {
            gamma2_lower: cert.lower,
            gamma2_upper: cert.upper,
            detlb,
            detlb_k,
            detlb2,
            detlb2_k,
            nuclear_uniform,
            disc_exact: disc,
            herdisc_exact: herdisc,
            ratios,
        })
    }

    /// Violated report invariants, as messages.
    pub fn violations(&self, tol: T) -> Vec<String> {
        let mut out = Vec::new();
        if self.detlb > self.gamma2_upper * (T::one() + tol) {
            out.push(format!(
                "detlb {} exceeds the gamma2 upper bound {}",
                self.detlb, self.gamma2_upper
            ));
        }
        if let Some(h) = self.herdisc_exact {
            if self.detlb > T::c(2.0) * h * (T::one() + tol) {
                out.push(format!("detlb {} exceeds twice herdisc {}", self.detlb, h));
            }
        }
        if self.gamma2_lower > self.gamma2_upper * (T::one() + tol) {
            out.push(format!(
                "gamma2 lower {} exceeds upper {}",
                self.gamma2_lower, self.gamma2_upper
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::lower_triangular_ones;

    #[test]
    fn report_on_t4() {
        let a: Matrix<f64> = lower_triangular_ones(4);
        let r = BoundsReport::compute(&a, &BoundsConfig::default()).unwrap();
        assert!(r.violations(1e-6).is_empty());
        assert_eq!(r.herdisc_exact, Some(1.0));
        assert_eq!(r.detlb, 1.0);
        assert_eq!(r.detlb_k, 4);
    }
}
