//! Tusnády grids and Boolean subcubes: direct solves next to the values
//! predicted by Kronecker multiplicativity.

use g2d_core::gamma2::{gamma2, Gamma2Options};
use g2d_core::linalg::lower_triangular_ones;
use g2d_core::oracles::{herdisc_exact, HERDISC_CAP};
use g2d_core::setsystems::{grid_anchored, subcubes};

use crate::error::Result;
use crate::table::ReportRow;

/// Largest grid (`n^d` points) solved directly.
pub const GRID_DIRECT_CAP: usize = 256;
/// Largest subcube dimension accepted.
pub const SUBCUBE_CAP: usize = 8;

/// `log2(2/sqrt 3)`, the per-dimension growth exponent of subcubes.
pub fn subcube_exponent() -> f64 {
    (2.0 / 3f64.sqrt()).log2()
}

fn grid_points(d: usize, n: usize) -> Option<usize> {
    n.checked_pow(d as u32)
}

/// Product-rule value `gamma_2(T_n)^d`, the direct value when the grid is
/// small enough, and herdisc shape columns for the translation between the
/// two norms: `gamma_2 / log2 m` and `gamma_2 * sqrt(log2 m)` for `m = n^d`
/// sets. Exact herdisc is added, with the two implied constants, when the
/// oracle can run.
pub fn tusnady_report(d: usize, n: usize, opts: &Gamma2Options<f64>) -> Result<ReportRow> {
    if d == 0 || n == 0 {
        return Err(g2d_core::Error::InvalidInput("tusnady report needs d, n >= 1".into()).into());
    }
    let tn = gamma2(&lower_triangular_ones::<f64>(n), opts)?;
    let di = d as i32;
    let product_upper = tn.upper.powi(di);
    let product_lower = tn.lower.powi(di);
    let points = grid_points(d, n);
    let log_n = (n as f64).log2().max(1.0);
    // log2 of the number of sets, n^d
    let log_m = log_n * d as f64;
    let mut row = ReportRow::new(format!("G{d}x{n}"))
        .with_n(n)
        .with_d(d)
        .value("product_lower", product_lower)
        .value("product_upper", product_upper)
        .value("herdisc_shape_lower", product_upper / log_m)
        .value("herdisc_shape_upper", product_upper * log_m.sqrt())
        .value("product_over_log_pow_d", product_upper / log_n.powi(di));
    match points {
        Some(p) if p <= GRID_DIRECT_CAP => {
            let inc = grid_anchored(d, n)?.incidence::<f64>();
            let direct = if d == 1 { tn.clone() } else { gamma2(&inc, opts)? };
            row = row
                .value("direct_lower", direct.lower)
                .value("direct_upper", direct.upper)
                .value("direct_over_product", direct.upper / product_upper)
                .note("derivation", "direct");
            if p <= HERDISC_CAP {
                let h = herdisc_exact(&inc)?.value;
                row = row
                    .value("herdisc_exact", h)
                    .value("herdisc_over_shape_lower", h / (product_upper / log_m))
                    .value("herdisc_over_shape_upper", h / (product_upper * log_m.sqrt()))
                    .note("herdisc_source", "exact");
            } else {
                row = row.note("herdisc_source", "product-only");
            }
        }
        _ => {
            row = row.note("derivation", "product").note("herdisc_source", "product-only");
        }
    }
    Ok(row)
}

/// `(2/sqrt 3)^d` next to the direct `gamma_2` of the `3^d x 2^d` subcube
/// incidence, with `log2(gamma_2) / d` as an estimate of the exponent.
pub fn subcube_report(d: usize, opts: &Gamma2Options<f64>) -> Result<ReportRow> {
    if d > SUBCUBE_CAP {
        return Err(g2d_core::Error::TooLarge {
            what: "subcube dimension",
            size: d as u128,
            cap: SUBCUBE_CAP as u128,
        }
        .into());
    }
    let cert = gamma2(&subcubes(d)?.incidence::<f64>(), opts)?;
    let product = (2.0 / 3f64.sqrt()).powi(d as i32);
    let exponent = if d == 0 { f64::NAN } else { cert.upper.log2() / d as f64 };
    Ok(ReportRow::new(format!("C{d}"))
        .with_d(d)
        .value("gamma2_lower", cert.lower)
        .value("gamma2_upper", cert.upper)
        .value("product", product)
        .value("upper_over_product", cert.upper / product)
        .value("exponent_estimate", exponent)
        .value("exponent_reference", subcube_exponent())
        .note("converged", cert.converged.to_string()))
}
