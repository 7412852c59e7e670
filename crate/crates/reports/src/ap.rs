//! Arithmetic progressions: `gamma_2(AP_n)` against `n^{1/4}`, and the
//! degree and size bounds on the maximal progressions inside an interval.

use g2d_core::gamma2::{gamma2, Gamma2Options};
use g2d_core::setsystems::{arithmetic_progressions, maximal_aps, SetSystem};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{ReportError, Result};
use crate::table::{ReportRow, Table};

/// Largest `n` accepted by [`ap_report`].
pub const AP_CAP: usize = 128;

/// Relative width of the regression band around [`AP_REFERENCE_RATIOS`].
pub const AP_BAND: f64 = 0.01;

/// `gamma_2(AP_n) / n^{1/4}` (primal value) from the first release run at
/// default solver options.
pub const AP_REFERENCE_RATIOS: [(usize, f64); 7] = [
    (1, 1.0),
    (2, 1.0),
    (4, 1.01457),
    (8, 1.02737),
    (16, 1.04118),
    (32, 1.05121),
    (64, 1.05517),
];

pub fn reference_ratio(n: usize) -> Option<f64> {
    AP_REFERENCE_RATIOS.iter().find(|(k, _)| *k == n).map(|&(_, r)| r)
}

fn solve(sys: &SetSystem, opts: &Gamma2Options<f64>) -> Result<(f64, f64)> {
    let a = sys.incidence::<f64>();
    if a.is_zero() {
        return Ok((0.0, 0.0));
    }
    let c = gamma2(&a, opts)?;
    Ok((c.lower, c.upper))
}

pub fn ap_row(n: usize, opts: &Gamma2Options<f64>) -> Result<ReportRow> {
    if n == 0 || n > AP_CAP {
        return Err(g2d_core::Error::TooLarge {
            what: "AP report size",
            size: n as u128,
            cap: AP_CAP as u128,
        }
        .into());
    }
    let sys = arithmetic_progressions(n)?;
    let (lower, upper) = solve(&sys, opts)?;
    let quarter = (n as f64).powf(0.25);
    let ratio = upper / quarter;
    let mut row = ReportRow::new(format!("AP{n}"))
        .with_n(n)
        .value("sets", sys.num_sets() as f64)
        .value("gamma2_lower", lower)
        .value("gamma2_upper", upper)
        .value("quarter_power", quarter)
        .value("ratio", ratio);
    match reference_ratio(n) {
        Some(r) => {
            let inside = (ratio - r).abs() <= AP_BAND * r;
            row = row
                .value("band_low", r * (1.0 - AP_BAND))
                .value("band_high", r * (1.0 + AP_BAND))
                .note("in_band", inside.to_string());
        }
        None => row = row.note("in_band", "no reference"),
    }
    Ok(row)
}

/// One row per `n`, in input order.
pub fn ap_report(ns: &[usize], opts: &Gamma2Options<f64>, budget: &Budget) -> Result<Table> {
    let rows = ns
        .par_iter()
        .map(|&n| {
            budget.check(&format!("AP{n}"))?;
            ap_row(n, opts)
        })
        .collect::<Result<Vec<_>>>()?;
    let table = Table::new("ap", rows);
    table.check_order(&[("gamma2_lower", "gamma2_upper")], 1e-9)?;
    Ok(table)
}

/// Fails when any row fell outside its recorded band.
pub fn check_band(table: &Table) -> Result<()> {
    match table.rows.iter().find(|r| r.get_note("in_band") == Some("false")) {
        Some(r) => Err(ReportError::Assertion(format!(
            "{}: ratio {} outside [{}, {}]",
            r.label,
            r.get("ratio").unwrap_or(f64::NAN),
            r.get("band_low").unwrap_or(f64::NAN),
            r.get("band_high").unwrap_or(f64::NAN)
        ))),
        None => Ok(()),
    }
}

/// For each interval size, `gamma_2` of the small-difference and the
/// large-difference maximal progressions against `|I|^{1/4}`; both bounds
/// are asserted with the solver tolerance as slack.
pub fn ap_structure(sizes: &[usize], opts: &Gamma2Options<f64>) -> Result<Table> {
    let mut rows = Vec::new();
    for &size in sizes {
        let m = maximal_aps(size)?;
        let (_, small) = solve(&m.small_difference, opts)?;
        let (_, large) = solve(&m.large_difference, opts)?;
        let bound = (size as f64).powf(0.25);
        rows.push(
            ReportRow::new(format!("I{size}"))
                .with_n(size)
                .value("small_difference_gamma2", small)
                .value("large_difference_gamma2", large)
                .value("bound_slack", bound + opts.tol)
                .value("max_degree_small", m.small_difference.max_degree() as f64)
                .value("max_size_large", m.large_difference.max_set_size() as f64),
        );
    }
    let table = Table::new("ap_structure", rows);
    table.check_order(
        &[
            ("small_difference_gamma2", "bound_slack"),
            ("large_difference_gamma2", "bound_slack"),
        ],
        0.0,
    )?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point() {
        let r = ap_row(1, &Gamma2Options::default()).unwrap();
        assert!((r.get("gamma2_upper").unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(r.get_note("in_band"), Some("true"));
    }

    #[test]
    fn structure_holds_for_small_interval() {
        let t = ap_structure(&[4, 16], &Gamma2Options::default()).unwrap();
        assert_eq!(t.rows.len(), 2);
    }
}
