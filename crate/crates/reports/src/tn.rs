//! The `gamma_2(T_n)` figure: the canonical-decomposition bound, the solved
//! interval and the closed-form nuclear-norm lower bound, per `n`.

use g2d_core::gamma2::{gamma2, Gamma2Certificate, Gamma2Options};
use g2d_core::linalg::{lower_triangular_ones, tn_singular_values_closed_form};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{ReportError, Result};
use crate::table::{ReportRow, Table};

/// Largest `n` accepted by the figure report.
pub const TN_CAP: usize = 256;

/// Lower-to-upper column pairs that every figure row must respect.
pub const TN_ORDER: [(&str, &str); 3] = [
    ("nuclear_lower", "gamma2_lower"),
    ("gamma2_lower", "gamma2_upper"),
    ("gamma2_upper", "log_bound"),
];

/// `floor(log2 n) + 1`: the number of canonical pieces needed per prefix.
pub fn log_bound(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// `(1/n) ||T_n||_*` from the closed-form singular values.
pub fn nuclear_lower(n: usize) -> f64 {
    tn_singular_values_closed_form::<f64>(n).iter().sum::<f64>() / n as f64
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > TN_CAP {
        return Err(g2d_core::Error::TooLarge {
            what: "T_n figure size",
            size: n as u128,
            cap: TN_CAP as u128,
        }
        .into());
    }
    Ok(())
}

/// Solves `gamma_2(T_n)` and builds the figure row.
pub fn tn_row(n: usize, opts: &Gamma2Options<f64>) -> Result<(ReportRow, Gamma2Certificate<f64>)> {
    check_n(n)?;
    let cert = gamma2(&lower_triangular_ones::<f64>(n), opts)?;
    let bound = log_bound(n) as f64;
    let row = ReportRow::new(format!("T{n}"))
        .with_n(n)
        .value("log_bound", bound)
        .value("gamma2_upper", cert.upper)
        .value("gamma2_lower", cert.lower)
        .value("nuclear_lower", nuclear_lower(n))
        .value("rel_gap", cert.relative_gap())
        .value("upper_over_log_bound", cert.upper / bound)
        .note("converged", cert.converged.to_string());
    Ok((row, cert))
}

/// One row per `n`, solved in parallel and assembled in input order. The
/// curve ordering is asserted before the table is returned.
pub fn tn_figure(
    ns: &[usize],
    opts: &Gamma2Options<f64>,
    budget: &Budget,
) -> Result<(Table, Vec<Gamma2Certificate<f64>>)> {
    for &n in ns {
        check_n(n)?;
    }
    let solved: Vec<(ReportRow, Gamma2Certificate<f64>)> = ns
        .par_iter()
        .map(|&n| {
            budget.check(&format!("T{n}"))?;
            tn_row(n, opts)
        })
        .collect::<Result<_>>()?;
    let (rows, certs): (Vec<_>, Vec<_>) = solved.into_iter().unzip();
    let table = Table::new("tn_figure", rows);
    table.check_order(&TN_ORDER, 1e-9)?;
    Ok((table, certs))
}

/// Asserts the largest relative primal-dual gap in a figure table.
pub fn check_gap(table: &Table, max_rel_gap: f64) -> Result<()> {
    for row in &table.rows {
        let gap = row.get("rel_gap").unwrap_or(f64::INFINITY);
        if gap > max_rel_gap {
            return Err(ReportError::Assertion(format!(
                "{}: relative gap {gap} above {max_rel_gap}",
                row.label
            )));
        }
    }
    Ok(())
}
