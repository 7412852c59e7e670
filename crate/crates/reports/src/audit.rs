//! One-stop bounds audit for a single matrix. Every column is computed
//! independently; a failing column is recorded and the rest still run.

use g2d_core::gamma2::{gamma2, weighted_nuclear_norm, DualWeights, Gamma2Certificate, Gamma2Options};
use g2d_core::linalg::text::format_sig;
use g2d_core::linalg::Matrix;
use g2d_core::oracles::{
    detlb2_exact, detlb2_work, detlb_bucketing, detlb_exact, detlb_work, disc_exact, herdisc_exact, DETLB_BUDGET,
    DISC_CAP, HERDISC_CAP,
};

use crate::table::ReportRow;

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub row: ReportRow,
    /// Columns that could not be computed, with the reason.
    pub failures: Vec<(&'static str, String)>,
    /// Broken constant-free inequalities.
    pub violations: Vec<String>,
}

fn largest_k(k_max: usize, work: impl Fn(usize) -> u128) -> usize {
    (0..=k_max).rev().find(|&k| work(k) <= DETLB_BUDGET).unwrap_or(0)
}

fn upper(a: &Matrix<f64>, opts: &Gamma2Options<f64>) -> g2d_core::Result<f64> {
    if a.is_empty() || a.is_zero() {
        return Ok(0.0);
    }
    Ok(gamma2(a, opts)?.upper)
}

pub fn audit(label: &str, a: &Matrix<f64>, opts: &Gamma2Options<f64>) -> AuditReport {
    let (m, n) = a.shape();
    let mut row = ReportRow::new(label).with_n(n).value("rows", m as f64);
    let mut failures = Vec::new();
    let mut violations = Vec::new();
    let tol = opts.tol;

    let cert: Option<Gamma2Certificate<f64>> = match gamma2(a, opts) {
        Ok(c) => Some(c),
        Err(e) => {
            failures.push(("gamma2", e.to_string()));
            None
        }
    };
    if let Some(c) = &cert {
        row = row
            .value("gamma2_lower", c.lower)
            .value("gamma2_upper", c.upper)
            .note("converged", c.converged.to_string());
        if c.lower > c.upper * (1.0 + 1e-12) {
            violations.push(format!("dual {} exceeds primal {}", c.lower, c.upper));
        }
    }

    if m > 0 && n > 0 {
        match weighted_nuclear_norm(a, &DualWeights::uniform(m, n)) {
            Ok(v) => row = row.value("nuclear_uniform", v),
            Err(e) => failures.push(("nuclear_uniform", e.to_string())),
        }
    }

    let full_k = m.min(n);
    let k = largest_k(full_k, |k| detlb_work(m, n, k));
    let mut detlb = match detlb_exact(a, k) {
        Ok(w) => Some(w.value),
        Err(e) => {
            failures.push(("detlb", e.to_string()));
            None
        }
    };
    let mut method = format!("exact(k<={k})");
    if k < full_k {
        if let Some(c) = &cert {
            match detlb_bucketing(a, &c.weights.p, &c.weights.q) {
                Ok(b) => {
                    if detlb.is_none_or(|d| b.witness.value > d) {
                        detlb = Some(b.witness.value);
                        method = format!("bucketing(k={})", b.witness.rows.len());
                    }
                }
                Err(e) => failures.push(("detlb_bucketing", e.to_string())),
            }
        }
    }
    if let Some(d) = detlb {
        row = row.value("detlb", d).note("detlb_method", method);
    }

    let k2 = largest_k(n, |k| detlb2_work(n, k));
    match detlb2_exact(a, k2) {
        Ok((v, _)) => row = row.value("detlb2", v),
        Err(e) => failures.push(("detlb2", e.to_string())),
    }

    let disc = if n <= DISC_CAP {
        disc_exact(a).map(|r| r.value).map_err(|e| failures.push(("disc", e.to_string()))).ok()
    } else {
        failures.push(("disc", format!("{n} columns exceed the cap {DISC_CAP}")));
        None
    };
    let herdisc = if n <= HERDISC_CAP {
        herdisc_exact(a).map(|r| r.value).map_err(|e| failures.push(("herdisc", e.to_string()))).ok()
    } else {
        failures.push(("herdisc", format!("{n} columns exceed the cap {HERDISC_CAP}")));
        None
    };
    if let Some(v) = disc {
        row = row.value("disc", v);
    }
    if let Some(v) = herdisc {
        row = row.value("herdisc", v);
    }

    if let Some(c) = &cert {
        if let Some(d) = detlb {
            if d > c.upper + tol {
                violations.push(format!("detlb {d} exceeds gamma2 upper {} + tol", c.upper));
            }
            if d > 0.0 {
                row = row.value("gamma2_over_detlb", c.upper / d);
            }
        }
        if c.upper > 0.0 {
            if let Some(h) = herdisc {
                row = row.value("herdisc_over_gamma2", h / c.upper);
            }
            if let Some(v) = disc {
                row = row.value("disc_over_gamma2", v / c.upper);
            }
        }
        if let Some(nu) = row.get("nuclear_uniform").filter(|&v| v > 0.0) {
            row = row.value("gamma2_over_nuclear", c.upper / nu);
        }
        // monotonicity spot checks: dropping the last column or the last row
        let spots = [
            ("drop_last_column", (n > 1).then(|| a.select_cols(&(0..n - 1).collect::<Vec<_>>()))),
            ("drop_last_row", (m > 1).then(|| a.select_rows(&(0..m - 1).collect::<Vec<_>>()))),
        ];
        for (name, sub) in spots {
            let Some(sub) = sub else { continue };
            match upper(&sub, opts) {
                Ok(u) if u > c.upper * (1.0 + 2.0 * tol) => {
                    violations.push(format!("{name}: gamma2 {u} exceeds the full matrix value {}", c.upper))
                }
                Ok(_) => {}
                Err(e) => failures.push(("monotonicity", e.to_string())),
            }
        }
    }
    if let (Some(d), Some(h)) = (detlb, herdisc) {
        if d > 2.0 * h + 1e-9 {
            violations.push(format!("detlb {d} exceeds twice herdisc {h}"));
        }
    }

    AuditReport {
        row,
        failures,
        violations,
    }
}

impl AuditReport {
    /// `key=value` lines: numeric columns, flags, then failures and
    /// violations.
    pub fn to_text(&self) -> String {
        let mut s = format!("label={}\n", self.row.label);
        if let Some(n) = self.row.n {
            s.push_str(&format!("columns={n}\n"));
        }
        for (k, v) in &self.row.values {
            s.push_str(&format!("{k}={}\n", format_sig(*v, 12)));
        }
        for (k, v) in &self.row.notes {
            s.push_str(&format!("{k}={v}\n"));
        }
        for (k, v) in &self.failures {
            s.push_str(&format!("failed.{k}={v}\n"));
        }
        for v in &self.violations {
            s.push_str(&format!("violation={v}\n"));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use g2d_core::linalg::lower_triangular_ones;

    #[test]
    fn t8_audit() {
        let r = audit("T8", &lower_triangular_ones(8), &Gamma2Options::default());
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.failures.is_empty(), "{:?}", r.failures);
        assert_eq!(r.row.get("herdisc"), Some(1.0));
        let g = r.row.get("gamma2_upper").unwrap();
        assert!(r.row.get("nuclear_uniform").unwrap() <= g && g <= 4.0);
    }

    #[test]
    fn zero_matrix_audit() {
        let r = audit("zero", &Matrix::zeros(3, 4), &Gamma2Options::default());
        for k in ["gamma2_upper", "gamma2_lower", "detlb", "detlb2", "disc", "herdisc", "nuclear_uniform"] {
            assert_eq!(r.row.get(k), Some(0.0), "{k}");
        }
        assert!(r.violations.is_empty());
    }

    #[test]
    fn wide_matrix_records_failures() {
        let a: Matrix<f64> = Matrix::ones(2, 30);
        let r = audit("wide", &a, &Gamma2Options::default());
        assert!(r.failures.iter().any(|(k, _)| *k == "herdisc"));
        assert!(r.row.get("gamma2_upper").is_some());
        assert!(r.to_text().contains("failed.herdisc="));
    }
}
