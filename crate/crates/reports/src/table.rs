//! Report rows and their CSV form.

use std::io::Write;

use g2d_core::linalg::text::format_sig;

use crate::error::{ReportError, Result};

/// Significant digits for every float written to CSV.
pub const CSV_DIGITS: usize = 12;

/// One instance of a report: a label, optional size parameters, named
/// numeric columns and named text columns (flags such as convergence).
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub values: Vec<(&'static str, f64)>,
    pub notes: Vec<(&'static str, String)>,
}

impl ReportRow {
    pub fn new(label: impl Into<String>) -> Self {
        ReportRow {
            label: label.into(),
            n: None,
            d: None,
            values: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = Some(d);
        self
    }

    pub fn value(mut self, name: &'static str, v: f64) -> Self {
        self.values.push((name, v));
        self
    }

    pub fn note(mut self, name: &'static str, v: impl Into<String>) -> Self {
        self.notes.push((name, v.into()));
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.iter().find(|(k, _)| *k == name).map(|&(_, v)| v)
    }

    pub fn get_note(&self, name: &str) -> Option<&str> {
        self.notes.iter().find(|(k, _)| *k == name).map(|(_, v)| v.as_str())
    }
}

/// Rows of one report kind, written as one CSV file.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub kind: &'static str,
    pub rows: Vec<ReportRow>,
}

impl Table {
    pub fn new(kind: &'static str, rows: Vec<ReportRow>) -> Self {
        Table { kind, rows }
    }

    /// Asserts `row[lo] <= row[hi] * (1 + rel_tol)` for every pair and every
    /// row where both columns are present.
    pub fn check_order(&self, pairs: &[(&str, &str)], rel_tol: f64) -> Result<()> {
        for row in &self.rows {
            for &(lo, hi) in pairs {
                if let (Some(a), Some(b)) = (row.get(lo), row.get(hi)) {
                    if a > b + rel_tol * b.abs() {
                        return Err(ReportError::Assertion(format!(
                            "{}: {lo} = {a} exceeds {hi} = {b}",
                            row.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Column names: `label,n,d`, then the union of value names, then the
    /// union of note names, each in first-seen order.
    pub fn header(&self) -> Vec<String> {
        let mut values: Vec<&str> = Vec::new();
        let mut notes: Vec<&str> = Vec::new();
        for row in &self.rows {
            for (k, _) in &row.values {
                if !values.contains(k) {
                    values.push(k);
                }
            }
            for (k, _) in &row.notes {
                if !notes.contains(k) {
                    notes.push(k);
                }
            }
        }
        ["label", "n", "d"]
            .into_iter()
            .chain(values)
            .chain(notes)
            .map(str::to_string)
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let header = self.header();
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&header)?;
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        for row in &self.rows {
            let mut rec = vec![row.label.clone(), opt(row.n), opt(row.d)];
            for name in &header[3..] {
                let cell = match row.get(name) {
                    Some(v) => format_sig(v, CSV_DIGITS),
                    None => row.get_note(name).unwrap_or_default().to_string(),
                };
                rec.push(cell);
            }
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}
