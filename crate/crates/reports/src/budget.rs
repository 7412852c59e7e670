use std::time::{Duration, Instant};

use crate::error::{ReportError, Result};

/// Wall-clock allowance shared by the rows of one report.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    start: Instant,
    limit: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget {
            start: Instant::now(),
            limit: None,
        }
    }

    pub fn minutes(m: f64) -> Self {
        Budget {
            start: Instant::now(),
            limit: Some(Duration::from_secs_f64(m.max(0.0) * 60.0)),
        }
    }

    pub fn elapsed(&self) -> Duration {
        self.start.elapsed()
    }

    /// Fails once the allowance is spent; called before each unit of work.
    pub fn check(&self, what: &str) -> Result<()> {
        match self.limit {
            Some(limit) if self.start.elapsed() > limit => Err(ReportError::Budget(what.to_string())),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::unlimited()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_budget_refuses() {
        let b = Budget::minutes(0.0);
        std::thread::sleep(Duration::from_millis(2));
        assert_eq!(b.check("row").unwrap_err().exit_code(), 3);
        assert!(Budget::unlimited().check("row").is_ok());
    }
}
