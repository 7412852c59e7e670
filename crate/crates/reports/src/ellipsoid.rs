//! Optimal-ellipsoid and dual-weight dumps for `T_n`.

use std::fs;
use std::path::Path;

use g2d_core::gamma2::{gamma2, Gamma2Certificate, Gamma2Options};
use g2d_core::linalg::text::{format_sig, write_matrix};
use g2d_core::linalg::{lower_triangular_ones, Matrix};

use crate::error::Result;

/// Largest `n` accepted by [`ellipsoid_dump`].
pub const ELLIPSOID_CAP: usize = 128;

#[derive(Clone, Debug)]
pub struct EllipsoidDump {
    pub n: usize,
    pub certificate: Gamma2Certificate<f64>,
    /// `max_i |q_i - p_{n-1-i}|`, the observed reversal symmetry of the
    /// dual weights.
    pub reversal_deviation: f64,
    /// Largest diagonal entry of the dual matrix.
    pub max_diagonal: f64,
}

pub fn ellipsoid_dump(n: usize, opts: &Gamma2Options<f64>) -> Result<EllipsoidDump> {
    if n == 0 || n > ELLIPSOID_CAP {
        return Err(g2d_core::Error::TooLarge {
            what: "ellipsoid dump size",
            size: n as u128,
            cap: ELLIPSOID_CAP as u128,
        }
        .into());
    }
    let certificate = gamma2(&lower_triangular_ones::<f64>(n), opts)?;
    let w = &certificate.weights;
    let reversal_deviation = (0..n)
        .map(|i| (w.q[i] - w.p[n - 1 - i]).abs())
        .fold(0.0, f64::max);
    let d = certificate.ellipsoid.dual_matrix();
    let max_diagonal = (0..d.rows()).map(|i| d[(i, i)]).fold(0.0, f64::max);
    Ok(EllipsoidDump {
        n,
        certificate,
        reversal_deviation,
        max_diagonal,
    })
}

impl EllipsoidDump {
    pub fn summary(&self) -> String {
        let c = &self.certificate;
        let mut s = String::new();
        for (k, v) in [
            ("gamma2_upper", c.upper),
            ("gamma2_lower", c.lower),
            ("max_diagonal", self.max_diagonal),
            ("reversal_deviation", self.reversal_deviation),
        ] {
            s.push_str(&format!("{k}={}\n", format_sig(v, 12)));
        }
        s.push_str(&format!("n={}\nside={}\nconverged={}\n", self.n, c.side.name(), c.converged));
        s
    }

    /// Writes `D.txt`, `p.txt`, `q.txt` (weights as `1 x n` rows),
    /// `certificate.txt` and `summary.txt` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let c = &self.certificate;
        let row = |v: &[f64]| Matrix::from_vec(1, v.len(), v.to_vec()).expect("row shape");
        fs::write(dir.join("D.txt"), write_matrix(c.ellipsoid.dual_matrix()))?;
        fs::write(dir.join("p.txt"), write_matrix(&row(&c.weights.p)))?;
        fs::write(dir.join("q.txt"), write_matrix(&row(&c.weights.q)))?;
        fs::write(dir.join("certificate.txt"), c.to_bundle())?;
        fs::write(dir.join("summary.txt"), self.summary())?;
        Ok(())
    }
}
