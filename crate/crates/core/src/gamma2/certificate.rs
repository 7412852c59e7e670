use std::fmt;

use crate::error::{Error, Result};
use crate::gamma2::ellipsoid::Ellipsoid;
use crate::gamma2::primal::EllipsoidSide;
use crate::gamma2::weights::{weighted_nuclear_norm, DualWeights};
use crate::linalg::text::{format_sig, parse_matrix_lines, write_matrix};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Result of a γ₂ solve: a primal certificate (factorization and ellipsoid)
/// for `upper` and dual weights for `lower`.
#[derive(Clone, Debug)]
pub struct Gamma2Certificate<T> {
    pub upper: T,
    pub lower: T,
    pub converged: bool,
    pub iterations: usize,
    pub ellipsoid: Ellipsoid<T>,
    pub side: EllipsoidSide,
    /// `B` in `A = B C`.
    pub left: Matrix<T>,
    /// `C` in `A = B C`.
    pub right: Matrix<T>,
    pub weights: DualWeights<T>,
}

/// A failed check in [`Gamma2Certificate::verify`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    LowerAboveUpper { lower: f64, upper: f64 },
    FactorResidual { residual: f64 },
    FactorNorms { bound: f64, upper: f64 },
    EllipsoidShape { expected: usize, found: usize },
    EllipsoidDiagonal { inf_norm: f64, upper: f64 },
    VectorOutside { index: usize, gauge: Option<f64> },
    WeightsNotOnSimplex { violation: f64 },
    DualValueMismatch { recomputed: f64, claimed: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LowerAboveUpper { lower, upper } => {
                write!(f, "lower bound {lower} exceeds upper bound {upper}")
            }
            Violation::FactorResidual { residual } => {
                write!(f, "relative factorization residual {residual:e}")
            }
            Violation::FactorNorms { bound, upper } => {
                write!(f, "factor norms give {bound}, above the claimed {upper}")
            }
            Violation::EllipsoidShape { expected, found } => {
                write!(f, "ellipsoid dimension {found}, expected {expected}")
            }
            Violation::EllipsoidDiagonal { inf_norm, upper } => {
                write!(f, "ellipsoid inf-norm {inf_norm} above {upper}")
            }
            Violation::VectorOutside { index, gauge } => match gauge {
                Some(g) => write!(f, "vector {index} has gauge {g} > 1"),
                None => write!(f, "vector {index} lies outside the ellipsoid's span"),
            },
            Violation::WeightsNotOnSimplex { violation } => {
                write!(f, "dual weights off the simplex by {violation:e}")
            }
            Violation::DualValueMismatch { recomputed, claimed } => {
                write!(f, "dual weights give {recomputed}, not the claimed {claimed}")
            }
        }
    }
}

impl<T: Scalar> Gamma2Certificate<T> {
    pub fn gap(&self) -> T {
        self.upper - self.lower
    }

    pub fn relative_gap(&self) -> T {
        if self.upper > T::zero() {
            self.gap() / self.upper
        } else {
            T::zero()
        }
    }

    /// Independently re-checks every claim against `a`, with relative tolerance `tol`.
    pub fn verify(&self, a: &Matrix<T>, tol: T) -> Result<Vec<Violation>> {
        let mut out = Vec::new();
        let one = T::one();
        let slack = self.upper * (one + tol) + T::min_positive_value();
        if self.lower > slack {
            out.push(Violation::LowerAboveUpper {
                lower: self.lower.as_f64(),
                upper: self.upper.as_f64(),
            });
        }

        let product = self.left.try_matmul(&self.right)?;
        let residual = product.try_sub(a)?.frobenius_norm() / a.frobenius_norm().max(T::min_positive_value());
        if residual > tol {
            out.push(Violation::FactorResidual {
                residual: residual.as_f64(),
            });
        }
        let rb = self.left.row_norms().into_iter().fold(T::zero(), T::max);
        let cc = self.right.col_norms().into_iter().fold(T::zero(), T::max);
        if rb * cc > slack {
            out.push(Violation::FactorNorms {
                bound: (rb * cc).as_f64(),
                upper: self.upper.as_f64(),
            });
        }

        let (expected, vectors): (usize, Vec<Vec<T>>) = match self.side {
            EllipsoidSide::Columns => (a.rows(), (0..a.cols()).map(|j| a.col(j)).collect()),
            EllipsoidSide::Rows => (a.cols(), (0..a.rows()).map(|i| a.row(i).to_vec()).collect()),
        };
        if self.ellipsoid.dim() != expected {
            out.push(Violation::EllipsoidShape {
                expected,
                found: self.ellipsoid.dim(),
            });
        } else {
            let inf = self.ellipsoid.inf_norm();
            if inf > slack {
                out.push(Violation::EllipsoidDiagonal {
                    inf_norm: inf.as_f64(),
                    upper: self.upper.as_f64(),
                });
            }
            let gauge = self.ellipsoid.gauge()?;
            for (index, v) in vectors.iter().enumerate() {
                match gauge.squared(v) {
                    Some(g) if g <= one + tol => {}
                    g => out.push(Violation::VectorOutside {
                        index,
                        gauge: g.map(|x| x.as_f64()),
                    }),
                }
            }
        }

        let off = self.weights.simplex_violation();
        if off > tol {
            out.push(Violation::WeightsNotOnSimplex {
                violation: off.as_f64(),
            });
        }
        let recomputed = weighted_nuclear_norm(a, &self.weights)?;
        if recomputed < self.lower * (one - tol) {
            out.push(Violation::DualValueMismatch {
                recomputed: recomputed.as_f64(),
                claimed: self.lower.as_f64(),
            });
        }
        Ok(out)
    }

    /// Serializes as a text bundle: `key=value` lines followed by matrix
    /// sections `[D]`, `[B]`, `[C]`, `[p]`, `[q]` in the matrix text format.
    pub fn to_bundle(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("upper={}\n", format_sig(self.upper.as_f64(), 17)));
        out.push_str(&format!("lower={}\n", format_sig(self.lower.as_f64(), 17)));
        out.push_str(&format!("gap={}\n", format_sig(self.gap().as_f64(), 17)));
        out.push_str(&format!("converged={}\n", self.converged));
        out.push_str(&format!("iterations={}\n", self.iterations));
        out.push_str(&format!("side={}\n", self.side.name()));
        let sections = [
            ("D", self.ellipsoid.dual_matrix().clone()),
            ("B", self.left.clone()),
            ("C", self.right.clone()),
            ("p", Matrix::from_vec(1, self.weights.p.len(), self.weights.p.clone()).expect("row")),
            ("q", Matrix::from_vec(1, self.weights.q.len(), self.weights.q.clone()).expect("row")),
        ];
        for (name, m) in sections {
            out.push_str(&format!("[{name}]\n"));
            out.push_str(&write_matrix(&m));
        }
        out
    }

    pub fn from_bundle(text: &str) -> Result<Self> {
        let mut upper = None;
        let mut lower = None;
        let mut converged = None;
        let mut iterations = 0;
        let mut side = None;
        let mut mats: Vec<(String, Matrix<T>)> = Vec::new();
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        while let Some((no, raw)) = lines.next() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |msg: String| Error::Parse { line: no, msg };
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let m = parse_matrix_lines(&mut lines)?;
                mats.push((name.to_string(), m));
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key=value, got {line:?}")))?;
            let num = || -> Result<T> {
                value
                    .trim()
                    .parse::<f64>()
                    .map(T::c)
                    .map_err(|_| bad(format!("bad number {value:?}")))
            };
            match key.trim() {
                "upper" => upper = Some(num()?),
                "lower" => lower = Some(num()?),
                "gap" => {}
                "converged" => {
                    converged = Some(
                        value
                            .trim()
                            .parse::<bool>()
                            .map_err(|_| bad(format!("bad flag {value:?}")))?,
                    )
                }
                "iterations" => {
                    iterations = value
                        .trim()
                        .parse()
                        .map_err(|_| bad(format!("bad count {value:?}")))?
                }
                "side" => {
                    side = Some(match value.trim() {
                        "columns" => EllipsoidSide::Columns,
                        "rows" => EllipsoidSide::Rows,
                        other => return Err(bad(format!("unknown side {other:?}"))),
                    })
                }
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let mut take = |name: &str| -> Result<Matrix<T>> {
            let pos = mats
                .iter()
                .position(|(n, _)| n == name)
                .ok_or_else(|| Error::Parse {
                    line: 0,
                    msg: format!("missing section [{name}]"),
                })?;
            Ok(mats.swap_remove(pos).1)
        };
        let d = take("D")?;
        let left = take("B")?;
        let right = take("C")?;
        let p = take("p")?.into_vec();
        let q = take("q")?.into_vec();
        let missing = |what: &str| Error::Parse {
            line: 0,
            msg: format!("missing {what}="),
        };
        Ok(Gamma2Certificate {
            upper: upper.ok_or_else(|| missing("upper"))?,
            lower: lower.ok_or_else(|| missing("lower"))?,
            converged: converged.ok_or_else(|| missing("converged"))?,
            iterations,
            ellipsoid: Ellipsoid::new(d)?,
            side: side.unwrap_or(EllipsoidSide::Columns),
            left,
            right,
            weights: DualWeights { p, q },
        })
    }
}
