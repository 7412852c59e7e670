use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, symmetric_part, Matrix, SymmetricEigen};
use crate::scalar::Scalar;

/// Eigenvalues below this fraction of the largest are treated as zero in
/// pseudo-inverse and range computations.
pub const RANK_CUTOFF: f64 = 1e-10;

/// Centered ellipsoid `E(D) = { z : z^T x <= sqrt(x^T D x) for all x }`,
/// described by its symmetric PSD dual matrix `D`. A singular `D` gives a
/// flat ellipsoid.
#[derive(Clone, Debug, PartialEq)]
pub struct Ellipsoid<T> {
    dual: Matrix<T>,
}

impl<T: Scalar> Ellipsoid<T> {
    /// Validates symmetry and semidefiniteness. Eigenvalues down to
    /// `-1e-9 ||D||_2` are clipped to zero; anything more negative is rejected.
    pub fn new(dual: Matrix<T>) -> Result<Self> {
        let sym = symmetric_part(&dual)?;
        if sym.rows() == 0 {
            return Ok(Ellipsoid { dual: sym });
        }
        let eig = symmetric_eigen(&sym)?;
        let scale = eig.max_abs_value();
        let min = eig.values[0];
        if min < -T::c(1e-9) * scale {
            return Err(Error::invalid(format!(
                "ellipsoid dual matrix is not PSD (eigenvalue {min:e}, norm {scale:e})"
            )));
        }
        if min < T::zero() {
            return Ok(Ellipsoid {
                dual: eig.reconstruct_with(|l| l.max(T::zero())),
            });
        }
        Ok(Ellipsoid { dual: sym })
    }

    /// `D = scale * F F^T`, PSD by construction.
    pub fn from_factor(factor: &Matrix<T>, scale: T) -> Self {
        let m = factor.rows();
        let mut d = Matrix::zeros(m, m);
        for i in 0..m {
            for j in i..m {
                let v: T = factor
                    .row(i)
                    .iter()
                    .zip(factor.row(j))
                    .map(|(&a, &b)| a * b)
                    .sum::<T>()
                    * scale;
                d[(i, j)] = v;
                d[(j, i)] = v;
            }
        }
        Ellipsoid { dual: d }
    }

    pub fn unit_ball(m: usize) -> Self {
        Ellipsoid {
            dual: Matrix::identity(m),
        }
    }

    pub fn zero(m: usize) -> Self {
        Ellipsoid {
            dual: Matrix::zeros(m, m),
        }
    }

    pub fn dim(&self) -> usize {
        self.dual.rows()
    }

    pub fn dual_matrix(&self) -> &Matrix<T> {
        &self.dual
    }

    pub fn into_dual_matrix(self) -> Matrix<T> {
        self.dual
    }

    /// `max_i sqrt(d_ii)`, the largest coordinate of any point of the ellipsoid.
    pub fn inf_norm(&self) -> T {
        self.dual
            .diag()
            .into_iter()
            .fold(T::zero(), |m, d| m.max(d.max(T::zero()).sqrt()))
    }

    pub fn scaled(&self, factor: T) -> Self {
        Ellipsoid {
            dual: self.dual.scaled(factor),
        }
    }

    /// Precomputes the eigendecomposition for repeated membership tests.
    pub fn gauge(&self) -> Result<Gauge<T>> {
        Gauge::new(&self.dual)
    }

    /// `v ∈ range(D)` and `v^T D^+ v <= 1 + tol`.
    pub fn contains(&self, v: &[T], tol: T) -> Result<bool> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against a {}-dimensional ellipsoid",
                v.len(),
                self.dim()
            )));
        }
        Ok(self.gauge()?.contains(v, tol))
    }
}

/// `D^+`-norm evaluator built from one eigendecomposition of `D`.
#[derive(Clone, Debug)]
pub struct Gauge<T> {
    eig: SymmetricEigen<T>,
    cutoff: T,
}

impl<T: Scalar> Gauge<T> {
    pub fn new(d: &Matrix<T>) -> Result<Self> {
        let eig = symmetric_eigen(&d.symmetrized())?;
        let top = eig.values.last().copied().unwrap_or_else(T::zero).max(T::zero());
        Ok(Gauge {
            cutoff: top * T::c(RANK_CUTOFF),
            eig,
        })
    }

    /// `Some(v^T D^+ v)` when `v` lies in the range of `D`, `None` otherwise.
    pub fn squared(&self, v: &[T]) -> Option<T> {
        let n = v.len();
        let norm_sq: T = v.iter().map(|&x| x * x).sum();
        if norm_sq == T::zero() {
            return Some(T::zero());
        }
        let mut inside = T::zero();
        let mut outside = T::zero();
        for k in 0..n {
            let coord: T = (0..n).map(|i| self.eig.vectors[(i, k)] * v[i]).sum();
            let lambda = self.eig.values[k];
            if lambda > self.cutoff && lambda > T::zero() {
                inside = inside + coord * coord / lambda;
            } else {
                outside = outside + coord * coord;
            }
        }
        let range_tol = T::c(1e-16).max(T::epsilon() * T::epsilon()) * T::c(1e6);
        if outside > range_tol * norm_sq {
            None
        } else {
            Some(inside)
        }
    }

    pub fn contains(&self, v: &[T], tol: T) -> bool {
        self.squared(v).is_some_and(|g| g <= T::one() + tol)
    }
}

/// `E(D1 + D2)`, which contains both `E(D1)` and `E(D2)`.
pub fn ellipsoid_sum<T: Scalar>(e1: &Ellipsoid<T>, e2: &Ellipsoid<T>) -> Result<Ellipsoid<T>> {
    if e1.dim() != e2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "ellipsoids of dimension {} and {}",
            e1.dim(),
            e2.dim()
        )));
    }
    Ok(Ellipsoid {
        dual: e1.dual.try_add(&e2.dual)?,
    })
}

/// Ellipsoid with block-diagonal dual matrix; contains the columns of
/// `diag(A, B)` whenever the parts contain those of `A` and `B`.
pub fn block_diag_ellipsoid<T: Scalar>(e1: &Ellipsoid<T>, e2: &Ellipsoid<T>) -> Ellipsoid<T> {
    Ellipsoid {
        dual: e1.dual.block_diag(&e2.dual),
    }
}

pub fn ellipsoid_inf_norm<T: Scalar>(e: &Ellipsoid<T>) -> T {
    e.inf_norm()
}

pub fn ellipsoid_contains<T: Scalar>(e: &Ellipsoid<T>, v: &[T], tol: T) -> Result<bool> {
    e.contains(v, tol)
}
