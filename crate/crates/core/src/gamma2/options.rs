use crate::scalar::Scalar;

/// Which upper-bound solver [`super::gamma2_upper`] runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PrimalMethod {
    /// Multiplicative row/column weight balancing on the weighted SVD.
    #[default]
    Balancing,
    /// Bisection on `t` with Dykstra alternating projections between the PSD
    /// cone and the affine constraints. Only sensible for small matrices.
    Dykstra,
}

#[derive(Clone, Debug)]
pub struct Gamma2Options<T> {
    /// Target relative gap `(upper - lower) / upper`.
    pub tol: T,
    /// Iteration cap for the balancing loop.
    pub max_iter: usize,
    /// Random Dirichlet starts for the dual ascent (the uniform start is always added).
    pub restarts: usize,
    /// Projected supergradient steps per start.
    pub ascent_iters: usize,
    /// Step constant `c` in the `c / sqrt(k)` schedule.
    pub step_scale: T,
    pub seed: u64,
    pub primal: PrimalMethod,
    /// Dykstra sweeps per feasibility probe.
    pub dykstra_iters: usize,
    /// Relative residual `||B C - A||_F / ||A||_F` a factorization must meet.
    pub factor_tol: T,
}

impl<T: Scalar> Default for Gamma2Options<T> {
    fn default() -> Self {
        Gamma2Options {
            tol: T::c(1e-4),
            max_iter: 5000,
            restarts: 8,
            ascent_iters: 200,
            step_scale: T::one(),
            seed: 0x5eed,
            primal: PrimalMethod::Balancing,
            dykstra_iters: 20_000,
            factor_tol: T::c(1e-8).max(T::epsilon() * T::c(1e3)),
        }
    }
}

impl<T: Scalar> Gamma2Options<T> {
    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_primal(mut self, primal: PrimalMethod) -> Self {
        self.primal = primal;
        self
    }
}
