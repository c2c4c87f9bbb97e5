use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Initializer {
    /// Nodal interpolant of `u₀`.
    #[default]
    Interpolate,
    /// Ritz projection: `(∇U⁰, ∇χ) = (−Δu₀, χ)` with the trace of `u₀`.
    Ritz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialP {
    /// Mass solve `M_p P⁰ = K_pu U⁰` so the second equation holds at `t = 0`.
    #[default]
    Discrete,
    /// Nodal interpolant of `−Δu₀`.
    Interpolate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum JacobianMode {
    /// Re-assemble and re-factor the Jacobian at every iteration.
    #[default]
    Full,
    /// Keep a factorization across iterations and steps; refresh it when the
    /// residual contraction degrades.
    Lagged,
}

/// Space whose basis tests the evolution equation; the relation `p = −Δu`
/// is tested with the other one. Irrelevant for equal-order pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DynamicsTest {
    /// Evolution equation tested with the `p` space, `p = −Δu` with the `u`
    /// space. Consistent for `u ∈ P2, p ∈ P1`.
    #[default]
    PSpace,
    /// Evolution equation tested with the `u` space. For `u ∈ P2, p ∈ P1` the
    /// extra `u` test functions see `(∇P, ∇χ)` of a field that cannot
    /// represent `Δ²u_t`, and the scheme does not converge.
    USpace,
}

/// Time stepping and nonlinear solver settings.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig<T> {
    pub k: T,
    pub t_final: T,
    pub newton_tol: T,
    pub newton_max_iter: usize,
    pub u_degree: usize,
    pub p_degree: usize,
    pub initializer: Initializer,
    pub initial_p: InitialP,
    pub jacobian: JacobianMode,
    pub dynamics_test: DynamicsTest,
    /// Lagged-coefficient iterations tried after Newton fails; 0 disables.
    pub picard_max_iter: usize,
}

impl<T: Real> Default for SolverConfig<T> {
    fn default() -> Self {
        Self {
            k: T::lit(0.01),
            t_final: T::one(),
            newton_tol: T::lit(1e-11),
            newton_max_iter: 25,
            u_degree: 2,
            p_degree: 1,
            initializer: Initializer::default(),
            initial_p: InitialP::default(),
            jacobian: JacobianMode::default(),
            dynamics_test: DynamicsTest::default(),
            picard_max_iter: 200,
        }
    }
}

impl<T: Real> SolverConfig<T> {
    pub fn new(k: T, t_final: T) -> Self {
        Self { k, t_final, ..Self::default() }
    }

    pub fn with_degrees(mut self, u_degree: usize, p_degree: usize) -> Self {
        self.u_degree = u_degree;
        self.p_degree = p_degree;
        self
    }

    /// Number of steps `N = T/k`; fails unless `T` is an integer multiple of `k`.
    pub fn n_steps(&self) -> Result<usize> {
        if !(self.k > T::zero()) || !(self.t_final > T::zero()) {
            return Err(Error::InvalidArgument(format!("need k > 0 and T > 0, got k = {}, T = {}", self.k, self.t_final)));
        }
        let ratio = (self.t_final / self.k).to_f64_lossy();
        let n = ratio.round();
        if !n.is_finite() || n < 1.0 || (ratio - n).abs() > 1e-6 * n.max(1.0) {
            return Err(Error::InvalidArgument(format!("T = {} is not a multiple of k = {}", self.t_final, self.k)));
        }
        Ok(n as usize)
    }

    /// `t^m = m·k`.
    pub fn time(&self, m: usize) -> T {
        T::from_usize_lossy(m) * self.k
    }

    pub fn validate(&self) -> Result<()> {
        self.n_steps()?;
        if !(self.newton_tol > T::zero()) {
            return Err(Error::InvalidArgument("newton_tol must be positive".into()));
        }
        if self.newton_max_iter == 0 {
            return Err(Error::InvalidArgument("newton_max_iter must be at least 1".into()));
        }
        for d in [self.u_degree, self.p_degree] {
            if !matches!(d, 1 | 2) {
                return Err(Error::InvalidArgument(format!("element degree must be 1 or 2, got {d}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_count() {
        assert_eq!(SolverConfig::new(0.01, 1.0).n_steps().unwrap(), 100);
        assert_eq!(SolverConfig::new(0.001, 1.0).n_steps().unwrap(), 1000);
        assert_eq!(SolverConfig::new(1.0 / 64.0, 1.0).n_steps().unwrap(), 64);
        assert!(SolverConfig::new(0.3, 1.0).n_steps().is_err());
        assert!(SolverConfig::new(0.0, 1.0).n_steps().is_err());
    }

    #[test]
    fn validation_catches_bad_settings() {
        let mut c = SolverConfig::<f64>::default();
        assert!(c.validate().is_ok());
        c.u_degree = 3;
        assert!(c.validate().is_err());
        let c = SolverConfig { newton_tol: 0.0, ..SolverConfig::<f64>::default() };
        assert!(c.validate().is_err());
    }
}
