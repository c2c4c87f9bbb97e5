use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::Flux;
use crate::problems::ExactSolution;
use crate::scalar::Real;

/// Function of space and time.
pub type SpaceTimeFn<T> = Arc<dyn Fn(&[T], T) -> T + Send + Sync>;
/// Function of space only.
pub type SpaceFn<T> = Arc<dyn Fn(&[T]) -> T + Send + Sync>;

/// Data of one Rosenau–Burgers initial-boundary value problem.
#[derive(Clone)]
pub struct ProblemDefinition<T> {
    pub alpha: T,
    pub dim: usize,
    pub flux: Flux,
    /// `None` means `f ≡ 0`.
    pub forcing: Option<SpaceTimeFn<T>>,
    pub dirichlet_u: SpaceTimeFn<T>,
    /// Trace of `p = −Δu`.
    pub dirichlet_p: SpaceTimeFn<T>,
    pub initial_u: SpaceFn<T>,
    /// `−Δu₀`, needed by the Ritz initializer and the interpolated `P⁰`.
    pub initial_p: Option<SpaceFn<T>>,
    pub exact: Option<Arc<dyn ExactSolution<T>>>,
}

impl<T: Real> ProblemDefinition<T> {
    /// `f = 0`, zero traces for both fields.
    pub fn homogeneous(dim: usize, alpha: T, initial_u: SpaceFn<T>) -> Self {
        let zero: SpaceTimeFn<T> = Arc::new(|_, _| T::zero());
        Self {
            alpha,
            dim,
            flux: Flux::Burgers,
            forcing: None,
            dirichlet_u: zero.clone(),
            dirichlet_p: zero,
            initial_u,
            initial_p: None,
            exact: None,
        }
    }

    /// Problem whose data all come from `exact`, with `forcing` supplied separately.
    pub fn from_exact(alpha: T, exact: Arc<dyn ExactSolution<T>>, forcing: SpaceTimeFn<T>) -> Self {
        let (e1, e2, e3, e4) = (exact.clone(), exact.clone(), exact.clone(), exact.clone());
        Self {
            alpha,
            dim: exact.dim(),
            flux: Flux::Burgers,
            forcing: Some(forcing),
            dirichlet_u: Arc::new(move |x, t| e1.u(x, t)),
            dirichlet_p: Arc::new(move |x, t| -e2.laplacian_u(x, t)),
            initial_u: Arc::new(move |x| e3.u(x, T::zero())),
            initial_p: Some(Arc::new(move |x| -e4.laplacian_u(x, T::zero()))),
            exact: Some(exact),
        }
    }

    pub fn with_flux(mut self, flux: Flux) -> Self {
        self.flux = flux;
        self
    }

    pub fn with_forcing(mut self, forcing: Option<SpaceTimeFn<T>>) -> Self {
        self.forcing = forcing;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !matches!(self.dim, 1 | 2) {
            return Err(Error::InvalidArgument(format!("problem dimension must be 1 or 2, got {}", self.dim)));
        }
        Ok(())
    }
}

impl<T: Real> fmt::Debug for ProblemDefinition<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemDefinition")
            .field("alpha", &self.alpha)
            .field("dim", &self.dim)
            .field("flux", &self.flux)
            .field("forcing", &self.forcing.is_some())
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}
