//! Built-in manufactured and demonstration problems.

mod examples;
mod verify;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::Flux;
use crate::mesh::{generate_interval_mesh, generate_rect_mesh, Mesh, Rect};
use crate::scalar::Real;
use crate::stepper::{ProblemDefinition, SpaceFn, SpaceTimeFn};

pub use examples::{gaussian, CubicBump, Exponential, SineProduct};
pub use verify::{verify_forcing, verify_laplacian, ForcingCheck};

/// Closed-form solution with the derivatives entering the model.
pub trait ExactSolution<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn u(&self, x: &[T], t: T) -> T;
    fn grad_u(&self, x: &[T], t: T) -> [T; 2];
    fn laplacian_u(&self, x: &[T], t: T) -> T;
    fn u_t(&self, x: &[T], t: T) -> T;
    fn laplacian_u_t(&self, x: &[T], t: T) -> T;
    fn bilaplacian_u_t(&self, x: &[T], t: T) -> T;

    /// `∇·g(u) = −(1 + u)(𝟙·∇u)`
    fn div_g(&self, x: &[T], t: T) -> T {
        let g = self.grad_u(x, t);
        let s = if self.dim() == 1 { g[0] } else { g[0] + g[1] };
        -Flux::Burgers.derivative(self.u(x, t)) * s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleName {
    Example1,
    Example2Case1,
    Example2Case2,
    Example3,
    Example4,
}

impl ExampleName {
    pub const ALL: [Self; 5] = [Self::Example1, Self::Example2Case1, Self::Example2Case2, Self::Example3, Self::Example4];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Example1 => "example1",
            Self::Example2Case1 => "example2_case1",
            Self::Example2Case2 => "example2_case2",
            Self::Example3 => "example3",
            Self::Example4 => "example4",
        }
    }
}

impl fmt::Display for ExampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|e| e.as_str() == s).ok_or_else(|| Error::UnknownProblem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleParams<T> {
    pub alpha: T,
    /// Gaussian width of the initial datum (example 2 only).
    pub beta: T,
}

impl<T: Real> Default for ExampleParams<T> {
    fn default() -> Self {
        Self { alpha: T::one(), beta: T::one() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    Interval { a: T, b: T },
    Rectangle(Rect<T>),
}

impl<T: Real> Domain<T> {
    pub fn dim(&self) -> usize {
        match self {
            Self::Interval { .. } => 1,
            Self::Rectangle(_) => 2,
        }
    }

    /// Whether `x` lies on the boundary within `tol`.
    pub fn on_boundary(&self, x: &[T], tol: T) -> bool {
        let near = |v: T, w: T| (v - w).abs() <= tol;
        let within = |v: T, lo: T, hi: T| v >= lo - tol && v <= hi + tol;
        match *self {
            Self::Interval { a, b } => near(x[0], a) || near(x[0], b),
            Self::Rectangle(r) => {
                within(x[0], r.x0, r.x1)
                    && within(x[1], r.y0, r.y1)
                    && (near(x[0], r.x0) || near(x[0], r.x1) || near(x[1], r.y0) || near(x[1], r.y1))
            }
        }
    }

    /// Structured mesh with `n` cells per side.
    pub fn mesh(&self, n: usize) -> Result<Mesh<T>> {
        match *self {
            Self::Interval { a, b } => generate_interval_mesh(n, a, b),
            Self::Rectangle(r) => generate_rect_mesh(n, n, r),
        }
    }

    /// Affine image of a point of the unit cube.
    pub fn from_unit(&self, s: [T; 2]) -> [T; 2] {
        match *self {
            Self::Interval { a, b } => [a + (b - a) * s[0], T::zero()],
            Self::Rectangle(r) => [r.x0 + (r.x1 - r.x0) * s[0], r.y0 + (r.y1 - r.y0) * s[1]],
        }
    }
}

/// A named problem with its domain.
#[derive(Clone)]
pub struct ProblemCatalogEntry<T> {
    pub name: String,
    pub domain: Domain<T>,
    pub problem: ProblemDefinition<T>,
}

impl<T: Real> ProblemCatalogEntry<T> {
    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn exact(&self) -> Option<&Arc<dyn ExactSolution<T>>> {
        self.problem.exact.as_ref()
    }

    pub fn require_exact(&self) -> Result<&Arc<dyn ExactSolution<T>>> {
        self.exact().ok_or_else(|| Error::MissingExactSolution(self.name.clone()))
    }
}

impl<T: Real> fmt::Debug for ProblemCatalogEntry<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemCatalogEntry")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .field("problem", &self.problem)
            .finish()
    }
}

fn forcing_fn<T: Real>(alpha: T, f: fn(&[T], T, T) -> T) -> SpaceTimeFn<T> {
    Arc::new(move |x, t| f(x, t, alpha))
}

/// Builds a catalog entry.
pub fn make_example<T: Real>(name: ExampleName, params: ExampleParams<T>) -> Result<ProblemCatalogEntry<T>> {
    let alpha = params.alpha;
    if !(alpha > T::zero()) {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    let unit = Domain::Rectangle(Rect::unit());
    let (domain, problem) = match name {
        ExampleName::Example1 => (
            Domain::Interval { a: T::zero(), b: T::one() },
            ProblemDefinition::from_exact(alpha, Arc::new(CubicBump), forcing_fn(alpha, CubicBump::forcing)),
        ),
        ExampleName::Example3 => {
            (unit, ProblemDefinition::from_exact(alpha, Arc::new(SineProduct), forcing_fn(alpha, SineProduct::forcing)))
        }
        ExampleName::Example4 => {
            (unit, ProblemDefinition::from_exact(alpha, Arc::new(Exponential), forcing_fn(alpha, Exponential::forcing)))
        }
        ExampleName::Example2Case1 | ExampleName::Example2Case2 => {
            let beta = params.beta;
            if !(beta > T::zero()) {
                return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
            }
            let decay = name == ExampleName::Example2Case2;
            let factor = move |t: T| if decay { (-t).exp() } else { T::one() };
            let initial_u: SpaceFn<T> = Arc::new(move |x| gaussian(x, beta).0);
            let initial_p: SpaceFn<T> = Arc::new(move |x| -gaussian(x, beta).1);
            let mut problem = ProblemDefinition::homogeneous(2, alpha, initial_u);
            problem.initial_p = Some(initial_p);
            problem.dirichlet_u = Arc::new(move |x, t| factor(t) * gaussian(x, beta).0);
            problem.dirichlet_p = Arc::new(move |x, t| -factor(t) * gaussian(x, beta).1);
            (unit, problem)
        }
    };
    Ok(ProblemCatalogEntry { name: name.to_string(), domain, problem })
}

/// Trace of `p = −Δu` at a boundary point.
pub fn boundary_trace_p<T: Real>(entry: &ProblemCatalogEntry<T>, x: &[T], t: T) -> Result<T> {
    if x.len() < entry.dim() || !entry.domain.on_boundary(x, T::lit(1e-12)) {
        return Err(Error::InvalidArgument(format!("point {x:?} is not on the boundary of {}", entry.name)));
    }
    Ok((entry.problem.dirichlet_p)(x, t))
}
