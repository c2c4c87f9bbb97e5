//! Backward Euler time stepping of the mixed system, the semidiscrete
//! reference integrator and the discrete energy monitor.

mod backward_euler;
mod config;
mod discretization;
mod problem;
mod semidiscrete;

use std::sync::Arc;
use std::time::Instant;

use crate::error::Result;
use crate::mesh::Mesh;
use crate::scalar::Real;

pub use crate::fem::Flux;
pub use backward_euler::{be_step, delta_t, initialize, StepStats, TimeStepper};
pub use config::{DynamicsTest, InitialP, Initializer, JacobianMode, SolverConfig};
pub use discretization::Discretization;
pub use problem::{ProblemDefinition, SpaceFn, SpaceTimeFn};
pub use semidiscrete::{rk_reference_run, SemidiscreteSystem};

/// Coefficients of `(U^m, P^m)` at `t^m = m·k`.
#[derive(Debug, Clone, PartialEq)]
pub struct State<T> {
    pub m: usize,
    pub t: T,
    pub u: Vec<T>,
    pub p: Vec<T>,
}

/// `‖U^m‖² + ‖P^m‖²` for `m = 0..=N`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyTrace<T> {
    pub values: Vec<T>,
}

impl<T: Real> EnergyTrace<T> {
    /// Largest step-to-step increase relative to the initial energy (≤ 0 if monotone).
    pub fn max_relative_increase(&self) -> T {
        let e0 = self.values.first().copied().unwrap_or(T::zero()).max(T::min_positive_value());
        self.values.windows(2).map(|w| (w[1] - w[0]) / e0).fold(T::neg_infinity(), T::max)
    }

    /// `E^m ≤ E^{m−1} + slack·E⁰` for every step.
    pub fn is_non_increasing(&self, slack: T) -> bool {
        self.values.len() < 2 || self.max_relative_increase() <= slack
    }
}

#[derive(Debug, Clone)]
pub struct RunSummary<T> {
    pub final_state: State<T>,
    pub energy: EnergyTrace<T>,
    pub steps: Vec<StepStats<T>>,
    pub wall_seconds: f64,
}

impl<T: Real> RunSummary<T> {
    pub fn total_iterations(&self) -> usize {
        self.steps.iter().map(|s| s.iterations).sum()
    }

    pub fn max_iterations(&self) -> usize {
        self.steps.iter().map(|s| s.iterations).max().unwrap_or(0)
    }
}

/// Runs `N = T/k` steps on `mesh`.
pub fn run<T: Real>(problem: &ProblemDefinition<T>, mesh: Arc<Mesh<T>>, config: &SolverConfig<T>) -> Result<RunSummary<T>> {
    let disc = Discretization::new(mesh, config.u_degree, config.p_degree)?;
    run_with(problem, &disc, config, |_| {})
}

/// Like [`run`] on a prebuilt discretization; `observer` sees all `N + 1` states.
pub fn run_with<T: Real>(
    problem: &ProblemDefinition<T>,
    disc: &Discretization<T>,
    config: &SolverConfig<T>,
    mut observer: impl FnMut(&State<T>),
) -> Result<RunSummary<T>> {
    let start = Instant::now();
    let n = config.n_steps()?;
    let mut stepper = TimeStepper::new(problem, disc, config)?;
    let mut state = initialize(problem, disc, config)?;
    observer(&state);
    let mut energy = Vec::with_capacity(n + 1);
    energy.push(disc.energy(&state.u, &state.p)?);
    let mut steps = Vec::with_capacity(n);
    for _ in 0..n {
        let (next, stats) = stepper.step(&state)?;
        observer(&next);
        energy.push(disc.energy(&next.u, &next.p)?);
        steps.push(stats);
        state = next;
    }
    Ok(RunSummary { final_state: state, energy: EnergyTrace { values: energy }, steps, wall_seconds: start.elapsed().as_secs_f64() })
}
