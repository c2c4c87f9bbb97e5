use std::sync::Arc;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::fem::{
    apply_dirichlet, assemble_load, assemble_nonlinear_vector_mixed, assemble_stiffness, constrain_matrix, nonlinear_jacobian_mixed_into,
    picard_matrix_mixed_into, sparsity_pattern, FunctionSpace,
};
use crate::scalar::{norm_inf, Real};
use crate::sparse::{compose_block, CsrMatrix, SparseLu};

use super::{Discretization, DynamicsTest, InitialP, Initializer, JacobianMode, ProblemDefinition, SolverConfig, State};

const NONE: usize = usize::MAX;
const PIVOT_THRESHOLD: f64 = 0.1;
/// Lagged mode refreshes the Jacobian once the residual shrinks by less than this.
const LAGGED_CONTRACTION: f64 = 0.25;
/// An update below this many ulps of the iterate, with a residual within this
/// factor of the tolerance, ends the iteration at the round-off floor.
const ROUNDOFF_FACTOR: f64 = 1e3;

/// `δ_t U^m = (U^m − U^{m−1}) / k`.
pub fn delta_t<T: Real>(current: &[T], previous: &[T], k: T) -> Vec<T> {
    current.iter().zip(previous).map(|(&a, &b)| (a - b) / k).collect()
}

/// Nonlinear iteration record of one time step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepStats<T> {
    pub iterations: usize,
    /// Scaled residual norms, starting with the initial guess.
    pub residuals: Vec<T>,
    pub factorizations: usize,
    pub used_picard: bool,
    pub seconds: f64,
}

fn trace_values<T: Real>(space: &FunctionSpace<T>, g: &(dyn Fn(&[T], T) -> T + Send + Sync), t: T) -> Vec<T> {
    space.boundary_values(|x| g(x, t))
}

fn set_traces<T: Real>(space: &FunctionSpace<T>, v: &mut [T], g: &(dyn Fn(&[T], T) -> T + Send + Sync), t: T) {
    let d = space.mesh().dim();
    for &i in space.constrained_dofs() {
        v[i] = g(&space.dof_coords()[i][..d], t);
    }
}

/// Builds `(U⁰, P⁰)`.
pub fn initialize<T: Real>(problem: &ProblemDefinition<T>, disc: &Discretization<T>, config: &SolverConfig<T>) -> Result<State<T>> {
    problem.validate()?;
    let (su, sp) = (&*disc.space_u, &*disc.space_p);
    let zero = T::zero();
    let missing_p = || Error::InvalidArgument("initializer needs −Δu₀ (initial_p) for this problem".into());

    let mut u = match config.initializer {
        Initializer::Interpolate => su.interpolate(|x| (problem.initial_u)(x)),
        Initializer::Ritz => {
            let lap = problem.initial_p.as_ref().ok_or_else(missing_p)?;
            let k = assemble_stiffness(su, su)?;
            let mut rhs = assemble_load(su, |x| lap(x));
            let g = su.boundary_values(|x| (problem.initial_u)(x));
            let a = apply_dirichlet(&k, &mut rhs, su.constrained_dofs(), &g)?;
            SparseLu::factor(&a)?.solve(&rhs)?
        }
    };
    set_traces(su, &mut u, &*problem.dirichlet_u, zero);

    let p = match config.initial_p {
        InitialP::Discrete => {
            let mut rhs = disc.stiff_pu.spmv(&u)?;
            let g = trace_values(sp, &*problem.dirichlet_p, zero);
            let a = apply_dirichlet(&disc.mass_p, &mut rhs, sp.constrained_dofs(), &g)?;
            SparseLu::factor(&a)?.solve(&rhs)?
        }
        InitialP::Interpolate => {
            let lap = problem.initial_p.as_ref().ok_or_else(missing_p)?;
            let mut p = sp.interpolate(|x| lap(x));
            set_traces(sp, &mut p, &*problem.dirichlet_p, zero);
            p
        }
    };
    Ok(State { m: 0, t: zero, u, p })
}

/// Operators of one equation row block: evolution rows act as
/// `mass·δ_tU + stiff·δ_tP + α·coupling·P`, constraint rows as `stiff·U − mass·P`.
struct RowBlocks<T> {
    test: Arc<FunctionSpace<T>>,
    mass: CsrMatrix<T>,
    stiff: CsrMatrix<T>,
    coupling: CsrMatrix<T>,
    con_test: Arc<FunctionSpace<T>>,
    con_stiff: CsrMatrix<T>,
    con_mass: CsrMatrix<T>,
}

impl<T: Real> RowBlocks<T> {
    fn new(disc: &Discretization<T>, which: DynamicsTest) -> Self {
        let d = disc.clone();
        match which {
            DynamicsTest::USpace => Self {
                test: d.space_u,
                mass: d.mass_u,
                stiff: d.stiff_up,
                coupling: d.mass_up,
                con_test: d.space_p,
                con_stiff: d.stiff_pu,
                con_mass: d.mass_p,
            },
            DynamicsTest::PSpace => Self {
                test: d.space_p,
                mass: d.mass_pu,
                stiff: d.stiff_p,
                coupling: d.mass_p,
                con_test: d.space_u,
                con_stiff: d.stiff_u,
                con_mass: d.mass_up,
            },
        }
    }
}

/// Backward Euler for the mixed system, one Newton solve per step.
///
/// Unknowns are stacked as `[U; P]`; rows tested with the `u` space come
/// first, so Dirichlet rows and columns coincide.
pub struct TimeStepper<'a, T> {
    problem: &'a ProblemDefinition<T>,
    disc: &'a Discretization<T>,
    config: &'a SolverConfig<T>,
    blocks: RowBlocks<T>,
    /// whether the evolution equation occupies the first row block
    dynamics_first: bool,
    constrained: Vec<usize>,
    jac_base: CsrMatrix<T>,
    flux_matrix: CsrMatrix<T>,
    /// position in `jac_base` of each `flux_matrix` entry (free rows and columns only)
    flux_map: Vec<usize>,
    order: Option<Vec<usize>>,
    lagged: Option<SparseLu<T>>,
}

impl<'a, T: Real> TimeStepper<'a, T> {
    pub fn new(problem: &'a ProblemDefinition<T>, disc: &'a Discretization<T>, config: &'a SolverConfig<T>) -> Result<Self> {
        problem.validate()?;
        config.validate()?;
        let inv_k = T::one() / config.k;
        let (su, sp) = (&*disc.space_u, &*disc.space_p);
        let n_u = su.n_dofs();
        let blocks = RowBlocks::new(disc, config.dynamics_test);
        let dynamics_first = config.dynamics_test == DynamicsTest::USpace;
        let dyn_left = blocks.mass.scaled(inv_k);
        let dyn_right = blocks.stiff.linear_combination(inv_k, &blocks.coupling, problem.alpha)?;
        let con_right = blocks.con_mass.scaled(-T::one());
        let lin = if dynamics_first {
            compose_block([[&dyn_left, &dyn_right], [&blocks.con_stiff, &con_right]])?
        } else {
            compose_block([[&blocks.con_stiff, &con_right], [&dyn_left, &dyn_right]])?
        };
        let constrained: Vec<usize> = su.constrained_dofs().iter().copied().chain(sp.constrained_dofs().iter().map(|&i| n_u + i)).collect();
        let jac_base = constrain_matrix(&lin, &constrained)?;
        let flux_matrix = sparsity_pattern(&blocks.test, su)?;
        let row_offset = if dynamics_first { 0 } else { n_u };
        let mut flux_map = Vec::with_capacity(flux_matrix.nnz());
        for r in 0..blocks.test.n_dofs() {
            for (c, _) in flux_matrix.row(r) {
                let free = !blocks.test.is_constrained(r) && !su.is_constrained(c);
                let pos = if free { jac_base.position(row_offset + r, c) } else { None };
                flux_map.push(pos.unwrap_or(NONE));
            }
        }
        Ok(Self { problem, disc, config, blocks, dynamics_first, constrained, jac_base, flux_matrix, flux_map, order: None, lagged: None })
    }

    /// Indices of the stacked system fixed by Dirichlet data.
    pub fn constrained(&self) -> &[usize] {
        &self.constrained
    }

    /// Forcing load tested with the evolution equation's test space.
    pub fn load(&self, t: T) -> Vec<T> {
        match &self.problem.forcing {
            Some(f) => assemble_load(&self.blocks.test, |x| f(x, t)),
            None => vec![T::zero(); self.blocks.test.n_dofs()],
        }
    }

    /// Step residual and the scale used by the convergence test.
    ///
    /// Evolution rows `M δ_tU + K δ_tP + α M' P − N(U) − F`, constraint rows
    /// `K'' U − M'' P`, zeroed on constrained rows.
    pub fn residual(&self, prev: &State<T>, u: &[T], p: &[T], load: &[T]) -> Result<(Vec<T>, T)> {
        let bl = &self.blocks;
        let k = self.config.k;
        let du = delta_t(u, &prev.u, k);
        let dp = delta_t(p, &prev.p, k);
        let a = bl.mass.spmv(&du)?;
        let b = bl.stiff.spmv(&dp)?;
        let c = bl.coupling.spmv(p)?;
        let n = assemble_nonlinear_vector_mixed(&bl.test, &self.disc.space_u, u, self.problem.flux)?;
        let e = bl.con_stiff.spmv(u)?;
        let f = bl.con_mass.spmv(p)?;
        let alpha = self.problem.alpha;
        let mut scale = T::one();
        let dynamics: Vec<T> = (0..bl.test.n_dofs())
            .map(|i| {
                if bl.test.is_constrained(i) {
                    return T::zero();
                }
                let terms = [a[i], b[i], alpha * c[i], n[i], load[i]];
                scale = terms.iter().fold(scale, |s, v| s.max(v.abs()));
                a[i] + b[i] + alpha * c[i] - n[i] - load[i]
            })
            .collect();
        let constraint: Vec<T> = (0..bl.con_test.n_dofs())
            .map(|i| {
                if bl.con_test.is_constrained(i) {
                    return T::zero();
                }
                scale = scale.max(e[i].abs()).max(f[i].abs());
                e[i] - f[i]
            })
            .collect();
        let r = if self.dynamics_first { [dynamics, constraint] } else { [constraint, dynamics] }.concat();
        Ok((r, scale))
    }

    /// Newton matrix at `u` with identity rows and columns on constrained dofs.
    pub fn jacobian(&mut self, u: &[T]) -> Result<CsrMatrix<T>> {
        self.system_matrix(u, false)
    }

    fn system_matrix(&mut self, u: &[T], picard: bool) -> Result<CsrMatrix<T>> {
        let (test, su) = (&*self.blocks.test, &*self.disc.space_u);
        if picard {
            picard_matrix_mixed_into(test, su, u, self.problem.flux, &mut self.flux_matrix)?;
        } else {
            nonlinear_jacobian_mixed_into(test, su, u, self.problem.flux, &mut self.flux_matrix)?;
        }
        let mut jac = self.jac_base.clone();
        let vals = jac.values_mut();
        for (&pos, &v) in self.flux_map.iter().zip(self.flux_matrix.values()) {
            if pos != NONE {
                vals[pos] -= v;
            }
        }
        Ok(jac)
    }

    fn factor(&mut self, a: &CsrMatrix<T>) -> Result<SparseLu<T>> {
        let threshold = T::lit(PIVOT_THRESHOLD);
        let lu = match &self.order {
            Some(q) => SparseLu::factor_with_order(a, q, threshold)?,
            None => SparseLu::factor(a)?,
        };
        if self.order.is_none() {
            self.order = Some(lu.column_order().to_vec());
        }
        Ok(lu)
    }

    /// Advances `prev` by one step.
    pub fn step(&mut self, prev: &State<T>) -> Result<(State<T>, StepStats<T>)> {
        let start = Instant::now();
        let m = prev.m + 1;
        let t = self.config.time(m);
        let (su, sp) = (self.disc.space_u.clone(), self.disc.space_p.clone());
        let load = self.load(t);
        let mut guess = (prev.u.clone(), prev.p.clone());
        set_traces(&su, &mut guess.0, &*self.problem.dirichlet_u, t);
        set_traces(&sp, &mut guess.1, &*self.problem.dirichlet_p, t);

        let mut stats = StepStats { iterations: 0, residuals: Vec::new(), factorizations: 0, used_picard: false, seconds: 0.0 };
        let newton = self.iterate(prev, guess.clone(), &load, false, self.config.newton_max_iter, &mut stats)?;
        let (u, p) = match newton {
            Some(x) => x,
            None => {
                let last = stats.residuals.last().copied().unwrap_or(T::nan());
                if self.config.picard_max_iter == 0 {
                    return Err(Error::StepFailure { step: m, residual: last.to_f64_lossy() });
                }
                stats.used_picard = true;
                self.lagged = None;
                match self.iterate(prev, guess, &load, true, self.config.picard_max_iter, &mut stats)? {
                    Some(x) => x,
                    None => {
                        let last = stats.residuals.last().copied().unwrap_or(T::nan());
                        if !last.is_finite() {
                            return Err(Error::BlowUp { time: t.to_f64_lossy() });
                        }
                        return Err(Error::StepFailure { step: m, residual: last.to_f64_lossy() });
                    }
                }
            }
        };
        stats.seconds = start.elapsed().as_secs_f64();
        Ok((State { m, t, u, p }, stats))
    }

    /// Newton (or Picard when `picard`) iteration from `x`; `None` if it does not converge.
    fn iterate(
        &mut self,
        prev: &State<T>,
        (mut u, mut p): (Vec<T>, Vec<T>),
        load: &[T],
        picard: bool,
        max_iter: usize,
        stats: &mut StepStats<T>,
    ) -> Result<Option<(Vec<T>, Vec<T>)>> {
        let n_u = u.len();
        let tol = self.config.newton_tol;
        let lagged_mode = self.config.jacobian == JacobianMode::Lagged && !picard;
        let (r, scale) = self.residual(prev, &u, &p, load)?;
        let mut rnorm = norm_inf(&r) / scale;
        let mut r = r;
        stats.residuals.push(rnorm);
        let mut refresh = self.lagged.is_none();
        for _ in 0..max_iter {
            let fresh;
            let lu = if lagged_mode && !refresh {
                self.lagged.as_ref().expect("lagged factorization present")
            } else {
                let a = self.system_matrix(&u, picard)?;
                let lu = match self.factor(&a) {
                    Ok(lu) => lu,
                    Err(Error::SingularMatrix { .. }) if !lagged_mode => return Ok(None),
                    Err(e) => return Err(e),
                };
                stats.factorizations += 1;
                if lagged_mode {
                    self.lagged = Some(lu);
                    self.lagged.as_ref().expect("just stored")
                } else {
                    fresh = Some(lu);
                    fresh.as_ref().expect("just built")
                }
            };
            let mut delta: Vec<T> = r.iter().map(|&v| -v).collect();
            lu.solve_in_place(&mut delta)?;
            for (i, d) in delta.iter().enumerate() {
                if i < n_u {
                    u[i] += *d;
                } else {
                    p[i - n_u] += *d;
                }
            }
            stats.iterations += 1;
            let (rn, scale) = self.residual(prev, &u, &p, load)?;
            let new_norm = norm_inf(&rn) / scale;
            stats.residuals.push(new_norm);
            let roundoff = T::epsilon() * T::lit(ROUNDOFF_FACTOR);
            let stalled = norm_inf(&delta[..n_u]) <= roundoff * norm_inf(&u).max(T::one())
                && norm_inf(&delta[n_u..]) <= roundoff * norm_inf(&p).max(T::one());
            if stalled && new_norm <= tol * T::lit(ROUNDOFF_FACTOR) {
                return Ok(Some((u, p)));
            }
            if !new_norm.is_finite() {
                self.lagged = None;
                return Ok(None);
            }
            if new_norm <= tol {
                return Ok(Some((u, p)));
            }
            refresh = lagged_mode && new_norm > rnorm * T::lit(LAGGED_CONTRACTION);
            r = rn;
            rnorm = new_norm;
        }
        if lagged_mode {
            self.lagged = None;
        }
        Ok(None)
    }
}

/// One backward Euler step with a fresh [`TimeStepper`].
pub fn be_step<T: Real>(
    prev: &State<T>,
    problem: &ProblemDefinition<T>,
    disc: &Discretization<T>,
    config: &SolverConfig<T>,
) -> Result<(State<T>, StepStats<T>)> {
    TimeStepper::new(problem, disc, config)?.step(prev)
}
