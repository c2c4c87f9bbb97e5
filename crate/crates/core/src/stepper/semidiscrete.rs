use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::{assemble_load, assemble_mass, assemble_nonlinear_vector, assemble_stiffness, Flux, FunctionSpace};
use crate::mesh::Mesh;
use crate::scalar::Real;
use crate::sparse::{compose_block, CsrMatrix, SparseLu};

use super::{initialize, Discretization, ProblemDefinition, SolverConfig, SpaceTimeFn};

/// Galerkin ODE system of the equal-order mixed scheme on interior dofs,
/// homogeneous Dirichlet data assumed:
///
/// `A X′ + B Y′ = G(X) − α A Y`, `B X′ − A Y′ = 0`, `Y = A⁻¹ B X`,
///
/// with `A` the mass matrix, `B` the stiffness matrix and `G = N(X) + F`.
pub struct SemidiscreteSystem<T> {
    space: Arc<FunctionSpace<T>>,
    alpha: T,
    flux: Flux,
    forcing: Option<SpaceTimeFn<T>>,
    interior: Vec<usize>,
    mass: CsrMatrix<T>,
    stiffness: CsrMatrix<T>,
    mass_lu: SparseLu<T>,
    block_lu: SparseLu<T>,
}

impl<T: Real> SemidiscreteSystem<T> {
    /// Unlike the time stepper this accepts `α = 0`.
    pub fn new(problem: &ProblemDefinition<T>, space: Arc<FunctionSpace<T>>) -> Result<Self> {
        if !(problem.alpha >= T::zero()) {
            return Err(Error::InvalidArgument(format!("alpha must be non-negative, got {}", problem.alpha)));
        }
        let interior: Vec<usize> = (0..space.n_dofs()).filter(|&i| !space.is_constrained(i)).collect();
        if interior.is_empty() {
            return Err(Error::InvalidArgument("semidiscrete system has no interior dofs".into()));
        }
        let mut keep = vec![false; space.n_dofs()];
        for &i in &interior {
            keep[i] = true;
        }
        let mass = assemble_mass(&space, &space)?.submatrix(&keep, &keep);
        let stiffness = assemble_stiffness(&space, &space)?.submatrix(&keep, &keep);
        let mass_lu = SparseLu::factor(&mass)?;
        let neg_mass = mass.scaled(-T::one());
        let block = compose_block([[&mass, &stiffness], [&stiffness, &neg_mass]])?;
        let block_lu = SparseLu::factor(&block)?;
        Ok(Self {
            space,
            alpha: problem.alpha,
            flux: problem.flux,
            forcing: problem.forcing.clone(),
            interior,
            mass,
            stiffness,
            mass_lu,
            block_lu,
        })
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn mass(&self) -> &CsrMatrix<T> {
        &self.mass
    }

    pub fn stiffness(&self) -> &CsrMatrix<T> {
        &self.stiffness
    }

    /// Interior coefficients to a full vector with zero boundary values.
    pub fn embed(&self, x: &[T]) -> Vec<T> {
        let mut full = vec![T::zero(); self.space.n_dofs()];
        for (&i, &v) in self.interior.iter().zip(x) {
            full[i] = v;
        }
        full
    }

    pub fn restrict(&self, full: &[T]) -> Vec<T> {
        self.interior.iter().map(|&i| full[i]).collect()
    }

    /// `G(X, t) = N(X) + F(t)` on interior rows.
    pub fn nonlinear_load(&self, x: &[T], t: T) -> Result<Vec<T>> {
        let full = self.embed(x);
        let mut g = assemble_nonlinear_vector(&self.space, &full, self.flux)?;
        if let Some(f) = &self.forcing {
            let load = assemble_load(&self.space, |p| f(p, t));
            g.iter_mut().zip(&load).for_each(|(a, b)| *a += *b);
        }
        Ok(self.restrict(&g))
    }

    /// `X′` at state `x` and time `t`.
    pub fn rhs(&self, x: &[T], t: T) -> Result<Vec<T>> {
        let n = self.interior.len();
        if x.len() != n {
            return Err(Error::DimensionMismatch(format!("{} interior values for {n} interior dofs", x.len())));
        }
        let y = self.mass_lu.solve(&self.stiffness.spmv(x)?)?;
        let ay = self.mass.spmv(&y)?;
        let g = self.nonlinear_load(x, t)?;
        let mut b: Vec<T> = g.iter().zip(&ay).map(|(&gi, &ai)| gi - self.alpha * ai).collect();
        b.resize(2 * n, T::zero());
        self.block_lu.solve_in_place(&mut b)?;
        b.truncate(n);
        Ok(b)
    }
}

/// Integrates the semidiscrete system with classical RK4 at step `k / substeps`
/// from the scheme's initial state and returns the full `u` coefficients at `T`.
/// Requires equal-order spaces.
pub fn rk_reference_run<T: Real>(
    problem: &ProblemDefinition<T>,
    mesh: Arc<Mesh<T>>,
    config: &SolverConfig<T>,
    substeps: usize,
) -> Result<Vec<T>> {
    if config.u_degree != config.p_degree {
        return Err(Error::InvalidArgument("the semidiscrete reference needs equal-order spaces".into()));
    }
    if substeps == 0 {
        return Err(Error::InvalidArgument("substeps must be positive".into()));
    }
    let n_steps = config.n_steps()? * substeps;
    let disc = Discretization::new(mesh, config.u_degree, config.p_degree)?;
    let state = initialize(problem, &disc, config)?;
    let sys = SemidiscreteSystem::new(problem, disc.space_u.clone())?;
    let dt = config.k / T::from_usize_lossy(substeps);
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let mut x = sys.restrict(&state.u);
    let axpy = |a: &[T], s: T, b: &[T]| -> Vec<T> { a.iter().zip(b).map(|(&p, &q)| p + s * q).collect() };
    for step in 0..n_steps {
        let t = T::from_usize_lossy(step) * dt;
        let k1 = sys.rhs(&x, t)?;
        let k2 = sys.rhs(&axpy(&x, half * dt, &k1), t + half * dt)?;
        let k3 = sys.rhs(&axpy(&x, half * dt, &k2), t + half * dt)?;
        let k4 = sys.rhs(&axpy(&x, dt, &k3), t + dt)?;
        for i in 0..x.len() {
            x[i] += dt * sixth * (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { time: (t + dt).to_f64_lossy() });
        }
    }
    Ok(sys.embed(&x))
}
