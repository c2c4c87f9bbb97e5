//! Mixed finite element solver for the Rosenau–Burgers equation
//! `u_t + Δ²u_t − αΔu − ∇·g(u) = f` with `g_i(u) = −(u + u²/2)`.
//!
//! The fourth-order problem is split into two second-order equations through
//! `p = −Δu` and discretized with continuous Lagrange elements (equal order or
//! Taylor–Hood P2×P1) and backward Euler in time. All numerics are generic
//! over the scalar type; the `*64` aliases fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod error;
pub mod fem;
pub mod mesh;
pub mod problems;
pub mod scalar;
pub mod sparse;
pub mod stepper;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Mesh64 = mesh::Mesh<f64>;
pub type CsrMatrix64 = sparse::CsrMatrix<f64>;
pub type SparseLu64 = sparse::SparseLu<f64>;
pub type FunctionSpace64 = fem::FunctionSpace<f64>;
pub type FiniteElementFunction64 = fem::FiniteElementFunction<f64>;
pub type ProblemDefinition64 = stepper::ProblemDefinition<f64>;
pub type SolverConfig64 = stepper::SolverConfig<f64>;
pub type Discretization64 = stepper::Discretization<f64>;
pub type State64 = stepper::State<f64>;
pub type RunSummary64 = stepper::RunSummary<f64>;
pub type ProblemCatalogEntry64 = problems::ProblemCatalogEntry<f64>;
pub type ErrorReport64 = analysis::ErrorReport<f64>;
pub type ConvergenceTable64 = analysis::ConvergenceTable<f64>;
