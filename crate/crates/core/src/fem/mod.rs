//! Lagrange P1/P2 spaces, quadrature and assembly.

mod assembly;
mod dirichlet;
mod quadrature;
mod reference;
mod space;

pub use assembly::{
    assemble_convection, assemble_load, assemble_mass, assemble_nonlinear_jacobian, assemble_nonlinear_vector,
    assemble_nonlinear_vector_mixed, assemble_stiffness, nonlinear_jacobian_into, nonlinear_jacobian_mixed_into, picard_matrix_into,
    picard_matrix_mixed_into, sparsity_pattern, Flux,
};
pub use dirichlet::{apply_dirichlet, constrain_matrix};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use reference::ReferenceElement;
pub use space::{CellGeometry, FiniteElementFunction, FunctionSpace};
