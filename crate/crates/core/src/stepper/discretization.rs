use std::sync::Arc;

use crate::error::Result;
use crate::fem::{assemble_mass, assemble_stiffness, FunctionSpace};
use crate::mesh::Mesh;
use crate::scalar::{dot, Real};
use crate::sparse::CsrMatrix;

/// Spaces and constant operators of the mixed scheme.
///
/// `*_up` blocks are tested with the `u` space and act on `p` coefficients,
/// `*_pu` the other way round; single-letter suffixes are square blocks.
#[derive(Debug, Clone)]
pub struct Discretization<T> {
    pub space_u: Arc<FunctionSpace<T>>,
    pub space_p: Arc<FunctionSpace<T>>,
    pub mass_u: CsrMatrix<T>,
    pub mass_p: CsrMatrix<T>,
    pub mass_up: CsrMatrix<T>,
    pub mass_pu: CsrMatrix<T>,
    pub stiff_u: CsrMatrix<T>,
    pub stiff_p: CsrMatrix<T>,
    pub stiff_up: CsrMatrix<T>,
    pub stiff_pu: CsrMatrix<T>,
}

impl<T: Real> Discretization<T> {
    pub fn new(mesh: Arc<Mesh<T>>, u_degree: usize, p_degree: usize) -> Result<Self> {
        let space_u = Arc::new(FunctionSpace::new(mesh.clone(), u_degree)?);
        let space_p = if p_degree == u_degree { space_u.clone() } else { Arc::new(FunctionSpace::new(mesh, p_degree)?) };
        let mass_u = assemble_mass(&space_u, &space_u)?;
        let mass_p = assemble_mass(&space_p, &space_p)?;
        let mass_up = assemble_mass(&space_u, &space_p)?;
        let mass_pu = mass_up.transpose();
        let stiff_u = assemble_stiffness(&space_u, &space_u)?;
        let stiff_p = assemble_stiffness(&space_p, &space_p)?;
        let stiff_up = assemble_stiffness(&space_u, &space_p)?;
        let stiff_pu = stiff_up.transpose();
        Ok(Self { space_u, space_p, mass_u, mass_p, mass_up, mass_pu, stiff_u, stiff_p, stiff_up, stiff_pu })
    }

    pub fn n_u(&self) -> usize {
        self.space_u.n_dofs()
    }

    pub fn n_p(&self) -> usize {
        self.space_p.n_dofs()
    }

    pub fn mesh(&self) -> &Arc<Mesh<T>> {
        self.space_u.mesh()
    }

    /// `‖U‖² + ‖P‖²` in the mass-matrix inner products.
    pub fn energy(&self, u: &[T], p: &[T]) -> Result<T> {
        let mu = self.mass_u.spmv(u)?;
        let mp = self.mass_p.spmv(p)?;
        Ok(dot(u, &mu) + dot(p, &mp))
    }
}
