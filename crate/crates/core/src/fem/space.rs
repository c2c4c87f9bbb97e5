use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{Mesh, DIRICHLET};
use crate::scalar::Real;

use super::reference::ReferenceElement;

/// Affine map `x = x0 + J ξ` of the reference cell onto a mesh cell.
#[derive(Debug, Clone, Copy)]
pub struct CellGeometry<T> {
    pub x0: [T; 2],
    pub jac: [[T; 2]; 2],
    /// `J⁻¹`
    pub inv: [[T; 2]; 2],
    pub det: T,
}

impl<T: Real> CellGeometry<T> {
    pub fn new(mesh: &Mesh<T>, c: usize) -> Self {
        let v = mesh.cells()[c].vertex_ids();
        let p0 = mesh.point(v[0]);
        let (z, o) = (T::zero(), T::one());
        if mesh.dim() == 1 {
            let l = mesh.point(v[1])[0] - p0[0];
            return Self { x0: p0, jac: [[l, z], [z, o]], inv: [[o / l, z], [z, o]], det: l };
        }
        let (p1, p2) = (mesh.point(v[1]), mesh.point(v[2]));
        let jac = [[p1[0] - p0[0], p2[0] - p0[0]], [p1[1] - p0[1], p2[1] - p0[1]]];
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        let inv = [[jac[1][1] / det, -jac[0][1] / det], [-jac[1][0] / det, jac[0][0] / det]];
        Self { x0: p0, jac, inv, det }
    }

    pub fn map(&self, xi: [T; 2]) -> [T; 2] {
        [self.x0[0] + self.jac[0][0] * xi[0] + self.jac[0][1] * xi[1], self.x0[1] + self.jac[1][0] * xi[0] + self.jac[1][1] * xi[1]]
    }

    /// `∇ₓ = J⁻ᵀ ∇_ξ`
    pub fn grad(&self, g: [T; 2]) -> [T; 2] {
        [self.inv[0][0] * g[0] + self.inv[1][0] * g[1], self.inv[0][1] * g[0] + self.inv[1][1] * g[1]]
    }

    /// `Hₓ = J⁻ᵀ H_ξ J⁻¹`
    pub fn hessian(&self, h: [[T; 2]; 2]) -> [[T; 2]; 2] {
        let g = &self.inv;
        let mut out = [[T::zero(); 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (s, v) in row.iter_mut().enumerate() {
                let mut acc = T::zero();
                for a in 0..2 {
                    for b in 0..2 {
                        acc += g[a][r] * h[a][b] * g[b][s];
                    }
                }
                *v = acc;
            }
        }
        out
    }
}

/// Continuous Lagrange space over a shared mesh.
///
/// Global dof numbering: vertices first (dof `i` ↔ node `i`), then one dof
/// per edge (2D) or per cell midpoint (1D) for P2.
#[derive(Debug, Clone)]
pub struct FunctionSpace<T> {
    mesh: Arc<Mesh<T>>,
    element: ReferenceElement,
    cell_dofs: Vec<usize>,
    n_dofs: usize,
    dof_coords: Vec<[T; 2]>,
    constrained: Vec<usize>,
    is_constrained: Vec<bool>,
}

impl<T: Real> FunctionSpace<T> {
    pub fn new(mesh: Arc<Mesh<T>>, degree: usize) -> Result<Self> {
        let element = ReferenceElement::new(mesh.dim(), degree)?;
        let nl = element.n_dofs();
        let nv = mesh.n_nodes();
        let n_dofs = match (mesh.dim(), degree) {
            (_, 1) => nv,
            (1, _) => nv + mesh.n_cells(),
            _ => nv + mesh.n_edges(),
        };
        let mut cell_dofs = Vec::with_capacity(nl * mesh.n_cells());
        for (c, cell) in mesh.cells().iter().enumerate() {
            cell_dofs.extend_from_slice(cell.vertex_ids());
            if degree == 2 {
                match mesh.dim() {
                    1 => cell_dofs.push(nv + c),
                    _ => cell_dofs.extend(mesh.cell_edges(c).iter().map(|e| nv + e)),
                }
            }
        }

        let mut dof_coords = vec![[T::zero(); 2]; n_dofs];
        let ref_nodes = element.nodes::<T>();
        for c in 0..mesh.n_cells() {
            let geo = CellGeometry::new(&mesh, c);
            for (l, &xi) in ref_nodes.iter().enumerate() {
                dof_coords[cell_dofs[c * nl + l]] = geo.map(xi);
            }
        }

        let dirichlet = |n: usize| mesh.boundary().get(&n) == Some(&DIRICHLET);
        let mut is_constrained = vec![false; n_dofs];
        for n in 0..nv {
            is_constrained[n] = dirichlet(n);
        }
        if degree == 2 && mesh.dim() == 2 {
            for (e, &[a, b]) in mesh.edges().iter().enumerate() {
                is_constrained[nv + e] = mesh.is_boundary_edge(e) && dirichlet(a) && dirichlet(b);
            }
        }
        let constrained = (0..n_dofs).filter(|&i| is_constrained[i]).collect();
        Ok(Self { mesh, element, cell_dofs, n_dofs, dof_coords, constrained, is_constrained })
    }

    pub fn mesh(&self) -> &Arc<Mesh<T>> {
        &self.mesh
    }

    pub fn element(&self) -> &ReferenceElement {
        &self.element
    }

    pub fn degree(&self) -> usize {
        self.element.degree()
    }

    pub fn n_dofs(&self) -> usize {
        self.n_dofs
    }

    pub fn n_local(&self) -> usize {
        self.element.n_dofs()
    }

    /// Global dofs of cell `c` in local order.
    pub fn cell_dofs(&self, c: usize) -> &[usize] {
        let nl = self.n_local();
        &self.cell_dofs[c * nl..(c + 1) * nl]
    }

    /// Physical position of every dof (Lagrange node).
    pub fn dof_coords(&self) -> &[[T; 2]] {
        &self.dof_coords
    }

    /// Sorted dofs on the Dirichlet boundary.
    pub fn constrained_dofs(&self) -> &[usize] {
        &self.constrained
    }

    pub fn is_constrained(&self, dof: usize) -> bool {
        self.is_constrained[dof]
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(&self, f: impl Fn(&[T]) -> T) -> Vec<T> {
        let d = self.mesh.dim();
        self.dof_coords.iter().map(|x| f(&x[..d])).collect()
    }

    /// Evaluates `f` at the constrained dofs only.
    pub fn boundary_values(&self, f: impl Fn(&[T]) -> T) -> Vec<T> {
        let d = self.mesh.dim();
        self.constrained.iter().map(|&i| f(&self.dof_coords[i][..d])).collect()
    }

    pub fn same_mesh(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh)
    }
}

/// Coefficient vector tied to its space.
#[derive(Debug, Clone)]
pub struct FiniteElementFunction<T> {
    space: Arc<FunctionSpace<T>>,
    coeffs: Vec<T>,
}

impl<T: Real> FiniteElementFunction<T> {
    pub fn new(space: Arc<FunctionSpace<T>>, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != space.n_dofs() {
            return Err(Error::DimensionMismatch(format!("{} coefficients for a space with {} dofs", coeffs.len(), space.n_dofs())));
        }
        Ok(Self { space, coeffs })
    }

    pub fn zeros(space: Arc<FunctionSpace<T>>) -> Self {
        let n = space.n_dofs();
        Self { space, coeffs: vec![T::zero(); n] }
    }

    pub fn space(&self) -> &Arc<FunctionSpace<T>> {
        &self.space
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Value, physical gradient and Hessian at reference point `xi` of cell `c`.
    pub fn eval_local(&self, c: usize, xi: [T; 2]) -> (T, [T; 2], [[T; 2]; 2]) {
        let el = self.space.element();
        let n = el.n_dofs();
        let mut vals = [T::zero(); 6];
        let mut grads = [[T::zero(); 2]; 6];
        let mut hess = [[[T::zero(); 2]; 2]; 6];
        el.values(xi, &mut vals[..n]);
        el.gradients(xi, &mut grads[..n]);
        el.hessians(xi, &mut hess[..n]);
        let geo = CellGeometry::new(self.space.mesh(), c);
        let (mut v, mut g, mut h) = (T::zero(), [T::zero(); 2], [[T::zero(); 2]; 2]);
        for (l, &dof) in self.space.cell_dofs(c).iter().enumerate() {
            let a = self.coeffs[dof];
            v += a * vals[l];
            let gx = geo.grad(grads[l]);
            let hx = geo.hessian(hess[l]);
            for r in 0..2 {
                g[r] += a * gx[r];
                for s in 0..2 {
                    h[r][s] += a * hx[r][s];
                }
            }
        }
        (v, g, h)
    }
}
