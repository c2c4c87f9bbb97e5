use crate::error::{Error, Result};
use crate::mesh::TRIANGLE_EDGES;
use crate::scalar::Real;

/// Lagrange element of degree 1 or 2 on the reference simplex.
///
/// Local numbering: vertices first, then edge midpoints (the single midpoint
/// in 1D; [`TRIANGLE_EDGES`] order in 2D).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceElement {
    dim: usize,
    degree: usize,
}

impl ReferenceElement {
    pub fn new(dim: usize, degree: usize) -> Result<Self> {
        if !matches!(dim, 1 | 2) {
            return Err(Error::InvalidArgument(format!("element dimension must be 1 or 2, got {dim}")));
        }
        if !matches!(degree, 1 | 2) {
            return Err(Error::InvalidArgument(format!("element degree must be 1 or 2, got {degree}")));
        }
        Ok(Self { dim, degree })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n_vertices(&self) -> usize {
        self.dim + 1
    }

    pub fn n_dofs(&self) -> usize {
        match (self.dim, self.degree) {
            (d, 1) => d + 1,
            (1, _) => 3,
            _ => 6,
        }
    }

    /// Vertex pairs whose midpoints carry dofs (P2 only).
    pub fn edge_pairs(&self) -> &'static [[usize; 2]] {
        match (self.dim, self.degree) {
            (_, 1) => &[],
            (1, _) => &[[0, 1]],
            _ => &TRIANGLE_EDGES,
        }
    }

    /// Reference coordinates of the local nodes.
    pub fn nodes<T: Real>(&self) -> Vec<[T; 2]> {
        let verts: Vec<[T; 2]> = match self.dim {
            1 => vec![[T::zero(), T::zero()], [T::one(), T::zero()]],
            _ => vec![[T::zero(), T::zero()], [T::one(), T::zero()], [T::zero(), T::one()]],
        };
        let half = T::lit(0.5);
        let mut out = verts.clone();
        for &[a, b] in self.edge_pairs() {
            out.push([(verts[a][0] + verts[b][0]) * half, (verts[a][1] + verts[b][1]) * half]);
        }
        out
    }

    fn barycentric<T: Real>(&self, xi: [T; 2]) -> ([T; 3], [[T; 2]; 3]) {
        let (z, o) = (T::zero(), T::one());
        match self.dim {
            1 => ([o - xi[0], xi[0], z], [[-o, z], [o, z], [z, z]]),
            _ => ([o - xi[0] - xi[1], xi[0], xi[1]], [[-o, -o], [o, z], [z, o]]),
        }
    }

    /// Shape function values at `xi`.
    pub fn values<T: Real>(&self, xi: [T; 2], out: &mut [T]) {
        let (l, _) = self.barycentric(xi);
        let nv = self.n_vertices();
        if self.degree == 1 {
            out[..nv].copy_from_slice(&l[..nv]);
            return;
        }
        let (one, two, four) = (T::one(), T::lit(2.0), T::lit(4.0));
        for i in 0..nv {
            out[i] = l[i] * (two * l[i] - one);
        }
        for (e, &[a, b]) in self.edge_pairs().iter().enumerate() {
            out[nv + e] = four * l[a] * l[b];
        }
    }

    /// Reference gradients at `xi`.
    pub fn gradients<T: Real>(&self, xi: [T; 2], out: &mut [[T; 2]]) {
        let (l, g) = self.barycentric(xi);
        let nv = self.n_vertices();
        if self.degree == 1 {
            out[..nv].copy_from_slice(&g[..nv]);
            return;
        }
        let (one, four) = (T::one(), T::lit(4.0));
        for i in 0..nv {
            let s = four * l[i] - one;
            out[i] = [s * g[i][0], s * g[i][1]];
        }
        for (e, &[a, b]) in self.edge_pairs().iter().enumerate() {
            out[nv + e] = [four * (l[b] * g[a][0] + l[a] * g[b][0]), four * (l[b] * g[a][1] + l[a] * g[b][1])];
        }
    }

    /// Reference Hessians (constant per element; zero for P1).
    pub fn hessians<T: Real>(&self, xi: [T; 2], out: &mut [[[T; 2]; 2]]) {
        let (_, g) = self.barycentric(xi);
        let nv = self.n_vertices();
        let z = [[T::zero(); 2]; 2];
        out[..self.n_dofs()].fill(z);
        if self.degree == 1 {
            return;
        }
        let four = T::lit(4.0);
        for i in 0..nv {
            for r in 0..2 {
                for s in 0..2 {
                    out[i][r][s] = four * g[i][r] * g[i][s];
                }
            }
        }
        for (e, &[a, b]) in self.edge_pairs().iter().enumerate() {
            for r in 0..2 {
                for s in 0..2 {
                    out[nv + e][r][s] = four * (g[a][r] * g[b][s] + g[b][r] * g[a][s]);
                }
            }
        }
    }
}
