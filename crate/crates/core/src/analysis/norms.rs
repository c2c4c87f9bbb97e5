use crate::error::{Error, Result};
use crate::fem::{CellGeometry, FiniteElementFunction, QuadratureRule};
use crate::problems::ExactSolution;
use crate::scalar::Real;

/// Errors of a discrete `u` field against the exact solution at time `t`.
///
/// `h1` and `h2` are full norms: `h1² = ‖e‖² + ‖∇e‖²`, `h2² = h1² + ‖Δₕe‖²`
/// with `Δₕ` the element-wise Laplacian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport<T> {
    pub t: T,
    pub l2: T,
    pub h1: T,
    pub h2: T,
    /// Max error over mesh vertices.
    pub linf_nodes: T,
    /// `‖p − pₕ‖` with `p = −Δu`, when computed.
    pub p_l2: Option<T>,
    pub h: T,
    pub k: T,
}

impl<T: Real> ErrorReport<T> {
    pub fn with_steps(mut self, h: T, k: T) -> Self {
        self.h = h;
        self.k = k;
        self
    }
}

/// Sums `w·|det|·integrand(cell, ξ, x)` over all cells with a rule of `degree`.
fn integrate<T: Real>(f: &FiniteElementFunction<T>, degree: usize, mut integrand: impl FnMut(usize, [T; 2], [T; 2]) -> [T; 3]) -> [T; 3] {
    let mesh = f.space().mesh();
    let rule = QuadratureRule::<T>::new(mesh.dim(), degree);
    let mut acc = [T::zero(); 3];
    for c in 0..mesh.n_cells() {
        let geo = CellGeometry::new(mesh, c);
        let det = geo.det.abs();
        for (xi, &w) in rule.points().iter().zip(rule.weights()) {
            let v = integrand(c, *xi, geo.map(*xi));
            for (a, b) in acc.iter_mut().zip(v) {
                *a += w * det * b;
            }
        }
    }
    acc
}

/// L², H¹, H² (broken) and nodal errors of `u_h` at time `t`.
pub fn error_norms<T: Real>(u_h: &FiniteElementFunction<T>, exact: &dyn ExactSolution<T>, t: T) -> Result<ErrorReport<T>> {
    let space = u_h.space();
    let mesh = space.mesh();
    let dim = mesh.dim();
    if exact.dim() != dim {
        return Err(Error::DimensionMismatch(format!("exact solution is {}D, mesh is {dim}D", exact.dim())));
    }
    let [e0, e1, e2] = integrate(u_h, space.degree() + 4, |c, xi, x| {
        let (v, g, h) = u_h.eval_local(c, xi);
        let gu = exact.grad_u(&x[..dim], t);
        let lap_h = if dim == 1 { h[0][0] } else { h[0][0] + h[1][1] };
        let ev = exact.u(&x[..dim], t) - v;
        let eg: T = (0..dim).map(|d| (gu[d] - g[d]).powi(2)).sum();
        let el = exact.laplacian_u(&x[..dim], t) - lap_h;
        [ev * ev, eg, el * el]
    });
    let linf_nodes = (0..mesh.n_nodes()).map(|i| (exact.u(&mesh.coords(i)[..dim], t) - u_h.coeffs()[i]).abs()).fold(T::zero(), T::max);
    Ok(ErrorReport { t, l2: e0.sqrt(), h1: (e0 + e1).sqrt(), h2: (e0 + e1 + e2).sqrt(), linf_nodes, p_l2: None, h: mesh.h(), k: T::zero() })
}

/// `‖p − pₕ‖` with `p = −Δu`.
pub fn p_error_l2<T: Real>(p_h: &FiniteElementFunction<T>, exact: &dyn ExactSolution<T>, t: T) -> Result<T> {
    let dim = p_h.space().mesh().dim();
    if exact.dim() != dim {
        return Err(Error::DimensionMismatch(format!("exact solution is {}D, mesh is {dim}D", exact.dim())));
    }
    let [e, _, _] = integrate(p_h, p_h.space().degree() + 4, |c, xi, x| {
        let d = exact.laplacian_u(&x[..dim], t) + p_h.eval_local(c, xi).0;
        [d * d, T::zero(), T::zero()]
    });
    Ok(e.sqrt())
}

/// `log(e1/e2) / log(s1/s2)`.
pub fn observed_order<T: Real>(e1: T, e2: T, s1: T, s2: T) -> Result<T> {
    if !(e1 > T::zero() && e2 > T::zero()) {
        return Err(Error::InvalidArgument(format!("errors must be positive, got {e1} and {e2}")));
    }
    if !(s1 > T::zero() && s2 > T::zero()) || s1 == s2 {
        return Err(Error::InvalidArgument(format!("step sizes must be positive and distinct, got {s1} and {s2}")));
    }
    Ok((e1 / e2).ln() / (s1 / s2).ln())
}
