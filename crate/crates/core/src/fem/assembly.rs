//! Global matrices and vectors by cell-wise quadrature.
//!
//! Quadrature degrees: `2d + 2` for bilinear forms and loads, `3d` for the
//! nonlinear flux term, where `d` is the largest polynomial degree involved.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::sparse::CsrMatrix;

use super::quadrature::QuadratureRule;
use super::reference::ReferenceElement;
use super::space::{CellGeometry, FunctionSpace};

/// Scalar flux `F` with `g_i(u) = −F(u)` in every direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Flux {
    /// `F(u) = u + u²/2`
    #[default]
    Burgers,
    /// `F(u) = u`
    Linear,
    /// `F = 0`
    Off,
}

impl Flux {
    pub fn value<T: Real>(self, u: T) -> T {
        match self {
            Self::Burgers => u + u * u * T::lit(0.5),
            Self::Linear => u,
            Self::Off => T::zero(),
        }
    }

    pub fn derivative<T: Real>(self, u: T) -> T {
        match self {
            Self::Burgers => T::one() + u,
            Self::Linear => T::one(),
            Self::Off => T::zero(),
        }
    }

    /// `F(u)/u`, so that `F(u) = secant(u)·u` (lagged-coefficient linearization).
    pub fn secant<T: Real>(self, u: T) -> T {
        match self {
            Self::Burgers => T::one() + u * T::lit(0.5),
            Self::Linear => T::one(),
            Self::Off => T::zero(),
        }
    }
}

/// Reference values and gradients at every quadrature point, `q`-major.
struct Tabulation<T> {
    n: usize,
    vals: Vec<T>,
    grads: Vec<[T; 2]>,
}

impl<T: Real> Tabulation<T> {
    fn new(el: &ReferenceElement, rule: &QuadratureRule<T>) -> Self {
        let n = el.n_dofs();
        let mut vals = vec![T::zero(); n * rule.len()];
        let mut grads = vec![[T::zero(); 2]; n * rule.len()];
        for (q, &xi) in rule.points().iter().enumerate() {
            el.values(xi, &mut vals[q * n..(q + 1) * n]);
            el.gradients(xi, &mut grads[q * n..(q + 1) * n]);
        }
        Self { n, vals, grads }
    }
}

fn check_same_mesh<T: Real>(a: &FunctionSpace<T>, b: &FunctionSpace<T>) -> Result<()> {
    if a.same_mesh(b) {
        Ok(())
    } else {
        Err(Error::DimensionMismatch("function spaces live on different meshes".into()))
    }
}

/// Zero matrix with the cell-coupling pattern of `test × trial`.
pub fn sparsity_pattern<T: Real>(test: &FunctionSpace<T>, trial: &FunctionSpace<T>) -> Result<CsrMatrix<T>> {
    check_same_mesh(test, trial)?;
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); test.n_dofs()];
    for c in 0..test.mesh().n_cells() {
        for &r in test.cell_dofs(c) {
            rows[r].extend_from_slice(trial.cell_dofs(c));
        }
    }
    Ok(CsrMatrix::from_pattern(trial.n_dofs(), rows))
}

/// Adds `Σ_q w_q · integrand(…)` for every local pair into `out`, which must
/// already contain the `test × trial` pattern. `coeff`, if given, is a trial
/// space vector whose value at the point is passed first.
fn add_bilinear<T: Real>(
    test: &FunctionSpace<T>,
    trial: &FunctionSpace<T>,
    degree: usize,
    coeff: Option<&[T]>,
    out: &mut CsrMatrix<T>,
    integrand: impl Fn(T, T, [T; 2], T, [T; 2]) -> T,
) {
    let mesh = test.mesh();
    let rule = QuadratureRule::new(mesh.dim(), degree);
    let tt = Tabulation::new(test.element(), &rule);
    let ts = Tabulation::new(trial.element(), &rule);
    let (nt, ns) = (tt.n, ts.n);
    let mut local = vec![T::zero(); nt * ns];
    let mut gt = vec![[T::zero(); 2]; nt];
    let mut gs = vec![[T::zero(); 2]; ns];
    for c in 0..mesh.n_cells() {
        let geo = CellGeometry::new(mesh, c);
        let det = geo.det.abs();
        let (rows, cols) = (test.cell_dofs(c), trial.cell_dofs(c));
        local.fill(T::zero());
        for (q, &w) in rule.weights().iter().enumerate() {
            let w = w * det;
            let vt = &tt.vals[q * nt..(q + 1) * nt];
            let vs = &ts.vals[q * ns..(q + 1) * ns];
            for i in 0..nt {
                gt[i] = geo.grad(tt.grads[q * nt + i]);
            }
            for k in 0..ns {
                gs[k] = geo.grad(ts.grads[q * ns + k]);
            }
            let a = match coeff {
                Some(u) => cols.iter().zip(vs).fold(T::zero(), |acc, (&d, &v)| acc + u[d] * v),
                None => T::zero(),
            };
            for i in 0..nt {
                for k in 0..ns {
                    local[i * ns + k] += w * integrand(a, vt[i], gt[i], vs[k], gs[k]);
                }
            }
        }
        for (i, &r) in rows.iter().enumerate() {
            for (k, &col) in cols.iter().enumerate() {
                out.add_to(r, col, local[i * ns + k]);
            }
        }
    }
}

fn bilinear<T: Real>(
    test: &FunctionSpace<T>,
    trial: &FunctionSpace<T>,
    coeff: Option<&[T]>,
    integrand: impl Fn(T, T, [T; 2], T, [T; 2]) -> T,
) -> Result<CsrMatrix<T>> {
    let mut m = sparsity_pattern(test, trial)?;
    let degree = 2 * test.degree().max(trial.degree()) + 2;
    add_bilinear(test, trial, degree, coeff, &mut m, integrand);
    Ok(m)
}

fn sum_components<T: Real>(g: [T; 2], dim: usize) -> T {
    if dim == 1 {
        g[0]
    } else {
        g[0] + g[1]
    }
}

/// `M[j, k] = (φ_k, χ_j)` with `χ` from `test`, `φ` from `trial`.
pub fn assemble_mass<T: Real>(test: &FunctionSpace<T>, trial: &FunctionSpace<T>) -> Result<CsrMatrix<T>> {
    bilinear(test, trial, None, |_, vt, _, vs, _| vt * vs)
}

/// `K[j, k] = (∇φ_k, ∇χ_j)`.
pub fn assemble_stiffness<T: Real>(test: &FunctionSpace<T>, trial: &FunctionSpace<T>) -> Result<CsrMatrix<T>> {
    bilinear(test, trial, None, |_, _, gt, _, gs| gt[0] * gs[0] + gt[1] * gs[1])
}

/// `C[j, k] = (𝟙·∇φ_k, χ_j)`.
pub fn assemble_convection<T: Real>(test: &FunctionSpace<T>, trial: &FunctionSpace<T>) -> Result<CsrMatrix<T>> {
    let dim = test.mesh().dim();
    bilinear(test, trial, None, move |_, vt, _, _, gs| vt * sum_components(gs, dim))
}

/// `F_j = (f, χ_j)`.
pub fn assemble_load<T: Real>(space: &FunctionSpace<T>, f: impl Fn(&[T]) -> T) -> Vec<T> {
    let mesh = space.mesh();
    let dim = mesh.dim();
    let rule = QuadratureRule::new(dim, 2 * space.degree() + 2);
    let tab = Tabulation::new(space.element(), &rule);
    let n = tab.n;
    let mut out = vec![T::zero(); space.n_dofs()];
    for c in 0..mesh.n_cells() {
        let geo = CellGeometry::new(mesh, c);
        let det = geo.det.abs();
        let dofs = space.cell_dofs(c);
        for (q, (&xi, &w)) in rule.points().iter().zip(rule.weights()).enumerate() {
            let x = geo.map(xi);
            let fw = f(&x[..dim]) * w * det;
            for (i, &d) in dofs.iter().enumerate() {
                out[d] += fw * tab.vals[q * n + i];
            }
        }
    }
    out
}

/// `N_j = ∫ F(u_h) (𝟙·∇χ_j)`, which equals `(∇·g(u_h), χ_j)` for test
/// functions vanishing on the boundary.
pub fn assemble_nonlinear_vector<T: Real>(space: &FunctionSpace<T>, u: &[T], flux: Flux) -> Result<Vec<T>> {
    assemble_nonlinear_vector_mixed(space, space, u, flux)
}

/// [`assemble_nonlinear_vector`] for a field `u` of `trial` tested with `test`.
pub fn assemble_nonlinear_vector_mixed<T: Real>(test: &FunctionSpace<T>, trial: &FunctionSpace<T>, u: &[T], flux: Flux) -> Result<Vec<T>> {
    check_same_mesh(test, trial)?;
    if u.len() != trial.n_dofs() {
        return Err(Error::DimensionMismatch(format!("{} coefficients for {} dofs", u.len(), trial.n_dofs())));
    }
    let mut out = vec![T::zero(); test.n_dofs()];
    if flux == Flux::Off {
        return Ok(out);
    }
    let mesh = test.mesh();
    let dim = mesh.dim();
    let rule = QuadratureRule::new(dim, 3 * test.degree().max(trial.degree()));
    let tt = Tabulation::new(test.element(), &rule);
    let ts = Tabulation::new(trial.element(), &rule);
    let (nt, ns) = (tt.n, ts.n);
    for c in 0..mesh.n_cells() {
        let geo = CellGeometry::new(mesh, c);
        let det = geo.det.abs();
        let (rows, cols) = (test.cell_dofs(c), trial.cell_dofs(c));
        for (q, &w) in rule.weights().iter().enumerate() {
            let vals = &ts.vals[q * ns..(q + 1) * ns];
            let uq = cols.iter().zip(vals).fold(T::zero(), |acc, (&d, &v)| acc + u[d] * v);
            let fw = flux.value(uq) * w * det;
            for (i, &d) in rows.iter().enumerate() {
                out[d] += fw * sum_components(geo.grad(tt.grads[q * nt + i]), dim);
            }
        }
    }
    Ok(out)
}

/// `J[j, k] = ∂N_j/∂U_k = ∫ F'(u_h) φ_k (𝟙·∇χ_j)`.
pub fn assemble_nonlinear_jacobian<T: Real>(space: &FunctionSpace<T>, u: &[T], flux: Flux) -> Result<CsrMatrix<T>> {
    let mut m = sparsity_pattern(space, space)?;
    nonlinear_jacobian_into(space, u, flux, &mut m)?;
    Ok(m)
}

/// Re-assembles the flux Jacobian into an existing [`sparsity_pattern`] matrix.
pub fn nonlinear_jacobian_into<T: Real>(space: &FunctionSpace<T>, u: &[T], flux: Flux, out: &mut CsrMatrix<T>) -> Result<()> {
    flux_matrix_into(space, space, u, flux, out, |f, a| f.derivative(a))
}

/// [`nonlinear_jacobian_into`] for a field of `trial` tested with `test`.
pub fn nonlinear_jacobian_mixed_into<T: Real>(
    test: &FunctionSpace<T>,
    trial: &FunctionSpace<T>,
    u: &[T],
    flux: Flux,
    out: &mut CsrMatrix<T>,
) -> Result<()> {
    flux_matrix_into(test, trial, u, flux, out, |f, a| f.derivative(a))
}

/// `S[j, k] = ∫ (F(u_h)/u_h) φ_k (𝟙·∇χ_j)`, so that `S(U)·U = N(U)`.
pub fn picard_matrix_into<T: Real>(space: &FunctionSpace<T>, u: &[T], flux: Flux, out: &mut CsrMatrix<T>) -> Result<()> {
    flux_matrix_into(space, space, u, flux, out, |f, a| f.secant(a))
}

/// [`picard_matrix_into`] for a field of `trial` tested with `test`.
pub fn picard_matrix_mixed_into<T: Real>(
    test: &FunctionSpace<T>,
    trial: &FunctionSpace<T>,
    u: &[T],
    flux: Flux,
    out: &mut CsrMatrix<T>,
) -> Result<()> {
    flux_matrix_into(test, trial, u, flux, out, |f, a| f.secant(a))
}

fn flux_matrix_into<T: Real>(
    test: &FunctionSpace<T>,
    trial: &FunctionSpace<T>,
    u: &[T],
    flux: Flux,
    out: &mut CsrMatrix<T>,
    coeff: impl Fn(Flux, T) -> T,
) -> Result<()> {
    check_same_mesh(test, trial)?;
    if u.len() != trial.n_dofs() || out.n_rows() != test.n_dofs() || out.n_cols() != trial.n_dofs() {
        return Err(Error::DimensionMismatch("flux matrix sizes disagree with the spaces".into()));
    }
    out.fill_zero();
    if flux == Flux::Off {
        return Ok(());
    }
    let dim = test.mesh().dim();
    let degree = 3 * test.degree().max(trial.degree());
    add_bilinear(test, trial, degree, Some(u), out, move |a, _, gt, vs, _| coeff(flux, a) * vs * sum_components(gt, dim));
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::fem::apply_dirichlet;
    use crate::mesh::{generate_interval_mesh, generate_rect_mesh, Mesh, Rect};
    use crate::sparse::factor_solve;

    fn single_triangle(p: [[f64; 2]; 3]) -> Arc<Mesh<f64>> {
        Arc::new(Mesh::from_parts(2, p.to_vec(), vec![vec![0, 1, 2]], None).unwrap())
    }

    fn assert_dense_eq(a: &CsrMatrix<f64>, b: &[[f64; 3]; 3], tol: f64) {
        let d = a.to_dense();
        for i in 0..3 {
            for j in 0..3 {
                assert!((d[i][j] - b[i][j]).abs() < tol, "({i},{j}): {} vs {}", d[i][j], b[i][j]);
            }
        }
    }

    #[test]
    fn p1_triangle_mass_matrix() {
        let m = single_triangle([[0.3, 0.1], [2.0, 0.4], [0.9, 1.7]]);
        let area = m.cell_measure(0);
        let s = FunctionSpace::new(m, 1).unwrap();
        let mass = assemble_mass(&s, &s).unwrap();
        let a = area / 12.0;
        assert_dense_eq(&mass, &[[2.0 * a, a, a], [a, 2.0 * a, a], [a, a, 2.0 * a]], 1e-15);
    }

    #[test]
    fn p1_unit_right_triangle_stiffness() {
        let m = single_triangle([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let s = FunctionSpace::new(m, 1).unwrap();
        let k = assemble_stiffness(&s, &s).unwrap();
        assert_dense_eq(&k, &[[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]], 1e-15);
    }

    #[test]
    fn p1_segment_mass_matrix() {
        let m = Arc::new(generate_interval_mesh::<f64>(1, 0.5, 2.0).unwrap());
        let s = FunctionSpace::new(m, 1).unwrap();
        let d = assemble_mass(&s, &s).unwrap().to_dense();
        let l6 = 1.5 / 6.0;
        assert!((d[0][0] - 2.0 * l6).abs() < 1e-15 && (d[0][1] - l6).abs() < 1e-15);
        assert!((d[1][1] - 2.0 * l6).abs() < 1e-15 && (d[1][0] - l6).abs() < 1e-15);
    }

    #[test]
    fn mass_sums_to_measure_and_stiffness_kills_constants() {
        let m = Arc::new(generate_rect_mesh(3, 4, Rect::new(0.0, 2.0, -1.0, 0.5)).unwrap());
        for deg in 1..=2 {
            let s = FunctionSpace::new(m.clone(), deg).unwrap();
            let mass = assemble_mass(&s, &s).unwrap();
            assert!((mass.values().iter().sum::<f64>() - 3.0).abs() < 1e-13);
            assert!(mass.is_symmetric(1e-15));
            let k = assemble_stiffness(&s, &s).unwrap();
            let ones = vec![1.0; s.n_dofs()];
            assert!(k.spmv(&ones).unwrap().iter().all(|v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn mixed_blocks_are_transposes() {
        let m = Arc::new(generate_rect_mesh(3, 3, Rect::<f64>::unit()).unwrap());
        let p2 = FunctionSpace::new(m.clone(), 2).unwrap();
        let p1 = FunctionSpace::new(m, 1).unwrap();
        let kup = assemble_stiffness(&p2, &p1).unwrap();
        let kpu = assemble_stiffness(&p1, &p2).unwrap();
        assert_eq!((kup.n_rows(), kup.n_cols()), (p2.n_dofs(), p1.n_dofs()));
        let t = kup.transpose();
        for r in 0..kpu.n_rows() {
            for (c, v) in kpu.row(r) {
                assert!((t.get(r, c) - v).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn flux_jacobian_matches_finite_differences() {
        for (m, deg) in [
            (Arc::new(generate_rect_mesh(3, 2, Rect::<f64>::unit()).unwrap()), 2),
            (Arc::new(generate_rect_mesh(3, 2, Rect::<f64>::unit()).unwrap()), 1),
            (Arc::new(generate_interval_mesh::<f64>(5, 0.0, 1.0).unwrap()), 2),
        ] {
            let s = FunctionSpace::new(m, deg).unwrap();
            let u: Vec<f64> = (0..s.n_dofs()).map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.13).collect();
            let jac = assemble_nonlinear_jacobian(&s, &u, Flux::Burgers).unwrap().to_dense();
            let eps = 1e-6;
            for k in 0..s.n_dofs() {
                let (mut up, mut um) = (u.clone(), u.clone());
                up[k] += eps;
                um[k] -= eps;
                let np = assemble_nonlinear_vector(&s, &up, Flux::Burgers).unwrap();
                let nm = assemble_nonlinear_vector(&s, &um, Flux::Burgers).unwrap();
                for j in 0..s.n_dofs() {
                    let fd = (np[j] - nm[j]) / (2.0 * eps);
                    assert!((fd - jac[j][k]).abs() < 1e-6, "deg {deg} J[{j},{k}]");
                }
            }
        }
    }

    #[test]
    fn nonlinear_vector_integrates_divergence_by_parts() {
        // for test functions vanishing on ∂Ω: ∫F(u)(𝟙·∇χ) = −∫F'(u)(𝟙·∇u) χ
        let m = Arc::new(generate_rect_mesh(4, 3, Rect::<f64>::unit()).unwrap());
        let s = FunctionSpace::new(m, 2).unwrap();
        let u = s.interpolate(|x| 0.3 + x[0] * x[0] - 0.7 * x[0] * x[1]);
        let n = assemble_nonlinear_vector(&s, &u, Flux::Burgers).unwrap();
        let mut c = sparsity_pattern(&s, &s).unwrap();
        add_bilinear(&s, &s, 6, Some(&u), &mut c, |a, vt, _, _, gs| (1.0 + a) * vt * (gs[0] + gs[1]));
        let cu = c.spmv(&u).unwrap();
        for j in 0..s.n_dofs() {
            if !s.is_constrained(j) {
                assert!((n[j] + cu[j]).abs() < 1e-13, "dof {j}: {} vs {}", n[j], -cu[j]);
            }
        }
    }

    #[test]
    fn linear_flux_vector_is_minus_convection_product() {
        let m = Arc::new(generate_interval_mesh::<f64>(6, 0.0, 1.0).unwrap());
        let s = FunctionSpace::new(m, 2).unwrap();
        let u = s.interpolate(|x| x[0] * (1.0 - x[0]));
        let n = assemble_nonlinear_vector(&s, &u, Flux::Linear).unwrap();
        let cu = assemble_convection(&s, &s).unwrap().spmv(&u).unwrap();
        for j in 0..s.n_dofs() {
            if !s.is_constrained(j) {
                assert!((n[j] + cu[j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn patch_test_reproduces_linear_field() {
        // distorted interior node: a discrete harmonic solve must still give x + y exactly
        let mut coords: Vec<[f64; 2]> = Vec::new();
        for j in 0..=2 {
            for i in 0..=2 {
                coords.push([i as f64 * 0.5, j as f64 * 0.5]);
            }
        }
        coords[4] = [0.61, 0.37];
        let cells =
            vec![vec![0, 1, 4], vec![0, 4, 3], vec![1, 2, 5], vec![1, 5, 4], vec![3, 4, 7], vec![3, 7, 6], vec![4, 5, 8], vec![4, 8, 7]];
        let m = Arc::new(Mesh::new_checked(2, coords, cells, None).unwrap());
        for deg in 1..=2 {
            let s = FunctionSpace::new(m.clone(), deg).unwrap();
            let k = assemble_stiffness(&s, &s).unwrap();
            let exact = s.interpolate(|x| x[0] + x[1]);
            let mut b = vec![0.0; s.n_dofs()];
            let g: Vec<f64> = s.constrained_dofs().iter().map(|&i| exact[i]).collect();
            let a = apply_dirichlet(&k, &mut b, s.constrained_dofs(), &g).unwrap();
            let u = factor_solve(&a, &b).unwrap();
            for (x, e) in u.iter().zip(&exact) {
                assert!((x - e).abs() < 1e-10, "degree {deg}");
            }
        }
    }

    #[test]
    fn spaces_on_different_meshes_are_rejected() {
        let a = FunctionSpace::new(Arc::new(generate_interval_mesh::<f64>(3, 0.0, 1.0).unwrap()), 1).unwrap();
        let b = FunctionSpace::new(Arc::new(generate_interval_mesh::<f64>(3, 0.0, 1.0).unwrap()), 1).unwrap();
        assert!(assemble_mass(&a, &b).is_err());
    }

    #[test]
    fn load_of_constant_sums_to_measure() {
        let m = Arc::new(generate_rect_mesh(2, 5, Rect::<f64>::unit()).unwrap());
        let s = FunctionSpace::new(m, 2).unwrap();
        let f = assemble_load(&s, |_| 2.0);
        assert!((f.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }

    #[test]
    fn p2_stiffness_gives_second_difference_of_quadratic() {
        // (∇x², ∇χ_j) = −(2, χ_j) for interior test functions
        let m = Arc::new(generate_interval_mesh::<f64>(5, 0.0, 1.0).unwrap());
        let s = FunctionSpace::new(m, 2).unwrap();
        let ku = assemble_stiffness(&s, &s).unwrap().spmv(&s.interpolate(|x| x[0] * x[0])).unwrap();
        let load = assemble_load(&s, |_| -2.0);
        for j in 0..s.n_dofs() {
            if !s.is_constrained(j) {
                assert!((ku[j] - load[j]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn load_of_basis_function_is_mass_column() {
        let m = Arc::new(generate_interval_mesh::<f64>(4, 0.0, 1.0).unwrap());
        let s = FunctionSpace::new(m, 2).unwrap();
        let mass = assemble_mass(&s, &s).unwrap();
        // φ_k for the midpoint of cell 1 (dof n_nodes + 1): 4λ0λ1 on [0.25, 0.5]
        let k = 5 + 1;
        let phi = |x: &[f64]| {
            let t = (x[0] - 0.25) / 0.25;
            if (0.0..=1.0).contains(&t) {
                4.0 * t * (1.0 - t)
            } else {
                0.0
            }
        };
        let f = assemble_load(&s, phi);
        for j in 0..s.n_dofs() {
            assert!((f[j] - mass.get(j, k)).abs() < 1e-15);
        }
        assert!(assemble_load(&s, |_| 0.0).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn nonlinear_vector_special_cases() {
        assert_eq!(Flux::Burgers.value(2.0), 4.0); // g(2) = −4
        let m = Arc::new(generate_interval_mesh::<f64>(7, 0.0, 1.0).unwrap());
        let s = FunctionSpace::new(m, 2).unwrap();
        let zero = assemble_nonlinear_vector(&s, &vec![0.0; s.n_dofs()], Flux::Burgers).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
        let c = assemble_nonlinear_vector(&s, &vec![0.8; s.n_dofs()], Flux::Burgers).unwrap();
        for j in 0..s.n_dofs() {
            if !s.is_constrained(j) {
                assert!(c[j].abs() < 1e-14);
            }
        }
    }

    #[test]
    fn jacobian_at_zero_is_transposed_convection() {
        let m = Arc::new(generate_rect_mesh(2, 3, Rect::<f64>::unit()).unwrap());
        let s = FunctionSpace::new(m, 2).unwrap();
        let j0 = assemble_nonlinear_jacobian(&s, &vec![0.0; s.n_dofs()], Flux::Burgers).unwrap();
        let c = assemble_convection(&s, &s).unwrap();
        for r in 0..s.n_dofs() {
            for (col, v) in j0.row(r) {
                assert!((v - c.get(col, r)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn jacobian_action_matches_directional_derivative() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let m = Arc::new(generate_rect_mesh(3, 3, Rect::<f64>::unit()).unwrap());
        let s = FunctionSpace::new(m, 2).unwrap();
        let n = s.n_dofs();
        for _ in 0..10 {
            let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let jv = assemble_nonlinear_jacobian(&s, &u, Flux::Burgers).unwrap().spmv(&v).unwrap();
            let eps = 1e-5;
            let shift = |sgn: f64| -> Vec<f64> { u.iter().zip(&v).map(|(a, b)| a + sgn * eps * b).collect() };
            let np = assemble_nonlinear_vector(&s, &shift(1.0), Flux::Burgers).unwrap();
            let nm = assemble_nonlinear_vector(&s, &shift(-1.0), Flux::Burgers).unwrap();
            let diff: f64 = (0..n).map(|j| ((np[j] - nm[j]) / (2.0 * eps) - jv[j]).powi(2)).sum::<f64>().sqrt();
            let norm: f64 = jv.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(diff <= 1e-6 * norm, "{diff} vs {norm}");
        }
    }

    #[test]
    fn mass_matrix_factors_on_512_cells() {
        let m = Arc::new(generate_rect_mesh(16, 16, Rect::<f64>::unit()).unwrap());
        for deg in 1..=2 {
            let s = FunctionSpace::new(m.clone(), deg).unwrap();
            let mass = assemble_mass(&s, &s).unwrap();
            assert!(crate::sparse::SparseLu::factor(&mass).is_ok());
        }
    }

    #[test]
    fn picard_matrix_reproduces_vector() {
        let m = Arc::new(generate_rect_mesh(3, 2, Rect::<f64>::unit()).unwrap());
        let s = FunctionSpace::new(m, 2).unwrap();
        let u = s.interpolate(|x| (x[0] - 0.3) * (x[1] + 0.2));
        let mut pm = sparsity_pattern(&s, &s).unwrap();
        picard_matrix_into(&s, &u, Flux::Burgers, &mut pm).unwrap();
        let su = pm.spmv(&u).unwrap();
        let n = assemble_nonlinear_vector(&s, &u, Flux::Burgers).unwrap();
        for (a, b) in su.iter().zip(&n) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
