use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::ProblemCatalogEntry;

const STEP: f64 = 1e-3;

/// Worst relative PDE residual of the hand-coded forcing over random samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForcingCheck {
    pub samples: usize,
    pub max_relative_residual: f64,
    pub worst_point: [f64; 3],
}

/// Richardson-extrapolated central difference of `g` at 0: `(4D(h/2) − D(h))/3`.
fn derivative(g: impl Fn(f64) -> f64, h: f64) -> f64 {
    let d = |s: f64| (g(s) - g(-s)) / (2.0 * s);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// Richardson-extrapolated five-point (or three-point) Laplacian.
fn fd_laplacian(g: impl Fn(&[f64]) -> f64, x: [f64; 2], dim: usize, h: f64) -> f64 {
    let lap = |s: f64| {
        let c = g(&x);
        (0..dim)
            .map(|d| {
                let (mut xp, mut xm) = (x, x);
                xp[d] += s;
                xm[d] -= s;
                (g(&xp) - 2.0 * c + g(&xm)) / (s * s)
            })
            .sum::<f64>()
    };
    (4.0 * lap(h / 2.0) - lap(h)) / 3.0
}

fn sample_points(entry: &ProblemCatalogEntry<f64>, samples: usize, seed: u64) -> Vec<([f64; 2], f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = 2.0 * STEP;
    (0..samples)
        .map(|_| {
            let s = [rng.gen_range(margin..1.0 - margin), rng.gen_range(margin..1.0 - margin)];
            (entry.domain.from_unit(s), rng.gen_range(margin..1.0))
        })
        .collect()
}

/// Checks `f = u_t + Δ²u_t − αΔu − ∇·g(u)` at `samples` random interior points
/// and times in `(0, 1]`, with every derivative of `u` taken by finite
/// differences except `Δu` inside the `Δ²u_t` term.
pub fn verify_forcing(entry: &ProblemCatalogEntry<f64>, samples: usize, seed: u64) -> Result<ForcingCheck> {
    let exact = entry.require_exact()?;
    let forcing = entry.problem.forcing.as_ref().ok_or_else(|| Error::InvalidArgument(format!("{} has no forcing term", entry.name)))?;
    if samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let dim = entry.dim();
    let alpha = entry.problem.alpha;
    let h = STEP;
    let mut check = ForcingCheck { samples, max_relative_residual: 0.0, worst_point: [0.0; 3] };
    for (x, t) in sample_points(entry, samples, seed) {
        let u_t = derivative(|s| exact.u(&x, t + s), h);
        let bilap_u_t = derivative(|s| fd_laplacian(|y| exact.laplacian_u(y, t + s), x, dim, h), h);
        let lap_u = fd_laplacian(|y| exact.u(y, t), x, dim, h);
        let slope: f64 = (0..dim)
            .map(|d| {
                derivative(
                    |s| {
                        let mut y = x;
                        y[d] += s;
                        exact.u(&y, t)
                    },
                    h,
                )
            })
            .sum();
        let div_g = -(1.0 + exact.u(&x, t)) * slope;
        let f = forcing(&x, t);
        let terms = [u_t, bilap_u_t, -alpha * lap_u, -div_g, -f];
        let residual: f64 = terms.iter().sum();
        let scale: f64 = terms.iter().map(|v| v.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
        let rel = residual.abs() / scale;
        if rel > check.max_relative_residual || !rel.is_finite() {
            check.max_relative_residual = rel;
            check.worst_point = [x[0], x[1], t];
        }
    }
    Ok(check)
}

/// Largest relative gap between the closed-form derivatives of an exact
/// solution and their finite-difference counterparts.
pub fn verify_laplacian(entry: &ProblemCatalogEntry<f64>, samples: usize, seed: u64) -> Result<f64> {
    let exact = entry.require_exact()?;
    let dim = entry.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let x = entry.domain.from_unit([rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99)]);
        let t: f64 = rng.gen_range(0.01..1.0);
        let pairs = [
            (exact.laplacian_u(&x, t), fd_laplacian(|y| exact.u(y, t), x, dim, STEP)),
            (exact.u_t(&x, t), derivative(|h| exact.u(&x, t + h), STEP)),
            (exact.laplacian_u_t(&x, t), derivative(|h| exact.laplacian_u(&x, t + h), STEP)),
            (exact.bilaplacian_u_t(&x, t), fd_laplacian(|y| exact.laplacian_u_t(y, t), x, dim, STEP)),
        ];
        for (a, b) in pairs {
            worst = worst.max((a - b).abs() / (1.0 + a.abs()));
        }
    }
    Ok(worst)
}
