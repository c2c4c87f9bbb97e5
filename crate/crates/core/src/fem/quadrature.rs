use crate::scalar::Real;

/// Quadrature on the reference interval `[0, 1]` or triangle `{ξ, η ≥ 0, ξ + η ≤ 1}`.
#[derive(Debug, Clone)]
pub struct QuadratureRule<T> {
    dim: usize,
    degree: usize,
    points: Vec<[T; 2]>,
    weights: Vec<T>,
}

impl<T: Real> QuadratureRule<T> {
    /// Rule exact for polynomials of total degree `degree` on the reference cell of `dim`.
    pub fn new(dim: usize, degree: usize) -> Self {
        match dim {
            1 => Self::interval(degree),
            2 => Self::triangle(degree),
            _ => panic!("quadrature only in 1D or 2D"),
        }
    }

    /// Gauss–Legendre with `⌈(degree + 1) / 2⌉` points.
    pub fn interval(degree: usize) -> Self {
        let n = degree / 2 + 1;
        let (x, w) = gauss_legendre(n);
        Self {
            dim: 1,
            degree,
            points: x.iter().map(|&p| [T::lit(p), T::zero()]).collect(),
            weights: w.iter().map(|&v| T::lit(v)).collect(),
        }
    }

    /// Collapsed (Duffy) tensor Gauss rule: `ξ = s`, `η = t(1 − s)`.
    pub fn triangle(degree: usize) -> Self {
        // the collapsed integrand has degree `degree + 1` in s
        let n = (degree + 2).div_ceil(2).max(1);
        let (x, w) = gauss_legendre(n);
        let mut points = Vec::with_capacity(n * n);
        let mut weights = Vec::with_capacity(n * n);
        for (s, ws) in x.iter().zip(&w) {
            for (t, wt) in x.iter().zip(&w) {
                points.push([T::lit(*s), T::lit(t * (1.0 - s))]);
                weights.push(T::lit(ws * wt * (1.0 - s)));
            }
        }
        Self { dim: 2, degree, points, weights }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[[T; 2]] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on `[0, 1]`, computed in `f64` by Newton
/// iteration on the Legendre polynomial.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        // map [-1, 1] → [0, 1]
        x[i] = 0.5 * (1.0 - z);
        x[n - 1 - i] = 0.5 * (1.0 + z);
        w[i] = 0.5 * wi;
        w[n - 1 - i] = 0.5 * wi;
    }
    (x, w)
}
