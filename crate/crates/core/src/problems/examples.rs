use crate::scalar::Real;

use super::ExactSolution;

/// `u = e^{−t} x³(1−x)³` on `(0, 1)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CubicBump;

impl CubicBump {
    /// `φ, φ′, φ″, φ⁗` of `φ = x³ − 3x⁴ + 3x⁵ − x⁶`.
    pub fn profile<T: Real>(x: T) -> [T; 4] {
        let c = T::lit;
        let x2 = x * x;
        let x3 = x2 * x;
        let x4 = x3 * x;
        let x5 = x4 * x;
        let x6 = x5 * x;
        [
            x3 - c(3.0) * x4 + c(3.0) * x5 - x6,
            c(3.0) * x2 - c(12.0) * x3 + c(15.0) * x4 - c(6.0) * x5,
            c(6.0) * x - c(36.0) * x2 + c(60.0) * x3 - c(30.0) * x4,
            c(-72.0) + c(360.0) * x - c(360.0) * x2,
        ]
    }

    /// `f = e^{−t}(−φ − φ⁗ − αφ″) + (1 + u) u_x`
    pub fn forcing<T: Real>(x: &[T], t: T, alpha: T) -> T {
        let [phi, d1, d2, d4] = Self::profile(x[0]);
        let e = (-t).exp();
        let u = e * phi;
        e * (-phi - d4 - alpha * d2) + (T::one() + u) * e * d1
    }
}

impl<T: Real> ExactSolution<T> for CubicBump {
    fn dim(&self) -> usize {
        1
    }
    fn u(&self, x: &[T], t: T) -> T {
        (-t).exp() * Self::profile(x[0])[0]
    }
    fn grad_u(&self, x: &[T], t: T) -> [T; 2] {
        [(-t).exp() * Self::profile(x[0])[1], T::zero()]
    }
    fn laplacian_u(&self, x: &[T], t: T) -> T {
        (-t).exp() * Self::profile(x[0])[2]
    }
    fn u_t(&self, x: &[T], t: T) -> T {
        -self.u(x, t)
    }
    fn laplacian_u_t(&self, x: &[T], t: T) -> T {
        -ExactSolution::<T>::laplacian_u(self, x, t)
    }
    fn bilaplacian_u_t(&self, x: &[T], t: T) -> T {
        -(-t).exp() * Self::profile(x[0])[3]
    }
}

/// `u = e^{−t} sin(2πx) sin(2πy)` on the unit square.
#[derive(Debug, Clone, Copy, Default)]
pub struct SineProduct;

impl SineProduct {
    fn parts<T: Real>(x: &[T], t: T) -> (T, T, T, T, T) {
        let w = T::TAU();
        let (sx, cx) = (w * x[0]).sin_cos();
        let (sy, cy) = (w * x[1]).sin_cos();
        ((-t).exp(), sx, cx, sy, cy)
    }

    /// `f = u(−1 − 64π⁴ + 8π²α) + (1 + u)(u_x + u_y)`
    pub fn forcing<T: Real>(x: &[T], t: T, alpha: T) -> T {
        let (e, sx, cx, sy, cy) = Self::parts(x, t);
        let w = T::TAU();
        let pi2 = T::PI() * T::PI();
        let u = e * sx * sy;
        let ux = e * w * cx * sy;
        let uy = e * w * sx * cy;
        u * (-T::one() - T::lit(64.0) * pi2 * pi2 + T::lit(8.0) * pi2 * alpha) + (T::one() + u) * (ux + uy)
    }
}

impl<T: Real> ExactSolution<T> for SineProduct {
    fn dim(&self) -> usize {
        2
    }
    fn u(&self, x: &[T], t: T) -> T {
        let (e, sx, _, sy, _) = Self::parts(x, t);
        e * sx * sy
    }
    fn grad_u(&self, x: &[T], t: T) -> [T; 2] {
        let (e, sx, cx, sy, cy) = Self::parts(x, t);
        let w = T::TAU();
        [e * w * cx * sy, e * w * sx * cy]
    }
    fn laplacian_u(&self, x: &[T], t: T) -> T {
        -T::lit(8.0) * T::PI() * T::PI() * self.u(x, t)
    }
    fn u_t(&self, x: &[T], t: T) -> T {
        -self.u(x, t)
    }
    fn laplacian_u_t(&self, x: &[T], t: T) -> T {
        -ExactSolution::<T>::laplacian_u(self, x, t)
    }
    fn bilaplacian_u_t(&self, x: &[T], t: T) -> T {
        let pi2 = T::PI() * T::PI();
        -T::lit(64.0) * pi2 * pi2 * self.u(x, t)
    }
}

/// `u = exp(2x + 2y + 2t)`, nonzero on the whole boundary.
#[derive(Debug, Clone, Copy, Default)]
pub struct Exponential;

impl Exponential {
    /// `f = u(130 − 8α) + 4u(1 + u)`
    pub fn forcing<T: Real>(x: &[T], t: T, alpha: T) -> T {
        let u = <Self as ExactSolution<T>>::u(&Self, x, t);
        u * (T::lit(130.0) - T::lit(8.0) * alpha) + T::lit(4.0) * u * (T::one() + u)
    }
}

impl<T: Real> ExactSolution<T> for Exponential {
    fn dim(&self) -> usize {
        2
    }
    fn u(&self, x: &[T], t: T) -> T {
        let two = T::lit(2.0);
        (two * x[0] + two * x[1] + two * t).exp()
    }
    fn grad_u(&self, x: &[T], t: T) -> [T; 2] {
        let g = T::lit(2.0) * self.u(x, t);
        [g, g]
    }
    fn laplacian_u(&self, x: &[T], t: T) -> T {
        T::lit(8.0) * self.u(x, t)
    }
    fn u_t(&self, x: &[T], t: T) -> T {
        T::lit(2.0) * self.u(x, t)
    }
    fn laplacian_u_t(&self, x: &[T], t: T) -> T {
        T::lit(16.0) * self.u(x, t)
    }
    fn bilaplacian_u_t(&self, x: &[T], t: T) -> T {
        T::lit(128.0) * self.u(x, t)
    }
}

/// `G = exp(−((x−½)² + (y−½)²)/β)` and `ΔG = G(4r²/β² − 4/β)`.
pub fn gaussian<T: Real>(x: &[T], beta: T) -> (T, T) {
    let half = T::lit(0.5);
    let r2 = (x[0] - half).powi(2) + (x[1] - half).powi(2);
    let g = (-r2 / beta).exp();
    (g, g * (T::lit(4.0) * r2 / (beta * beta) - T::lit(4.0) / beta))
}
