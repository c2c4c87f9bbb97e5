use crate::error::{Error, Result};
use crate::scalar::Real;

use super::Mesh;

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub x0: T,
    pub x1: T,
    pub y0: T,
    pub y1: T,
}

impl<T: Real> Rect<T> {
    pub fn new(x0: T, x1: T, y0: T, y1: T) -> Self {
        Self { x0, x1, y0, y1 }
    }

    pub fn unit() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::one())
    }

    pub fn area(&self) -> T {
        (self.x1 - self.x0) * (self.y1 - self.y0)
    }
}

/// Uniform partition of `[a, b]` into `n` segments; both endpoints are boundary.
pub fn generate_interval_mesh<T: Real>(n: usize, a: T, b: T) -> Result<Mesh<T>> {
    if n == 0 {
        return Err(Error::InvalidArgument("interval mesh needs n >= 1".into()));
    }
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidArgument(format!("interval [{a}, {b}] is empty")));
    }
    let nf = T::from_usize_lossy(n);
    let coords = (0..=n).map(|i| [a + (b - a) * T::from_usize_lossy(i) / nf, T::zero()]).collect();
    let cells = (0..n).map(|i| vec![i, i + 1]).collect();
    Mesh::from_parts(1, coords, cells, None)
}

/// Structured triangulation of a rectangle: `nx × ny` grid cells, each split
/// along its (+,+) diagonal into two positively oriented triangles.
pub fn generate_rect_mesh<T: Real>(nx: usize, ny: usize, rect: Rect<T>) -> Result<Mesh<T>> {
    if nx == 0 || ny == 0 {
        return Err(Error::InvalidArgument("rectangle mesh needs nx, ny >= 1".into()));
    }
    if !(rect.x0 < rect.x1 && rect.y0 < rect.y1) {
        return Err(Error::InvalidArgument("degenerate rectangle".into()));
    }
    let (fx, fy) = (T::from_usize_lossy(nx), T::from_usize_lossy(ny));
    let mut coords = Vec::with_capacity((nx + 1) * (ny + 1));
    for j in 0..=ny {
        let y = rect.y0 + (rect.y1 - rect.y0) * T::from_usize_lossy(j) / fy;
        for i in 0..=nx {
            coords.push([rect.x0 + (rect.x1 - rect.x0) * T::from_usize_lossy(i) / fx, y]);
        }
    }
    let idx = |i: usize, j: usize| j * (nx + 1) + i;
    let mut cells = Vec::with_capacity(2 * nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            let (n00, n10, n01, n11) = (idx(i, j), idx(i + 1, j), idx(i, j + 1), idx(i + 1, j + 1));
            cells.push(vec![n00, n10, n11]);
            cells.push(vec![n00, n11, n01]);
        }
    }
    Mesh::from_parts(2, coords, cells, None)
}

/// L-shaped domain `[0,1]² \ (½,1]×(½,1]` with `2m` grid cells per unit length.
pub fn generate_lshape_mesh<T: Real>(m: usize) -> Result<Mesh<T>> {
    if m == 0 {
        return Err(Error::InvalidArgument("L-shape mesh needs m >= 1".into()));
    }
    let n = 2 * m;
    let nf = T::from_usize_lossy(n);
    let keep = |i: usize, j: usize| !(i >= m && j >= m);
    let mut id = vec![usize::MAX; (n + 1) * (n + 1)];
    let mut coords = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            // vertex is used if any adjacent grid cell is kept
            let used = [(i.wrapping_sub(1), j.wrapping_sub(1)), (i, j.wrapping_sub(1)), (i.wrapping_sub(1), j), (i, j)]
                .iter()
                .any(|&(ci, cj)| ci < n && cj < n && keep(ci, cj));
            if used {
                id[j * (n + 1) + i] = coords.len();
                coords.push([T::from_usize_lossy(i) / nf, T::from_usize_lossy(j) / nf]);
            }
        }
    }
    let v = |i: usize, j: usize| id[j * (n + 1) + i];
    let mut cells = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if keep(i, j) {
                cells.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
                cells.push(vec![v(i, j), v(i + 1, j + 1), v(i, j + 1)]);
            }
        }
    }
    Mesh::new_checked(2, coords, cells, None)
}

/// Polygonal approximation of a disk: concentric rings of `6r` nodes joined
/// by strips of triangles (`6 · rings²` cells in total).
pub fn generate_disk_mesh<T: Real>(rings: usize, center: [T; 2], radius: T) -> Result<Mesh<T>> {
    if rings == 0 || !(radius > T::zero()) {
        return Err(Error::InvalidArgument("disk mesh needs rings >= 1 and radius > 0".into()));
    }
    let mut coords = vec![center];
    let mut ring_start = vec![0usize];
    for r in 1..=rings {
        ring_start.push(coords.len());
        let count = 6 * r;
        let rad = radius * T::from_usize_lossy(r) / T::from_usize_lossy(rings);
        for k in 0..count {
            let theta = T::TAU() * T::from_usize_lossy(k) / T::from_usize_lossy(count);
            coords.push([center[0] + rad * theta.cos(), center[1] + rad * theta.sin()]);
        }
    }
    let mut cells = Vec::new();
    for j in 0..6 {
        cells.push(vec![0, 1 + j, 1 + (j + 1) % 6]);
    }
    for r in 2..=rings {
        let (a, b) = (6 * (r - 1), 6 * r);
        let (inner, outer) = (ring_start[r - 1], ring_start[r]);
        let (mut i, mut j) = (0usize, 0usize);
        while i < a || j < b {
            // compare angles i+1/a and j+1/b without rounding: (i+1)·b vs (j+1)·a
            let advance_outer = j < b && (i == a || (j + 1) * a <= (i + 1) * b);
            if advance_outer {
                cells.push(vec![inner + i % a, outer + j, outer + (j + 1) % b]);
                j += 1;
            } else {
                cells.push(vec![inner + i % a, outer + j % b, inner + (i + 1) % a]);
                i += 1;
            }
        }
    }
    Mesh::new_checked(2, coords, cells, None)
}
