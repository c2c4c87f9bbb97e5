use std::collections::HashMap;
use std::fmt;

use crate::scalar::Real;

use super::Mesh;

/// One broken mesh invariant. Node and cell numbers are 1-based, as in files.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFiniteCoordinate { node: usize },
    RepeatedVertex { cell: usize },
    Orientation { cell: usize },
    Degenerate { cell: usize },
    EdgeMultiplicity { a: usize, b: usize, count: usize },
    HangingNode { node: usize, a: usize, b: usize },
    OpenBoundary { node: usize },
    UnmarkedBoundaryNode { node: usize },
    MarkedInteriorNode { node: usize },
    Overlap { cell: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFiniteCoordinate { node } => write!(f, "node {node} has a non-finite coordinate"),
            Self::RepeatedVertex { cell } => write!(f, "cell {cell} repeats a vertex"),
            Self::Orientation { cell } => write!(f, "cell {cell} is negatively oriented"),
            Self::Degenerate { cell } => write!(f, "cell {cell} has zero measure"),
            Self::EdgeMultiplicity { a, b, count } => {
                write!(f, "nonconforming: edge {a}-{b} is shared by {count} cells")
            }
            Self::HangingNode { node, a, b } => {
                write!(f, "nonconforming: node {node} hangs on edge {a}-{b}")
            }
            Self::OpenBoundary { node } => write!(f, "boundary is not closed at node {node}"),
            Self::UnmarkedBoundaryNode { node } => write!(f, "boundary node {node} carries no marker"),
            Self::MarkedInteriorNode { node } => write!(f, "interior node {node} carries a boundary marker"),
            Self::Overlap { cell } => write!(f, "nonconforming: cell {cell} overlaps a neighbour"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeshReport<T> {
    pub violations: Vec<Violation>,
    /// min over cells of diam(J)/h
    pub min_quality: T,
    /// max over cells of diam(J)/h (1 by definition of h)
    pub max_quality: T,
}

/// Checks conformity, orientation and boundary closure. Never fails; an
/// empty violation list means the mesh is usable.
pub fn validate_mesh<T: Real>(mesh: &Mesh<T>) -> MeshReport<T> {
    let mut violations = Vec::new();
    for (i, node) in mesh.nodes().iter().enumerate() {
        if node.coords[..mesh.dim()].iter().any(|c| !c.is_finite()) {
            violations.push(Violation::NonFiniteCoordinate { node: i + 1 });
        }
    }
    let scale = mesh.h().max(T::min_positive_value());
    let tiny = T::epsilon() * T::lit(16.0) * scale.powi(mesh.dim() as i32);
    for (c, cell) in mesh.cells().iter().enumerate() {
        let v = cell.vertex_ids();
        if (0..v.len()).any(|i| (i + 1..v.len()).any(|j| v[i] == v[j])) {
            violations.push(Violation::RepeatedVertex { cell: c + 1 });
            continue;
        }
        let m = mesh.signed_measure(c);
        if m.abs() <= tiny {
            violations.push(Violation::Degenerate { cell: c + 1 });
        } else if m < T::zero() {
            violations.push(Violation::Orientation { cell: c + 1 });
        }
    }

    let geometric = match mesh.dim() {
        1 => check_1d(mesh, &mut violations),
        _ => check_2d(mesh, &mut violations),
    };
    for &n in &geometric {
        if !mesh.boundary().contains_key(&n) {
            violations.push(Violation::UnmarkedBoundaryNode { node: n + 1 });
        }
    }
    for &n in mesh.boundary().keys() {
        if geometric.binary_search(&n).is_err() {
            violations.push(Violation::MarkedInteriorNode { node: n + 1 });
        }
    }

    let (mut lo, mut hi) = (T::infinity(), T::zero());
    for c in 0..mesh.n_cells() {
        let q = mesh.cell_diameter(c) / scale;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    if mesh.n_cells() == 0 {
        lo = T::zero();
    }
    MeshReport { violations, min_quality: lo, max_quality: hi }
}

/// Returns the sorted geometric boundary nodes.
fn check_1d<T: Real>(mesh: &Mesh<T>, out: &mut Vec<Violation>) -> Vec<usize> {
    let mut count = vec![0usize; mesh.n_nodes()];
    for cell in mesh.cells() {
        for &v in cell.vertex_ids() {
            count[v] += 1;
        }
    }
    for (n, &k) in count.iter().enumerate() {
        if k > 2 {
            out.push(Violation::EdgeMultiplicity { a: n + 1, b: n + 1, count: k });
        }
    }
    // segments sorted by left end must not overlap
    let mut spans: Vec<(T, T, usize)> = mesh
        .cells()
        .iter()
        .enumerate()
        .map(|(c, cell)| {
            let v = cell.vertex_ids();
            let (a, b) = (mesh.coords(v[0])[0], mesh.coords(v[1])[0]);
            (a.min(b), a.max(b), c)
        })
        .collect();
    spans.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(std::cmp::Ordering::Equal));
    for w in spans.windows(2) {
        if w[1].0 < w[0].1 {
            out.push(Violation::Overlap { cell: w[1].2 + 1 });
        }
    }
    (0..mesh.n_nodes()).filter(|&n| count[n] == 1).collect()
}

fn check_2d<T: Real>(mesh: &Mesh<T>, out: &mut Vec<Violation>) -> Vec<usize> {
    let mut boundary_degree: HashMap<usize, usize> = HashMap::new();
    let mut boundary_edges = Vec::new();
    for (e, &[a, b]) in mesh.edges().iter().enumerate() {
        match mesh.edge_cell_count()[e] {
            1 => {
                *boundary_degree.entry(a).or_insert(0) += 1;
                *boundary_degree.entry(b).or_insert(0) += 1;
                boundary_edges.push([a, b]);
            }
            2 => {}
            k => out.push(Violation::EdgeMultiplicity { a: a + 1, b: b + 1, count: k }),
        }
    }
    // a vertex lying inside a boundary edge means a neighbour was split without this cell
    let eps = T::epsilon() * T::lit(1e3);
    let mut used = vec![false; mesh.n_nodes()];
    for cell in mesh.cells() {
        for &v in cell.vertex_ids() {
            used[v] = true;
        }
    }
    for &[a, b] in &boundary_edges {
        let (p, q) = (mesh.point(a), mesh.point(b));
        let len2 = (q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2);
        let (xmin, xmax) = (p[0].min(q[0]), p[0].max(q[0]));
        let (ymin, ymax) = (p[1].min(q[1]), p[1].max(q[1]));
        let pad = len2.sqrt() * eps;
        for n in 0..mesh.n_nodes() {
            if n == a || n == b || !used[n] {
                continue;
            }
            let r = mesh.point(n);
            if r[0] < xmin - pad || r[0] > xmax + pad || r[1] < ymin - pad || r[1] > ymax + pad {
                continue;
            }
            let cross = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
            let t = ((r[0] - p[0]) * (q[0] - p[0]) + (r[1] - p[1]) * (q[1] - p[1])) / len2;
            if cross.abs() <= eps * len2 && t > eps && t < T::one() - eps {
                out.push(Violation::HangingNode { node: n + 1, a: a + 1, b: b + 1 });
            }
        }
    }
    let mut nodes: Vec<usize> = boundary_degree.keys().copied().collect();
    nodes.sort_unstable();
    for &n in &nodes {
        if !boundary_degree[&n].is_multiple_of(2) {
            out.push(Violation::OpenBoundary { node: n + 1 });
        }
    }
    nodes
}
