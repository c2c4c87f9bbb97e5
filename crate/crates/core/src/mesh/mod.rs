//! Conforming simplicial meshes of intervals and polygonal 2D domains.

mod generate;
mod io;
mod validate;

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub use generate::{generate_disk_mesh, generate_interval_mesh, generate_lshape_mesh, generate_rect_mesh, Rect};
pub use io::{parse_mesh, read_mesh, write_mesh};
pub use validate::{validate_mesh, MeshReport, Violation};

/// Marker carried by boundary nodes where Dirichlet data is imposed.
pub const DIRICHLET: i32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node<T> {
    pub id: usize,
    /// Only the first `dim` entries are meaningful.
    pub coords: [T; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub id: usize,
    vertices: [usize; 3],
    len: u8,
}

impl Cell {
    pub fn new(id: usize, vertex_ids: &[usize]) -> Self {
        assert!(matches!(vertex_ids.len(), 2 | 3), "cells are segments or triangles");
        let mut vertices = [0; 3];
        vertices[..vertex_ids.len()].copy_from_slice(vertex_ids);
        Self { id, vertices, len: vertex_ids.len() as u8 }
    }

    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertices[..self.len as usize]
    }
}

/// Local edge numbering of a triangle: edge `e` joins these two local vertices.
pub const TRIANGLE_EDGES: [[usize; 2]; 3] = [[0, 1], [1, 2], [2, 0]];

/// Simplicial mesh in one or two dimensions, immutable once built.
#[derive(Debug, Clone)]
pub struct Mesh<T> {
    dim: usize,
    nodes: Vec<Node<T>>,
    cells: Vec<Cell>,
    boundary: BTreeMap<usize, i32>,
    h: T,
    edges: Vec<[usize; 2]>,
    edge_cell_count: Vec<usize>,
    cell_edges: Vec<[usize; 3]>,
}

impl<T: Real> Mesh<T> {
    /// Assembles a mesh from raw parts without fixing orientation or checking
    /// conformity (see [`validate_mesh`]). Cells must reference existing nodes.
    /// When `boundary` is `None` every geometric boundary node gets [`DIRICHLET`].
    pub fn from_parts(
        dim: usize,
        coords: Vec<[T; 2]>,
        cell_vertices: Vec<Vec<usize>>,
        boundary: Option<BTreeMap<usize, i32>>,
    ) -> Result<Self> {
        if !matches!(dim, 1 | 2) {
            return Err(Error::InvalidArgument(format!("mesh dimension must be 1 or 2, got {dim}")));
        }
        let mut problems = Vec::new();
        for (c, verts) in cell_vertices.iter().enumerate() {
            if verts.len() != dim + 1 {
                problems.push(format!("cell {} has {} vertices, expected {}", c + 1, verts.len(), dim + 1));
            }
            for &v in verts {
                if v >= coords.len() {
                    problems.push(format!("cell {} references missing node {}", c + 1, v + 1));
                }
            }
        }
        if !problems.is_empty() {
            return Err(Error::InvalidMesh(problems));
        }
        let nodes = coords.into_iter().enumerate().map(|(id, coords)| Node { id, coords }).collect();
        let cells = cell_vertices.iter().enumerate().map(|(id, v)| Cell::new(id, v)).collect();
        let mut mesh = Self {
            dim,
            nodes,
            cells,
            boundary: BTreeMap::new(),
            h: T::zero(),
            edges: Vec::new(),
            edge_cell_count: Vec::new(),
            cell_edges: Vec::new(),
        };
        mesh.build_edges();
        mesh.h = (0..mesh.cells.len()).map(|c| mesh.cell_diameter(c)).fold(T::zero(), T::max);
        mesh.boundary = match boundary {
            Some(b) => b,
            None => mesh.geometric_boundary_nodes().into_iter().map(|n| (n, DIRICHLET)).collect(),
        };
        Ok(mesh)
    }

    /// Like [`Mesh::from_parts`] but flips negatively oriented triangles and
    /// rejects meshes that fail validation.
    pub fn new_checked(
        dim: usize,
        coords: Vec<[T; 2]>,
        mut cell_vertices: Vec<Vec<usize>>,
        boundary: Option<BTreeMap<usize, i32>>,
    ) -> Result<Self> {
        for verts in &mut cell_vertices {
            let oriented = match dim {
                1 if verts.len() == 2 && verts.iter().all(|&v| v < coords.len()) => coords[verts[1]][0] >= coords[verts[0]][0],
                2 if verts.len() == 3 && verts.iter().all(|&v| v < coords.len()) => {
                    signed_area(&coords[verts[0]], &coords[verts[1]], &coords[verts[2]]) >= T::zero()
                }
                _ => true,
            };
            if !oriented {
                let last = verts.len() - 1;
                verts.swap(last - 1, last);
            }
        }
        let mesh = Self::from_parts(dim, coords, cell_vertices, boundary)?;
        let report = validate_mesh(&mesh);
        if report.violations.is_empty() {
            Ok(mesh)
        } else {
            Err(Error::InvalidMesh(report.violations.iter().map(ToString::to_string).collect()))
        }
    }

    fn build_edges(&mut self) {
        if self.dim != 2 {
            return;
        }
        let mut index: HashMap<[usize; 2], usize> = HashMap::with_capacity(self.cells.len() * 2);
        self.cell_edges.reserve(self.cells.len());
        for cell in &self.cells {
            let v = cell.vertex_ids();
            let mut local = [0; 3];
            for (e, [a, b]) in TRIANGLE_EDGES.iter().enumerate() {
                let key = if v[*a] < v[*b] { [v[*a], v[*b]] } else { [v[*b], v[*a]] };
                let id = *index.entry(key).or_insert_with(|| {
                    self.edges.push(key);
                    self.edge_cell_count.push(0);
                    self.edges.len() - 1
                });
                self.edge_cell_count[id] += 1;
                local[e] = id;
            }
            self.cell_edges.push(local);
        }
    }

    fn geometric_boundary_nodes(&self) -> Vec<usize> {
        let mut out = Vec::new();
        match self.dim {
            1 => {
                let mut count = vec![0usize; self.nodes.len()];
                for cell in &self.cells {
                    for &v in cell.vertex_ids() {
                        count[v] += 1;
                    }
                }
                out.extend((0..self.nodes.len()).filter(|&n| count[n] == 1));
            }
            _ => {
                for (e, edge) in self.edges.iter().enumerate() {
                    if self.edge_cell_count[e] == 1 {
                        out.extend_from_slice(edge);
                    }
                }
                out.sort_unstable();
                out.dedup();
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nodes(&self) -> &[Node<T>] {
        &self.nodes
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    /// Coordinates of node `i` (length `dim`).
    pub fn coords(&self, i: usize) -> &[T] {
        &self.nodes[i].coords[..self.dim]
    }

    pub fn point(&self, i: usize) -> [T; 2] {
        self.nodes[i].coords
    }

    /// Maximum over cells of the longest edge.
    pub fn h(&self) -> T {
        self.h
    }

    /// Boundary nodes and their markers.
    pub fn boundary(&self) -> &BTreeMap<usize, i32> {
        &self.boundary
    }

    pub fn is_boundary_node(&self, i: usize) -> bool {
        self.boundary.contains_key(&i)
    }

    /// Unique edges (2D only), numbered in order of first appearance.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of cells sharing each edge.
    pub fn edge_cell_count(&self) -> &[usize] {
        &self.edge_cell_count
    }

    /// Global edge ids of a triangle, in [`TRIANGLE_EDGES`] order.
    pub fn cell_edges(&self, c: usize) -> [usize; 3] {
        self.cell_edges[c]
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edge_cell_count[e] == 1
    }

    /// Signed measure: length in 1D, oriented area in 2D.
    pub fn signed_measure(&self, c: usize) -> T {
        let v = self.cells[c].vertex_ids();
        match self.dim {
            1 => self.nodes[v[1]].coords[0] - self.nodes[v[0]].coords[0],
            _ => signed_area(&self.nodes[v[0]].coords, &self.nodes[v[1]].coords, &self.nodes[v[2]].coords),
        }
    }

    pub fn cell_measure(&self, c: usize) -> T {
        self.signed_measure(c).abs()
    }

    /// Longest edge of cell `c` (its diameter for a simplex).
    pub fn cell_diameter(&self, c: usize) -> T {
        let v = self.cells[c].vertex_ids();
        let mut best = T::zero();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                best = best.max(self.distance(v[i], v[j]));
            }
        }
        best
    }

    pub fn distance(&self, a: usize, b: usize) -> T {
        let p = self.nodes[a].coords;
        let q = self.nodes[b].coords;
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt()
    }

    pub fn total_measure(&self) -> T {
        (0..self.cells.len()).map(|c| self.cell_measure(c)).sum()
    }
}

pub(crate) fn signed_area<T: Real>(a: &[T; 2], b: &[T; 2], c: &[T; 2]) -> T {
    ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])) * T::lit(0.5)
}
