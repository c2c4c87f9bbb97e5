//! VTK and CSV writers.

use std::fmt::Write as _;

use rosenau_core::mesh::Mesh;
use rosenau_core::stepper::EnergyTrace;

/// Legacy ASCII VTK unstructured grid with point scalars sampled at the mesh
/// vertices. `u` and `p` hold at least one value per vertex, vertices first.
pub fn vtk_string(mesh: &Mesh<f64>, u: &[f64], p: &[f64], title: &str) -> String {
    let n = mesh.n_nodes();
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    let _ = writeln!(out, "{}", title.lines().next().unwrap_or(""));
    out.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(out, "POINTS {n} double");
    for i in 0..n {
        let [x, y] = mesh.point(i);
        let _ = writeln!(out, "{x:e} {y:e} 0");
    }
    let per_cell = mesh.dim() + 1;
    let cells = mesh.n_cells();
    let _ = writeln!(out, "CELLS {cells} {}", cells * (per_cell + 1));
    for cell in mesh.cells() {
        let ids: Vec<String> = cell.vertex_ids().iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "{per_cell} {}", ids.join(" "));
    }
    let _ = writeln!(out, "CELL_TYPES {cells}");
    let kind = if mesh.dim() == 1 { 3 } else { 5 };
    for _ in 0..cells {
        let _ = writeln!(out, "{kind}");
    }
    let _ = writeln!(out, "POINT_DATA {n}");
    for (name, values) in [("u", u), ("p", p)] {
        let _ = writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for v in &values[..n] {
            let _ = writeln!(out, "{v:e}");
        }
    }
    out
}

/// `step,t,energy` with one row per time level.
pub fn energy_csv(energy: &EnergyTrace<f64>, k: f64) -> String {
    let mut out = String::from("step,t,energy\n");
    for (m, e) in energy.values.iter().enumerate() {
        let _ = writeln!(out, "{m},{},{e:e}", m as f64 * k);
    }
    out
}
