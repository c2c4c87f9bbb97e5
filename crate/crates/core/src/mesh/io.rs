//! Plain-text mesh files.
//!
//! ```text
//! # comment
//! $Nodes
//! 4
//! 1 0 0
//! 2 1 0
//! ...
//! $Cells
//! 2
//! 1 1 2 3
//! ...
//! $Boundary        (optional)
//! 4
//! 1 1
//! ...
//! ```
//! Ids are 1-based; a node line has one coordinate in 1D and two in 2D.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::Mesh;

pub fn read_mesh<T: Real>(path: impl AsRef<Path>) -> Result<Mesh<T>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    parse_mesh(&text)
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    Nodes,
    Cells,
    Boundary,
}

pub fn parse_mesh<T: Real>(text: &str) -> Result<Mesh<T>> {
    let lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let mut section: Option<(Section, usize)> = None;
    let mut dim: Option<usize> = None;
    let mut node_index: HashMap<usize, usize> = HashMap::new();
    let mut coords: Vec<[T; 2]> = Vec::new();
    let mut cells: Vec<Vec<usize>> = Vec::new();
    let mut cell_ids: HashMap<usize, usize> = HashMap::new();
    let mut boundary: Option<BTreeMap<usize, i32>> = None;
    // node ids referenced by cells/boundary are resolved after all nodes are read
    let mut raw_cells: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut raw_boundary: Vec<(usize, usize, i32)> = Vec::new();
    let mut seen = Vec::new();

    for (line, content) in lines {
        let parse_err = |message: String| Error::Parse { line, message };
        if let Some(name) = content.strip_prefix('$') {
            if let Some((s, remaining)) = section {
                if remaining > 0 {
                    return Err(parse_err(format!("{} section ended {} entries early", section_name(s), remaining)));
                }
            }
            let s = match name {
                "Nodes" => Section::Nodes,
                "Cells" => Section::Cells,
                "Boundary" => Section::Boundary,
                other => return Err(parse_err(format!("unknown section `${other}`"))),
            };
            if seen.contains(&s) {
                return Err(parse_err(format!("duplicate section `${name}`")));
            }
            seen.push(s);
            if s == Section::Boundary {
                boundary = Some(BTreeMap::new());
            }
            section = Some((s, usize::MAX));
            continue;
        }
        let Some((s, remaining)) = section.as_mut() else {
            return Err(parse_err("data before any section header".into()));
        };
        if *remaining == usize::MAX {
            *remaining = content.parse().map_err(|_| parse_err(format!("expected an entry count, found `{content}`")))?;
            continue;
        }
        if *remaining == 0 {
            return Err(parse_err(format!("more entries than declared in {}", section_name(*s))));
        }
        *remaining -= 1;
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let int = |tok: &str| -> Result<usize> {
            tok.parse::<usize>().ok().filter(|&v| v >= 1).ok_or_else(|| parse_err(format!("expected a positive integer id, found `{tok}`")))
        };
        match s {
            Section::Nodes => {
                let d = tokens.len().saturating_sub(1);
                if !matches!(d, 1 | 2) {
                    return Err(parse_err(format!("node line needs 1 or 2 coordinates, found {d}")));
                }
                if *dim.get_or_insert(d) != d {
                    return Err(parse_err("nodes mix 1D and 2D coordinates".into()));
                }
                let id = int(tokens[0])?;
                let mut xy = [T::zero(); 2];
                for (k, tok) in tokens[1..].iter().enumerate() {
                    let v: f64 = tok.parse().map_err(|_| parse_err(format!("bad coordinate `{tok}`")))?;
                    xy[k] = T::from_f64(v).ok_or_else(|| parse_err(format!("coordinate `{tok}` out of range")))?;
                }
                if node_index.insert(id, coords.len()).is_some() {
                    return Err(parse_err(format!("duplicate node id {id}")));
                }
                coords.push(xy);
            }
            Section::Cells => {
                let id = int(tokens[0])?;
                if cell_ids.insert(id, raw_cells.len()).is_some() {
                    return Err(parse_err(format!("duplicate cell id {id}")));
                }
                let verts = tokens[1..].iter().map(|t| int(t)).collect::<Result<Vec<_>>>()?;
                if !matches!(verts.len(), 2 | 3) {
                    return Err(parse_err(format!("cell {id} needs 2 or 3 vertices, found {}", verts.len())));
                }
                raw_cells.push((line, verts));
            }
            Section::Boundary => {
                if tokens.len() != 2 {
                    return Err(parse_err("boundary line must be `<node_id> <marker>`".into()));
                }
                let node = int(tokens[0])?;
                let marker: i32 = tokens[1].parse().map_err(|_| parse_err(format!("bad marker `{}`", tokens[1])))?;
                raw_boundary.push((line, node, marker));
            }
        }
    }
    if let Some((s, remaining)) = section {
        if remaining > 0 {
            let last = text.lines().count();
            return Err(Error::Parse { line: last, message: format!("{} section ended {} entries early", section_name(s), remaining) });
        }
    }
    let dim = dim.ok_or_else(|| Error::Parse { line: 0, message: "no `$Nodes` section".into() })?;
    if raw_cells.is_empty() {
        return Err(Error::Parse { line: 0, message: "no cells".into() });
    }

    let mut missing = Vec::new();
    for (line, verts) in raw_cells {
        if verts.len() != dim + 1 {
            return Err(Error::Parse { line, message: format!("{dim}D mesh cells need {} vertices", dim + 1) });
        }
        let mut mapped = Vec::with_capacity(verts.len());
        for v in verts {
            match node_index.get(&v) {
                Some(&i) => mapped.push(i),
                None => missing.push(format!("cell on line {line} references missing node {v}")),
            }
        }
        cells.push(mapped);
    }
    if !missing.is_empty() {
        return Err(Error::InvalidMesh(missing));
    }
    if let Some(map) = boundary.as_mut() {
        for (line, node, marker) in raw_boundary {
            let &i =
                node_index.get(&node).ok_or_else(|| Error::Parse { line, message: format!("boundary references missing node {node}") })?;
            if map.insert(i, marker).is_some() {
                return Err(Error::Parse { line, message: format!("node {node} has more than one marker") });
            }
        }
    }
    Mesh::new_checked(dim, coords, cells, boundary)
}

fn section_name(s: Section) -> &'static str {
    match s {
        Section::Nodes => "$Nodes",
        Section::Cells => "$Cells",
        Section::Boundary => "$Boundary",
    }
}

/// Writes `mesh` with 17 significant digits so coordinates survive a round trip.
pub fn write_mesh<T: Real, W: Write>(mesh: &Mesh<T>, mut w: W) -> std::io::Result<()> {
    writeln!(w, "$Nodes")?;
    writeln!(w, "{}", mesh.n_nodes())?;
    for i in 0..mesh.n_nodes() {
        write!(w, "{}", i + 1)?;
        for c in mesh.coords(i) {
            write!(w, " {:.16e}", c.to_f64_lossy())?;
        }
        writeln!(w)?;
    }
    writeln!(w, "$Cells")?;
    writeln!(w, "{}", mesh.n_cells())?;
    for (c, cell) in mesh.cells().iter().enumerate() {
        write!(w, "{}", c + 1)?;
        for v in cell.vertex_ids() {
            write!(w, " {}", v + 1)?;
        }
        writeln!(w)?;
    }
    writeln!(w, "$Boundary")?;
    writeln!(w, "{}", mesh.boundary().len())?;
    for (n, m) in mesh.boundary() {
        writeln!(w, "{} {}", n + 1, m)?;
    }
    Ok(())
}
