//! Legacy ASCII VTK: polygons for planar meshes, polyhedra for spatial ones.
//!
//! Cells without area (volume) are left out; the `owner` cell field maps each
//! written cell back to its point.

use std::fmt::Write;

use super::{AnyMesh, MeshDocument};
use crate::error::{Error, Result};

const VTK_POLYHEDRON: u32 = 42;

fn cell_data(out: &mut String, owners: &[usize], radii: &[f64]) {
    let _ = writeln!(out, "CELL_DATA {}", owners.len());
    let _ = writeln!(out, "SCALARS owner int 1\nLOOKUP_TABLE default");
    for o in owners {
        let _ = writeln!(out, "{o}");
    }
    let _ = writeln!(out, "SCALARS radius double 1\nLOOKUP_TABLE default");
    for o in owners {
        let _ = writeln!(out, "{}", radii[*o]);
    }
}

pub fn mesh_to_vtk(doc: &MeshDocument) -> Result<String> {
    if doc.mesh.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let n = doc.mesh.n_points();
    if doc.radii.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: doc.radii.len() });
    }
    let mut out = String::new();
    match &doc.mesh {
        AnyMesh::Planar(m) => {
            let cells: Vec<_> = m.cells.iter().filter(|c| c.vertices.len() >= 3).collect();
            if cells.is_empty() {
                return Err(Error::EmptyMesh);
            }
            let _ = writeln!(out, "# vtk DataFile Version 3.0\ncvmesh control volumes\nASCII\nDATASET POLYDATA");
            let _ = writeln!(out, "POINTS {} double", m.vertices.len());
            for v in &m.vertices {
                let _ = writeln!(out, "{} {} 0", v.x, v.y);
            }
            let size: usize = cells.iter().map(|c| c.vertices.len() + 1).sum();
            let _ = writeln!(out, "POLYGONS {} {}", cells.len(), size);
            for c in &cells {
                let ids: Vec<String> = c.vertices.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "{} {}", ids.len(), ids.join(" "));
            }
            let owners: Vec<usize> = cells.iter().map(|c| c.owner).collect();
            cell_data(&mut out, &owners, &doc.radii);
        }
        AnyMesh::Spatial(m) => {
            let cells: Vec<_> = m.cells.iter().filter(|c| c.faces.len() >= 4).collect();
            if cells.is_empty() {
                return Err(Error::EmptyMesh);
            }
            let _ = writeln!(out, "# vtk DataFile Version 4.2\ncvmesh control volumes\nASCII\nDATASET UNSTRUCTURED_GRID");
            let _ = writeln!(out, "POINTS {} double", m.vertices.len());
            for v in &m.vertices {
                let _ = writeln!(out, "{} {} {}", v.x, v.y, v.z);
            }
            let streams: Vec<Vec<usize>> = cells
                .iter()
                .map(|c| {
                    let mut s = vec![c.faces.len()];
                    for f in &c.faces {
                        s.push(f.vertices.len());
                        s.extend(&f.vertices);
                    }
                    s
                })
                .collect();
            let size: usize = streams.iter().map(|s| s.len() + 1).sum();
            let _ = writeln!(out, "CELLS {} {}", cells.len(), size);
            for s in &streams {
                let ids: Vec<String> = s.iter().map(usize::to_string).collect();
                let _ = writeln!(out, "{} {}", s.len(), ids.join(" "));
            }
            let _ = writeln!(out, "CELL_TYPES {}", cells.len());
            for _ in &cells {
                let _ = writeln!(out, "{VTK_POLYHEDRON}");
            }
            let owners: Vec<usize> = cells.iter().map(|c| c.owner).collect();
            cell_data(&mut out, &owners, &doc.radii);
        }
    }
    Ok(out)
}
