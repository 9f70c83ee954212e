//! SVG pictures of planar meshes.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::str::FromStr;

use super::AnyMesh;
use crate::delaunay::triangulate2;
use crate::error::{Error, Result};
use crate::geometry::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layers {
    pub points: bool,
    pub delaunay: bool,
    pub circles: bool,
    pub cells: bool,
}

impl Layers {
    pub const ALL: Layers = Layers {
        points: true,
        delaunay: true,
        circles: true,
        cells: true,
    };
    pub const NONE: Layers = Layers {
        points: false,
        delaunay: false,
        circles: false,
        cells: false,
    };
}

impl Default for Layers {
    fn default() -> Self {
        Layers::ALL
    }
}

/// Comma-separated layer names, or `all`.
impl FromStr for Layers {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut l = Layers::NONE;
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            match name {
                "all" => l = Layers::ALL,
                "points" => l.points = true,
                "delaunay" => l.delaunay = true,
                "circles" => l.circles = true,
                "cells" => l.cells = true,
                other => return Err(Error::InvalidConfig(format!("unknown layer `{other}`"))),
            }
        }
        Ok(l)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    pub layers: Layers,
    /// Width of the picture in pixels; the height follows the domain.
    pub width: f64,
    /// Line of text under the picture.
    pub caption: Option<String>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions {
            layers: Layers::ALL,
            width: 800.0,
            caption: None,
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Cells, Delaunay edges, circles of the given radii and the points, each in
/// its own group. Output depends only on the inputs.
pub fn render_svg(mesh: &AnyMesh, radii: &[f64], opts: &SvgOptions) -> Result<String> {
    let m = match mesh {
        AnyMesh::Planar(m) => m,
        AnyMesh::Spatial(_) => return Err(Error::DimensionMismatch { expected: 2, found: 3 }),
    };
    let n = m.points.len();
    if radii.len() != n {
        return Err(Error::LengthMismatch { expected: n, found: radii.len() });
    }
    let dv = &m.domain.vertices;
    let (mut lo, mut hi) = (dv[0], dv[0]);
    for v in dv {
        lo = lo.inf(v);
        hi = hi.sup(v);
    }
    let extent = (hi - lo).max();
    let pad = 0.05 * extent;
    let scale = opts.width / ((hi.x - lo.x) + 2.0 * pad);
    let height = ((hi.y - lo.y) + 2.0 * pad) * scale;
    let text_h = if opts.caption.is_some() { 24.0 } else { 0.0 };
    let px = |p: &Point2| ((p.x - lo.x + pad) * scale, (hi.y - p.y + pad) * scale);
    let stroke = 0.0015 * opts.width;

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.3}" height="{h:.3}" viewBox="0 0 {w:.3} {h:.3}">"#,
        w = opts.width,
        h = height + text_h
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{:.3}" height="{:.3}" fill="white"/>"#, opts.width, height + text_h);
    let domain: Vec<String> = dv.iter().map(px).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    let _ = writeln!(out, r#"<polyline points="{} {}" fill="none" stroke="black" stroke-width="{:.3}"/>"#, domain.join(" "), domain[0], stroke);

    if opts.layers.cells {
        let _ = writeln!(out, r##"<g id="cells" fill="#dbe9f6" fill-opacity="0.6" stroke="#1f4e79" stroke-width="{stroke:.3}">"##);
        for (i, c) in m.cells.iter().enumerate() {
            let pts: Vec<String> = c.vertices.iter().map(|&v| px(&m.vertices[v])).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
            let _ = writeln!(out, r#"<polygon data-owner="{}" points="{}"/>"#, i, pts.join(" "));
        }
        let _ = writeln!(out, "</g>");
    }
    if opts.layers.delaunay {
        let tri = triangulate2(&m.points)?;
        let mut edges = BTreeSet::new();
        for s in &tri.simplices {
            for k in 0..3 {
                let (a, b) = (s[k], s[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let _ = writeln!(out, r##"<g id="delaunay" stroke="#7f7f7f" stroke-width="{:.3}" stroke-dasharray="{:.3}">"##, stroke, 4.0 * stroke);
        for (a, b) in edges {
            let ((x1, y1), (x2, y2)) = (px(&m.points[a]), px(&m.points[b]));
            let _ = writeln!(out, r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}"/>"#);
        }
        let _ = writeln!(out, "</g>");
    }
    if opts.layers.circles {
        let _ = writeln!(out, r##"<g id="circles" fill="none" stroke="#c0392b" stroke-width="{stroke:.3}">"##);
        for (p, r) in m.points.iter().zip(radii) {
            let (x, y) = px(p);
            let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{:.3}"/>"#, r * scale);
        }
        let _ = writeln!(out, "</g>");
    }
    if opts.layers.points {
        let s = 3.0 * stroke;
        let _ = writeln!(out, r#"<g id="points" fill="black">"#);
        for p in &m.points {
            let (x, y) = px(p);
            let _ = writeln!(out, r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#, x - s, y - s, 2.0 * s, 2.0 * s);
        }
        let _ = writeln!(out, "</g>");
    }
    if let Some(c) = &opts.caption {
        let _ = writeln!(out, r#"<text x="{:.3}" y="{:.3}" font-family="monospace" font-size="14">{}</text>"#, 8.0, height + 17.0, escape(c));
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
