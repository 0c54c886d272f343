//! Plain-text mesh files.
//!
//! ```text
//! nv nt nbe
//! x y                      (nv lines)
//! i j k                    (nt lines, 0-based, counterclockwise)
//! a b piece kappa nx ny    (nbe lines, boundary cycle in order)
//! corners: c1 c2 ...
//! ```
//!
//! Floats use shortest round-trip formatting, so a write/read cycle is exact.

use super::{BoundaryEdge, Mesh};
use crate::error::{Error, Result};
use crate::geometry::Vec2;
use std::fmt::Write as _;
use std::path::Path;

pub fn format_mesh(mesh: &Mesh) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", mesh.n_vertices(), mesh.n_triangles(), mesh.boundary_edges().len());
    for v in mesh.vertices() {
        let _ = writeln!(s, "{} {}", v.x, v.y);
    }
    for t in mesh.triangles() {
        let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
    }
    for e in mesh.boundary_edges() {
        let _ = writeln!(s, "{} {} {} {} {} {}", e.a, e.b, e.piece, e.kappa, e.normal.x, e.normal.y);
    }
    let corners: Vec<String> = mesh.corner_vertices().iter().map(|c| c.to_string()).collect();
    let _ = writeln!(s, "corners: {}", corners.join(" "));
    s
}

pub fn write_mesh(mesh: &Mesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_mesh(mesh))?;
    Ok(())
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh> {
    parse_mesh(&std::fs::read_to_string(path)?)
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        for (i, l) in self.inner.by_ref() {
            self.last = i + 1;
            if !l.trim().is_empty() {
                return Ok((i + 1, l.trim()));
            }
        }
        Err(Error::Parse { line: self.last + 1, msg: format!("unexpected end of file, expected {what}") })
    }
}

fn fields<T: std::str::FromStr>(line: usize, text: &str, n: usize, what: &str) -> Result<Vec<T>> {
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() != n {
        return Err(Error::Parse { line, msg: format!("{what}: expected {n} fields, found {}", toks.len()) });
    }
    toks.iter()
        .map(|t| t.parse::<T>().map_err(|_| Error::Parse { line, msg: format!("{what}: cannot parse {t:?}") }))
        .collect()
}

pub fn parse_mesh(text: &str) -> Result<Mesh> {
    let mut lines = Lines { inner: text.lines().enumerate(), last: 0 };
    let (ln, header) = lines.next("header `nv nt nbe`")?;
    let counts: Vec<usize> = fields(ln, header, 3, "header")?;
    let (nv, nt, nbe) = (counts[0], counts[1], counts[2]);
    if nbe == 0 {
        return Err(Error::Parse { line: ln, msg: "empty boundary".into() });
    }
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (ln, l) = lines.next("vertex")?;
        let xy: Vec<f64> = fields(ln, l, 2, "vertex")?;
        if !xy.iter().all(|v| v.is_finite()) {
            return Err(Error::Parse { line: ln, msg: "non-finite vertex coordinate".into() });
        }
        vertices.push(Vec2::new(xy[0], xy[1]));
    }
    let mut triangles = Vec::with_capacity(nt);
    for t in 0..nt {
        let (ln, l) = lines.next("triangle")?;
        let ijk: Vec<usize> = fields(ln, l, 3, "triangle")?;
        if let Some(bad) = ijk.iter().find(|&&i| i >= nv) {
            return Err(Error::Parse { line: ln, msg: format!("triangle {t} references vertex {bad} >= nv = {nv}") });
        }
        let tri = [ijk[0], ijk[1], ijk[2]];
        let (a, b, c) = (vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
        if (b - a).cross(c - a) <= 0.0 {
            return Err(Error::Parse { line: ln, msg: format!("triangle {t} is not counterclockwise") });
        }
        triangles.push(tri);
    }
    let mut edges = Vec::with_capacity(nbe);
    for _ in 0..nbe {
        let (ln, l) = lines.next("boundary edge")?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 6 {
            return Err(Error::Parse {
                line: ln,
                msg: format!("boundary edge: expected 6 fields, found {}", toks.len()),
            });
        }
        let ints: Vec<usize> = fields(ln, &toks[..3].join(" "), 3, "boundary edge")?;
        let reals: Vec<f64> = fields(ln, &toks[3..].join(" "), 3, "boundary edge")?;
        if ints[0] >= nv || ints[1] >= nv {
            return Err(Error::Parse { line: ln, msg: format!("boundary edge references a vertex >= nv = {nv}") });
        }
        edges.push(BoundaryEdge {
            a: ints[0],
            b: ints[1],
            piece: ints[2],
            kappa: reals[0],
            normal: Vec2::new(reals[1], reals[2]),
        });
    }
    let (ln, l) = lines.next("`corners:` line")?;
    let rest =
        l.strip_prefix("corners:").ok_or_else(|| Error::Parse { line: ln, msg: "expected `corners:` line".into() })?;
    let corners: Vec<usize> = rest
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line: ln, msg: format!("bad corner index {t:?}") }))
        .collect::<Result<_>>()?;
    if let Ok((ln, _)) = lines.next("") {
        return Err(Error::Parse { line: ln, msg: "trailing content after `corners:` line".into() });
    }
    Mesh::from_parts(vertices, triangles, edges, &corners).map_err(|e| match e {
        Error::Mesh(msg) => Error::Parse { line: ln, msg },
        other => other,
    })
}
