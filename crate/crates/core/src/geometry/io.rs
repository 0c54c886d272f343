//! Line-oriented domain description files.
//!
//! ```text
//! # comments and blank lines are ignored
//! <kind> [label...]
//! <parameters>
//! ```
//!
//! | kind        | parameter lines                        |
//! |-------------|----------------------------------------|
//! | `disk`      | `r`                                    |
//! | `ellipse`   | `a b` or `a b rotation`                |
//! | `rectangle` | `w h` (occupies `[0,w] x [0,h]`)       |
//! | `polygon`   | one `x y` vertex per line, CCW, >= 3   |
//!
//! Floats are written in shortest round-trip form, so polygons survive a
//! write/read cycle bit for bit.

use super::{CanonicalKind, Domain, Shape, Vec2};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

pub fn parse_domain(text: &str) -> Result<Domain> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (kline, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty domain file".into() })?;
    let (kind, label) = match header.split_once(char::is_whitespace) {
        Some((k, rest)) => (k, Some(rest.trim().to_string())),
        None => (header, None),
    };
    let rows: Vec<(usize, Vec<f64>)> = lines
        .map(|(ln, l)| {
            l.split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .ok_or_else(|| Error::Parse { line: ln, msg: format!("not a finite number: {tok:?}") })
                })
                .collect::<Result<Vec<f64>>>()
                .map(|v| (ln, v))
        })
        .collect::<Result<_>>()?;
    let expect = |n_lines: usize, widths: &[usize]| -> Result<()> {
        if rows.len() != n_lines {
            let line = rows.get(n_lines).map_or(kline, |r| r.0);
            return Err(Error::Parse { line, msg: format!("{kind}: expected {n_lines} parameter line(s)") });
        }
        for (ln, r) in &rows {
            if !widths.contains(&r.len()) {
                return Err(Error::Parse { line: *ln, msg: format!("{kind}: expected {widths:?} values") });
            }
        }
        Ok(())
    };
    let geom = |e: Error, line: usize| match e {
        Error::Domain(msg) => Error::Parse { line, msg },
        other => other,
    };
    let mut domain = match kind {
        "disk" => {
            expect(1, &[1])?;
            Domain::canonical(CanonicalKind::Disk(rows[0].1[0])).map_err(|e| geom(e, rows[0].0))?
        }
        "ellipse" => {
            expect(1, &[2, 3])?;
            let r = &rows[0].1;
            let d = Domain::canonical(CanonicalKind::Ellipse(r[0], r[1])).map_err(|e| geom(e, rows[0].0))?;
            match r.get(2) {
                Some(&rot) if rot != 0.0 => d.rotated(rot),
                _ => d,
            }
        }
        "rectangle" => {
            expect(1, &[2])?;
            let r = &rows[0].1;
            Domain::canonical(CanonicalKind::Rectangle(r[0], r[1])).map_err(|e| geom(e, rows[0].0))?
        }
        "polygon" => {
            if rows.len() < 3 {
                return Err(Error::Parse { line: kline, msg: "polygon needs at least 3 vertices".into() });
            }
            expect(rows.len(), &[2])?;
            let v = rows.iter().map(|(_, r)| Vec2::new(r[0], r[1])).collect();
            Domain::polygon(v, "polygon").map_err(|e| geom(e, kline))?
        }
        other => {
            return Err(Error::Parse { line: kline, msg: format!("unknown domain kind {other:?}") });
        }
    };
    if let Some(l) = label {
        domain.label = l;
    }
    Ok(domain)
}

pub fn read_domain(path: impl AsRef<Path>) -> Result<Domain> {
    parse_domain(&std::fs::read_to_string(path)?)
}

/// Serializes a domain; fails for shapes without a closed-form description.
pub fn format_domain(domain: &Domain) -> Result<String> {
    let mut s = String::new();
    let label = if domain.label.is_empty() { String::new() } else { format!(" {}", domain.label) };
    match domain.shape() {
        Shape::Disk { radius } => {
            let _ = write!(s, "disk{label}\n{radius}\n");
        }
        Shape::Ellipse { a, b, rotation } => {
            if *rotation == 0.0 {
                let _ = write!(s, "ellipse{label}\n{a} {b}\n");
            } else {
                let _ = write!(s, "ellipse{label}\n{a} {b} {rotation}\n");
            }
        }
        Shape::Rectangle { width, height } => {
            let _ = write!(s, "rectangle{label}\n{width} {height}\n");
        }
        Shape::Polygon { vertices } => {
            let _ = writeln!(s, "polygon{label}");
            for v in vertices {
                let _ = writeln!(s, "{} {}", v.x, v.y);
            }
        }
        Shape::Custom => {
            return Err(Error::InvalidInput("domain has no file representation".into()));
        }
    }
    Ok(s)
}

pub fn write_domain(domain: &Domain, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_domain(domain)?)?;
    Ok(())
}
