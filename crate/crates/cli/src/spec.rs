//! Domain mini-language:
//! `square | disk:r | ellipse:a,b | rectangle:w,h | polygon:name-or-file | file:path`.

use hotspot_lab::geometry::io::{parse_domain, read_domain};
use hotspot_lab::geometry::{named_polygon, CanonicalKind, Domain};
use hotspot_lab::{Error, Result};

pub fn parse_domain_spec(spec: &str) -> Result<Domain> {
    let spec = spec.trim();
    let (kind, arg) = spec.split_once(':').map_or((spec, None), |(k, a)| (k, Some(a.trim())));
    let numbers = |n: usize| -> Result<Vec<f64>> {
        let a = arg.ok_or_else(|| bad(spec, &format!("{kind} needs {n} parameter(s)")))?;
        let v: Vec<f64> = a
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad(spec, &format!("not a number: {t:?}"))))
            .collect::<Result<_>>()?;
        if v.len() != n {
            return Err(bad(spec, &format!("{kind} needs {n} parameter(s), got {}", v.len())));
        }
        Ok(v)
    };
    let mut domain = match kind {
        "square" if arg.is_none() => Domain::canonical(CanonicalKind::Rectangle(1.0, 1.0))?,
        "disk" => Domain::canonical(CanonicalKind::Disk(numbers(1)?[0]))?,
        "ellipse" => {
            let v = numbers(2)?;
            Domain::canonical(CanonicalKind::Ellipse(v[0], v[1]))?
        }
        "rectangle" => {
            let v = numbers(2)?;
            Domain::canonical(CanonicalKind::Rectangle(v[0], v[1]))?
        }
        "polygon" => {
            let a = arg.filter(|a| !a.is_empty()).ok_or_else(|| bad(spec, "polygon needs a name or a file"))?;
            match named_polygon(a) {
                Some(v) => Domain::polygon(v, a)?,
                // A file of `x y` rows, one vertex per line.
                None => {
                    parse_domain(&format!("polygon {a}\n{}", std::fs::read_to_string(a)?)).map_err(|e| match e {
                        // Report line numbers of the user's file, not of the synthetic header.
                        Error::Parse { line, msg } => Error::Parse { line: line.saturating_sub(1), msg },
                        e => e,
                    })?
                }
            }
        }
        "file" => read_domain(arg.filter(|a| !a.is_empty()).ok_or_else(|| bad(spec, "file needs a path"))?)?,
        _ => return Err(bad(spec, "unknown domain kind")),
    };
    if domain.label.is_empty() {
        domain.label = spec.to_string();
    }
    Ok(domain)
}

fn bad(spec: &str, why: &str) -> Error {
    Error::InvalidInput(format!("domain spec {spec:?}: {why}"))
}
