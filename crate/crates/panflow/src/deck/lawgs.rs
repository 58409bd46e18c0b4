//! Langley wireframe geometry (LaWGS).
//!
//! ```text
//! 'title'
//! 'NETWORK'
//!  NOBJ NLINE NPNT ISYML RX RY RZ TX TY TZ XS YS ZS ISYMG
//!  x y z x y z          (each line of the grid starts a new record)
//! ```
//!
//! The writer uses ten-column fields, two points per record. The reader is
//! free-format: coordinates may be split across lines arbitrarily.

use std::fmt::Write as _;

use panflow_core::{Point3, StructuredNetwork, Vec3};

use super::field10::{format_field10, parse_field10, split_record, FieldError, WIDTH};

pub const MAX_NAME_LEN: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct LawgsNetwork {
    pub name: String,
    pub n_rows: usize,
    pub n_cols: usize,
    /// Local symmetry code: 0 none, 1 about the x-z plane.
    pub symmetry: u32,
    /// Row-major.
    pub points: Vec<Point3>,
}

impl LawgsNetwork {
    pub fn from_network(net: &StructuredNetwork, symmetry: u32) -> LawgsNetwork {
        LawgsNetwork {
            name: net.name().to_string(),
            n_rows: net.n_rows(),
            n_cols: net.n_cols(),
            symmetry,
            points: net.points().to_vec(),
        }
    }

    pub fn panel_count(&self) -> usize {
        (self.n_rows - 1) * (self.n_cols - 1)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LawgsObject {
    pub title: String,
    pub networks: Vec<LawgsNetwork>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LawgsError {
    #[error("line {line}: network {network:?}: {msg}")]
    MalformedLawgs {
        line: usize,
        network: String,
        msg: String,
    },
    #[error("network {network:?}: {n_rows}x{n_cols} grid with {points} points")]
    GridSizeMismatch {
        network: String,
        n_rows: usize,
        n_cols: usize,
        points: usize,
    },
    #[error("network name {0:?} must be 1 to 20 characters without quotes")]
    BadName(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn check_name(name: &str) -> Result<(), LawgsError> {
    if name.is_empty() || name.len() > MAX_NAME_LEN || name.contains('\'') || name.trim() != name {
        return Err(LawgsError::BadName(name.to_string()));
    }
    Ok(())
}

pub fn write_lawgs(obj: &LawgsObject) -> Result<String, LawgsError> {
    let mut s = String::new();
    let _ = writeln!(s, "'{}'", obj.title.replace('\'', " "));
    for (k, n) in obj.networks.iter().enumerate() {
        check_name(&n.name)?;
        if n.n_rows < 2 || n.n_cols < 2 || n.points.len() != n.n_rows * n.n_cols {
            return Err(LawgsError::GridSizeMismatch {
                network: n.name.clone(),
                n_rows: n.n_rows,
                n_cols: n.n_cols,
                points: n.points.len(),
            });
        }
        let _ = writeln!(s, "'{}'", n.name);
        let _ = writeln!(
            s,
            "{:3} {:3} {:3} {} 0 0 0 0 0 0 1 1 1 {}",
            k + 1,
            n.n_rows,
            n.n_cols,
            n.symmetry,
            n.symmetry
        );
        for row in n.points.chunks(n.n_cols) {
            for pair in row.chunks(2) {
                for p in pair {
                    for v in [p.x, p.y, p.z] {
                        s.push_str(&format_field10(v)?);
                    }
                }
                s.push('\n');
            }
        }
    }
    Ok(s)
}

pub fn parse_lawgs(text: &str) -> Result<LawgsObject, LawgsError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty());
    let quoted = |l: &str| {
        l.strip_prefix('\'')
            .and_then(|r| r.strip_suffix('\''))
            .map(str::to_string)
    };
    let malformed = |line, network: &str, msg: String| LawgsError::MalformedLawgs {
        line,
        network: network.to_string(),
        msg,
    };

    let Some((line, first)) = lines.next() else {
        return Ok(LawgsObject::default());
    };
    let title =
        quoted(first.trim()).ok_or_else(|| malformed(line, "", "title must be quoted".into()))?;
    let mut obj = LawgsObject {
        title,
        networks: Vec::new(),
    };
    let mut pending = lines.next();
    while let Some((line, l)) = pending {
        let name = quoted(l.trim()).ok_or_else(|| {
            malformed(
                line,
                "",
                format!("expected a quoted network name, found {l:?}"),
            )
        })?;
        check_name(&name)?;
        let (hline, header) = lines
            .next()
            .ok_or_else(|| malformed(line, &name, "missing object header".into()))?;
        let h: Vec<f64> = header
            .split_whitespace()
            .map(|t| {
                parse_field10(t)
                    .map_err(|_| malformed(hline, &name, format!("bad header value {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        if h.len() < 3 {
            return Err(malformed(
                hline,
                &name,
                "header needs object, line and point counts".into(),
            ));
        }
        let get = |k: usize, default: f64| h.get(k).copied().unwrap_or(default);
        let dim = |v: f64| (v >= 2.0 && v.fract() == 0.0).then_some(v as usize);
        let (n_rows, n_cols) = match (dim(h[1]), dim(h[2])) {
            (Some(r), Some(c)) => (r, c),
            _ => {
                return Err(malformed(
                    hline,
                    &name,
                    "grid counts must be integers of at least 2".into(),
                ))
            }
        };
        if (4..7).any(|k| get(k, 0.0) != 0.0) {
            return Err(malformed(
                hline,
                &name,
                "rotated objects are not supported".into(),
            ));
        }
        let shift = Vec3::new(get(7, 0.0), get(8, 0.0), get(9, 0.0));
        let scale = Vec3::new(get(10, 1.0), get(11, 1.0), get(12, 1.0));
        let symmetry = get(3, 0.0);
        if !(symmetry >= 0.0 && symmetry.fract() == 0.0) {
            return Err(malformed(hline, &name, "bad symmetry code".into()));
        }

        let want = 3 * n_rows * n_cols;
        let mut values = Vec::with_capacity(want);
        let mut last = hline;
        pending = None;
        for (line, l) in lines.by_ref() {
            if l.trim_start().starts_with('\'') {
                pending = Some((line, l));
                break;
            }
            last = line;
            values.extend(
                coordinates(l)
                    .map_err(|t| malformed(line, &name, format!("bad coordinate {t:?}")))?,
            );
        }
        if values.len() != want {
            return Err(malformed(
                last,
                &name,
                format!("expected {want} coordinates, found {}", values.len()),
            ));
        }
        let points = values
            .chunks(3)
            .map(|c| {
                Vec3::new(
                    c[0] * scale.x + shift.x,
                    c[1] * scale.y + shift.y,
                    c[2] * scale.z + shift.z,
                )
            })
            .collect();
        obj.networks.push(LawgsNetwork {
            name,
            n_rows,
            n_cols,
            symmetry: symmetry as u32,
            points,
        });
    }
    Ok(obj)
}

/// Whitespace-separated numbers, or ten-column fields when negative values
/// run into their neighbours.
fn coordinates(line: &str) -> Result<Vec<f64>, String> {
    let free: Result<Vec<f64>, _> = line.split_whitespace().map(parse_field10).collect();
    if let Ok(v) = free {
        return Ok(v);
    }
    if line.len().is_multiple_of(WIDTH) {
        if let Ok(v) = split_record(line).into_iter().map(parse_field10).collect() {
            return Ok(v);
        }
    }
    let bad = line
        .split_whitespace()
        .find(|t| parse_field10(t).is_err())
        .unwrap_or(line);
    Err(bad.to_string())
}
