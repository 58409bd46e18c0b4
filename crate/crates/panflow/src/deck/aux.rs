//! The auxiliary deck: one `KEY=value` per line.
//!
//! Known keywords are written in a fixed order, followed by any unknown
//! keywords in the order they were read. Numbers use the ten-column
//! rendering with the padding trimmed.

use std::fmt::Write as _;

use panflow_core::BcClass;

use super::field10::{format_field10, parse_field10, FieldError};
use super::{FlowConditions, FlowError, Symmetry};

/// Boundary-condition class assigned to one network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkBc {
    pub network: String,
    pub bc: BcClass,
}

/// A wake network, the two networks whose shared trailing edge sheds it, and
/// its extent and direction.
#[derive(Debug, Clone, PartialEq)]
pub struct WakeSpec {
    pub network: String,
    pub upper: String,
    pub lower: String,
    /// Length in root chords.
    pub length_chords: f64,
    pub direction: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuxDeck {
    pub title: String,
    /// Geometry file the deck refers to.
    pub geometry_file: Option<String>,
    pub flow: FlowConditions,
    pub boundaries: Vec<NetworkBc>,
    pub wakes: Vec<WakeSpec>,
    /// Keywords this crate does not interpret, passed through verbatim.
    pub extra: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AuxError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing keyword {0}")]
    Missing(&'static str),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn num(x: f64) -> Result<String, FieldError> {
    Ok(format_field10(x)?.trim().to_string())
}

/// Writes the deck after validating its flow conditions.
pub fn write_aux(aux: &AuxDeck) -> Result<String, AuxError> {
    let f = &aux.flow;
    f.validate()?;
    let mut s = String::new();
    let mut kv = |k: &str, v: &str| {
        let _ = writeln!(s, "{k}={v}");
    };
    kv("TITLE", aux.title.trim());
    if let Some(g) = &aux.geometry_file {
        kv("WGS", g);
    }
    kv("MACH", &num(f.mach)?);
    let alphas = f
        .alphas
        .iter()
        .map(|a| num(*a))
        .collect::<Result<Vec<_>, _>>()?;
    kv("ALPHA", &alphas.join(" "));
    kv("BETA", &num(f.beta)?);
    kv("SREF", &num(f.sref)?);
    kv("SPAN", &num(f.span)?);
    kv("CBAR", &num(f.cbar)?);
    kv("XREF", &num(f.xref)?);
    kv("YREF", &num(f.yref)?);
    kv("ZREF", &num(f.zref)?);
    kv(
        "SYMM",
        match f.symmetry {
            Symmetry::None => "NONE",
            Symmetry::XzPlane => "XZ",
        },
    );
    for b in &aux.boundaries {
        kv("BOUN", &format!("{} {}", b.network, b.bc.code()));
    }
    for w in &aux.wakes {
        let d = w
            .direction
            .iter()
            .map(|v| num(*v))
            .collect::<Result<Vec<_>, _>>()?;
        kv(
            "WAKE",
            &format!(
                "{} {} {} {} {}",
                w.network,
                w.upper,
                w.lower,
                num(w.length_chords)?,
                d.join(" ")
            ),
        );
    }
    for (k, v) in &aux.extra {
        kv(k, v);
    }
    Ok(s)
}

pub fn parse_aux(text: &str) -> Result<AuxDeck, AuxError> {
    let mut title = None;
    let mut geometry_file = None;
    let mut scalars: [Option<f64>; 8] = [None; 8];
    let scalar_keys = [
        "MACH", "BETA", "SREF", "SPAN", "CBAR", "XREF", "YREF", "ZREF",
    ];
    let mut alphas = None;
    let mut symmetry = None;
    let mut boundaries = Vec::new();
    let mut wakes = Vec::new();
    let mut extra = Vec::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let bad = |msg: String| AuxError::Malformed { line, msg };
        let (key, value) = l
            .split_once('=')
            .ok_or_else(|| bad(format!("expected KEY=value, found {l:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        let field =
            |t: &str| parse_field10(t).map_err(|_| bad(format!("bad number {t:?} for {key}")));
        let once = |seen: bool| {
            if seen {
                Err(bad(format!("{key} given twice")))
            } else {
                Ok(())
            }
        };
        if let Some(i) = scalar_keys.iter().position(|k| *k == key) {
            once(scalars[i].is_some())?;
            scalars[i] = Some(field(value)?);
            continue;
        }
        match key {
            "TITLE" => {
                once(title.is_some())?;
                title = Some(value.to_string());
            }
            "WGS" => {
                once(geometry_file.is_some())?;
                geometry_file = Some(value.to_string());
            }
            "ALPHA" => {
                once(alphas.is_some())?;
                alphas = Some(
                    value
                        .split_whitespace()
                        .map(field)
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            "SYMM" => {
                once(symmetry.is_some())?;
                symmetry = Some(match value {
                    "NONE" => Symmetry::None,
                    "XZ" => Symmetry::XzPlane,
                    _ => return Err(bad(format!("unknown symmetry {value:?}"))),
                });
            }
            "BOUN" => {
                let t: Vec<&str> = value.split_whitespace().collect();
                let [network, code] = t[..] else {
                    return Err(bad("BOUN needs a network name and a class code".into()));
                };
                let bc = code
                    .parse()
                    .ok()
                    .and_then(BcClass::from_code)
                    .ok_or_else(|| bad(format!("unknown boundary class {code:?}")))?;
                boundaries.push(NetworkBc {
                    network: network.to_string(),
                    bc,
                });
            }
            "WAKE" => {
                let t: Vec<&str> = value.split_whitespace().collect();
                let [network, upper, lower, len, dx, dy, dz] = t[..] else {
                    return Err(bad(
                        "WAKE needs name, upper, lower, length and direction".into()
                    ));
                };
                wakes.push(WakeSpec {
                    network: network.to_string(),
                    upper: upper.to_string(),
                    lower: lower.to_string(),
                    length_chords: field(len)?,
                    direction: [field(dx)?, field(dy)?, field(dz)?],
                });
            }
            _ => {
                extra.push((key.to_string(), value.to_string()));
            }
        }
    }

    let need = |i: usize, name: &'static str| scalars[i].ok_or(AuxError::Missing(name));
    let flow = FlowConditions {
        mach: need(0, "MACH")?,
        alphas: alphas.ok_or(AuxError::Missing("ALPHA"))?,
        beta: scalars[1].unwrap_or(0.0),
        sref: need(2, "SREF")?,
        span: need(3, "SPAN")?,
        cbar: need(4, "CBAR")?,
        xref: scalars[5].unwrap_or(0.0),
        yref: scalars[6].unwrap_or(0.0),
        zref: scalars[7].unwrap_or(0.0),
        symmetry: symmetry.unwrap_or_default(),
    };
    flow.validate()?;
    Ok(AuxDeck {
        title: title.unwrap_or_default(),
        geometry_file,
        flow,
        boundaries,
        wakes,
        extra,
    })
}
