//! Force and moment tables: `ffm` for the modeled half, `ffmf` for the whole
//! configuration.
//!
//! ```text
//! $FFMF <title>
//! $COLUMNS ALPHA CL CDI CM CY CROLL CN
//! <one row per angle of attack>
//! $END
//! ```
//!
//! The reader takes the columns in whatever order `$COLUMNS` lists them;
//! `CY`, `CROLL` and `CN` may be absent and default to zero.

use std::fmt::Write as _;

use super::{parse_num, sci};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    Half,
    Full,
}

impl Geometry {
    fn tag(self) -> &'static str {
        match self {
            Geometry::Half => "$FFM",
            Geometry::Full => "$FFMF",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceRow {
    pub alpha: f64,
    pub cl: f64,
    pub cdi: f64,
    pub cm: f64,
    pub cy: f64,
    pub croll: f64,
    pub cn: f64,
}

impl ForceRow {
    fn values(&self) -> [f64; 7] {
        [
            self.alpha, self.cl, self.cdi, self.cm, self.cy, self.croll, self.cn,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FfmSummary {
    pub geometry: Geometry,
    pub title: String,
    pub rows: Vec<ForceRow>,
}

impl FfmSummary {
    pub fn alphas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.alpha).collect()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FfmError {
    #[error("line {line}: {msg}")]
    MalformedFfmf { line: usize, msg: String },
    #[error("alpha {alpha}: {what} {full} is not consistent with the half-model value {half}")]
    Doubling {
        alpha: f64,
        what: &'static str,
        half: f64,
        full: f64,
    },
}

const COLUMNS: [&str; 7] = ["ALPHA", "CL", "CDI", "CM", "CY", "CROLL", "CN"];

pub fn write_ffm(t: &FfmSummary) -> String {
    let mut s = format!(
        "{} {}\n$COLUMNS {}\n",
        t.geometry.tag(),
        t.title.trim(),
        COLUMNS.join(" ")
    );
    for r in &t.rows {
        for v in r.values() {
            let _ = write!(s, "{:>14}", sci(v));
        }
        s.push('\n');
    }
    s.push_str("$END\n");
    s
}

pub fn parse_ffm(text: &str) -> Result<FfmSummary, FfmError> {
    let mut geometry = None;
    let mut title = String::new();
    let mut order: Option<Vec<usize>> = None;
    let mut rows: Vec<ForceRow> = Vec::new();
    let mut ended = false;
    let mut last = 0;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last = line;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        let bad = |msg: String| FfmError::MalformedFfmf { line, msg };
        if ended {
            return Err(bad("content after $END".into()));
        }
        let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
        match head {
            "$FFM" | "$FFMF" if geometry.is_none() => {
                geometry = Some(if head == "$FFM" {
                    Geometry::Half
                } else {
                    Geometry::Full
                });
                title = rest.trim().to_string();
            }
            "$COLUMNS" => {
                let names: Vec<&str> = rest.split_whitespace().collect();
                let mut idx = Vec::with_capacity(names.len());
                for n in &names {
                    let c = COLUMNS
                        .iter()
                        .position(|c| c.eq_ignore_ascii_case(n))
                        .ok_or_else(|| bad(format!("unknown column {n:?}")))?;
                    if idx.contains(&c) {
                        return Err(bad(format!("column {n} repeated")));
                    }
                    idx.push(c);
                }
                if let Some(m) = (0..4).find(|c| !idx.contains(c)) {
                    return Err(bad(format!("missing column {}", COLUMNS[m])));
                }
                order = Some(idx);
            }
            "$END" => ended = true,
            _ if head.starts_with('$') => return Err(bad(format!("unexpected {head}"))),
            _ => {
                if geometry.is_none() {
                    return Err(bad("missing $FFM or $FFMF header".into()));
                }
                let idx = order
                    .as_ref()
                    .ok_or_else(|| bad("row before $COLUMNS".into()))?;
                let v: Vec<f64> = l
                    .split_whitespace()
                    .map(|t| parse_num(t).ok_or_else(|| bad(format!("bad value {t:?}"))))
                    .collect::<Result<_, _>>()?;
                if v.len() != idx.len() {
                    return Err(bad(format!(
                        "expected {} values, found {}",
                        idx.len(),
                        v.len()
                    )));
                }
                let mut r = [0.0; 7];
                for (c, x) in idx.iter().zip(v) {
                    r[*c] = x;
                }
                if let Some(p) = rows.last() {
                    if !(r[0] > p.alpha) {
                        return Err(bad(format!("alpha {} does not increase", r[0])));
                    }
                }
                rows.push(ForceRow {
                    alpha: r[0],
                    cl: r[1],
                    cdi: r[2],
                    cm: r[3],
                    cy: r[4],
                    croll: r[5],
                    cn: r[6],
                });
            }
        }
    }
    let bad = |msg: &str| FfmError::MalformedFfmf {
        line: last,
        msg: msg.to_string(),
    };
    let geometry = geometry.ok_or_else(|| bad("missing $FFM or $FFMF header"))?;
    if !ended {
        return Err(bad("missing $END"));
    }
    if rows.is_empty() {
        return Err(bad("empty force table"));
    }
    Ok(FfmSummary {
        geometry,
        title,
        rows,
    })
}

/// Checks a half-model table against the full-configuration one: lift, drag
/// and pitching moment double, side force and the lateral moments cancel.
/// `rel_tol` absorbs the rounding of the text form; zero demands exact
/// agreement.
pub fn verify_doubling(half: &FfmSummary, full: &FfmSummary, rel_tol: f64) -> Result<(), FfmError> {
    let bad = |msg: String| FfmError::MalformedFfmf { line: 0, msg };
    if half.rows.len() != full.rows.len() {
        return Err(bad(format!(
            "{} half rows, {} full rows",
            half.rows.len(),
            full.rows.len()
        )));
    }
    for (h, f) in half.rows.iter().zip(&full.rows) {
        if h.alpha != f.alpha {
            return Err(bad(format!("alpha {} against {}", h.alpha, f.alpha)));
        }
        let checks = [
            ("CL", h.cl, f.cl, 2.0 * h.cl),
            ("CDI", h.cdi, f.cdi, 2.0 * h.cdi),
            ("CM", h.cm, f.cm, 2.0 * h.cm),
            ("CY", h.cy, f.cy, 0.0),
            ("CROLL", h.croll, f.croll, 0.0),
            ("CN", h.cn, f.cn, 0.0),
        ];
        for (what, hv, fv, want) in checks {
            if (fv - want).abs() > rel_tol * want.abs().max(fv.abs()) {
                return Err(FfmError::Doubling {
                    alpha: h.alpha,
                    what,
                    half: hv,
                    full: fv,
                });
            }
        }
    }
    Ok(())
}
