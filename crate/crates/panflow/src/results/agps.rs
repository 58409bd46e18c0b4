//! Surface pressure file.
//!
//! ```text
//! $AGPS <title>
//! $CASES <n> <alpha_1> ... <alpha_n>
//! $NETWORK <name> <n_rows> <n_cols> <n_cases>
//! x y z cp_1 ... cp_n          one record per node, row-major
//! $END
//! ```

use std::fmt::Write as _;

use panflow_core::{Point3, Vec3};

use super::{parse_num, sci};

#[derive(Debug, Clone, PartialEq)]
pub struct AgpsNetwork {
    pub name: String,
    pub n_rows: usize,
    pub n_cols: usize,
    pub points: Vec<Point3>,
    /// `cp[case][node]`, nodes row-major.
    pub cp: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AgpsDocument {
    pub title: String,
    pub alphas: Vec<f64>,
    pub networks: Vec<AgpsNetwork>,
}

impl AgpsDocument {
    pub fn node_count(&self) -> usize {
        self.networks.iter().map(|n| n.points.len()).sum()
    }

    pub fn case_index(&self, alpha: f64) -> Option<usize> {
        self.alphas.iter().position(|a| *a == alpha)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AgpsError {
    #[error("line {line}: network {network:?}: {msg}")]
    MalformedAgps {
        line: usize,
        network: String,
        msg: String,
    },
}

pub fn write_agps(doc: &AgpsDocument) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "$AGPS {}", doc.title.trim());
    let _ = write!(s, "$CASES {}", doc.alphas.len());
    for a in &doc.alphas {
        let _ = write!(s, " {}", sci(*a));
    }
    s.push('\n');
    for n in &doc.networks {
        let _ = writeln!(
            s,
            "$NETWORK {} {} {} {}",
            n.name,
            n.n_rows,
            n.n_cols,
            n.cp.len()
        );
        for (k, p) in n.points.iter().enumerate() {
            let _ = write!(s, "{:>14}{:>14}{:>14}", sci(p.x), sci(p.y), sci(p.z));
            for case in &n.cp {
                let _ = write!(s, "{:>14}", sci(case[k]));
            }
            s.push('\n');
        }
    }
    s.push_str("$END\n");
    s
}

pub fn parse_agps(text: &str) -> Result<AgpsDocument, AgpsError> {
    let mut doc = AgpsDocument::default();
    let mut current: Option<AgpsNetwork> = None;
    let mut seen_cases = false;
    let mut ended = false;
    let mut last_line = 0;

    fn close(
        doc: &mut AgpsDocument,
        net: Option<AgpsNetwork>,
        line: usize,
    ) -> Result<(), AgpsError> {
        let Some(n) = net else { return Ok(()) };
        let want = n.n_rows * n.n_cols;
        if n.points.len() != want {
            return Err(AgpsError::MalformedAgps {
                line,
                network: n.name,
                msg: format!("expected {want} node records, found {}", n.points.len()),
            });
        }
        doc.networks.push(n);
        Ok(())
    }

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        last_line = line;
        let l = raw.trim();
        if l.is_empty() {
            continue;
        }
        let net_name = current.as_ref().map(|n| n.name.clone()).unwrap_or_default();
        let bad = |msg: String| AgpsError::MalformedAgps {
            line,
            network: net_name.clone(),
            msg,
        };
        if ended {
            return Err(bad("content after $END".into()));
        }
        if let Some(rest) = l.strip_prefix("$AGPS") {
            if line != 1 && !doc.title.is_empty() {
                return Err(bad("second $AGPS header".into()));
            }
            doc.title = rest.trim().to_string();
            continue;
        }
        if let Some(rest) = l.strip_prefix("$CASES") {
            let t: Vec<&str> = rest.split_whitespace().collect();
            let n: usize = t
                .first()
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| bad("bad case count".into()))?;
            if t.len() != n + 1 {
                return Err(bad(format!(
                    "{n} cases declared, {} labels given",
                    t.len() - 1
                )));
            }
            doc.alphas = t[1..]
                .iter()
                .map(|v| parse_num(v).ok_or_else(|| bad(format!("bad alpha {v:?}"))))
                .collect::<Result<_, _>>()?;
            seen_cases = true;
            continue;
        }
        if let Some(rest) = l.strip_prefix("$NETWORK") {
            close(&mut doc, current.take(), line - 1)?;
            if !seen_cases {
                return Err(bad("$NETWORK before $CASES".into()));
            }
            let t: Vec<&str> = rest.split_whitespace().collect();
            let [name, r, c, n] = t[..] else {
                return Err(bad("$NETWORK needs name, rows, columns and cases".into()));
            };
            let dims: Vec<usize> = [r, c, n]
                .iter()
                .map(|v| v.parse().map_err(|_| bad(format!("bad count {v:?}"))))
                .collect::<Result<_, _>>()?;
            if dims[0] < 2 || dims[1] < 2 {
                return Err(bad("grid needs at least 2 rows and 2 columns".into()));
            }
            if dims[2] != doc.alphas.len() {
                return Err(bad(format!(
                    "{} cases here, {} declared",
                    dims[2],
                    doc.alphas.len()
                )));
            }
            current = Some(AgpsNetwork {
                name: name.to_string(),
                n_rows: dims[0],
                n_cols: dims[1],
                points: Vec::with_capacity(dims[0] * dims[1]),
                cp: vec![Vec::with_capacity(dims[0] * dims[1]); dims[2]],
            });
            continue;
        }
        if l == "$END" {
            close(&mut doc, current.take(), line - 1)?;
            ended = true;
            continue;
        }
        if l.starts_with('$') {
            return Err(bad(format!("unknown directive {l:?}")));
        }
        let Some(net) = current.as_mut() else {
            return Err(bad("node record outside a network".into()));
        };
        let v: Vec<f64> = l
            .split_whitespace()
            .map(|t| parse_num(t).ok_or_else(|| bad(format!("bad value {t:?}"))))
            .collect::<Result<_, _>>()?;
        if v.len() != 3 + net.cp.len() {
            return Err(bad(format!(
                "expected {} values, found {}",
                3 + net.cp.len(),
                v.len()
            )));
        }
        if net.points.len() == net.n_rows * net.n_cols {
            return Err(bad("more node records than the grid holds".into()));
        }
        net.points.push(Vec3::new(v[0], v[1], v[2]));
        for (c, cp) in net.cp.iter_mut().zip(&v[3..]) {
            c.push(*cp);
        }
    }
    if !ended {
        return Err(AgpsError::MalformedAgps {
            line: last_line,
            network: current.map(|n| n.name).unwrap_or_default(),
            msg: "missing $END".into(),
        });
    }
    Ok(doc)
}
