//! Drag polar table: induced drag from the force table plus a constant
//! parasite drag.

use std::fmt::Write as _;

use super::ffm::FfmSummary;

pub const HEADER: &str = "alpha,CL,CDi,CD0,CD_total";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarRow {
    pub alpha: f64,
    pub cl: f64,
    pub cdi: f64,
    pub cd0: f64,
    pub cd_total: f64,
}

/// Numbers are written in shortest round-trip form.
pub fn write_polar_csv(summary: &FfmSummary, cd0: f64) -> String {
    let mut s = format!("{HEADER}\n");
    for r in &summary.rows {
        let _ = writeln!(s, "{},{},{},{},{}", r.alpha, r.cl, r.cdi, cd0, r.cdi + cd0);
    }
    s
}

pub fn parse_polar_csv(text: &str) -> Option<Vec<PolarRow>> {
    let mut lines = text.lines();
    if lines.next()? != HEADER {
        return None;
    }
    lines
        .map(|l| {
            let v: Vec<f64> = l
                .split(',')
                .map(|t| t.parse().ok())
                .collect::<Option<_>>()?;
            let [alpha, cl, cdi, cd0, cd_total] = v[..] else {
                return None;
            };
            Some(PolarRow {
                alpha,
                cl,
                cdi,
                cd0,
                cd_total,
            })
        })
        .collect()
}
