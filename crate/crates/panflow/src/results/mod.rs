//! Solver output (surface pressures and force tables) and the files derived
//! from it for plotting.

pub mod agps;
pub mod ffm;
pub mod polar;
pub mod tecplot;

pub use agps::{parse_agps, write_agps, AgpsDocument, AgpsError, AgpsNetwork};
pub use ffm::{parse_ffm, verify_doubling, write_ffm, FfmError, FfmSummary, ForceRow, Geometry};
pub use polar::{parse_polar_csv, write_polar_csv, PolarRow};
pub use tecplot::{write_macro, write_tecplot_dat, CaseSelection, TecplotError, ViewPreset};

use panflow_core::solver::{ForceSet, SolutionSet};
use panflow_core::StructuredNetwork;

/// Seven significant digits, Fortran style: `-1.234567E+00`.
pub(crate) fn sci(x: f64) -> String {
    let x = x + 0.0; // no negative zero
    let s = format!("{x:.6e}");
    let (m, e) = s.split_once('e').expect("exponent form");
    let e: i32 = e.parse().expect("integer exponent");
    format!("{m}E{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

pub(crate) fn parse_num(t: &str) -> Option<f64> {
    t.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Surface pressures of every case in solver output form. `nets` are the
/// networks the solution was computed on, in the same order.
pub fn agps_from_solution(
    title: &str,
    nets: &[StructuredNetwork],
    sol: &SolutionSet,
) -> AgpsDocument {
    AgpsDocument {
        title: title.to_string(),
        alphas: sol.alphas(),
        networks: nets
            .iter()
            .enumerate()
            .map(|(k, n)| AgpsNetwork {
                name: n.name().to_string(),
                n_rows: n.n_rows(),
                n_cols: n.n_cols(),
                points: n.points().to_vec(),
                cp: sol.cases.iter().map(|c| c.node_cp[k].clone()).collect(),
            })
            .collect(),
    }
}

fn row(alpha: f64, f: &ForceSet) -> ForceRow {
    ForceRow {
        alpha,
        cl: f.cl,
        cdi: f.cdi_trefftz,
        cm: f.cm,
        cy: f.cy,
        croll: f.croll,
        cn: f.cn,
    }
}

/// Force tables for the modeled half (`ffm`) and the whole configuration
/// (`ffmf`). Induced drag is the Trefftz-plane value.
pub fn ffm_from_solution(title: &str, sol: &SolutionSet) -> (FfmSummary, FfmSummary) {
    let table = |geometry, pick: fn(&panflow_core::solver::CaseResult) -> &ForceSet| FfmSummary {
        geometry,
        title: title.to_string(),
        rows: sol.cases.iter().map(|c| row(c.alpha, pick(c))).collect(),
    };
    (
        table(Geometry::Half, |c| &c.half),
        table(Geometry::Full, |c| &c.full),
    )
}
