//! Influence assembly, factorization and per-case solves.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::forces::{near_field, trefftz_cdi, ForceSet, WindAxes};
use super::influence::PanelGeom;
use super::model::{Compressibility, SolverModel};
use super::surface::{node_cp, panel_cp};
use super::SolverError;
use crate::geom::Vec3;
use crate::linalg::{LinalgError, Lu, Matrix};
use crate::math;

/// Unit freestream for angle of attack and sideslip in degrees:
/// `(cos α cos β, -sin β, sin α cos β)`.
pub fn freestream(alpha_deg: f64, beta_deg: f64) -> Vec3 {
    let (a, b) = (alpha_deg.to_radians(), beta_deg.to_radians());
    Vec3::new(
        math::cos(a) * math::cos(b),
        -math::sin(b),
        math::sin(a) * math::cos(b),
    )
}

struct Mirrors {
    panels: Vec<PanelGeom>,
    strips: Vec<Vec<PanelGeom>>,
}

fn mirrors(model: &SolverModel) -> Option<Mirrors> {
    if !model.options.symmetry {
        return None;
    }
    Some(Mirrors {
        panels: model.panels.iter().map(|p| p.geom.mirrored()).collect(),
        strips: model
            .strips
            .iter()
            .map(|s| s.panels.iter().map(|g| g.mirrored()).collect())
            .collect(),
    })
}

fn assemble_row(model: &SolverModel, mir: Option<&Mirrors>, i: usize, row: &mut [f64]) -> Vec3 {
    let x = model.panels[i].geom.collocation();
    let mut src = Vec3::ZERO;
    for (j, pj) in model.panels.iter().enumerate() {
        let (s, d) = pj.geom.source_and_doublet(x);
        row[j] = if i == j { -0.5 } else { d };
        src += pj.geom.normal * s;
        if let Some(m) = mir {
            let g = &m.panels[j];
            let (s, d) = g.source_and_doublet(x);
            row[j] += d;
            src += g.normal * s;
        }
    }
    for (k, strip) in model.strips.iter().enumerate() {
        let mut w: f64 = strip.panels.iter().map(|g| g.doublet_potential(x)).sum();
        if let Some(m) = mir {
            w += m.strips[k]
                .iter()
                .map(|g| g.doublet_potential(x))
                .sum::<f64>();
        }
        row[strip.plus] += w;
        row[strip.minus] -= w;
    }
    src
}

/// Dense influence matrix `A` (doublets, wakes folded in through the Kutta
/// condition) and the source operator rows `B`, with `b = B · V∞` as the
/// right-hand side.
pub fn assemble_influence(model: &SolverModel) -> (Matrix, Vec<Vec3>) {
    let n = model.unknowns();
    let mir = mirrors(model);
    let mut a = Matrix::zeros(n, n);
    let mut b = vec![Vec3::ZERO; n];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        a.as_mut_slice()
            .par_chunks_mut(n)
            .zip(b.par_iter_mut())
            .enumerate()
            .for_each(|(i, (row, bi))| *bi = assemble_row(model, mir.as_ref(), i, row));
    }
    #[cfg(not(feature = "parallel"))]
    for (i, (row, bi)) in a.as_mut_slice().chunks_mut(n).zip(b.iter_mut()).enumerate() {
        *bi = assemble_row(model, mir.as_ref(), i, row);
    }
    (a, b)
}

/// Singularity strengths for one freestream.
#[derive(Debug, Clone, PartialEq)]
pub struct Strengths {
    pub v_inf: Vec3,
    /// Doublet per body panel.
    pub mu: Vec<f64>,
    /// Source per body panel.
    pub sigma: Vec<f64>,
    /// Doublet per wake strip.
    pub wake_mu: Vec<f64>,
    /// `|A μ - b|∞`.
    pub residual: f64,
}

/// Everything computed for one angle of attack.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub alpha: f64,
    pub beta: f64,
    pub strengths: Strengths,
    pub panel_cp: Vec<f64>,
    /// Node pressure coefficients per network, row-major.
    pub node_cp: Vec<Vec<f64>>,
    /// Forces on the modeled geometry.
    pub half: ForceSet,
    /// Forces on the complete configuration.
    pub full: ForceSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    pub cases: Vec<CaseResult>,
}

impl SolutionSet {
    pub fn alphas(&self) -> Vec<f64> {
        self.cases.iter().map(|c| c.alpha).collect()
    }
}

/// An assembled and factored model, ready for any number of freestreams.
#[derive(Debug, Clone)]
pub struct PanelSolver {
    model: SolverModel,
    a: Matrix,
    rhs_op: Vec<Vec3>,
    lu: Lu,
}

impl PanelSolver {
    pub fn new(model: SolverModel) -> Result<PanelSolver, SolverError> {
        let (a, rhs_op) = assemble_influence(&model);
        let lu = Lu::factor(a.clone()).map_err(|e| singular(&model, &e))?;
        Ok(PanelSolver {
            model,
            a,
            rhs_op,
            lu,
        })
    }

    pub fn model(&self) -> &SolverModel {
        &self.model
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn condition_estimate(&self) -> f64 {
        self.lu.condition_estimate()
    }

    /// Solves for a unit freestream direction `v_inf`.
    pub fn solve_freestream(&self, v_inf: Vec3) -> Result<Strengths, SolverError> {
        let v = v_inf.normalized().unwrap_or(Vec3::X);
        if self.model.options.symmetry && v.y != 0.0 {
            return Err(SolverError::SideslipInSymmetry(
                math::atan2(-v.y, math::sqrt(v.x * v.x + v.z * v.z)).to_degrees(),
            ));
        }
        let b: Vec<f64> = self.rhs_op.iter().map(|r| r.dot(v)).collect();
        let to_err = |e: LinalgError| singular(&self.model, &e);
        let mut mu = self.lu.solve(&b).map_err(to_err)?;
        let bnorm = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let mut residual = self.residual(&mu, &b);
        if residual > 1e-10 * bnorm {
            let r: Vec<f64> = self
                .a
                .mul_vec(&mu)
                .iter()
                .zip(&b)
                .map(|(ax, bx)| ax - bx)
                .collect();
            let d = self.lu.solve(&r).map_err(to_err)?;
            for (m, dm) in mu.iter_mut().zip(&d) {
                *m -= dm;
            }
            residual = self.residual(&mu, &b);
            if residual > 1e-10 * bnorm {
                return Err(SolverError::Residual {
                    residual,
                    rhs: bnorm,
                });
            }
        }
        let sigma = self
            .model
            .panels
            .iter()
            .map(|p| -v.dot(p.geom.normal))
            .collect();
        let wake_mu = self
            .model
            .strips
            .iter()
            .map(|s| mu[s.plus] - mu[s.minus])
            .collect();
        Ok(Strengths {
            v_inf: v,
            mu,
            sigma,
            wake_mu,
            residual,
        })
    }

    fn residual(&self, mu: &[f64], b: &[f64]) -> f64 {
        self.a
            .mul_vec(mu)
            .iter()
            .zip(b)
            .fold(0.0f64, |m, (ax, bx)| m.max((ax - bx).abs()))
    }

    /// Surface pressures and forces for a solved freestream, with forces
    /// resolved in `axes`.
    pub fn evaluate(
        &self,
        strengths: Strengths,
        axes: WindAxes,
        alpha: f64,
        beta: f64,
    ) -> CaseResult {
        let pcp = panel_cp(&self.model, &strengths);
        let ncp = node_cp(&self.model, &pcp);
        let opts = &self.model.options;
        let mut half = near_field(&self.model, &pcp, &axes);
        let pg = match opts.compressibility {
            Compressibility::PrandtlGlauert => 1.0 / math::sqrt(1.0 - opts.mach * opts.mach),
            Compressibility::None => 1.0,
        };
        let cdi_full = trefftz_cdi(&self.model, &strengths.wake_mu, &axes) * pg * pg;
        let full = if opts.symmetry {
            half.cdi_trefftz = 0.5 * cdi_full;
            half.symmetric_total(&axes, &opts.refs, cdi_full)
        } else {
            half.cdi_trefftz = cdi_full;
            half
        };
        CaseResult {
            alpha,
            beta,
            strengths,
            panel_cp: pcp,
            node_cp: ncp,
            half,
            full,
        }
    }

    /// One case at angle of attack and sideslip in degrees.
    pub fn case(&self, alpha: f64, beta: f64) -> Result<CaseResult, SolverError> {
        if self.model.options.symmetry && beta != 0.0 {
            return Err(SolverError::SideslipInSymmetry(beta));
        }
        let v = freestream(alpha, beta);
        let s = self.solve_freestream(v)?;
        Ok(self.evaluate(s, WindAxes::from_angles(alpha, beta), alpha, beta))
    }

    /// All cases, sharing the factorization.
    pub fn sweep(&self, alphas: &[f64], beta: f64) -> Result<SolutionSet, SolverError> {
        let cases = alphas
            .iter()
            .map(|&a| self.case(a, beta))
            .collect::<Result<_, _>>()?;
        Ok(SolutionSet { cases })
    }
}

fn singular(model: &SolverModel, e: &LinalgError) -> SolverError {
    let col = match e {
        LinalgError::Singular { column, .. } => *column,
        _ => 0,
    };
    let col = col.min(model.unknowns().saturating_sub(1));
    let (network, row, c) = model.panel_label(col);
    let here = model.panels[col].geom.centroid;
    let tol = 1e-9 * model.scale;
    let twin = model
        .panels
        .iter()
        .enumerate()
        .find(|(k, p)| *k != col && p.geom.centroid.distance(here) <= tol);
    let detail = match twin {
        Some((k, _)) => {
            let (n2, r2, c2) = model.panel_label(k);
            format!("{e}; coincides with panel ({r2}, {c2}) of {n2}")
        }
        None => format!("{e}"),
    };
    SolverError::SingularMatrix {
        network,
        row,
        col: c,
        detail,
    }
}
