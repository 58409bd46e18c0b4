//! Surface velocities and pressures from the solved doublet distribution.
//!
//! With the interior perturbation potential held at zero, the outer
//! perturbation potential on the surface is `μ`, so the tangential velocity is
//! `V∞,t + ∇μ`. The surface gradient combines second-order differences
//! along the two grid directions through neighbouring panel centroids.

use alloc::vec;
use alloc::vec::Vec;

use super::model::{Compressibility, Neighbour, SolverModel};
use super::solve::Strengths;
use crate::geom::{Point3, Vec3};
use crate::math;

fn resolve(model: &SolverModel, k: usize, nb: Neighbour, mu: &[f64]) -> (Point3, f64) {
    match nb {
        Neighbour::Panel(n) => (model.panels[n].geom.centroid, mu[n]),
        Neighbour::Mirror => (model.panels[k].geom.centroid.mirror_y(), mu[k]),
    }
}

/// The panel beyond neighbour `n` of `k`, continuing away from `k`.
fn next_beyond(model: &SolverModel, k: usize, n: Neighbour) -> Option<Neighbour> {
    let Neighbour::Panel(n) = n else { return None };
    let back = model.neighbours[n]
        .iter()
        .position(|x| *x == Some(Neighbour::Panel(k)))?;
    match model.neighbours[n][back ^ 1]? {
        Neighbour::Panel(m) if m != k => Some(Neighbour::Panel(m)),
        _ => None,
    }
}

/// Derivative of `μ` at the panel along one grid direction, from a quadratic
/// through up to three centroids on the polyline of neighbours. Returns the
/// unit direction and the derivative.
fn directional(model: &SolverModel, k: usize, dir: usize, mu: &[f64]) -> Option<(Vec3, f64)> {
    let c0 = model.panels[k].geom.centroid;
    let f0 = mu[k];
    let n = model.panels[k].geom.normal;
    let [minus, plus] = [
        model.neighbours[k][2 * dir],
        model.neighbours[k][2 * dir + 1],
    ];
    let tangent = |v: Vec3| (v - n * v.dot(n)).normalized();
    // (signed arc position, value) of the stencil points
    let (pts, e) = match (minus, plus) {
        (Some(m), Some(p)) => {
            let (cm, fm) = resolve(model, k, m, mu);
            let (cp, fp) = resolve(model, k, p, mu);
            let e = tangent(cp - cm)?;
            ([(-c0.distance(cm), fm), (c0.distance(cp), fp)], e)
        }
        (Some(a), None) | (None, Some(a)) => {
            let sign = if plus.is_some() { 1.0 } else { -1.0 };
            let (c1, f1) = resolve(model, k, a, mu);
            let e = tangent((c1 - c0) * sign)?;
            let s1 = sign * c0.distance(c1);
            match next_beyond(model, k, a) {
                Some(b) => {
                    let (c2, f2) = resolve(model, k, b, mu);
                    ([(s1, f1), (s1 + sign * c1.distance(c2), f2)], e)
                }
                None => {
                    if s1 == 0.0 {
                        return None;
                    }
                    return Some((e, (f1 - f0) / s1));
                }
            }
        }
        (None, None) => return None,
    };
    let [(s1, f1), (s2, f2)] = pts;
    if s1 == 0.0 || s2 == 0.0 || s1 == s2 {
        return None;
    }
    let d = -(s1 + s2) / (s1 * s2) * f0 - s2 / (s1 * (s1 - s2)) * f1 - s1 / (s2 * (s2 - s1)) * f2;
    Some((e, d))
}

fn tangent_basis(n: Vec3) -> (Vec3, Vec3) {
    let seed = if n.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
    let t1 = (seed - n * seed.dot(n)).normalized().unwrap_or(Vec3::Y);
    (t1, n.cross(t1))
}

/// Surface gradient of `μ` from the derivatives along the two grid
/// directions.
fn surface_gradient(model: &SolverModel, k: usize, mu: &[f64]) -> Vec3 {
    let n = model.panels[k].geom.normal;
    let (t1, t2) = tangent_basis(n);
    let r = directional(model, k, 0, mu);
    let c = directional(model, k, 1, mu);
    match (r, c) {
        (Some((er, dr)), Some((ec, dc))) => {
            let (a11, a12, a21, a22) = (er.dot(t1), er.dot(t2), ec.dot(t1), ec.dot(t2));
            let det = a11 * a22 - a12 * a21;
            if det.abs() < 1e-6 {
                return er * dr;
            }
            let x1 = (a22 * dr - a12 * dc) / det;
            let x2 = (a11 * dc - a21 * dr) / det;
            t1 * x1 + t2 * x2
        }
        (Some((e, d)), None) | (None, Some((e, d))) => e * d,
        (None, None) => Vec3::ZERO,
    }
}

/// Total surface velocity at each body panel centroid, in units of `|V∞|`.
pub fn panel_velocities(model: &SolverModel, s: &Strengths) -> Vec<Vec3> {
    let v = s.v_inf;
    model
        .panels
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let n = p.geom.normal;
            let grad = surface_gradient(model, k, &s.mu);
            v - n * v.dot(n) + grad
        })
        .collect()
}

/// `Cp = 1 - |V|²` per body panel, divided by `β = sqrt(1 - M²)` under the
/// Prandtl–Glauert rule.
pub fn panel_cp(model: &SolverModel, s: &Strengths) -> Vec<f64> {
    let opts = &model.options;
    let pg = match opts.compressibility {
        Compressibility::PrandtlGlauert => 1.0 / math::sqrt(1.0 - opts.mach * opts.mach),
        Compressibility::None => 1.0,
    };
    panel_velocities(model, s)
        .into_iter()
        .map(|u| (1.0 - u.norm_squared()) * pg)
        .collect()
}

/// Grid-node pressures per network (row-major), averaged over the body panels
/// around each node. Nodes of wakes and nodes without body panels get zero.
pub fn node_cp(model: &SolverModel, panel_cp: &[f64]) -> Vec<Vec<f64>> {
    model
        .layouts
        .iter()
        .map(|lay| {
            let (nr, nc) = (lay.n_rows, lay.n_cols);
            let mut sum = vec![0.0; nr * nc];
            let mut cnt = vec![0u32; nr * nc];
            if !lay.is_wake {
                for i in 0..nr - 1 {
                    for j in 0..nc - 1 {
                        let Some(k) = lay.cell(i, j) else { continue };
                        for (a, b) in [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)] {
                            sum[a * nc + b] += panel_cp[k];
                            cnt[a * nc + b] += 1;
                        }
                    }
                }
                // seam nodes of closed grids see both sides
                if lay.wrap_cols {
                    for i in 0..nr {
                        let (a, b) = (i * nc, i * nc + nc - 1);
                        let (s, c) = (sum[a] + sum[b], cnt[a] + cnt[b]);
                        sum[a] = s;
                        sum[b] = s;
                        cnt[a] = c;
                        cnt[b] = c;
                    }
                }
                if lay.wrap_rows {
                    for j in 0..nc {
                        let (a, b) = (j, (nr - 1) * nc + j);
                        let (s, c) = (sum[a] + sum[b], cnt[a] + cnt[b]);
                        sum[a] = s;
                        sum[b] = s;
                        cnt[a] = c;
                        cnt[b] = c;
                    }
                }
            }
            sum.iter()
                .zip(&cnt)
                .map(|(s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
                .collect()
        })
        .collect()
}
