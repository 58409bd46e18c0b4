//! Pressure integration and Trefftz-plane induced drag.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::model::{References, SolverModel};
use crate::geom::Vec3;
use crate::math;

/// Drag, lift and side-force directions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindAxes {
    pub drag: Vec3,
    pub lift: Vec3,
    pub side: Vec3,
}

impl WindAxes {
    /// Axes for angle of attack and sideslip in degrees. Drag is along the
    /// freestream; lift is `(-sin α, 0, cos α)` made orthogonal to it.
    pub fn from_angles(alpha_deg: f64, beta_deg: f64) -> WindAxes {
        let a = alpha_deg.to_radians();
        let drag = super::freestream(alpha_deg, beta_deg);
        let l0 = Vec3::new(-math::sin(a), 0.0, math::cos(a));
        let lift = (l0 - drag * l0.dot(drag)).normalized().unwrap_or(Vec3::Z);
        WindAxes {
            drag,
            lift,
            side: lift.cross(drag),
        }
    }
}

/// Integrated loads. Forces and moments are divided by dynamic pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSet {
    pub force: Vec3,
    /// About the moment reference point.
    pub moment: Vec3,
    pub cl: f64,
    pub cdi_near: f64,
    pub cy: f64,
    pub cdi_trefftz: f64,
    /// Pitching moment on `sref · cbar`.
    pub cm: f64,
    /// Rolling moment on `sref · span`.
    pub croll: f64,
    /// Yawing moment on `sref · span`.
    pub cn: f64,
}

impl ForceSet {
    pub fn from_resultants(
        force: Vec3,
        moment: Vec3,
        axes: &WindAxes,
        refs: &References,
    ) -> ForceSet {
        let s = refs.sref;
        ForceSet {
            force,
            moment,
            cl: force.dot(axes.lift) / s,
            cdi_near: force.dot(axes.drag) / s,
            cy: force.dot(axes.side) / s,
            cdi_trefftz: 0.0,
            cm: moment.y / (s * refs.cbar),
            croll: moment.x / (s * refs.span),
            cn: moment.z / (s * refs.span),
        }
    }

    /// Loads on the whole configuration from those on the `y >= 0` half:
    /// symmetric components double and antisymmetric ones cancel.
    pub fn symmetric_total(
        &self,
        axes: &WindAxes,
        refs: &References,
        cdi_trefftz: f64,
    ) -> ForceSet {
        let f = Vec3::new(2.0 * self.force.x, 0.0, 2.0 * self.force.z);
        let m = Vec3::new(0.0, 2.0 * self.moment.y, 0.0);
        let mut out = ForceSet::from_resultants(f, m, axes, refs);
        out.cdi_trefftz = cdi_trefftz;
        out
    }
}

/// `F = -Σ Cp A n` and its moment over the modeled body panels.
pub fn near_field(model: &SolverModel, panel_cp: &[f64], axes: &WindAxes) -> ForceSet {
    let refs = &model.options.refs;
    let mut f = Vec3::ZERO;
    let mut m = Vec3::ZERO;
    for (p, cp) in model.panels.iter().zip(panel_cp) {
        let df = p.geom.normal * (-cp * p.geom.area);
        f += df;
        m += (p.geom.centroid - refs.moment_ref).cross(df);
    }
    ForceSet::from_resultants(f, m, axes, refs)
}

struct Segment {
    a: [f64; 2],
    b: [f64; 2],
    mu: f64,
}

/// Far-field induced drag coefficient of the complete configuration.
///
/// The downstream edges of the wake strips are projected on the plane normal
/// to the freestream. Each strip is a vortex sheet segment carrying its doublet
/// jump, equivalent to a pair of point vortices at its ends; the drag is
/// `-(1/S) Σ μ (v·n) Δs` over the segments, with `v` evaluated at their
/// midpoints. In symmetry mode the mirror image of the wake is included.
pub fn trefftz_cdi(model: &SolverModel, wake_mu: &[f64], axes: &WindAxes) -> f64 {
    let (e1, e2) = (axes.side, axes.lift);
    let proj = |p: Vec3| [p.dot(e1), p.dot(e2)];
    let mut segs = Vec::with_capacity(2 * wake_mu.len());
    let mut push = |a: Vec3, b: Vec3, n: Vec3, mu: f64| {
        let (mut a, mut b) = (proj(a), proj(b));
        let nn = proj(n);
        // rot90ccw(b - a) should point along the strip normal
        let t = [b[0] - a[0], b[1] - a[1]];
        if -t[1] * nn[0] + t[0] * nn[1] < 0.0 {
            core::mem::swap(&mut a, &mut b);
        }
        segs.push(Segment { a, b, mu });
    };
    for (s, &mu) in model.strips.iter().zip(wake_mu) {
        let (a, b) = s.far_edge;
        push(a, b, s.normal, mu);
        if model.options.symmetry {
            push(a.mirror_y(), b.mirror_y(), s.normal.mirror_y(), mu);
        }
    }
    let g = |q: [f64; 2], m: [f64; 2]| {
        let d = [q[0] - m[0], q[1] - m[1]];
        let r2 = d[0] * d[0] + d[1] * d[1];
        if r2 == 0.0 {
            [0.0, 0.0]
        } else {
            [d[1] / r2, -d[0] / r2]
        }
    };
    let mut sum = 0.0;
    for s in &segs {
        let t = [s.b[0] - s.a[0], s.b[1] - s.a[1]];
        let ds = math::sqrt(t[0] * t[0] + t[1] * t[1]);
        if ds == 0.0 {
            continue;
        }
        let n = [-t[1] / ds, t[0] / ds];
        let m = [0.5 * (s.a[0] + s.b[0]), 0.5 * (s.a[1] + s.b[1])];
        let mut v = [0.0, 0.0];
        for o in &segs {
            let (gb, ga) = (g(o.b, m), g(o.a, m));
            let k = o.mu / (2.0 * PI);
            v[0] += k * (gb[0] - ga[0]);
            v[1] += k * (gb[1] - ga[1]);
        }
        sum += s.mu * (v[0] * n[0] + v[1] * n[1]) * ds;
    }
    -sum / model.options.refs.sref
}
