//! Ready-made geometries: analytic test bodies and simple wings.
//!
//! These are used by the tests and the command line's demo cases. Grids
//! follow the crate conventions: outward normals by the right-hand rule,
//! wing upper surfaces running trailing edge to leading edge and lower
//! surfaces leading edge to trailing edge, with columns running in `+y`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::geom::{Point3, Vec3};
use crate::math;
use crate::mesh::{Element, ElementKind, NodeId, RawMesh};
use crate::network::{BcClass, ComponentKind, Edge, NetworkError, StructuredNetwork};

mod aircraft;

pub use aircraft::*;

/// Sphere of `radius` about the origin, `n_rows` panels from the `-x` pole to
/// the `+x` pole and `n_cols` around. Both pole rows are collapsed.
pub fn sphere(radius: f64, n_rows: usize, n_cols: usize) -> StructuredNetwork {
    let (nr, nc) = (n_rows + 1, n_cols + 1);
    let mut pts = Vec::with_capacity(nr * nc);
    for i in 0..nr {
        let t = PI * i as f64 / n_rows as f64;
        let (st, ct) = if i == 0 {
            (0.0, 1.0)
        } else if i == n_rows {
            (0.0, -1.0)
        } else {
            (math::sin(t), math::cos(t))
        };
        for j in 0..nc {
            // clockwise seen from the nose, starting at the top
            let p = if j == n_cols {
                0.0
            } else {
                2.0 * PI * j as f64 / n_cols as f64
            };
            pts.push(Vec3::new(
                -radius * ct,
                -radius * st * math::sin(p),
                radius * st * math::cos(p),
            ));
        }
    }
    let mut flags = [false; 4];
    flags[Edge::FirstRow.index()] = true;
    flags[Edge::LastRow.index()] = true;
    StructuredNetwork::with_flags(
        "SPHERE",
        ComponentKind::Fuselage,
        BcClass::ImpermeableSurface,
        nr,
        nc,
        pts,
        flags,
    )
    .expect("sphere grid is valid")
}

/// Exact surface pressure on a sphere in uniform flow along `+x`.
pub fn sphere_cp(p: Point3) -> f64 {
    let r = p.norm();
    if r == 0.0 {
        return 1.0;
    }
    let c = p.x / r;
    1.0 - 2.25 * (1.0 - c * c)
}

/// Symmetric four-digit NACA thickness `z/c` at `x/c`, with the closed
/// trailing-edge coefficient.
pub fn naca_thickness(t: f64, x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    5.0 * t
        * (0.2969 * math::sqrt(x) - 0.1260 * x - 0.3516 * x * x + 0.2843 * x * x * x
            - 0.1036 * x * x * x * x)
}

/// Cosine-clustered chordwise stations `0..=n`, dense at both ends.
pub fn cosine_spacing(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| {
            if k == 0 {
                0.0
            } else if k == n {
                1.0
            } else {
                0.5 * (1.0 - math::cos(PI * k as f64 / n as f64))
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Planform {
    Rectangular,
    /// Linear taper from the root chord to `tip_ratio` times it.
    Tapered {
        tip_ratio: f64,
    },
    /// Chord `c0 sqrt(1 - (2y/b)²)`, reaching zero at the tip; the quarter
    /// chord line is straight.
    Elliptic,
}

/// An untwisted wing with symmetric NACA sections.
#[derive(Debug, Clone, PartialEq)]
pub struct WingSpec {
    pub name: &'static str,
    /// Tip-to-tip span.
    pub span: f64,
    pub root_chord: f64,
    pub planform: Planform,
    /// Thickness ratio.
    pub thickness: f64,
    /// Panels along each of the upper and lower chord.
    pub n_chord: usize,
    /// Panels across one semispan.
    pub n_span: usize,
    /// Wake length in root chords.
    pub wake_chords: f64,
}

impl WingSpec {
    pub fn rectangular(aspect_ratio: f64, thickness: f64) -> WingSpec {
        WingSpec {
            name: "WING",
            span: aspect_ratio,
            root_chord: 1.0,
            planform: Planform::Rectangular,
            thickness,
            n_chord: 24,
            n_span: 12,
            wake_chords: 20.0,
        }
    }

    pub fn elliptic(aspect_ratio: f64, thickness: f64) -> WingSpec {
        // area = π c0 b / 4, AR = b² / area
        let c0 = 1.0;
        WingSpec {
            name: "WING",
            span: aspect_ratio * PI * c0 / 4.0,
            root_chord: c0,
            planform: Planform::Elliptic,
            thickness,
            n_chord: 20,
            n_span: 16,
            wake_chords: 20.0,
        }
    }

    /// Planform area of the whole wing.
    pub fn area(&self) -> f64 {
        let (b, c) = (self.span, self.root_chord);
        match self.planform {
            Planform::Rectangular => b * c,
            Planform::Tapered { tip_ratio } => 0.5 * b * c * (1.0 + tip_ratio),
            Planform::Elliptic => PI * b * c / 4.0,
        }
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.span * self.span / self.area()
    }

    /// Mean aerodynamic chord.
    pub fn mac(&self) -> f64 {
        let c = self.root_chord;
        match self.planform {
            Planform::Rectangular => c,
            Planform::Tapered { tip_ratio: l } => 2.0 / 3.0 * c * (1.0 + l + l * l) / (1.0 + l),
            Planform::Elliptic => 8.0 * c / (3.0 * PI),
        }
    }

    fn chord_and_le(&self, y: f64) -> (f64, f64) {
        let eta = (2.0 * y.abs() / self.span).min(1.0);
        let c0 = self.root_chord;
        let c = match self.planform {
            Planform::Rectangular => c0,
            Planform::Tapered { tip_ratio } => c0 * (1.0 - eta * (1.0 - tip_ratio)),
            Planform::Elliptic => c0 * math::sqrt((1.0 - eta * eta).max(0.0)),
        };
        // straight quarter-chord line at x = c0 / 4
        (c, 0.25 * (c0 - c))
    }

    /// Spanwise stations over `[0, b/2]`, clustered towards the tip.
    fn semispan_stations(&self) -> Vec<f64> {
        let n = self.n_span;
        (0..=n)
            .map(|k| {
                if k == n {
                    0.5 * self.span
                } else {
                    0.5 * self.span * math::sin(0.5 * PI * k as f64 / n as f64)
                }
            })
            .collect()
    }

    fn stations(&self, full: bool) -> Vec<f64> {
        let half = self.semispan_stations();
        if !full {
            return half;
        }
        let mut out: Vec<f64> = half.iter().rev().map(|y| -*y).collect();
        out.extend_from_slice(&half[1..]);
        out
    }

    /// Upper, lower and wake networks of the `y >= 0` half (`full = false`) or
    /// of the whole wing as single networks spanning tip to tip.
    pub fn networks(&self, full: bool) -> Result<Vec<StructuredNetwork>, NetworkError> {
        let ys = self.stations(full);
        let xs = cosine_spacing(self.n_chord);
        let nu = xs.len();
        let surf = |sign: f64, i: usize, y: f64| {
            let (c, le) = self.chord_and_le(y);
            let x = xs[i];
            Vec3::new(le + c * x, y, sign * c * naca_thickness(self.thickness, x))
        };
        // finite tips are closed by a column on the chord plane
        let cap = self.planform != Planform::Elliptic;
        let mut cols: Vec<(f64, f64)> = ys.iter().map(|&y| (y, 1.0)).collect();
        if cap {
            cols.push((ys[ys.len() - 1], 0.0));
            if full {
                cols.insert(0, (ys[0], 0.0));
            }
        }
        let nc = cols.len();
        let mut upper = Vec::with_capacity(nu * nc);
        for i in 0..nu {
            for &(y, f) in &cols {
                upper.push(surf(f, nu - 1 - i, y));
            }
        }
        let mut lower = Vec::with_capacity(nu * nc);
        for i in 0..nu {
            for &(y, f) in &cols {
                lower.push(surf(-f, i, y));
            }
        }
        let mut flags = [false; 4];
        flags[Edge::LastCol.index()] = true;
        if full {
            flags[Edge::FirstCol.index()] = true;
        }
        let u = StructuredNetwork::with_flags(
            format!("{}_UPPER", self.name),
            ComponentKind::WingUpper,
            BcClass::ImpermeableSurface,
            nu,
            nc,
            upper,
            flags,
        )?;
        let l = StructuredNetwork::with_flags(
            format!("{}_LOWER", self.name),
            ComponentKind::WingLower,
            BcClass::ImpermeableSurface,
            nu,
            nc,
            lower,
            flags,
        )?;
        let len = self.wake_chords * self.root_chord;
        let te: Vec<Point3> = u.row(0).to_vec();
        let mut wpts = te.clone();
        wpts.extend(te.iter().map(|p| *p + Vec3::X * len));
        let w = StructuredNetwork::with_flags(
            format!("{}_WAKE", self.name),
            ComponentKind::Wake,
            BcClass::Wake,
            2,
            nc,
            wpts,
            if cap { flags } else { [false; 4] },
        )?;
        Ok(alloc::vec![u, l, w])
    }
}

/// Unstructured quad mesh of the `y >= 0` half of a wing, one closed section
/// loop of `2 n_chord` nodes per spanwise station (upper trailing edge to
/// leading edge, then the lower surface), in group `spec.name`. Tip caps are
/// not meshed.
pub fn wing_mesh(spec: &WingSpec) -> RawMesh {
    let ys = spec.stations(false);
    let xs = cosine_spacing(spec.n_chord);
    let n = spec.n_chord;
    let mut mesh = RawMesh::default();
    let mut ids: Vec<Vec<NodeId>> = Vec::with_capacity(ys.len());
    for &y in &ys {
        let (c, le) = spec.chord_and_le(y);
        let mut ring = Vec::with_capacity(2 * n);
        let mut push = |x: f64, z: f64| {
            let id = mesh.nodes.len() as NodeId + 1;
            mesh.nodes.insert(id, Vec3::new(le + c * x, y, c * z));
            ring.push(id);
        };
        for k in (0..=n).rev() {
            push(xs[k], naca_thickness(spec.thickness, xs[k]));
        }
        for k in 1..n {
            push(xs[k], -naca_thickness(spec.thickness, xs[k]));
        }
        ids.push(ring);
    }
    let mut group = Vec::new();
    for w in ids.windows(2) {
        let m = w[0].len();
        for k in 0..m {
            let k1 = (k + 1) % m;
            let id = mesh.elements.len() as u64 + 1;
            mesh.elements.push(Element {
                id,
                kind: ElementKind::Quad,
                nodes: alloc::vec![w[0][k], w[0][k1], w[1][k1], w[1][k]],
            });
            group.push(id);
        }
    }
    mesh.groups.insert(spec.name.into(), group);
    mesh
}
