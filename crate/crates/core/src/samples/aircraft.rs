//! A light single-engine aircraft at desk scale: low-mounted tapered wing,
//! horizontal tail and a fuselage, generated as the `y >= 0` half of an
//! unstructured quad mesh.
//!
//! Components meet on shared nodes, so the networks built from the mesh abut
//! exactly. Built the usual way (sections, lifting surfaces and bodies, tip
//! closure, flat wakes) the half model has 9 networks, 1938 grid nodes and
//! 1613 panels. Units are feet.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{cosine_spacing, naca_thickness};
use crate::builder::{
    attach_wake, build_fuselage, build_lifting_surface, BuildError, LiftingOptions, LiftingSurface,
};
use crate::geom::{Point3, Vec3};
use crate::math;
use crate::mesh::{extract_sections, Axis, Element, ElementKind, NodeId, RawMesh};
use crate::network::{ComponentKind, StructuredNetwork};
use crate::solver::References;
use crate::viscous::ComponentWettedItem;

pub const DESK_WING: &str = "Wing";
pub const DESK_HTAIL: &str = "HTail";
pub const DESK_NOSE: &str = "FuselageNose";
pub const DESK_FUSELAGE_UPPER: &str = "FuselageUpper";
pub const DESK_FUSELAGE_LOWER: &str = "FuselageLower";

/// Mesh groups in build order.
pub const DESK_GROUPS: [&str; 5] = [
    DESK_WING,
    DESK_HTAIL,
    DESK_NOSE,
    DESK_FUSELAGE_UPPER,
    DESK_FUSELAGE_LOWER,
];

/// Station tolerance that separates every section of the desk mesh.
pub const DESK_STATION_TOL: f64 = 1e-3;

/// Wake length in root chords.
pub const DESK_WAKE_CHORDS: f64 = 20.0;

const LENGTH: f64 = 27.5;
const NOSE_END: f64 = 2.0;
const WIDTH: f64 = 2.1;
const HEIGHT: f64 = 2.5;
const TAIL_WIDTH: f64 = 0.6;
const TAIL_HEIGHT: f64 = 0.9;

/// Trapezoidal lifting surface, root chord quoted on the centerline.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Surface {
    span: f64,
    root_chord: f64,
    tip_chord: f64,
    quarter_chord_x: f64,
    z: f64,
    root_y: f64,
    thickness: f64,
    camber: f64,
    camber_pos: f64,
    n_chord: usize,
    n_span: usize,
}

const WING: Surface = Surface {
    span: 38.886,
    root_chord: 5.4511,
    tip_chord: 3.5432,
    quarter_chord_x: 9.0,
    z: -0.5,
    root_y: WIDTH,
    thickness: 0.12,
    camber: 0.02,
    camber_pos: 0.4,
    n_chord: 21,
    n_span: 12,
};

const HTAIL: Surface = Surface {
    span: 13.8,
    root_chord: 4.1305,
    tip_chord: 2.7674,
    quarter_chord_x: 23.5,
    z: 0.3,
    root_y: TAIL_WIDTH,
    thickness: 0.12,
    camber: 0.0,
    camber_pos: 0.4,
    n_chord: 24,
    n_span: 5,
};

impl Surface {
    fn area(&self) -> f64 {
        0.5 * self.span * (self.root_chord + self.tip_chord)
    }

    fn mac(&self) -> f64 {
        let l = self.tip_chord / self.root_chord;
        2.0 / 3.0 * self.root_chord * (1.0 + l + l * l) / (1.0 + l)
    }

    fn chord(&self, y: f64) -> f64 {
        self.root_chord - (self.root_chord - self.tip_chord) * y / (0.5 * self.span)
    }

    fn camber_line(&self, x: f64) -> f64 {
        let (m, p) = (self.camber, self.camber_pos);
        if m == 0.0 {
            0.0
        } else if x < p {
            m / (p * p) * (2.0 * p * x - x * x)
        } else {
            m / ((1.0 - p) * (1.0 - p)) * (1.0 - 2.0 * p + 2.0 * p * x - x * x)
        }
    }

    /// Surface point at chord fraction index `k`, upper or lower.
    fn point(&self, y: f64, k: usize, upper: bool) -> Point3 {
        let xs = cosine_spacing(self.n_chord);
        let c = self.chord(y);
        let x = xs[k];
        // leading and trailing edges are shared by both surfaces
        let t = if k == 0 || k == self.n_chord {
            0.0
        } else {
            naca_thickness(self.thickness, x)
        };
        let dz = if upper { t } else { -t };
        Vec3::new(
            self.quarter_chord_x - 0.25 * c + c * x,
            y,
            self.z + c * (self.camber_line(x) + dz),
        )
    }

    fn stations(&self) -> Vec<f64> {
        let (y0, y1) = (self.root_y, 0.5 * self.span);
        (0..=self.n_span)
            .map(|k| {
                if k == self.n_span {
                    y1
                } else {
                    y0 + (y1 - y0) * math::sin(0.5 * PI * k as f64 / self.n_span as f64)
                }
            })
            .collect()
    }

    /// Closed section loop: upper trailing edge to leading edge, then the
    /// lower surface back towards the trailing edge.
    fn section_loop(&self, y: f64) -> Vec<Point3> {
        let n = self.n_chord;
        let mut pts: Vec<Point3> = (0..=n).rev().map(|k| self.point(y, k, true)).collect();
        pts.extend((1..n).map(|k| self.point(y, k, false)));
        pts
    }

    fn le_te(&self) -> (f64, f64) {
        let c = self.chord(self.root_y);
        let le = self.quarter_chord_x - 0.25 * c;
        (le, le + c)
    }
}

/// Fuselage cross-section parameters at one station.
struct Station {
    x: f64,
    width: f64,
    top: f64,
    bottom: f64,
    /// Side-line points where the upper and lower arcs end.
    side_upper: Point3,
    side_lower: Point3,
}

fn ramp(x: f64, x0: f64, x1: f64, v0: f64, v1: f64) -> f64 {
    if x <= x0 {
        v0
    } else if x >= x1 {
        v1
    } else {
        v0 + (v1 - v0) * (x - x0) / (x1 - x0)
    }
}

fn station(x: f64, root: Option<(&Surface, usize)>) -> Station {
    let (_, wing_te) = WING.le_te();
    let (tail_le, tail_te) = HTAIL.le_te();
    let taper = |v: f64| {
        if x > tail_te {
            v * (LENGTH - x) / (LENGTH - tail_te)
        } else {
            v
        }
    };
    let width = taper(ramp(x, wing_te, tail_le, WIDTH, TAIL_WIDTH));
    let half_height = taper(ramp(x, wing_te, tail_le, HEIGHT, TAIL_HEIGHT));
    let center = ramp(x, wing_te, tail_le, 0.0, HTAIL.z);
    let (side_upper, side_lower) = match root {
        Some((s, k)) => (s.point(s.root_y, k, true), s.point(s.root_y, k, false)),
        None => {
            let p = Vec3::new(x, width, ramp(x, wing_te, tail_le, WING.z, HTAIL.z));
            (p, p)
        }
    };
    Station {
        x,
        width,
        top: center + half_height,
        bottom: center - half_height,
        side_upper,
        side_lower,
    }
}

/// Arc point at angle `q π/10` above (`q > 0`) or below the side line.
fn arc_point(s: &Station, q: i32) -> Point3 {
    if q == 0 {
        return s.side_upper;
    }
    let t = PI / 10.0 * q as f64;
    let (y, sn) = if q.abs() == 5 {
        (0.0, q.signum() as f64)
    } else {
        (s.width * math::cos(t), math::sin(t))
    };
    let z = if q > 0 {
        s.side_upper.z + (s.top - s.side_upper.z) * sn
    } else {
        s.side_lower.z + (s.side_lower.z - s.bottom) * sn
    };
    Vec3::new(s.x, y, z)
}

fn lower_arc_point(s: &Station, q: i32) -> Point3 {
    if q == 0 {
        s.side_lower
    } else {
        arc_point(s, q)
    }
}

#[derive(Default)]
struct MeshWriter {
    mesh: RawMesh,
    ids: BTreeMap<[u64; 3], NodeId>,
}

impl MeshWriter {
    fn node(&mut self, p: Point3) -> NodeId {
        let bits = |v: f64| if v == 0.0 { 0 } else { v.to_bits() };
        let key = [bits(p.x), bits(p.y), bits(p.z)];
        if let Some(id) = self.ids.get(&key) {
            return *id;
        }
        let id = self.mesh.nodes.len() as NodeId + 1;
        self.mesh.nodes.insert(id, p);
        self.ids.insert(key, id);
        id
    }

    fn face(&mut self, group: &str, corners: [Point3; 4]) {
        let mut nodes: Vec<NodeId> = Vec::with_capacity(4);
        for p in corners {
            let id = self.node(p);
            if nodes.last() != Some(&id) && nodes.first() != Some(&id) {
                nodes.push(id);
            }
        }
        let kind = match nodes.len() {
            4 => ElementKind::Quad,
            3 => ElementKind::Tri,
            _ => return,
        };
        let id = self.mesh.elements.len() as u64 + 1;
        self.mesh.elements.push(Element { id, kind, nodes });
        self.mesh
            .groups
            .entry(String::from(group))
            .or_default()
            .push(id);
    }

    /// Quads between consecutive lines, each line given as a point list of
    /// equal length; `closed` joins the last point to the first.
    fn strip(&mut self, group: &str, lines: &[Vec<Point3>], closed: bool) {
        for w in lines.windows(2) {
            let n = w[0].len();
            let m = if closed { n } else { n - 1 };
            for k in 0..m {
                let k1 = (k + 1) % n;
                self.face(group, [w[0][k], w[0][k1], w[1][k1], w[1][k]]);
            }
        }
    }
}

fn fuselage_stations() -> Vec<(f64, Option<(&'static Surface, usize)>)> {
    let (wing_le, wing_te) = WING.le_te();
    let (tail_le, tail_te) = HTAIL.le_te();
    let mut out = Vec::with_capacity(72);
    for k in 0..8 {
        out.push((NOSE_END + (wing_le - NOSE_END) * k as f64 / 8.0, None));
    }
    for k in 0..=WING.n_chord {
        out.push((WING.point(WING.root_y, k, true).x, Some((&WING, k))));
    }
    for k in 1..=12 {
        out.push((wing_te + (tail_le - wing_te) * k as f64 / 13.0, None));
    }
    for k in 0..=HTAIL.n_chord {
        out.push((HTAIL.point(HTAIL.root_y, k, true).x, Some((&HTAIL, k))));
    }
    for k in 1..=5 {
        let x = if k == 5 {
            LENGTH
        } else {
            tail_te + (LENGTH - tail_te) * k as f64 / 5.0
        };
        out.push((x, None));
    }
    out
}

/// The half-model surface mesh, grouped by [`DESK_GROUPS`].
pub fn desk_aircraft_mesh() -> RawMesh {
    let mut w = MeshWriter::default();

    for (s, group) in [(&WING, DESK_WING), (&HTAIL, DESK_HTAIL)] {
        let loops: Vec<Vec<Point3>> = s.stations().iter().map(|y| s.section_loop(*y)).collect();
        w.strip(group, &loops, true);
    }

    // nose: apex plus five half rings closing onto the first body station
    let apex = Vec3::new(0.0, 0.0, 0.0);
    let first = station(NOSE_END, None);
    let mut rings = vec![vec![apex; 11]];
    for k in 1..=5 {
        let (x, r) = if k == 5 {
            (NOSE_END, 1.0)
        } else {
            let x = NOSE_END * (1.0 - math::cos(PI * k as f64 / 10.0));
            let u = 1.0 - x / NOSE_END;
            (x, math::sqrt(1.0 - u * u))
        };
        let side = Vec3::new(x, first.width * r, first.side_upper.z * r);
        let s = Station {
            x,
            width: first.width * r,
            top: first.top * r,
            bottom: first.bottom * r,
            side_upper: side,
            side_lower: side,
        };
        rings.push((-5..=5).map(|q| arc_point(&s, q)).collect());
    }
    w.strip(DESK_NOSE, &rings, false);

    let stations: Vec<Station> = fuselage_stations()
        .into_iter()
        .map(|(x, root)| station(x, root))
        .collect();
    let tail = Vec3::new(LENGTH, 0.0, HTAIL.z);
    let last = stations.len() - 1;
    let arcs = |upper: bool| -> Vec<Vec<Point3>> {
        stations
            .iter()
            .enumerate()
            .map(|(i, s)| {
                if i == last {
                    vec![tail; 6]
                } else if upper {
                    (0..=5).map(|q| arc_point(s, q)).collect()
                } else {
                    (-5..=0).map(|q| lower_arc_point(s, q)).collect()
                }
            })
            .collect()
    };
    w.strip(DESK_FUSELAGE_UPPER, &arcs(true), false);
    w.strip(DESK_FUSELAGE_LOWER, &arcs(false), false);
    w.mesh
}

/// Builds the half model from a mesh with the [`DESK_GROUPS`] layout: wing
/// and tail upper, lower and wake networks, then the nose and the upper and
/// lower fuselage.
pub fn desk_aircraft_networks(mesh: &RawMesh) -> Result<Vec<StructuredNetwork>, DeskError> {
    let tol = DESK_STATION_TOL;
    let mut lifting = Vec::new();
    for (group, name, surface) in [
        (DESK_WING, "WING", LiftingSurface::Wing),
        (DESK_HTAIL, "HTAIL", LiftingSurface::HTail),
    ] {
        let secs = extract_sections(mesh, group, Axis::Y, tol)?;
        let mut o = LiftingOptions::new(name);
        o.close_tip = true;
        let (u, l) = build_lifting_surface(&secs, surface, &o)?;
        let wake = attach_wake(&u, &l, DESK_WAKE_CHORDS, Vec3::X, 1e-9)?;
        lifting.push((u, l, wake));
    }
    let mut nets = Vec::with_capacity(9);
    let mut wakes = Vec::new();
    for (u, l, wake) in lifting {
        nets.push(u);
        nets.push(l);
        wakes.push(wake);
    }
    for (group, name) in [
        (DESK_NOSE, "FUSELAGE_NOSE"),
        (DESK_FUSELAGE_UPPER, "FUSELAGE_UPPER"),
        (DESK_FUSELAGE_LOWER, "FUSELAGE_LOWER"),
    ] {
        let secs = extract_sections(mesh, group, Axis::X, tol)?;
        nets.push(build_fuselage(&secs, name, Axis::X)?);
    }
    nets.extend(wakes);
    Ok(nets)
}

#[derive(Debug, Clone, PartialEq)]
pub enum DeskError {
    Section(crate::mesh::SectionError),
    Build(BuildError),
}

impl core::fmt::Display for DeskError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DeskError::Section(e) => write!(f, "{e}"),
            DeskError::Build(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for DeskError {}

impl From<crate::mesh::SectionError> for DeskError {
    fn from(e: crate::mesh::SectionError) -> Self {
        DeskError::Section(e)
    }
}

impl From<BuildError> for DeskError {
    fn from(e: BuildError) -> Self {
        DeskError::Build(e)
    }
}

/// Reference quantities of the complete aircraft: wing area, span and mean
/// chord, moments about the wing quarter chord.
pub fn desk_aircraft_refs() -> References {
    References {
        sref: WING.area(),
        span: WING.span,
        cbar: WING.mac(),
        moment_ref: Vec3::new(WING.quarter_chord_x, 0.0, 0.0),
    }
}

/// Wetted areas of the complete aircraft (both halves) from the paneled half
/// model, with form factor 1: wing on its mean chord, tail on its mean chord,
/// fuselage on its length.
pub fn desk_aircraft_wetted(nets: &[StructuredNetwork]) -> Vec<ComponentWettedItem> {
    let mut wing = 0.0;
    let mut tail = 0.0;
    let mut body = 0.0;
    for n in nets {
        let area: f64 = (0..n.n_rows() - 1)
            .flat_map(|i| (0..n.n_cols() - 1).map(move |j| (i, j)))
            .filter_map(|(i, j)| n.panel_metrics(i, j).ok())
            .map(|m| m.area)
            .sum();
        match n.kind() {
            ComponentKind::WingUpper | ComponentKind::WingLower => wing += area,
            ComponentKind::HTailUpper | ComponentKind::HTailLower => tail += area,
            ComponentKind::Fuselage => body += area,
            _ => {}
        }
    }
    vec![
        ComponentWettedItem::new("WING", 2.0 * wing, WING.mac()),
        ComponentWettedItem::new("HTAIL", 2.0 * tail, HTAIL.mac()),
        ComponentWettedItem::new("FUSELAGE", 2.0 * body, LENGTH),
    ]
}

/// Horizontal tail planform area of the complete aircraft.
pub fn desk_htail_area() -> f64 {
    HTAIL.area()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mesh_validates_and_has_all_groups() {
        let m = desk_aircraft_mesh();
        m.validate().unwrap();
        for g in DESK_GROUPS {
            assert!(!m.groups[g].is_empty(), "{g}");
        }
    }

    #[test]
    fn planform_matches_design_values() {
        assert!((WING.area() - 175.0).abs() < 0.2);
        assert!((WING.span * WING.span / WING.area() - 8.64).abs() < 0.01);
        assert!((WING.tip_chord / WING.root_chord - 0.65).abs() < 1e-3);
        assert!((HTAIL.area() - 47.59).abs() < 0.01);
    }
}
