//! Assembly of cross-sections into oriented structured networks.
//!
//! Lifting surfaces become an upper and a lower network whose chordwise lines
//! run trailing edge to leading edge (upper) and leading edge to trailing edge
//! (lower), with spanwise lines root to tip. Bodies become networks whose rows
//! are stations nose to tail and whose columns follow the clockwise section
//! order. Either way the panel normals point out of the body.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::{bbox_diagonal, Point3, Vec3};
use crate::mesh::{self, Axis, CrossSection};
use crate::network::{
    check_orientation, BcClass, ComponentKind, Edge, NetworkError, Spine, StructuredNetwork,
};

#[derive(Debug, Clone, PartialEq)]
pub enum BuildError {
    TooFewSections {
        found: usize,
    },
    SparseSection {
        station: f64,
        points: usize,
    },
    OpenSectionLoop {
        station: f64,
    },
    NonMatchingSectionCounts {
        station: f64,
        expected: usize,
        found: usize,
    },
    Network(NetworkError),
    Orientation {
        network: String,
        offending: usize,
    },
    AsymmetricGeometry {
        point: Point3,
    },
    MissingTrailingEdge {
        gap: f64,
    },
}

impl fmt::Display for BuildError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuildError::TooFewSections { found } => {
                write!(f, "need at least 2 sections, found {found}")
            }
            BuildError::SparseSection { station, points } => {
                write!(f, "section at {station} has only {points} point(s)")
            }
            BuildError::OpenSectionLoop { station } => {
                write!(f, "section at {station} is not a closed loop")
            }
            BuildError::NonMatchingSectionCounts {
                station,
                expected,
                found,
            } => write!(
                f,
                "section at {station} has {found} points on a surface, expected {expected}"
            ),
            BuildError::Network(e) => write!(f, "{e}"),
            BuildError::Orientation { network, offending } => write!(
                f,
                "network {network} has {offending} panel(s) facing into the body"
            ),
            BuildError::AsymmetricGeometry { point } => write!(
                f,
                "point ({}, {}, {}) has no mirror image across y = 0",
                point.x, point.y, point.z
            ),
            BuildError::MissingTrailingEdge { gap } => write!(
                f,
                "upper and lower trailing edges do not coincide (gap {gap:e})"
            ),
        }
    }
}

impl core::error::Error for BuildError {}

impl From<NetworkError> for BuildError {
    fn from(e: NetworkError) -> Self {
        BuildError::Network(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftingSurface {
    Wing,
    HTail,
}

impl LiftingSurface {
    fn kinds(self) -> (ComponentKind, ComponentKind) {
        match self {
            LiftingSurface::Wing => (ComponentKind::WingUpper, ComponentKind::WingLower),
            LiftingSurface::HTail => (ComponentKind::HTailUpper, ComponentKind::HTailLower),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LiftingOptions {
    /// Network name prefix; `_UPPER` and `_LOWER` are appended.
    pub name: String,
    /// Spanwise section axis.
    pub axis: Axis,
    /// Append a column on the tip section's camber line, closing the tip.
    pub close_tip: bool,
    /// Distance under which a repeated closing point is dropped.
    pub tol: f64,
}

impl LiftingOptions {
    pub fn new(name: impl Into<String>) -> Self {
        LiftingOptions {
            name: name.into(),
            axis: Axis::Y,
            close_tip: false,
            tol: 1e-9,
        }
    }
}

struct SplitSection {
    upper: Vec<Point3>,
    lower: Vec<Point3>,
}

fn better_le(p: Point3, q: Point3) -> bool {
    p.x < q.x || (p.x == q.x && p.z > q.z)
}

fn better_te(p: Point3, q: Point3) -> bool {
    p.x > q.x || (p.x == q.x && p.z > q.z)
}

fn split_airfoil(sec: &CrossSection, axis: Axis, tol: f64) -> Result<SplitSection, BuildError> {
    let mut pts = sec.points.clone();
    if pts.len() >= 2 && pts[0].distance(pts[pts.len() - 1]) <= tol {
        pts.pop();
    }
    if pts.len() < 3 {
        return Err(BuildError::SparseSection {
            station: sec.station,
            points: pts.len(),
        });
    }
    let (loop_pts, open) = mesh::order_section(&pts, axis);
    if open {
        return Err(BuildError::OpenSectionLoop {
            station: sec.station,
        });
    }
    let n = loop_pts.len();
    let mut le = 0;
    let mut te = 0;
    for k in 1..n {
        if better_le(loop_pts[k], loop_pts[le]) {
            le = k;
        }
        if better_te(loop_pts[k], loop_pts[te]) {
            te = k;
        }
    }
    let walk = |from: usize, to: usize| {
        let mut out = vec![loop_pts[from]];
        let mut k = from;
        while k != to {
            k = (k + 1) % n;
            out.push(loop_pts[k]);
        }
        out
    };
    // a: TE -> LE following the loop, b: LE -> TE
    let a = walk(te, le);
    let b = walk(le, te);
    let mean_z = |c: &[Point3]| {
        if c.len() <= 2 {
            0.5 * (c[0].z + c[c.len() - 1].z)
        } else {
            c[1..c.len() - 1].iter().map(|p| p.z).sum::<f64>() / (c.len() - 2) as f64
        }
    };
    let (upper, lower) = if mean_z(&a) >= mean_z(&b) {
        (a, b)
    } else {
        let mut upper = b;
        upper.reverse();
        let mut lower = a;
        lower.reverse();
        (upper, lower)
    };
    Ok(SplitSection { upper, lower })
}

/// Interpolates the chain (ordered by increasing `x`) at `x`, clamping at the
/// ends.
fn chain_at_x(chain: &[Point3], x: f64) -> Point3 {
    if x <= chain[0].x {
        return chain[0];
    }
    for w in chain.windows(2) {
        if x <= w[1].x {
            let dx = w[1].x - w[0].x;
            let t = if dx > 0.0 { (x - w[0].x) / dx } else { 0.0 };
            return w[0].lerp(w[1], t);
        }
    }
    chain[chain.len() - 1]
}

fn camber_for(own: &[Point3], other_le_to_te: &[Point3]) -> Vec<Point3> {
    let last = own.len() - 1;
    own.iter()
        .enumerate()
        .map(|(k, p)| {
            // leading and trailing edge points are shared and stay exact
            if k == 0 || k == last {
                let q = chain_at_x(other_le_to_te, p.x);
                if q == *p {
                    return *p;
                }
            }
            p.midpoint(chain_at_x(other_le_to_te, p.x))
        })
        .collect()
}

/// Builds the upper and lower networks of a wing or tail from airfoil
/// sections ordered root to tip.
pub fn build_lifting_surface(
    sections: &[CrossSection],
    surface: LiftingSurface,
    opts: &LiftingOptions,
) -> Result<(StructuredNetwork, StructuredNetwork), BuildError> {
    if sections.len() < 2 {
        return Err(BuildError::TooFewSections {
            found: sections.len(),
        });
    }
    let split: Vec<SplitSection> = sections
        .iter()
        .map(|s| split_airfoil(s, opts.axis, opts.tol))
        .collect::<Result<_, _>>()?;
    let nu = split[0].upper.len();
    let nl = split[0].lower.len();
    for (s, sec) in split.iter().zip(sections) {
        for (found, expected) in [(s.upper.len(), nu), (s.lower.len(), nl)] {
            if found != expected {
                return Err(BuildError::NonMatchingSectionCounts {
                    station: sec.station,
                    expected,
                    found,
                });
            }
        }
    }

    let mut upper_cols: Vec<Vec<Point3>> = split.iter().map(|s| s.upper.clone()).collect();
    let mut lower_cols: Vec<Vec<Point3>> = split.iter().map(|s| s.lower.clone()).collect();
    if opts.close_tip {
        let tip = &split[split.len() - 1];
        let mut upper_le_te = tip.upper.clone();
        upper_le_te.reverse();
        let mut cu = camber_for(&upper_le_te, &tip.lower);
        cu.reverse();
        let cl = camber_for(&tip.lower, &upper_le_te);
        upper_cols.push(cu);
        lower_cols.push(cl);
    }

    let (ku, kl) = surface.kinds();
    let mut flags = [false; 4];
    if opts.close_tip {
        flags[Edge::LastCol.index()] = true;
    }
    let grid = |cols: &[Vec<Point3>], rows: usize| {
        let mut pts = Vec::with_capacity(rows * cols.len());
        for i in 0..rows {
            for c in cols {
                pts.push(c[i]);
            }
        }
        pts
    };
    let upper = StructuredNetwork::with_flags(
        format!("{}_UPPER", opts.name),
        ku,
        BcClass::ImpermeableSurface,
        nu,
        upper_cols.len(),
        grid(&upper_cols, nu),
        flags,
    )?;
    let lower = StructuredNetwork::with_flags(
        format!("{}_LOWER", opts.name),
        kl,
        BcClass::ImpermeableSurface,
        nl,
        lower_cols.len(),
        grid(&lower_cols, nl),
        flags,
    )?;

    let spine = lifting_spine(&upper, &lower, opts.axis);
    ensure_outward(&upper, &spine)?;
    ensure_outward(&lower, &spine)?;
    Ok((upper, lower))
}

fn ensure_outward(net: &StructuredNetwork, spine: &Spine) -> Result<(), BuildError> {
    let r = check_orientation(net, spine);
    if r.offending.is_empty() {
        Ok(())
    } else {
        Err(BuildError::Orientation {
            network: net.name().into(),
            offending: r.offending.len(),
        })
    }
}

fn spine_from_lines(axis: Axis, mut lines: Vec<(f64, Vec<Point3>)>, scale: f64) -> Spine {
    let a = axis.index();
    lines.sort_by(|p, q| p.0.total_cmp(&q.0));
    let tol = 1e-9 * scale.max(f64::MIN_POSITIVE);
    let mut nodes: Vec<(f64, Vec3, usize)> = Vec::new();
    for (s, pts) in lines {
        let sum = pts.iter().fold(Vec3::ZERO, |acc, p| acc + *p);
        match nodes.last_mut() {
            Some(last) if (s - last.0).abs() <= tol => {
                last.1 += sum;
                last.2 += pts.len();
            }
            _ => nodes.push((s, sum, pts.len())),
        }
    }
    let pts: Vec<Point3> = nodes
        .iter()
        .map(|(s, sum, n)| (*sum / *n as f64).with_component(a, *s))
        .collect();
    let inset = if pts.len() >= 2 {
        let first = pts[1].component(a) - pts[0].component(a);
        let last = pts[pts.len() - 1].component(a) - pts[pts.len() - 2].component(a);
        0.5 * first.min(last)
    } else {
        0.0
    };
    Spine::new(a, pts, inset)
}

fn mean_station(pts: &[Point3], a: usize) -> f64 {
    pts.iter().map(|p| p.component(a)).sum::<f64>() / pts.len() as f64
}

/// Outward reference field for a lifting surface: the curve through the
/// centroids of its spanwise stations.
pub fn lifting_spine(upper: &StructuredNetwork, lower: &StructuredNetwork, axis: Axis) -> Spine {
    let a = axis.index();
    let mut lines = Vec::new();
    for net in [upper, lower] {
        for j in 0..net.n_cols() {
            let c = net.column(j);
            lines.push((mean_station(&c, a), c));
        }
    }
    let scale = bbox_diagonal(upper.points().iter().chain(lower.points()));
    spine_from_lines(axis, lines, scale)
}

/// Outward reference field for a body whose rows are stations along `axis`.
pub fn body_spine(nets: &[&StructuredNetwork], axis: Axis) -> Spine {
    let a = axis.index();
    let mut lines = Vec::new();
    for net in nets {
        for i in 0..net.n_rows() {
            let r = net.row(i).to_vec();
            lines.push((mean_station(&r, a), r));
        }
    }
    let scale = bbox_diagonal(nets.iter().flat_map(|n| n.points()));
    spine_from_lines(axis, lines, scale)
}

/// Builds a body network from sections ordered nose to tail.
///
/// Each section is put in clockwise order. Full rings are closed by repeating
/// their first point; open arcs are kept as they are. Single-point sections
/// at either end become collapsed rows.
pub fn build_fuselage(
    sections: &[CrossSection],
    name: &str,
    axis: Axis,
) -> Result<StructuredNetwork, BuildError> {
    if sections.len() < 2 {
        return Err(BuildError::TooFewSections {
            found: sections.len(),
        });
    }
    let mut rings: Vec<Option<Vec<Point3>>> = Vec::with_capacity(sections.len());
    let mut width = None;
    for (k, s) in sections.iter().enumerate() {
        if s.is_apex() && (k == 0 || k + 1 == sections.len()) {
            rings.push(None);
            continue;
        }
        if s.points.len() < 3 {
            return Err(BuildError::SparseSection {
                station: s.station,
                points: s.points.len(),
            });
        }
        let (mut pts, open) = mesh::order_section(&s.points, axis);
        if !open {
            pts.push(pts[0]);
        }
        match width {
            None => width = Some(pts.len()),
            Some(w) if w != pts.len() => {
                return Err(BuildError::NonMatchingSectionCounts {
                    station: s.station,
                    expected: w,
                    found: pts.len(),
                })
            }
            _ => {}
        }
        rings.push(Some(pts));
    }
    let Some(n_cols) = width else {
        return Err(BuildError::TooFewSections { found: 0 });
    };
    let mut flags = [false; 4];
    let mut points = Vec::with_capacity(n_cols * sections.len());
    for (k, (ring, sec)) in rings.iter().zip(sections).enumerate() {
        match ring {
            Some(r) => points.extend_from_slice(r),
            None => {
                let edge = if k == 0 {
                    Edge::FirstRow
                } else {
                    Edge::LastRow
                };
                flags[edge.index()] = true;
                points.extend(core::iter::repeat_n(sec.points[0], n_cols));
            }
        }
    }
    let net = StructuredNetwork::with_flags(
        name,
        ComponentKind::Fuselage,
        BcClass::ImpermeableSurface,
        sections.len(),
        n_cols,
        points,
        flags,
    )?;
    ensure_outward(&net, &body_spine(&[&net], axis))?;
    Ok(net)
}

/// Marker carried to the solver deck when only the `y >= 0` half is modeled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Symmetry {
    #[default]
    None,
    /// Mirror symmetry about the `x`-`z` plane.
    Xz,
}

/// Reduces a mirror-symmetric configuration to its `y >= 0` half.
///
/// Every point must have a mirror image within `tol`. Within each network the
/// longest contiguous block of rows or columns lying entirely at
/// `y >= -tol` is kept; points within `tol` of the plane are put exactly on
/// it. Networks lying entirely at negative `y` are dropped.
pub fn apply_symmetry(
    nets: &[StructuredNetwork],
    tol: f64,
) -> Result<(Vec<StructuredNetwork>, Symmetry), BuildError> {
    let mut all: Vec<Point3> = nets
        .iter()
        .flat_map(|n| n.points().iter().copied())
        .collect();
    all.sort_by(|p, q| p.x.total_cmp(&q.x));
    for p in &all {
        let m = p.mirror_y();
        let lo = all.partition_point(|q| q.x < m.x - tol);
        let found = all[lo..]
            .iter()
            .take_while(|q| q.x <= m.x + tol)
            .any(|q| q.distance(m) <= tol);
        if !found {
            return Err(BuildError::AsymmetricGeometry { point: *p });
        }
    }

    let mut out = Vec::new();
    for net in nets {
        let keep = |p: Point3| p.y >= -tol;
        let cols_ok: Vec<bool> = (0..net.n_cols())
            .map(|j| (0..net.n_rows()).all(|i| keep(net.point(i, j))))
            .collect();
        let rows_ok: Vec<bool> = (0..net.n_rows())
            .map(|i| (0..net.n_cols()).all(|j| keep(net.point(i, j))))
            .collect();
        let snap = |p: Point3| {
            if p.y.abs() <= tol {
                Vec3::new(p.x, 0.0, p.z)
            } else {
                p
            }
        };
        if cols_ok.iter().all(|k| *k) {
            out.push(net.map_points(snap));
            continue;
        }
        let (cs, ce) = longest_run(&cols_ok);
        let (rs, re) = longest_run(&rows_ok);
        let (transposed, start, end) = if ce - cs >= re - rs {
            (false, cs, ce)
        } else {
            (true, rs, re)
        };
        if end - start < 2 {
            continue;
        }
        let src = if transposed {
            net.transpose()
        } else {
            net.clone()
        };
        let mut pts = Vec::with_capacity(src.n_rows() * (end - start));
        for i in 0..src.n_rows() {
            pts.extend(src.row(i)[start..end].iter().map(|p| snap(*p)));
        }
        let mut flags = src.collapsed_flags();
        if start > 0 {
            flags[Edge::FirstCol.index()] = false;
        }
        if end < src.n_cols() {
            flags[Edge::LastCol.index()] = false;
        }
        let half = StructuredNetwork::with_flags(
            src.name(),
            src.kind(),
            src.bc_class(),
            src.n_rows(),
            end - start,
            pts,
            flags,
        )?;
        out.push(if transposed { half.transpose() } else { half });
    }
    Ok((out, Symmetry::Xz))
}

fn longest_run(ok: &[bool]) -> (usize, usize) {
    let mut best = (0, 0);
    let mut start = None;
    for (k, v) in ok.iter().chain(core::iter::once(&false)).enumerate() {
        match (v, start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                if k - s > best.1 - best.0 {
                    best = (s, k);
                }
                start = None;
            }
            _ => {}
        }
    }
    best
}

/// Extrudes a flat wake from the shared trailing edge of a lifting surface.
///
/// Row 0 of `upper` and the last row of `lower` must coincide within `tol`.
/// The wake has two rows, the trailing edge and its translate by
/// `length_chords` root chords along `direction`; columns follow the span.
pub fn attach_wake(
    upper: &StructuredNetwork,
    lower: &StructuredNetwork,
    length_chords: f64,
    direction: Vec3,
    tol: f64,
) -> Result<StructuredNetwork, BuildError> {
    let te = upper.row(0);
    let te_lower = lower.row(lower.n_rows() - 1);
    if te.len() != te_lower.len() {
        return Err(BuildError::MissingTrailingEdge { gap: f64::INFINITY });
    }
    let gap = te
        .iter()
        .zip(te_lower)
        .map(|(a, b)| a.distance(*b))
        .fold(0.0, f64::max);
    if gap > tol {
        return Err(BuildError::MissingTrailingEdge { gap });
    }
    let root_chord = upper
        .point(0, 0)
        .distance(upper.point(upper.n_rows() - 1, 0));
    let dir = direction.normalized().unwrap_or(Vec3::X);
    let shift = dir * (length_chords * root_chord);
    let mut pts: Vec<Point3> = te.to_vec();
    pts.extend(te.iter().map(|p| *p + shift));
    let mut flags = [false; 4];
    let n = te.len();
    let coincident = 1e-9 * bbox_diagonal(te.iter()).max(f64::MIN_POSITIVE);
    if n >= 2 && te[0].distance(te[1]) <= coincident {
        flags[Edge::FirstCol.index()] = true;
    }
    if n >= 2 && te[n - 1].distance(te[n - 2]) <= coincident {
        flags[Edge::LastCol.index()] = true;
    }
    let name = wake_name(upper.name());
    Ok(StructuredNetwork::with_flags(
        name,
        ComponentKind::Wake,
        BcClass::Wake,
        2,
        n,
        pts,
        flags,
    )?)
}

fn wake_name(upper: &str) -> String {
    let base = upper.strip_suffix("_UPPER").unwrap_or(upper);
    format!("{base}_WAKE")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;
    use core::f64::consts::PI;

    fn biconvex(y: f64, n: usize, chord: f64, t: f64) -> CrossSection {
        // loop: upper TE->LE then lower LE->TE without repeating ends
        let xz = |k: usize| {
            let x = chord * k as f64 / n as f64;
            (x, 2.0 * t * (x / chord) * (1.0 - x / chord))
        };
        let mut pts = Vec::new();
        for k in (0..=n).rev() {
            let (x, z) = xz(k);
            pts.push(Vec3::new(x, y, z));
        }
        for k in 1..n {
            let (x, z) = xz(k);
            pts.push(Vec3::new(x, y, -z));
        }
        CrossSection {
            station: y,
            points: pts,
        }
    }

    #[test]
    fn biconvex_wing_is_mirror_symmetric() {
        let secs: Vec<_> = (0..4).map(|k| biconvex(k as f64, 10, 1.0, 0.1)).collect();
        let (u, l) =
            build_lifting_surface(&secs, LiftingSurface::Wing, &LiftingOptions::new("W")).unwrap();
        assert_eq!(u.n_rows(), 11);
        assert_eq!(l.n_rows(), 11);
        // upper runs TE -> LE, lower LE -> TE
        for j in 0..u.n_cols() {
            for i in 0..u.n_rows() {
                let p = u.point(i, j);
                let q = l.point(l.n_rows() - 1 - i, j);
                assert_eq!(p, Vec3::new(q.x, q.y, -q.z));
            }
        }
        assert_eq!(u.row(0), l.row(l.n_rows() - 1));
        assert_eq!(u.row(u.n_rows() - 1), l.row(0));
    }

    #[test]
    fn closed_tip_adds_camber_column() {
        let secs: Vec<_> = (0..3).map(|k| biconvex(k as f64, 8, 1.0, 0.1)).collect();
        let mut o = LiftingOptions::new("W");
        o.close_tip = true;
        let (u, l) = build_lifting_surface(&secs, LiftingSurface::Wing, &o).unwrap();
        assert_eq!(u.n_cols(), 4);
        for i in 0..u.n_rows() {
            assert!(u.point(i, 3).z.abs() < 1e-15);
        }
        assert!(u.is_collapsed_flagged(Edge::LastCol));
        let w = attach_wake(&u, &l, 20.0, Vec3::X, 1e-12).unwrap();
        assert!(w.is_collapsed_flagged(Edge::LastCol));
    }

    #[test]
    fn cylinder_normals_are_radial() {
        let secs: Vec<_> = (0..4)
            .map(|s| CrossSection {
                station: s as f64,
                points: (0..12)
                    .map(|k| {
                        let t = 2.0 * PI * k as f64 / 12.0;
                        Vec3::new(s as f64, math::sin(t), math::cos(t))
                    })
                    .collect(),
            })
            .collect();
        let net = build_fuselage(&secs, "BODY", Axis::X).unwrap();
        assert_eq!(net.n_cols(), 13);
        for i in 0..net.n_rows() - 1 {
            for j in 0..net.n_cols() - 1 {
                let m = net.panel_metrics(i, j).unwrap();
                let radial = Vec3::new(0.0, m.centroid.y, m.centroid.z)
                    .normalized()
                    .unwrap();
                assert!((m.unit_normal - radial).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn longest_run_picks_widest_block() {
        assert_eq!(longest_run(&[true, false, true, true, true]), (2, 5));
        assert_eq!(longest_run(&[false, false]), (0, 0));
    }
}
