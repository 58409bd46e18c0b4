//! Edge matching between networks: section resampling, snapping and gap
//! reports.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::{bbox_diagonal, point_segment_distance, Point3, Vec3};
use crate::linalg::{least_squares, Lu, Matrix};
use crate::network::{ComponentKind, Edge, StructuredNetwork};

/// Condition-number ceiling for the normal equations of a section fit.
pub const MAX_FIT_CONDITION: f64 = 1e12;

/// Default fit degree for section resampling.
pub const SECTION_FIT_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum AbutmentError {
    InsufficientPoints { found: usize, needed: usize },
    IllConditionedFit { condition: f64 },
    CountMismatch { a: usize, b: usize },
    GapTooLarge { index: usize, gap: f64, limit: f64 },
}

impl fmt::Display for AbutmentError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbutmentError::InsufficientPoints { found, needed } => {
                write!(f, "fit needs {needed} distinct points, found {found}")
            }
            AbutmentError::IllConditionedFit { condition } => {
                write!(
                    f,
                    "fit is ill-conditioned (condition estimate {condition:e})"
                )
            }
            AbutmentError::CountMismatch { a, b } => {
                write!(f, "edges have {a} and {b} points")
            }
            AbutmentError::GapTooLarge { index, gap, limit } => write!(
                f,
                "edge point {index} is {gap:e} from its partner, beyond the {limit:e} weld limit"
            ),
        }
    }
}

impl core::error::Error for AbutmentError {}

/// Normalized cumulative chord length of an ordered point list.
pub fn arc_length_params(points: &[Point3]) -> Vec<f64> {
    let mut s = Vec::with_capacity(points.len());
    let mut acc = 0.0;
    s.push(0.0);
    for w in points.windows(2) {
        acc += w[0].distance(w[1]);
        s.push(acc);
    }
    if acc > 0.0 {
        for v in &mut s {
            *v /= acc;
        }
        let n = s.len();
        s[n - 1] = 1.0;
    }
    s
}

/// A polynomial curve `p(s)` per coordinate over normalized arc length
/// `s ∈ [0, 1]`, fitted in the least-squares sense with its end values pinned
/// to the first and last data points.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionFit {
    /// Monomial coefficients per coordinate, lowest degree first.
    pub coeffs: [Vec<f64>; 3],
    /// Parameter of each input point.
    pub params: Vec<f64>,
    pub first: Point3,
    pub last: Point3,
    /// Largest distance between an input point and the fitted curve at the
    /// same parameter.
    pub max_residual: f64,
    /// Condition estimate of the reduced normal equations.
    pub condition: f64,
}

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * s + v)
}

impl SectionFit {
    pub fn degree(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn eval(&self, s: f64) -> Point3 {
        Vec3::new(
            horner(&self.coeffs[0], s),
            horner(&self.coeffs[1], s),
            horner(&self.coeffs[2], s),
        )
    }

    /// Points at the given parameters. Parameters `0` and `1` return the
    /// original end points exactly.
    pub fn sample(&self, params: &[f64]) -> Vec<Point3> {
        params
            .iter()
            .map(|&s| {
                if s == 0.0 {
                    self.first
                } else if s == 1.0 {
                    self.last
                } else {
                    self.eval(s)
                }
            })
            .collect()
    }
}

/// Least-squares polynomial fit of an ordered section curve, interpolating
/// both end points.
///
/// The end conditions are eliminated analytically: with `p(s) = c0 + c1 s +
/// ...`, `c0` is the first point and `c1` absorbs the last, leaving
/// `degree - 1` free coefficients on the basis `s^k - s`, solved by QR.
pub fn fit_section_polynomial(
    points: &[Point3],
    degree: usize,
) -> Result<SectionFit, AbutmentError> {
    fit_polynomial_with_params(points, &arc_length_params(points), degree)
}

/// As [`fit_section_polynomial`], with caller-supplied parameters running
/// from exactly `0` at the first point to exactly `1` at the last.
pub fn fit_polynomial_with_params(
    points: &[Point3],
    params: &[f64],
    degree: usize,
) -> Result<SectionFit, AbutmentError> {
    assert_eq!(points.len(), params.len(), "one parameter per point");
    let needed = (degree + 2).max(8);
    let distinct = {
        let mut n = usize::from(!points.is_empty());
        for w in points.windows(2) {
            if w[0] != w[1] {
                n += 1;
            }
        }
        n
    };
    if distinct < needed || degree < 1 {
        return Err(AbutmentError::InsufficientPoints {
            found: distinct,
            needed,
        });
    }
    let params = params.to_vec();
    let first = points[0];
    let last = points[points.len() - 1];
    let m = points.len();
    let free = degree - 1;

    let mut coeffs: [Vec<f64>; 3] = [
        vec![0.0; degree + 1],
        vec![0.0; degree + 1],
        vec![0.0; degree + 1],
    ];
    let mut condition = 1.0;
    if free > 0 {
        let mut a = Matrix::zeros(m, free);
        for (i, &s) in params.iter().enumerate() {
            let mut sk = s;
            for k in 2..=degree {
                sk *= s;
                a[(i, k - 2)] = sk - s;
            }
        }
        let ata = a.transpose().mul(&a);
        condition = match Lu::factor(ata) {
            Ok(lu) => lu.condition_estimate(),
            Err(_) => f64::INFINITY,
        };
        if !(condition <= MAX_FIT_CONDITION) {
            return Err(AbutmentError::IllConditionedFit { condition });
        }
        for (axis, c) in coeffs.iter_mut().enumerate() {
            let y0 = first.component(axis);
            let y1 = last.component(axis);
            let rhs: Vec<f64> = points
                .iter()
                .zip(&params)
                .map(|(p, &s)| p.component(axis) - y0 - (y1 - y0) * s)
                .collect();
            let sol = least_squares(&a, &rhs).map_err(|_| AbutmentError::IllConditionedFit {
                condition: f64::INFINITY,
            })?;
            c[0] = y0;
            c[1] = (y1 - y0) - sol.iter().sum::<f64>();
            c[2..].copy_from_slice(&sol);
        }
    } else {
        for (axis, c) in coeffs.iter_mut().enumerate() {
            c[0] = first.component(axis);
            c[1] = last.component(axis) - first.component(axis);
        }
    }
    let mut fit = SectionFit {
        coeffs,
        params,
        first,
        last,
        max_residual: 0.0,
        condition,
    };
    fit.max_residual = points
        .iter()
        .zip(&fit.params)
        .map(|(p, &s)| p.distance(fit.eval(s)))
        .fold(0.0, f64::max);
    Ok(fit)
}

/// Evenly spaced parameters `k / (n - 1)`.
pub fn uniform_params(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|k| k as f64 / (n - 1) as f64).collect(),
    }
}

/// Resamples an ordered section to `n` points at even arc-length spacing.
///
/// Uses the degree-6 fit; if that fit is ill-conditioned, falls back to a
/// natural cubic spline through the points. End points are kept bitwise.
pub fn resample_section(points: &[Point3], n: usize) -> Result<Vec<Point3>, AbutmentError> {
    let params = uniform_params(n);
    match fit_section_polynomial(points, SECTION_FIT_DEGREE) {
        Ok(fit) => Ok(fit.sample(&params)),
        Err(AbutmentError::IllConditionedFit { .. }) => Ok(resample_cubic(points, &params)),
        Err(e) => Err(e),
    }
}

/// Natural cubic spline through the points over arc length, sampled at
/// `params`.
pub fn resample_cubic(points: &[Point3], params: &[f64]) -> Vec<Point3> {
    let s = arc_length_params(points);
    let coord = |axis: usize| -> Vec<f64> { points.iter().map(|p| p.component(axis)).collect() };
    let splines: Vec<(Vec<f64>, Vec<f64>)> = (0..3)
        .map(|a| {
            let y = coord(a);
            let m = natural_spline_moments(&s, &y);
            (y, m)
        })
        .collect();
    let first = points[0];
    let last = points[points.len() - 1];
    params
        .iter()
        .map(|&t| {
            if t == 0.0 {
                return first;
            }
            if t == 1.0 {
                return last;
            }
            let k = s.partition_point(|v| *v <= t).clamp(1, s.len() - 1) - 1;
            let h = s[k + 1] - s[k];
            let mut out = [0.0; 3];
            for (a, (y, m)) in splines.iter().enumerate() {
                out[a] = if h > 0.0 {
                    let u = (s[k + 1] - t) / h;
                    let v = (t - s[k]) / h;
                    u * y[k]
                        + v * y[k + 1]
                        + ((u * u * u - u) * m[k] + (v * v * v - v) * m[k + 1]) * h * h / 6.0
                } else {
                    y[k]
                };
            }
            Vec3::new(out[0], out[1], out[2])
        })
        .collect()
}

fn natural_spline_moments(s: &[f64], y: &[f64]) -> Vec<f64> {
    let n = s.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior moments
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = (s[i] - s[i - 1]).max(f64::MIN_POSITIVE);
        let h1 = (s[i + 1] - s[i]).max(f64::MIN_POSITIVE);
        let lower = h0 / 6.0;
        diag[i] = (h0 + h1) / 3.0;
        upper[i] = h1 / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        if i > 1 {
            let w = lower / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
    }
    for i in (1..n - 1).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }
    m
}

/// How a pair of matched points is made to coincide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnapMode {
    /// Both points move to their midpoint.
    #[default]
    Midpoint,
    /// The second edge takes the first edge's points.
    OneSided,
}

/// Makes two corresponding edges coincide point by point.
///
/// Returns the largest gap found before snapping. Any gap above `10 * tol`
/// aborts without modifying either edge.
pub fn enforce_abutment(
    a: &mut [Point3],
    b: &mut [Point3],
    tol: f64,
    mode: SnapMode,
) -> Result<f64, AbutmentError> {
    if a.len() != b.len() {
        return Err(AbutmentError::CountMismatch {
            a: a.len(),
            b: b.len(),
        });
    }
    let limit = 10.0 * tol;
    let mut worst = 0.0f64;
    for (k, (p, q)) in a.iter().zip(b.iter()).enumerate() {
        let gap = p.distance(*q);
        if !(gap <= limit) {
            return Err(AbutmentError::GapTooLarge {
                index: k,
                gap,
                limit,
            });
        }
        worst = worst.max(gap);
    }
    for (p, q) in a.iter_mut().zip(b.iter_mut()) {
        let target = match mode {
            SnapMode::Midpoint => p.midpoint(*q),
            SnapMode::OneSided => *p,
        };
        *p = target;
        *q = target;
    }
    Ok(worst)
}

/// Default matching tolerance: `1e-4` of the bounding-box diagonal.
pub fn default_tolerance(nets: &[StructuredNetwork]) -> f64 {
    1e-4 * bbox_diagonal(nets.iter().flat_map(|n| n.points()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    Matched,
    Mismatched,
    OnSymmetryPlane,
    Free,
    Collapsed,
}

impl EdgeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeClass::Matched => "matched",
            EdgeClass::Mismatched => "mismatched",
            EdgeClass::OnSymmetryPlane => "symmetry",
            EdgeClass::Free => "free",
            EdgeClass::Collapsed => "collapsed",
        }
    }
}

/// Classification of one network edge.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub network: String,
    pub edge: Edge,
    pub class: EdgeClass,
    /// Largest distance from an edge point to the nearest boundary of another
    /// edge; zero for edges that are not checked.
    pub max_gap: f64,
    /// Edge providing the nearest boundary at the worst point.
    pub partner: Option<(String, Edge)>,
}

/// Edge-by-edge abutment diagnostics for a set of networks.
#[derive(Debug, Clone, PartialEq)]
pub struct AbutmentReport {
    pub tolerance: f64,
    pub edges: Vec<EdgeRecord>,
}

/// One checked edge and the edge nearest to it.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgePair {
    pub network_a: String,
    pub edge_a: Edge,
    pub network_b: String,
    pub edge_b: Edge,
    pub max_gap: f64,
    pub matched: bool,
}

impl AbutmentReport {
    pub fn mismatched(&self) -> impl Iterator<Item = &EdgeRecord> {
        self.edges
            .iter()
            .filter(|e| e.class == EdgeClass::Mismatched)
    }

    pub fn mismatched_count(&self) -> usize {
        self.mismatched().count()
    }

    pub fn count(&self, class: EdgeClass) -> usize {
        self.edges.iter().filter(|e| e.class == class).count()
    }

    pub fn pairs(&self) -> Vec<EdgePair> {
        self.edges
            .iter()
            .filter_map(|e| {
                let (nb, eb) = e.partner.clone()?;
                Some(EdgePair {
                    network_a: e.network.clone(),
                    edge_a: e.edge,
                    network_b: nb,
                    edge_b: eb,
                    max_gap: e.max_gap,
                    matched: e.class == EdgeClass::Matched,
                })
            })
            .collect()
    }

    pub fn free_edges(&self) -> Vec<(String, Edge)> {
        self.edges
            .iter()
            .filter(|e| e.class == EdgeClass::Free)
            .map(|e| (e.network.clone(), e.edge))
            .collect()
    }

    /// Human-readable summary followed by one line per problem edge.
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "abutment tolerance {:e}\n{} matched, {} mismatched, {} symmetry, {} free, {} collapsed\n",
            self.tolerance,
            self.count(EdgeClass::Matched),
            self.count(EdgeClass::Mismatched),
            self.count(EdgeClass::OnSymmetryPlane),
            self.count(EdgeClass::Free),
            self.count(EdgeClass::Collapsed),
        );
        for e in self.mismatched() {
            s.push_str(&format!(
                "  gap {:e} at {} {}{}\n",
                e.max_gap,
                e.network,
                e.edge,
                match &e.partner {
                    Some((n, ed)) => format!(" (nearest {n} {ed})"),
                    None => String::new(),
                }
            ));
        }
        s
    }

    /// One tab-separated record per edge:
    /// `network edge class max_gap partner_network partner_edge`.
    pub fn to_records(&self) -> String {
        let mut s = String::from("network\tedge\tclass\tmax_gap\tpartner\tpartner_edge\n");
        for e in &self.edges {
            let (pn, pe) = match &e.partner {
                Some((n, ed)) => (n.as_str(), ed.as_str()),
                None => ("-", "-"),
            };
            s.push_str(&format!(
                "{}\t{}\t{}\t{:e}\t{}\t{}\n",
                e.network,
                e.edge,
                e.class.as_str(),
                e.max_gap,
                pn,
                pe
            ));
        }
        s
    }
}

struct Boundary {
    net: usize,
    edge: Edge,
    points: Vec<Point3>,
}

fn boundaries(nets: &[StructuredNetwork]) -> Vec<Boundary> {
    let mut out = Vec::new();
    for (k, n) in nets.iter().enumerate() {
        for e in Edge::ALL {
            out.push(Boundary {
                net: k,
                edge: e,
                points: n.edge_points(e),
            });
        }
    }
    out
}

fn polyline_distance(p: Point3, line: &[Point3]) -> f64 {
    if line.len() == 1 {
        return p.distance(line[0]);
    }
    line.windows(2)
        .map(|w| point_segment_distance(p, w[0], w[1]))
        .fold(f64::INFINITY, f64::min)
}

/// Classifies every network edge.
///
/// An edge is collapsed if all its points coincide, lies on the symmetry plane
/// when `symmetry` is set and all its points are within `tol` of `y = 0`, and
/// is free if it is a wake edge other than the one shed from the trailing
/// edge. Every other edge is matched when each of its points lies within `tol`
/// of the boundary polyline of some other edge.
pub fn abutment_report(nets: &[StructuredNetwork], tol: f64, symmetry: bool) -> AbutmentReport {
    let bounds = boundaries(nets);
    let mut edges = Vec::with_capacity(bounds.len());
    for (bi, b) in bounds.iter().enumerate() {
        let net = &nets[b.net];
        let base = |class, max_gap, partner| EdgeRecord {
            network: net.name().into(),
            edge: b.edge,
            class,
            max_gap,
            partner,
        };
        if net.edge_is_degenerate(b.edge) || b.points.iter().all(|p| p.distance(b.points[0]) <= tol)
        {
            edges.push(base(EdgeClass::Collapsed, 0.0, None));
            continue;
        }
        if symmetry && b.points.iter().all(|p| p.y.abs() <= tol) {
            edges.push(base(EdgeClass::OnSymmetryPlane, 0.0, None));
            continue;
        }
        if net.kind() == ComponentKind::Wake && b.edge != Edge::FirstRow {
            edges.push(base(EdgeClass::Free, 0.0, None));
            continue;
        }
        let mut worst = 0.0f64;
        let mut partner: Option<usize> = None;
        for p in &b.points {
            let mut best = f64::INFINITY;
            let mut who = None;
            for (oi, o) in bounds.iter().enumerate() {
                if oi == bi || nets[o.net].edge_is_degenerate(o.edge) {
                    continue;
                }
                let d = polyline_distance(*p, &o.points);
                // prefer another network over the same one on ties, so shared
                // corners do not hide the real partner
                let better = d < best
                    || (d == best
                        && o.net != b.net
                        && who.is_some_and(|w: usize| bounds[w].net == b.net));
                if better {
                    best = d;
                    who = Some(oi);
                }
            }
            if best > worst || partner.is_none() {
                worst = worst.max(best);
                if best >= worst {
                    partner = who;
                }
            }
        }
        let class = if worst <= tol {
            EdgeClass::Matched
        } else {
            EdgeClass::Mismatched
        };
        let partner = partner.map(|k| (nets[bounds[k].net].name().into(), bounds[k].edge));
        edges.push(base(class, worst, partner));
    }
    AbutmentReport {
        tolerance: tol,
        edges,
    }
}

/// Snaps nearly coincident boundary points of different networks together.
///
/// Two boundary points from different networks are welded to their midpoint
/// when each is the other's nearest boundary point and their distance lies in
/// `(tol, 10 * tol]`. Already-matched points are left alone. Returns the number
/// of welded pairs.
pub fn weld(nets: &mut [StructuredNetwork], tol: f64) -> usize {
    let mut pts: Vec<(usize, usize, usize, Point3)> = Vec::new();
    for (k, n) in nets.iter().enumerate() {
        let mut seen = Vec::new();
        for e in Edge::ALL {
            for (i, j) in n.edge_indices(e) {
                if !seen.contains(&(i, j)) {
                    seen.push((i, j));
                    pts.push((k, i, j, n.point(i, j)));
                }
            }
        }
    }
    let nearest = |a: usize| -> Option<(usize, f64)> {
        let (na, _, _, pa) = pts[a];
        pts.iter()
            .enumerate()
            .filter(|(_, q)| q.0 != na)
            .map(|(b, q)| (b, pa.distance(q.3)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
    };
    let near: Vec<Option<(usize, f64)>> = (0..pts.len()).map(nearest).collect();
    let mut moves = Vec::new();
    for a in 0..pts.len() {
        if let Some((b, d)) = near[a] {
            if a < b && d > tol && d <= 10.0 * tol && near[b].map(|x| x.0) == Some(a) {
                moves.push((a, b, pts[a].3.midpoint(pts[b].3)));
            }
        }
    }
    for (a, b, m) in &moves {
        for idx in [*a, *b] {
            let (k, i, j, _) = pts[idx];
            nets[k].set_point(i, j, *m);
        }
    }
    moves.len()
}

/// Volume enclosed by the non-wake networks together with the `y = 0` plane,
/// by the divergence theorem with the field `(0, y, 0)`.
///
/// Each quad is split into two flat triangles, for which the flux integral is
/// exact. For a closed full-span body the plane contributes nothing either.
pub fn enclosed_volume(nets: &[StructuredNetwork]) -> f64 {
    let mut v = 0.0;
    for n in nets.iter().filter(|n| n.kind() != ComponentKind::Wake) {
        for i in 0..n.n_rows() - 1 {
            for j in 0..n.n_cols() - 1 {
                let [p1, p2, p3, p4] = n.panel_corners(i, j);
                for (a, b, c) in [(p1, p2, p3), (p1, p3, p4)] {
                    let area_vec = (b - a).cross(c - a) * 0.5;
                    let yc = (a.y + b.y + c.y) / 3.0;
                    v += yc * area_vec.y;
                }
            }
        }
    }
    v
}
