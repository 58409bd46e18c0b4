//! Structured panel networks and right-hand-rule orientation checks.
//!
//! A network stores its node grid row-major. Panel `(i, j)` has the corners
//! `(i, j)`, `(i, j+1)`, `(i+1, j+1)`, `(i+1, j)` and its normal is the cross
//! product of the two diagonals, so the normal points along
//! `column-direction × row-direction`: walking a row with increasing `j` and
//! stepping to the next row with increasing `i` traces the corners
//! counter-clockwise when seen from the normal side.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::{bbox_diagonal, Point3, Vec3};

/// What part of the aircraft a network models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    WingUpper,
    WingLower,
    Fuselage,
    HTailUpper,
    HTailLower,
    Wake,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::WingUpper => "wing-upper",
            ComponentKind::WingLower => "wing-lower",
            ComponentKind::Fuselage => "fuselage",
            ComponentKind::HTailUpper => "htail-upper",
            ComponentKind::HTailLower => "htail-lower",
            ComponentKind::Wake => "wake",
        }
    }

    pub fn parse(s: &str) -> Option<ComponentKind> {
        Some(match s {
            "wing-upper" => ComponentKind::WingUpper,
            "wing-lower" => ComponentKind::WingLower,
            "fuselage" => ComponentKind::Fuselage,
            "htail-upper" => ComponentKind::HTailUpper,
            "htail-lower" => ComponentKind::HTailLower,
            "wake" => ComponentKind::Wake,
            _ => return None,
        })
    }
}

/// Boundary-condition class of a network.
///
/// Only the impermeable surface and wake classes are exercised; the other
/// codes are reserved so decks carrying them survive a parse/write cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BcClass {
    ImpermeableSurface,
    Wake,
    Inlet,
    FanFace,
    SuperInclined,
}

impl BcClass {
    pub fn code(self) -> u32 {
        match self {
            BcClass::ImpermeableSurface => 1,
            BcClass::Wake => 18,
            BcClass::Inlet => 7,
            BcClass::FanFace => 8,
            BcClass::SuperInclined => 11,
        }
    }

    pub fn from_code(code: u32) -> Option<BcClass> {
        Some(match code {
            1 => BcClass::ImpermeableSurface,
            18 => BcClass::Wake,
            7 => BcClass::Inlet,
            8 => BcClass::FanFace,
            11 => BcClass::SuperInclined,
            _ => return None,
        })
    }
}

/// One of the four boundary edges of a network grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Edge {
    FirstRow,
    LastRow,
    FirstCol,
    LastCol,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::FirstRow, Edge::LastRow, Edge::FirstCol, Edge::LastCol];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Edge::FirstRow => "first-row",
            Edge::LastRow => "last-row",
            Edge::FirstCol => "first-col",
            Edge::LastCol => "last-col",
        }
    }

    pub fn parse(s: &str) -> Option<Edge> {
        Edge::ALL.into_iter().find(|e| e.as_str() == s)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NetworkError {
    TooSmall { rows: usize, cols: usize },
    SizeMismatch { expected: usize, found: usize },
    NonFinite { row: usize, col: usize },
    CoincidentPoints { row: usize, col: usize },
    EmptyName,
    DegeneratePanel { row: usize, col: usize },
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::TooSmall { rows, cols } => {
                write!(f, "network grid {rows}x{cols} is smaller than 2x2")
            }
            NetworkError::SizeMismatch { expected, found } => {
                write!(f, "expected {expected} grid points, found {found}")
            }
            NetworkError::NonFinite { row, col } => {
                write!(f, "non-finite coordinate at ({row}, {col})")
            }
            NetworkError::CoincidentPoints { row, col } => write!(
                f,
                "adjacent grid points coincide at ({row}, {col}) away from a collapsed edge"
            ),
            NetworkError::EmptyName => f.write_str("network name is empty"),
            NetworkError::DegeneratePanel { row, col } => {
                write!(f, "panel ({row}, {col}) is degenerate")
            }
        }
    }
}

impl core::error::Error for NetworkError {}

/// Relative coincidence threshold, scaled by the bounding-box diagonal.
pub const COINCIDENT_REL_TOL: f64 = 1e-9;

/// A rectangular grid of node points covering one surface patch.
#[derive(Debug, Clone, PartialEq)]
pub struct StructuredNetwork {
    name: String,
    kind: ComponentKind,
    bc_class: BcClass,
    n_rows: usize,
    n_cols: usize,
    points: Vec<Point3>,
    collapsed: [bool; 4],
}

impl StructuredNetwork {
    /// Builds and validates a network. `points` is row-major.
    pub fn new(
        name: impl Into<String>,
        kind: ComponentKind,
        n_rows: usize,
        n_cols: usize,
        points: Vec<Point3>,
    ) -> Result<Self, NetworkError> {
        let bc_class = if kind == ComponentKind::Wake {
            BcClass::Wake
        } else {
            BcClass::ImpermeableSurface
        };
        Self::with_flags(name, kind, bc_class, n_rows, n_cols, points, [false; 4])
    }

    /// Builds a network with explicit boundary-condition class and collapsed
    /// edge flags (indexed in [`Edge::ALL`] order).
    pub fn with_flags(
        name: impl Into<String>,
        kind: ComponentKind,
        bc_class: BcClass,
        n_rows: usize,
        n_cols: usize,
        points: Vec<Point3>,
        collapsed: [bool; 4],
    ) -> Result<Self, NetworkError> {
        let net = StructuredNetwork {
            name: name.into(),
            kind,
            bc_class,
            n_rows,
            n_cols,
            points,
            collapsed,
        };
        net.validate()?;
        Ok(net)
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        if self.name.is_empty() {
            return Err(NetworkError::EmptyName);
        }
        if self.n_rows < 2 || self.n_cols < 2 {
            return Err(NetworkError::TooSmall {
                rows: self.n_rows,
                cols: self.n_cols,
            });
        }
        let expected = self.n_rows * self.n_cols;
        if self.points.len() != expected {
            return Err(NetworkError::SizeMismatch {
                expected,
                found: self.points.len(),
            });
        }
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                if !self.point(i, j).is_finite() {
                    return Err(NetworkError::NonFinite { row: i, col: j });
                }
            }
        }
        let tol = COINCIDENT_REL_TOL * bbox_diagonal(&self.points);
        for i in 0..self.n_rows {
            for j in 0..self.n_cols {
                let p = self.point(i, j);
                let neighbours = [(i + 1, j), (i, j + 1)];
                for (a, b) in neighbours {
                    if a >= self.n_rows || b >= self.n_cols {
                        continue;
                    }
                    if p.distance(self.point(a, b)) <= tol
                        && !self.on_collapsed_edge(i, j)
                        && !self.on_collapsed_edge(a, b)
                    {
                        return Err(NetworkError::CoincidentPoints { row: i, col: j });
                    }
                }
            }
        }
        Ok(())
    }

    fn on_collapsed_edge(&self, i: usize, j: usize) -> bool {
        (i == 0 && self.collapsed[Edge::FirstRow.index()])
            || (i + 1 == self.n_rows && self.collapsed[Edge::LastRow.index()])
            || (j == 0 && self.collapsed[Edge::FirstCol.index()])
            || (j + 1 == self.n_cols && self.collapsed[Edge::LastCol.index()])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn kind(&self) -> ComponentKind {
        self.kind
    }

    pub fn bc_class(&self) -> BcClass {
        self.bc_class
    }

    pub fn set_bc_class(&mut self, bc: BcClass) {
        self.bc_class = bc;
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    #[inline]
    pub fn point(&self, i: usize, j: usize) -> Point3 {
        self.points[i * self.n_cols + j]
    }

    /// Overwrites one grid point. Used by abutment repair; callers that move
    /// points far should re-run [`StructuredNetwork::validate`].
    pub fn set_point(&mut self, i: usize, j: usize, p: Point3) {
        self.points[i * self.n_cols + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Point3] {
        &self.points[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn column(&self, j: usize) -> Vec<Point3> {
        (0..self.n_rows).map(|i| self.point(i, j)).collect()
    }

    pub fn is_collapsed_flagged(&self, edge: Edge) -> bool {
        self.collapsed[edge.index()]
    }

    pub fn collapsed_flags(&self) -> [bool; 4] {
        self.collapsed
    }

    pub fn flag_collapsed(&mut self, edge: Edge) {
        self.collapsed[edge.index()] = true;
    }

    /// Grid indices of the points along an edge, in grid order.
    pub fn edge_indices(&self, edge: Edge) -> Vec<(usize, usize)> {
        match edge {
            Edge::FirstRow => (0..self.n_cols).map(|j| (0, j)).collect(),
            Edge::LastRow => (0..self.n_cols).map(|j| (self.n_rows - 1, j)).collect(),
            Edge::FirstCol => (0..self.n_rows).map(|i| (i, 0)).collect(),
            Edge::LastCol => (0..self.n_rows).map(|i| (i, self.n_cols - 1)).collect(),
        }
    }

    pub fn edge_points(&self, edge: Edge) -> Vec<Point3> {
        self.edge_indices(edge)
            .into_iter()
            .map(|(i, j)| self.point(i, j))
            .collect()
    }

    /// True when every point on the edge coincides (a tip or nose point).
    pub fn edge_is_degenerate(&self, edge: Edge) -> bool {
        let pts = self.edge_points(edge);
        let tol = COINCIDENT_REL_TOL * bbox_diagonal(&self.points);
        pts.iter().all(|p| p.distance(pts[0]) <= tol)
    }

    pub fn panel_count(&self) -> usize {
        (self.n_rows - 1) * (self.n_cols - 1)
    }

    /// Corners of panel `(i, j)` in right-hand-rule order.
    pub fn panel_corners(&self, i: usize, j: usize) -> [Point3; 4] {
        [
            self.point(i, j),
            self.point(i, j + 1),
            self.point(i + 1, j + 1),
            self.point(i + 1, j),
        ]
    }

    pub fn panel_metrics(&self, i: usize, j: usize) -> Result<PanelMetrics, NetworkError> {
        let [a, b, c, d] = self.panel_corners(i, j);
        panel_metrics(a, b, c, d).map_err(|_| NetworkError::DegeneratePanel { row: i, col: j })
    }

    /// Whole-grid reindexing: row `i` becomes row `n_rows - 1 - i`.
    pub fn reverse_rows(&self) -> StructuredNetwork {
        let mut points = Vec::with_capacity(self.points.len());
        for i in (0..self.n_rows).rev() {
            points.extend_from_slice(self.row(i));
        }
        let mut collapsed = self.collapsed;
        collapsed.swap(Edge::FirstRow.index(), Edge::LastRow.index());
        StructuredNetwork {
            points,
            collapsed,
            ..self.clone()
        }
    }

    /// Whole-grid reindexing: column `j` becomes column `n_cols - 1 - j`.
    pub fn reverse_cols(&self) -> StructuredNetwork {
        let mut points = Vec::with_capacity(self.points.len());
        for i in 0..self.n_rows {
            points.extend(self.row(i).iter().rev().copied());
        }
        let mut collapsed = self.collapsed;
        collapsed.swap(Edge::FirstCol.index(), Edge::LastCol.index());
        StructuredNetwork {
            points,
            collapsed,
            ..self.clone()
        }
    }

    /// Swaps rows and columns.
    pub fn transpose(&self) -> StructuredNetwork {
        let mut points = Vec::with_capacity(self.points.len());
        for j in 0..self.n_cols {
            for i in 0..self.n_rows {
                points.push(self.point(i, j));
            }
        }
        let c = self.collapsed;
        StructuredNetwork {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            points,
            collapsed: [c[2], c[3], c[0], c[1]],
            ..self.clone()
        }
    }

    /// Applies `f` to every point, keeping the topology.
    pub fn map_points(&self, f: impl Fn(Point3) -> Point3) -> StructuredNetwork {
        StructuredNetwork {
            points: self.points.iter().map(|p| f(*p)).collect(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegeneratePanel;

impl fmt::Display for DegeneratePanel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("degenerate panel: diagonals are parallel or zero")
    }
}

impl core::error::Error for DegeneratePanel {}

/// Unit normal of a quadrilateral from the cross product of its diagonals
/// `(p3 - p1) × (p4 - p2)`.
pub fn panel_normal(
    p1: Point3,
    p2: Point3,
    p3: Point3,
    p4: Point3,
) -> Result<Vec3, DegeneratePanel> {
    let d1 = p3 - p1;
    let d2 = p4 - p2;
    let c = d1.cross(d2);
    let scale = d1.norm().max(d2.norm());
    let n = c.norm();
    if !(n >= 1e-12 * scale * scale) || n == 0.0 {
        return Err(DegeneratePanel);
    }
    Ok(c / n)
}

/// Area, centroid and unit normal of one panel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelMetrics {
    pub area: f64,
    pub centroid: Point3,
    pub unit_normal: Vec3,
}

/// Metrics of a (possibly warped or collapsed) quadrilateral. The area is half
/// the diagonal cross product, exact for planar quads and triangles; the
/// centroid is the area-weighted centroid of the two triangles split along
/// `p1`–`p3`.
pub fn panel_metrics(
    p1: Point3,
    p2: Point3,
    p3: Point3,
    p4: Point3,
) -> Result<PanelMetrics, DegeneratePanel> {
    let unit_normal = panel_normal(p1, p2, p3, p4)?;
    let area = 0.5 * (p3 - p1).cross(p4 - p2).norm();
    let a1 = 0.5 * (p2 - p1).cross(p3 - p1).norm();
    let a2 = 0.5 * (p3 - p1).cross(p4 - p1).norm();
    let c1 = (p1 + p2 + p3) / 3.0;
    let c2 = (p1 + p3 + p4) / 3.0;
    let centroid = if a1 + a2 > 0.0 {
        (c1 * a1 + c2 * a2) / (a1 + a2)
    } else {
        (p1 + p2 + p3 + p4) / 4.0
    };
    Ok(PanelMetrics {
        area,
        centroid,
        unit_normal,
    })
}

/// A reference direction field for orientation checks: at a panel centroid it
/// returns the direction the panel normal is expected to point towards.
pub trait DirectionField {
    fn direction_at(&self, p: Point3) -> Vec3;
}

impl DirectionField for Vec3 {
    fn direction_at(&self, _p: Point3) -> Vec3 {
        *self
    }
}

impl<F: Fn(Point3) -> Vec3> DirectionField for F {
    fn direction_at(&self, p: Point3) -> Vec3 {
        self(p)
    }
}

/// Outward direction from a fixed center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Radial(pub Point3);

impl DirectionField for Radial {
    fn direction_at(&self, p: Point3) -> Vec3 {
        p - self.0
    }
}

/// Outward direction from a piecewise-linear spine running along a coordinate
/// axis (the curve of section centroids of a body or a lifting surface).
///
/// The spine is clamped short of its end stations by `inset`, so panels that
/// close a tip or a nose see a direction with an outward axial component.
#[derive(Debug, Clone, PartialEq)]
pub struct Spine {
    axis: usize,
    nodes: Vec<Point3>,
    inset: f64,
}

impl Spine {
    /// `nodes` must be sorted by their `axis` component.
    pub fn new(axis: usize, nodes: Vec<Point3>, inset: f64) -> Spine {
        Spine { axis, nodes, inset }
    }

    pub fn nodes(&self) -> &[Point3] {
        &self.nodes
    }

    fn at_station(&self, s: f64) -> Point3 {
        let n = &self.nodes;
        if n.len() == 1 {
            return n[0];
        }
        let first = n[0].component(self.axis);
        let last = n[n.len() - 1].component(self.axis);
        let (lo, hi) = (first + self.inset, last - self.inset);
        let s = if lo < hi {
            s.clamp(lo, hi)
        } else {
            0.5 * (first + last)
        };
        for w in n.windows(2) {
            let (a, b) = (w[0].component(self.axis), w[1].component(self.axis));
            if s <= b {
                let t = if b > a {
                    ((s - a) / (b - a)).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                return w[0].lerp(w[1], t);
            }
        }
        n[n.len() - 1]
    }
}

impl DirectionField for Spine {
    fn direction_at(&self, p: Point3) -> Vec3 {
        p - self.at_station(p.component(self.axis))
    }
}

/// Outcome of an orientation check.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientationReport {
    /// Fraction of non-degenerate panels whose normal agrees with the field.
    pub fraction_outward: f64,
    /// Panels `(row, col)` whose normal has a non-positive dot product with
    /// the reference direction.
    pub offending: Vec<(usize, usize)>,
    /// Panels skipped because their normal is undefined.
    pub degenerate: Vec<(usize, usize)>,
}

impl OrientationReport {
    pub fn is_compliant(&self) -> bool {
        self.offending.is_empty()
    }
}

/// Checks every panel normal against an outward reference field.
pub fn check_orientation<F: DirectionField + ?Sized>(
    net: &StructuredNetwork,
    outward_ref: &F,
) -> OrientationReport {
    let mut offending = Vec::new();
    let mut degenerate = Vec::new();
    let mut checked = 0usize;
    for i in 0..net.n_rows() - 1 {
        for j in 0..net.n_cols() - 1 {
            match net.panel_metrics(i, j) {
                Ok(m) => {
                    checked += 1;
                    if m.unit_normal.dot(outward_ref.direction_at(m.centroid)) <= 0.0 {
                        offending.push((i, j));
                    }
                }
                Err(_) => degenerate.push((i, j)),
            }
        }
    }
    let fraction_outward = if checked == 0 {
        0.0
    } else {
        (checked - offending.len()) as f64 / checked as f64
    };
    OrientationReport {
        fraction_outward,
        offending,
        degenerate,
    }
}
