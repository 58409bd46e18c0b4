//! Unstructured surface meshes and their regrouping into ordered cross-sections.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use core::fmt;

use crate::geom::{Point3, Vec3};
use crate::math;

pub type NodeId = u64;
pub type ElementId = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Tri,
    Quad,
}

impl ElementKind {
    pub fn node_count(self) -> usize {
        match self {
            ElementKind::Tri => 3,
            ElementKind::Quad => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub id: ElementId,
    pub kind: ElementKind,
    pub nodes: Vec<NodeId>,
}

/// Nodes, surface elements and named element groups of a mesh file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawMesh {
    pub nodes: BTreeMap<NodeId, Point3>,
    pub elements: Vec<Element>,
    /// Component name to element ids.
    pub groups: BTreeMap<String, Vec<ElementId>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshError {
    UnresolvedNode {
        element: ElementId,
        node: NodeId,
    },
    WrongNodeCount {
        element: ElementId,
        expected: usize,
        found: usize,
    },
    UnknownElement {
        group: String,
        element: ElementId,
    },
    NonFinite {
        node: NodeId,
    },
}

impl fmt::Display for MeshError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshError::UnresolvedNode { element, node } => {
                write!(f, "element {element} references missing node {node}")
            }
            MeshError::WrongNodeCount {
                element,
                expected,
                found,
            } => write!(
                f,
                "element {element} has {found} nodes, expected {expected}"
            ),
            MeshError::UnknownElement { group, element } => {
                write!(f, "group {group} lists unknown element {element}")
            }
            MeshError::NonFinite { node } => write!(f, "node {node} has a non-finite coordinate"),
        }
    }
}

impl core::error::Error for MeshError {}

impl RawMesh {
    pub fn validate(&self) -> Result<(), MeshError> {
        for (id, p) in &self.nodes {
            if !p.is_finite() {
                return Err(MeshError::NonFinite { node: *id });
            }
        }
        for e in &self.elements {
            if e.nodes.len() != e.kind.node_count() {
                return Err(MeshError::WrongNodeCount {
                    element: e.id,
                    expected: e.kind.node_count(),
                    found: e.nodes.len(),
                });
            }
            if let Some(n) = e.nodes.iter().find(|n| !self.nodes.contains_key(n)) {
                return Err(MeshError::UnresolvedNode {
                    element: e.id,
                    node: *n,
                });
            }
        }
        let known: BTreeMap<ElementId, ()> = self.elements.iter().map(|e| (e.id, ())).collect();
        for (name, ids) in &self.groups {
            if let Some(id) = ids.iter().find(|id| !known.contains_key(id)) {
                return Err(MeshError::UnknownElement {
                    group: name.clone(),
                    element: *id,
                });
            }
        }
        Ok(())
    }

    /// Node ids referenced by a component's elements, ascending.
    pub fn component_nodes(&self, component: &str) -> Option<Vec<NodeId>> {
        let ids = self.groups.get(component)?;
        let by_id: BTreeMap<ElementId, &Element> =
            self.elements.iter().map(|e| (e.id, e)).collect();
        let mut nodes: Vec<NodeId> = ids
            .iter()
            .filter_map(|id| by_id.get(id))
            .flat_map(|e| e.nodes.iter().copied())
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        Some(nodes)
    }
}

/// Coordinate axis along which a component is sectioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn unit(self) -> Vec3 {
        match self {
            Axis::X => Vec3::X,
            Axis::Y => Vec3::Y,
            Axis::Z => Vec3::Z,
        }
    }

    /// The "up" direction used to find the topmost point of a section.
    pub fn up(self) -> Vec3 {
        match self {
            Axis::X | Axis::Y => Vec3::Z,
            Axis::Z => Vec3::Y,
        }
    }

    pub fn parse(s: &str) -> Option<Axis> {
        match s {
            "x" | "X" => Some(Axis::X),
            "y" | "Y" => Some(Axis::Y),
            "z" | "Z" => Some(Axis::Z),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        }
    }
}

/// Points of one component lying on a common station.
///
/// A section holds at least three points, except a single-point apex section
/// (a collapsed nose or tail).
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection {
    pub station: f64,
    pub points: Vec<Point3>,
}

impl CrossSection {
    pub fn is_apex(&self) -> bool {
        self.points.len() == 1
    }

    pub fn centroid(&self) -> Point3 {
        let n = self.points.len().max(1) as f64;
        self.points.iter().fold(Vec3::ZERO, |acc, p| acc + *p) / n
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SectionError {
    UnknownComponent(String),
    EmptyComponent(String),
    AmbiguousStations { first: f64, second: f64 },
    TooFewStations { found: usize },
    SparseSection { station: f64, points: usize },
}

impl fmt::Display for SectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionError::UnknownComponent(c) => write!(f, "component {c} is not in the mesh"),
            SectionError::EmptyComponent(c) => write!(f, "component {c} has no nodes"),
            SectionError::AmbiguousStations { first, second } => write!(
                f,
                "stations {first} and {second} cannot be separated with the given tolerance"
            ),
            SectionError::TooFewStations { found } => {
                write!(f, "found {found} distinct station(s), need at least 2")
            }
            SectionError::SparseSection { station, points } => write!(
                f,
                "section at station {station} has {points} points; need 1 (apex) or at least 3"
            ),
        }
    }
}

impl core::error::Error for SectionError {}

/// Groups a component's nodes into cross-sections along `axis`.
///
/// Stations are found by a one-dimensional single-linkage merge: nodes whose
/// sorted station coordinates differ by at most `station_tol` belong to the
/// same section. Within a section, points are ordered by
/// [`order_clockwise`].
pub fn extract_sections(
    mesh: &RawMesh,
    component: &str,
    axis: Axis,
    station_tol: f64,
) -> Result<Vec<CrossSection>, SectionError> {
    let ids = mesh
        .component_nodes(component)
        .ok_or_else(|| SectionError::UnknownComponent(component.into()))?;
    if ids.is_empty() {
        return Err(SectionError::EmptyComponent(component.into()));
    }
    let mut pts: Vec<Point3> = ids.iter().map(|id| mesh.nodes[id]).collect();
    sections_from_points(&mut pts, axis, station_tol)
}

/// As [`extract_sections`], for a bare point set.
pub fn sections_from_points(
    pts: &mut [Point3],
    axis: Axis,
    station_tol: f64,
) -> Result<Vec<CrossSection>, SectionError> {
    let a = axis.index();
    pts.sort_by(|p, q| lexicographic(*p, *q, a));

    let mut clusters: Vec<Vec<Point3>> = Vec::new();
    for p in pts.iter() {
        match clusters.last_mut() {
            Some(c) if p.component(a) - c[c.len() - 1].component(a) <= station_tol => c.push(*p),
            _ => clusters.push(alloc::vec![*p]),
        }
    }
    let mut sections = Vec::with_capacity(clusters.len());
    for c in clusters {
        let station = c.iter().map(|p| p.component(a)).sum::<f64>() / c.len() as f64;
        let lo = c[0].component(a);
        let hi = c[c.len() - 1].component(a);
        if station - lo > station_tol || hi - station > station_tol {
            return Err(SectionError::AmbiguousStations {
                first: lo,
                second: hi,
            });
        }
        if c.len() == 2 {
            return Err(SectionError::SparseSection { station, points: 2 });
        }
        let points = order_clockwise(&c, axis);
        sections.push(CrossSection { station, points });
    }
    if sections.len() < 2 {
        return Err(SectionError::TooFewStations {
            found: sections.len(),
        });
    }

    for w in sections.windows(2) {
        if w[1].station - w[0].station < 2.0 * station_tol {
            return Err(SectionError::AmbiguousStations {
                first: w[0].station,
                second: w[1].station,
            });
        }
    }
    Ok(sections)
}

fn lexicographic(p: Point3, q: Point3, first: usize) -> Ordering {
    let order = [first, (first + 1) % 3, (first + 2) % 3];
    for k in order {
        match p.component(k).total_cmp(&q.component(k)) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Clockwise angle from "up", seen looking down the positive `axis`, measured
/// about `center`, in `[0, 2π)`.
pub fn clockwise_angle(p: Point3, center: Point3, axis: Axis) -> f64 {
    let d = p - center;
    let up = axis.up();
    let right = axis.unit().cross(up);
    let t = math::atan2(d.dot(right), d.dot(up));
    if t < 0.0 {
        t + 2.0 * PI
    } else {
        t
    }
}

/// Orders section points by polar angle about their centroid, clockwise when
/// looking down the positive `axis`. Ties in angle go to the smaller radius.
///
/// A full ring starts at its topmost point. An open arc (its largest angular
/// gap exceeds a quarter turn and is clearly larger than every other gap)
/// starts at the point following that gap, so the arc is traversed clockwise
/// without wrapping.
pub fn order_clockwise(points: &[Point3], axis: Axis) -> Vec<Point3> {
    order_section(points, axis).0
}

/// As [`order_clockwise`], also reporting whether the points form an open arc.
pub fn order_section(points: &[Point3], axis: Axis) -> (Vec<Point3>, bool) {
    if points.len() < 2 {
        return (points.to_vec(), false);
    }
    let n = points.len() as f64;
    let center = points.iter().fold(Vec3::ZERO, |acc, p| acc + *p) / n;
    let a = axis.index();
    let planar = |p: Point3| p.with_component(a, 0.0);
    let c = planar(center);
    let mut keyed: Vec<(f64, f64, Point3)> = points
        .iter()
        .map(|p| {
            let q = planar(*p);
            (clockwise_angle(q, c, axis), (q - c).norm(), *p)
        })
        .collect();
    keyed.sort_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then(x.1.total_cmp(&y.1))
            .then(lexicographic(x.2, y.2, a))
    });

    let m = keyed.len();
    let gaps: Vec<f64> = (0..m)
        .map(|k| {
            let next = if k + 1 == m {
                keyed[0].0 + 2.0 * PI
            } else {
                keyed[k + 1].0
            };
            next - keyed[k].0
        })
        .collect();
    let (big, &largest) = gaps
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.total_cmp(y.1).then(y.0.cmp(&x.0)))
        .unwrap();
    let second = gaps
        .iter()
        .enumerate()
        .filter(|(k, _)| *k != big)
        .map(|(_, g)| *g)
        .fold(0.0, f64::max);
    let open = m >= 3 && largest > PI / 2.0 && largest > 1.5 * second;
    let start = if open {
        (big + 1) % m
    } else {
        let up = axis.up();
        (0..m)
            .max_by(|&x, &y| {
                keyed[x]
                    .2
                    .dot(up)
                    .total_cmp(&keyed[y].2.dot(up))
                    .then(y.cmp(&x))
            })
            .unwrap()
    };
    ((0..m).map(|k| keyed[(start + k) % m].2).collect(), open)
}
