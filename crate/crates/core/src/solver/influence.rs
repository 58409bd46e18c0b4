//! Potential of constant-strength source and doublet panels.
//!
//! A unit doublet panel with unit normal `n` induces
//! `φ(p) = (1/4π) ∫ (p - q)·n / |p - q|³ dS`, which tends to `+1/2` just
//! outside the panel (on the side `n` points to) and `-1/2` just inside. A
//! unit source panel induces `φ(p) = -(1/4π) ∫ 1/|p - q| dS`.

use core::f64::consts::PI;

use crate::geom::{Point3, Vec3};
use crate::math;
use crate::network::panel_normal;

const FOUR_PI: f64 = 4.0 * PI;

/// A flat-ish panel with three or four distinct corners, ordered so that the
/// right-hand rule gives the outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelGeom {
    verts: [Point3; 4],
    nv: usize,
    pub centroid: Point3,
    pub normal: Vec3,
    pub area: f64,
    /// Average of the corners; apex of the triangle fan for quads.
    pub vertex_center: Point3,
    /// Longest diagonal or edge.
    pub diameter: f64,
}

impl PanelGeom {
    /// Builds a panel from grid corners, dropping repeated corners. Returns
    /// `None` when fewer than three distinct corners remain or the panel has
    /// no area.
    pub fn from_corners(corners: [Point3; 4]) -> Option<PanelGeom> {
        let scale = corners
            .iter()
            .flat_map(|a| corners.iter().map(move |b| a.distance(*b)))
            .fold(0.0, f64::max);
        if !(scale > 0.0) {
            return None;
        }
        let tol = 1e-12 * scale;
        let mut verts = [Vec3::ZERO; 4];
        let mut nv = 0;
        for c in corners {
            if nv == 0 || verts[nv - 1].distance(c) > tol {
                verts[nv] = c;
                nv += 1;
            }
        }
        while nv > 1 && verts[nv - 1].distance(verts[0]) <= tol {
            nv -= 1;
        }
        if nv < 3 {
            return None;
        }
        Self::from_verts(verts, nv, scale)
    }

    fn from_verts(verts: [Point3; 4], nv: usize, diameter: f64) -> Option<PanelGeom> {
        let (normal, area, centroid) = if nv == 4 {
            let [p1, p2, p3, p4] = verts;
            let n = panel_normal(p1, p2, p3, p4).ok()?;
            let a1 = (p2 - p1).cross(p3 - p1).norm() * 0.5;
            let a2 = (p3 - p1).cross(p4 - p1).norm() * 0.5;
            let area = (p3 - p1).cross(p4 - p2).norm() * 0.5;
            let c1 = (p1 + p2 + p3) / 3.0;
            let c2 = (p1 + p3 + p4) / 3.0;
            let c = if a1 + a2 > 0.0 {
                (c1 * a1 + c2 * a2) / (a1 + a2)
            } else {
                (p1 + p2 + p3 + p4) / 4.0
            };
            (n, area, c)
        } else {
            let [p1, p2, p3, _] = verts;
            let cr = (p2 - p1).cross(p3 - p1);
            let n = cr.normalized()?;
            if cr.norm() < 1e-12 * diameter * diameter {
                return None;
            }
            (n, cr.norm() * 0.5, (p1 + p2 + p3) / 3.0)
        };
        let vertex_center = verts[..nv].iter().fold(Vec3::ZERO, |a, p| a + *p) / nv as f64;
        Some(PanelGeom {
            verts,
            nv,
            centroid,
            normal,
            area,
            vertex_center,
            diameter,
        })
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.verts[..self.nv]
    }

    /// Reflection through `y = 0`, with the corner order reversed so the
    /// normal stays outward.
    pub fn mirrored(&self) -> PanelGeom {
        let mut v = [Vec3::ZERO; 4];
        for k in 0..self.nv {
            v[k] = self.verts[self.nv - 1 - k].mirror_y();
        }
        PanelGeom {
            verts: v,
            nv: self.nv,
            centroid: self.centroid.mirror_y(),
            normal: self.normal.mirror_y(),
            area: self.area,
            vertex_center: self.vertex_center.mirror_y(),
            diameter: self.diameter,
        }
    }

    /// A point just inside the panel: the centroid moved against the normal
    /// by `1e-6` of the panel size.
    pub fn collocation(&self) -> Point3 {
        self.centroid - self.normal * (1e-6 * math::sqrt(self.area))
    }

    /// Potential at `p` of a unit-strength doublet on this panel.
    pub fn doublet_potential(&self, p: Point3) -> f64 {
        -self.solid_angle_vos(p) / FOUR_PI
    }

    /// Potential at `p` of a unit-strength source on this panel.
    pub fn source_potential(&self, p: Point3) -> f64 {
        let (s, _) = self.source_and_doublet(p);
        s
    }

    /// Both unit potentials at `p`, sharing the solid-angle evaluation.
    pub fn source_and_doublet(&self, p: Point3) -> (f64, f64) {
        let omega_vos = self.solid_angle_vos(p);
        let doublet = -omega_vos / FOUR_PI;
        // source: integrate 1/r over the panel projected on its mean plane
        let n = self.normal;
        let c = self.centroid;
        let z = (p - c).dot(n);
        let proj = |q: Point3| q - n * (q - c).dot(n);
        let mut edge_sum = 0.0;
        for k in 0..self.nv {
            let a = proj(self.verts[k]);
            let b = proj(self.verts[(k + 1) % self.nv]);
            let ab = b - a;
            let l = ab.norm();
            if l == 0.0 {
                continue;
            }
            let m = ab.cross(n) / l;
            let h = (a - p).dot(m);
            let ra = a.distance(p);
            let rb = b.distance(p);
            let den = ra + rb - l;
            if den <= 1e-15 * (ra + rb) {
                continue;
            }
            edge_sum += h * math::ln((ra + rb + l) / den);
        }
        // signed solid angle of the projected polygon, positive on the
        // normal side
        let omega_plane = if z == 0.0 {
            0.0
        } else {
            -self.solid_angle_vos_of(p, proj)
        };
        let integral = edge_sum - z * omega_plane;
        (-integral / FOUR_PI, doublet)
    }

    fn solid_angle_vos(&self, p: Point3) -> f64 {
        self.solid_angle_vos_of(p, |q| q)
    }

    /// Van Oosterom–Strackee solid angle, summed over a triangle fan; positive
    /// when `p` is on the side opposite the normal.
    fn solid_angle_vos_of(&self, p: Point3, f: impl Fn(Point3) -> Point3) -> f64 {
        if self.nv == 3 {
            return tri_vos(
                f(self.verts[0]) - p,
                f(self.verts[1]) - p,
                f(self.verts[2]) - p,
            );
        }
        let c = f(self.vertex_center) - p;
        let mut s = 0.0;
        for k in 0..self.nv {
            let a = f(self.verts[k]) - p;
            let b = f(self.verts[(k + 1) % self.nv]) - p;
            s += tri_vos(c, a, b);
        }
        s
    }
}

fn tri_vos(r1: Vec3, r2: Vec3, r3: Vec3) -> f64 {
    let (l1, l2, l3) = (r1.norm(), r2.norm(), r3.norm());
    let num = r1.dot(r2.cross(r3));
    let den = l1 * l2 * l3 + r1.dot(r2) * l3 + r1.dot(r3) * l2 + r2.dot(r3) * l1;
    if num == 0.0 && den >= 0.0 {
        return 0.0;
    }
    2.0 * math::atan2(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> PanelGeom {
        PanelGeom::from_corners([
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ])
        .unwrap()
    }

    #[test]
    fn doublet_jump_is_one() {
        let p = unit_square();
        let c = p.centroid;
        let above = p.doublet_potential(c + Vec3::Z * 1e-9);
        let below = p.doublet_potential(c - Vec3::Z * 1e-9);
        assert!((above - 0.5).abs() < 1e-8);
        assert!((below + 0.5).abs() < 1e-8);
    }

    #[test]
    fn source_matches_point_source_far_away() {
        let p = unit_square();
        let q = p.centroid + Vec3::new(30.0, -40.0, 120.0);
        let r = q.distance(p.centroid);
        let s = p.source_potential(q);
        assert!((s + 1.0 / (4.0 * PI * r)).abs() < 1e-4 / r);
    }

    #[test]
    fn collapsed_corners_make_a_triangle() {
        let t = PanelGeom::from_corners([
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(t.vertices().len(), 3);
        assert!((t.area - 0.5).abs() < 1e-15);
        assert!(PanelGeom::from_corners([Vec3::X; 4]).is_none());
    }
}
