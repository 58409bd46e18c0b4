use std::f64::consts::PI;

use panflow_core::geom::Rotation;
use panflow_core::network::{check_orientation, panel_metrics, panel_normal, Radial};
use panflow_core::{BcClass, ComponentKind, StructuredNetwork, Vec3};
use proptest::prelude::*;

fn v(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

/// Sphere octant with rows along longitude and columns along colatitude, so
/// the right-hand rule points out of the sphere.
fn octant(n_rows: usize, n_cols: usize) -> StructuredNetwork {
    let mut pts = Vec::new();
    for i in 0..n_rows {
        let phi = 0.5 * PI * i as f64 / (n_rows - 1) as f64;
        for j in 0..n_cols {
            let th = 0.1 + (0.5 * PI - 0.1) * j as f64 / (n_cols - 1) as f64;
            pts.push(v(th.sin() * phi.cos(), th.sin() * phi.sin(), th.cos()));
        }
    }
    StructuredNetwork::new("OCTANT", ComponentKind::Fuselage, n_rows, n_cols, pts).unwrap()
}

fn swap_rows(net: &StructuredNetwork, a: usize, b: usize) -> StructuredNetwork {
    let mut out = net.clone();
    for j in 0..net.n_cols() {
        out.set_point(a, j, net.point(b, j));
        out.set_point(b, j, net.point(a, j));
    }
    out
}

#[test]
fn unit_square_normals() {
    let [a, b, c, d] = [v(0., 0., 0.), v(1., 0., 0.), v(1., 1., 0.), v(0., 1., 0.)];
    assert_eq!(panel_normal(a, b, c, d).unwrap(), v(0., 0., 1.));
    assert_eq!(panel_normal(d, c, b, a).unwrap(), v(0., 0., -1.));
}

#[test]
fn skewed_quad_matches_plane_fit() {
    let pts = [v(0., 0., 0.), v(1., 0., 0.), v(1., 1., 0.2), v(0., 1., 0.2)];
    let n = panel_normal(pts[0], pts[1], pts[2], pts[3]).unwrap();
    // least-squares plane z = a x + b y + c through the corners
    let mut m = [[0.0f64; 3]; 3];
    let mut r = [0.0f64; 3];
    for p in pts {
        let row = [p.x, p.y, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            r[i] += row[i] * p.z;
        }
    }
    let det3 = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det3(m);
    let solve = |k: usize| {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = r[i];
        }
        det3(mk) / d
    };
    let fit = v(-solve(0), -solve(1), 1.0).normalized().unwrap();
    let angle = n.dot(fit).clamp(-1.0, 1.0).acos();
    assert!(angle < 1e-6, "angle {angle}");
}

#[test]
fn octant_is_outward_and_row_swap_is_detected() {
    let net = octant(7, 6);
    let r = check_orientation(&net, &Radial(Vec3::ZERO));
    assert_eq!(r.fraction_outward, 1.0);

    let bad = swap_rows(&net, 2, 3);
    let r = check_orientation(&bad, &Radial(Vec3::ZERO));
    assert!(r.fraction_outward < 1.0);
    let expected: Vec<_> = (0..5).map(|j| (2, j)).collect();
    assert_eq!(r.offending, expected);
}

#[test]
fn flat_upper_surface_faces_up() {
    // rows trailing edge to leading edge, columns along +y
    let mut pts = Vec::new();
    for i in 0..4 {
        for j in 0..5 {
            pts.push(v(1.0 - i as f64 / 3.0, j as f64, 0.0));
        }
    }
    let net = StructuredNetwork::new("W", ComponentKind::WingUpper, 4, 5, pts).unwrap();
    assert_eq!(check_orientation(&net, &Vec3::Z).fraction_outward, 1.0);
}

#[test]
fn grid_reindexing() {
    let pts: Vec<_> = (0..12).map(|k| v(k as f64, (k * k) as f64, 1.0)).collect();
    let net = StructuredNetwork::new("G", ComponentKind::Fuselage, 3, 4, pts).unwrap();
    assert_eq!(net.reverse_rows().reverse_rows(), net);
    assert_eq!(net.reverse_cols().reverse_cols(), net);
    let t = net.transpose();
    assert_eq!((t.n_rows(), t.n_cols()), (4, 3));
    assert_eq!(net.bc_class(), BcClass::ImpermeableSurface);
}

fn coord() -> impl Strategy<Value = f64> {
    -10.0..10.0f64
}

fn point() -> impl Strategy<Value = Vec3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| v(x, y, z))
}

fn quad() -> impl Strategy<Value = [Vec3; 4]> {
    [point(), point(), point(), point()].prop_filter("non-degenerate", |q| {
        panel_normal(q[0], q[1], q[2], q[3]).is_ok()
    })
}

fn rotation() -> impl Strategy<Value = Rotation> {
    (point(), 0.0..2.0 * PI).prop_filter_map("axis", |(a, t)| {
        a.normalized().map(|k| Rotation::about_axis(k, t))
    })
}

proptest! {
    #[test]
    fn normal_flips_with_corner_order(q in quad()) {
        let n = panel_normal(q[0], q[1], q[2], q[3]).unwrap();
        let r = panel_normal(q[3], q[2], q[1], q[0]).unwrap();
        prop_assert!((n + r).norm() <= 1e-15);
    }

    #[test]
    fn normal_rotates_with_the_panel(q in quad(), rot in rotation()) {
        let n = panel_normal(q[0], q[1], q[2], q[3]).unwrap();
        let m = panel_normal(rot.apply(q[0]), rot.apply(q[1]), rot.apply(q[2]), rot.apply(q[3])).unwrap();
        prop_assert!((m - rot.apply(n)).norm() <= 1e-12);
    }

    #[test]
    fn planar_quad_area_matches_triangulation(
        angles in prop::array::uniform4(0.0..2.0 * PI),
        (a, b) in (0.5..5.0f64, 0.5..5.0f64),
        rot in rotation(),
        shift in point(),
    ) {
        let mut t = angles;
        t.sort_by(f64::total_cmp);
        prop_assume!(t.windows(2).all(|w| w[1] - w[0] > 0.05) && t[0] + 2.0 * PI - t[3] > 0.05);
        let q: Vec<Vec3> = t.iter().map(|t| rot.apply(v(a * t.cos(), b * t.sin(), 0.0)) + shift).collect();
        let m = panel_metrics(q[0], q[1], q[2], q[3]).unwrap();
        let tri = 0.5 * (q[1] - q[0]).cross(q[2] - q[0]).norm() + 0.5 * (q[2] - q[0]).cross(q[3] - q[0]).norm();
        prop_assert!((m.area - tri).abs() <= 1e-12 * tri);
    }

    #[test]
    fn reverse_rows_flips_every_normal(pts in prop::collection::vec(point(), 16)) {
        let net = StructuredNetwork::new("R", ComponentKind::Fuselage, 4, 4, pts);
        prop_assume!(net.is_ok());
        let net = net.unwrap();
        let rev = net.reverse_rows();
        prop_assert_eq!(rev.reverse_rows(), net.clone());
        for i in 0..3 {
            for j in 0..3 {
                let (Ok(a), Ok(b)) = (net.panel_metrics(i, j), rev.panel_metrics(2 - i, j)) else { continue };
                prop_assert!((a.unit_normal + b.unit_normal).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn reversal_flags_the_complement(rows in 4usize..10, cols in 3usize..8, swaps in prop::collection::vec(0usize..100, 0..3)) {
        let mut net = octant(rows, cols);
        for s in swaps {
            let a = s % (rows - 1);
            net = swap_rows(&net, a, a + 1);
        }
        let before = check_orientation(&net, &Radial(Vec3::ZERO));
        let after = check_orientation(&net.reverse_rows(), &Radial(Vec3::ZERO));
        let mut flagged: Vec<_> = after.offending.iter().map(|&(i, j)| (rows - 2 - i, j)).collect();
        flagged.sort();
        let all: Vec<_> = (0..rows - 1).flat_map(|i| (0..cols - 1).map(move |j| (i, j))).collect();
        let complement: Vec<_> = all.into_iter().filter(|p| !before.offending.contains(p)).collect();
        prop_assert_eq!(flagged, complement);
    }
}
