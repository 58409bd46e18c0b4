use std::f64::consts::PI;

use panflow_core::abutment::{
    abutment_report, arc_length_params, default_tolerance, enclosed_volume, enforce_abutment,
    fit_polynomial_with_params, fit_section_polynomial, resample_section, uniform_params,
    AbutmentError, EdgeClass, SnapMode,
};
use panflow_core::builder::{attach_wake, build_lifting_surface, LiftingOptions, LiftingSurface};
use panflow_core::mesh::{extract_sections, Axis};
use panflow_core::samples::{desk_aircraft_mesh, desk_aircraft_networks, wing_mesh, WingSpec};
use panflow_core::{Edge, StructuredNetwork, Vec3};
use proptest::prelude::*;

fn curve(n: usize, f: impl Fn(f64) -> Vec3) -> Vec<Vec3> {
    (0..n).map(|k| f(k as f64 / (n - 1) as f64)).collect()
}

#[test]
fn cubic_curve_is_reproduced() {
    // a cubic in its own parameter; arc length would not be polynomial
    let pts = curve(15, |t| {
        Vec3::new(t, 0.5 * t * t - t * t * t, 0.2 + t * t * t)
    });
    let fit = fit_polynomial_with_params(&pts, &uniform_params(15), 6).unwrap();
    assert!(fit.max_residual <= 1e-10, "{}", fit.max_residual);
}

#[test]
fn straight_line_has_no_curvature_terms() {
    let pts = curve(12, |t| Vec3::new(1.0 + 2.0 * t, -t, 3.0 * t));
    let fit = fit_section_polynomial(&pts, 6).unwrap();
    for c in &fit.coeffs {
        assert!(c[2..].iter().all(|v| v.abs() <= 1e-10), "{c:?}");
    }
}

/// Dense constrained least squares: full monomial basis with the end values
/// imposed through Lagrange multipliers, solved by Gaussian elimination.
fn dense_fit_residual(pts: &[Vec3], s: &[f64], degree: usize) -> f64 {
    let m = degree + 1;
    let size = m + 2;
    let mut worst = 0.0f64;
    for axis in 0..3 {
        let y: Vec<f64> = pts.iter().map(|p| p.component(axis)).collect();
        let mut a = vec![vec![0.0; size + 1]; size];
        for (k, &sk) in s.iter().enumerate() {
            let basis: Vec<f64> = (0..m).map(|p| sk.powi(p as i32)).collect();
            for i in 0..m {
                for j in 0..m {
                    a[i][j] += 2.0 * basis[i] * basis[j];
                }
                a[i][size] += 2.0 * basis[i] * y[k];
            }
        }
        for (row, (t, v)) in [(0.0, y[0]), (1.0, y[y.len() - 1])].into_iter().enumerate() {
            for p in 0..m {
                let b = f64::powi(t, p as i32);
                a[m + row][p] = b;
                a[p][m + row] = b;
            }
            a[m + row][size] = v;
        }
        for c in 0..size {
            let piv = (c..size)
                .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
                .unwrap();
            a.swap(c, piv);
            for r in 0..size {
                if r != c {
                    let f = a[r][c] / a[c][c];
                    for k in c..=size {
                        a[r][k] -= f * a[c][k];
                    }
                }
            }
        }
        let coef: Vec<f64> = (0..m).map(|i| a[i][size] / a[i][i]).collect();
        for (k, &sk) in s.iter().enumerate() {
            let v: f64 = coef.iter().rev().fold(0.0, |acc, c| acc * sk + c);
            worst = worst.max((v - y[k]).abs());
        }
    }
    worst
}

#[test]
fn circular_arc_matches_dense_oracle() {
    let pts = curve(20, |t| {
        let a = 0.9 * PI * t;
        Vec3::new(0.0, a.cos(), a.sin())
    });
    let fit = fit_section_polynomial(&pts, 6).unwrap();
    // the oracle measures per coordinate; compare on the same footing
    let per_axis: f64 = pts
        .iter()
        .zip(&fit.params)
        .flat_map(|(p, s)| {
            let q = fit.eval(*s);
            [(p.x - q.x).abs(), (p.y - q.y).abs(), (p.z - q.z).abs()]
        })
        .fold(0.0, f64::max);
    let oracle = dense_fit_residual(&pts, &arc_length_params(&pts), 6);
    assert!((per_axis - oracle).abs() <= 1e-9, "{per_axis} vs {oracle}");
}

fn ring(n: usize) -> Vec<Vec3> {
    curve(n, |t| {
        let a = PI * t;
        Vec3::new(3.0, 1.2 * a.sin(), a.cos())
    })
}

#[test]
fn resampling_keeps_end_points() {
    let pts = ring(10);
    let out = resample_section(&pts, 17).unwrap();
    assert_eq!(out.len(), 17);
    assert_eq!((out[0], out[16]), (pts[0], pts[9]));
    assert_eq!(resample_section(&pts, 2).unwrap(), vec![pts[0], pts[9]]);

    let fit = fit_section_polynomial(&pts, 6).unwrap();
    let again = fit.sample(&fit.params);
    for (p, q) in pts.iter().zip(&again) {
        assert!(p.distance(*q) <= fit.max_residual + 1e-15);
    }
}

#[test]
fn snapping_small_and_large_gaps() {
    let a0: Vec<Vec3> = (0..5).map(|k| Vec3::new(k as f64, 0.0, 0.0)).collect();
    let mut a = a0.clone();
    let mut b: Vec<Vec3> = a0.iter().map(|p| *p + Vec3::Z * 1e-6).collect();
    enforce_abutment(&mut a, &mut b, 1e-4, SnapMode::Midpoint).unwrap();
    assert_eq!(a, b);

    let mut c = a0.clone();
    let mut d: Vec<Vec3> = a0.iter().map(|p| *p + Vec3::Z).collect();
    let err = enforce_abutment(&mut c, &mut d, 1e-4, SnapMode::Midpoint).unwrap_err();
    assert!(matches!(err, AbutmentError::GapTooLarge { .. }));
    assert_eq!(c, a0);
}

fn desk() -> Vec<StructuredNetwork> {
    desk_aircraft_networks(&desk_aircraft_mesh()).unwrap()
}

fn index(nets: &[StructuredNetwork], name: &str) -> usize {
    nets.iter().position(|n| n.name() == name).unwrap()
}

#[test]
fn wing_root_weld_preserves_volume() {
    let mut nets = desk();
    let (w, f) = (index(&nets, "WING_UPPER"), index(&nets, "FUSELAGE_UPPER"));
    // fuselage side rows 8..30 carry the wing root, leading to trailing edge
    let rows: Vec<usize> = (8..30).collect();
    let nr = nets[w].n_rows();
    for (k, &i) in rows.iter().enumerate() {
        assert_eq!(nets[f].point(i, 0), nets[w].point(nr - 1 - k, 0));
    }
    let clean = enclosed_volume(&nets);
    // displace the root by a few micro-feet and weld it back
    for k in 0..nr {
        let p = nets[w].point(k, 0);
        nets[w].set_point(k, 0, p + Vec3::new(0.0, 0.0, 3e-6 * ((k % 3) as f64 - 1.0)));
    }
    let mut root: Vec<Vec3> = (0..nr).rev().map(|k| nets[w].point(k, 0)).collect();
    let mut side: Vec<Vec3> = rows.iter().map(|&i| nets[f].point(i, 0)).collect();
    let tol = 1e-5;
    enforce_abutment(&mut root, &mut side, tol, SnapMode::Midpoint).unwrap();
    for (k, &i) in rows.iter().enumerate() {
        nets[w].set_point(nr - 1 - k, 0, root[k]);
        nets[f].set_point(i, 0, side[k]);
    }
    let welded = enclosed_volume(&nets);
    assert!(clean > 0.0);
    assert!(((welded - clean) / clean).abs() < 1e-3);

    // the welded pair reports no gap, and welding again changes nothing
    let r = abutment_report(&nets, tol, true);
    let rec = r
        .edges
        .iter()
        .find(|e| e.network == "WING_UPPER" && e.edge == Edge::FirstCol)
        .unwrap();
    assert_eq!(rec.max_gap, 0.0);
    let (r2, s2) = (root.clone(), side.clone());
    let gap = enforce_abutment(&mut root, &mut side, tol, SnapMode::Midpoint).unwrap();
    assert_eq!(gap, 0.0);
    assert_eq!((root, side), (r2, s2));
}

#[test]
fn clean_aircraft_has_no_mismatch() {
    let nets = desk();
    let r = abutment_report(&nets, default_tolerance(&nets), true);
    assert_eq!(r.mismatched_count(), 0);
}

#[test]
fn shifted_fuselage_ring_is_located() {
    let mut nets = desk();
    let f = index(&nets, "FUSELAGE_UPPER");
    let ring = 35; // between wing and tail
    for j in 0..nets[f].n_cols() {
        let p = nets[f].point(ring, j);
        nets[f].set_point(ring, j, p + Vec3::Z * 0.01);
    }
    let r = abutment_report(&nets, 1e-3, true);
    let mut bad: Vec<(String, Edge)> = r
        .mismatched()
        .map(|e| (e.network.clone(), e.edge))
        .collect();
    bad.sort_by(|a, b| a.0.cmp(&b.0));
    assert_eq!(
        bad,
        vec![
            ("FUSELAGE_LOWER".to_string(), Edge::LastCol),
            ("FUSELAGE_UPPER".to_string(), Edge::FirstCol),
        ]
    );
}

#[test]
fn isolated_wake_edges_are_free() {
    let spec = WingSpec {
        n_chord: 8,
        n_span: 4,
        ..WingSpec::rectangular(6.0, 0.12)
    };
    let secs = extract_sections(&wing_mesh(&spec), "WING", Axis::Y, 1e-6).unwrap();
    let mut o = LiftingOptions::new("WING");
    o.close_tip = true;
    let (u, l) = build_lifting_surface(&secs, LiftingSurface::Wing, &o).unwrap();
    let w = attach_wake(&u, &l, 20.0, Vec3::X, 1e-9).unwrap();
    let nets = vec![u, l, w];
    let r = abutment_report(&nets, default_tolerance(&nets), true);
    let downstream = r
        .edges
        .iter()
        .find(|e| e.network == "WING_WAKE" && e.edge == Edge::LastRow)
        .unwrap();
    assert_eq!(downstream.class, EdgeClass::Free);
    assert_eq!(r.mismatched_count(), 0);
}

proptest! {
    #[test]
    fn residual_does_not_grow_with_degree(a in -2.0..2.0f64, b in -2.0..2.0f64, w in 0.5..3.0f64) {
        let pts = curve(25, |t| Vec3::new(t, a * (w * t).sin(), b * (w * t).cos() + t * t));
        let mut last = f64::INFINITY;
        for d in 2..=6 {
            let fit = fit_section_polynomial(&pts, d).unwrap();
            // residuals are measured as point distances; allow rounding
            let r: f64 = pts.iter().zip(&fit.params).map(|(p, s)| p.distance(fit.eval(*s)).powi(2)).sum();
            prop_assert!(r <= last * (1.0 + 1e-9) + 1e-24);
            last = r;
        }
    }

    #[test]
    fn snapping_is_idempotent(offsets in prop::collection::vec(-1e-5..1e-5f64, 6)) {
        let mut a: Vec<Vec3> = (0..6).map(|k| Vec3::new(k as f64, 1.0, 0.0)).collect();
        let mut b: Vec<Vec3> = a.iter().zip(&offsets).map(|(p, o)| *p + Vec3::new(0.0, *o, -*o)).collect();
        enforce_abutment(&mut a, &mut b, 1e-5, SnapMode::Midpoint).unwrap();
        let (a1, b1) = (a.clone(), b.clone());
        prop_assert_eq!(enforce_abutment(&mut a, &mut b, 1e-5, SnapMode::Midpoint).unwrap(), 0.0);
        prop_assert_eq!((a, b), (a1, b1));
    }
}
