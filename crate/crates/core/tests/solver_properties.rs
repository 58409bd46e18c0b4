use panflow_core::geom::Rotation;
use panflow_core::samples::{sphere, WingSpec};
use panflow_core::solver::{
    freestream, PanelGeom, PanelSolver, References, SolverModel, SolverOptions, WindAxes,
};
use panflow_core::{ComponentKind, StructuredNetwork, Vec3};

fn solver(nets: &[StructuredNetwork], opts: SolverOptions) -> PanelSolver {
    PanelSolver::new(SolverModel::new(nets, opts).unwrap()).unwrap()
}

fn wing_opts(spec: &WingSpec, symmetry: bool) -> SolverOptions {
    SolverOptions {
        symmetry,
        refs: References {
            sref: spec.area(),
            span: spec.span,
            cbar: spec.mac(),
            moment_ref: Vec3::new(0.25 * spec.root_chord, 0.0, 0.0),
        },
        ..SolverOptions::default()
    }
}

fn small_wing() -> WingSpec {
    WingSpec {
        n_chord: 10,
        n_span: 6,
        ..WingSpec::rectangular(6.0, 0.12)
    }
}

#[test]
fn isolated_panel_self_influence() {
    let pts = vec![
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(1.0, 1.0, 0.0),
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(0.0, 1.0, 0.0),
    ];
    let net = StructuredNetwork::new("P", ComponentKind::WingUpper, 2, 2, pts).unwrap();
    let s = solver(&[net], SolverOptions::default());
    assert_eq!(s.matrix().row(0)[0], -0.5);
    // the analytic potential just behind the panel agrees
    let g = &s.model().panels[0].geom;
    assert!((g.doublet_potential(g.collocation()) + 0.5).abs() < 1e-5);
}

#[test]
fn doublet_decays_as_inverse_square() {
    let g = PanelGeom::from_corners([
        Vec3::new(0.0, 0.0, 0.0),
        Vec3::new(0.0, 0.1, 0.0),
        Vec3::new(0.1, 0.1, 0.0),
        Vec3::new(0.1, 0.0, 0.0),
    ])
    .unwrap();
    let dir = Vec3::new(0.3, 0.2, 1.0).normalized().unwrap();
    let r = 20.0;
    let ratio = g.doublet_potential(g.centroid + dir * r)
        / g.doublet_potential(g.centroid + dir * (2.0 * r));
    assert!((ratio / 4.0 - 1.0).abs() < 0.05, "{ratio}");
}

#[test]
fn mirror_images_influence_symmetrically() {
    let g = PanelGeom::from_corners([
        Vec3::new(0.0, 0.3, 0.1),
        Vec3::new(0.1, 0.9, 0.0),
        Vec3::new(1.0, 1.0, 0.2),
        Vec3::new(1.1, 0.2, 0.0),
    ])
    .unwrap();
    let m = g.mirrored();
    for p in [
        Vec3::new(0.5, 2.0, 1.0),
        Vec3::new(-1.0, 0.5, -0.3),
        Vec3::new(0.4, 0.0, 0.05),
    ] {
        let (s1, d1) = g.source_and_doublet(p);
        let (s2, d2) = m.source_and_doublet(p.mirror_y());
        assert!((s1 - s2).abs() <= 1e-12 && (d1 - d2).abs() <= 1e-12);
    }
}

#[test]
fn closed_bodies_have_no_drag() {
    let c = solver(&[sphere(1.0, 20, 24)], SolverOptions::default())
        .case(0.0, 0.0)
        .unwrap();
    assert!(c.full.force.norm() <= 1e-6);

    // an egg is not fore-aft symmetric, so its drag only vanishes with refinement
    let mut last = f64::INFINITY;
    for (rows, cols) in [(8, 10), (16, 20), (32, 40)] {
        let egg = sphere(1.0, rows, cols).map_points(|p| {
            let k = 1.0 + 0.25 * p.x;
            Vec3::new(p.x, k * p.y, k * p.z)
        });
        let c = solver(&[egg], SolverOptions::default())
            .case(0.0, 0.0)
            .unwrap();
        let drag = c.full.force.x.abs();
        println!("{rows}x{cols}: drag {drag:e}");
        assert!(drag < last);
        last = drag;
    }
}

#[test]
fn zero_thickness_plate_is_unloaded_at_zero_incidence() {
    let mut pts = vec![];
    for i in 0..6 {
        for j in 0..7 {
            pts.push(Vec3::new(1.0 - i as f64 / 5.0, j as f64, 0.0));
        }
    }
    let n = StructuredNetwork::new("PLATE", ComponentKind::WingUpper, 6, 7, pts).unwrap();
    let c = solver(&[n], SolverOptions::default())
        .case(0.0, 0.0)
        .unwrap();
    assert!(c.panel_cp.iter().all(|cp| cp.abs() <= 1e-9));
}

#[test]
fn pressures_are_scale_invariant() {
    let spec = small_wing();
    let nets = spec.networks(false).unwrap();
    let big: Vec<_> = nets.iter().map(|n| n.map_points(|p| p * 2.0)).collect();
    let a = solver(&nets, wing_opts(&spec, true))
        .case(4.0, 0.0)
        .unwrap();
    let b = solver(&big, wing_opts(&spec, true)).case(4.0, 0.0).unwrap();
    for (x, y) in a.panel_cp.iter().zip(&b.panel_cp) {
        assert!((x - y).abs() <= 1e-9, "{x} {y}");
    }
}

#[test]
fn coefficients_follow_a_rigid_rotation() {
    let spec = small_wing();
    let nets = spec.networks(true).unwrap();
    let opts = wing_opts(&spec, false);
    let base = solver(&nets, opts).case(5.0, 0.0).unwrap();

    let rot = Rotation::about_axis(Vec3::new(0.3, -0.5, 0.8), 0.7);
    let turned: Vec<_> = nets
        .iter()
        .map(|n| n.map_points(|p| rot.apply(p)))
        .collect();
    let mut o = opts;
    o.refs.moment_ref = rot.apply(o.refs.moment_ref);
    let s = solver(&turned, o);
    let axes = WindAxes::from_angles(5.0, 0.0);
    let axes = WindAxes {
        drag: rot.apply(axes.drag),
        lift: rot.apply(axes.lift),
        side: rot.apply(axes.side),
    };
    let st = s.solve_freestream(rot.apply(freestream(5.0, 0.0))).unwrap();
    let c = s.evaluate(st, axes, 5.0, 0.0);
    assert!(
        (c.full.cl - base.full.cl).abs() <= 1e-8,
        "{} {}",
        c.full.cl,
        base.full.cl
    );
    assert!((c.full.cdi_trefftz - base.full.cdi_trefftz).abs() <= 1e-8);
}

#[test]
fn sweep_reuses_the_factorization_exactly() {
    let spec = small_wing();
    let nets = spec.networks(false).unwrap();
    let s = solver(&nets, wing_opts(&spec, true));
    let sw = s.sweep(&[0.0, 4.0, 8.0], 0.0).unwrap();
    let single = s.sweep(&[0.0], 0.0).unwrap();
    assert_eq!(sw.cases[0], single.cases[0]);
    for c in &sw.cases {
        let fresh = solver(&nets, wing_opts(&spec, true))
            .case(c.alpha, 0.0)
            .unwrap();
        assert_eq!(*c, fresh);
    }
}

#[test]
fn lift_grows_with_incidence() {
    let spec = small_wing();
    let s = solver(&spec.networks(false).unwrap(), wing_opts(&spec, true));
    let alphas: Vec<f64> = (0..=12).map(f64::from).collect();
    let sw = s.sweep(&alphas, 0.0).unwrap();
    assert!(sw.cases.windows(2).all(|w| w[1].full.cl > w[0].full.cl));
}
