use panflow_core::samples::{sphere, sphere_cp, WingSpec};
use panflow_core::solver::{PanelSolver, References, SolverModel, SolverOptions};
use panflow_core::Vec3;

fn wing_solver(spec: &WingSpec, symmetry: bool) -> PanelSolver {
    let nets = spec.networks(!symmetry).unwrap();
    let opts = SolverOptions {
        symmetry,
        refs: References {
            sref: spec.area(),
            span: spec.span,
            cbar: spec.mac(),
            moment_ref: Vec3::new(0.25 * spec.root_chord, 0.0, 0.0),
        },
        ..SolverOptions::default()
    };
    PanelSolver::new(SolverModel::new(&nets, opts).unwrap()).unwrap()
}

#[test]
fn sphere_pressure_matches_potential_flow() {
    let s = sphere(1.0, 40, 50);
    let solver =
        PanelSolver::new(SolverModel::new(&[s], SolverOptions::default()).unwrap()).unwrap();
    let case = solver.case(0.0, 0.0).unwrap();
    let mut worst: f64 = 0.0;
    for (p, cp) in solver.model().panels.iter().zip(&case.panel_cp) {
        worst = worst.max((cp - sphere_cp(p.geom.centroid)).abs());
    }
    println!("sphere max |dCp| = {worst}");
    assert!(worst <= 0.05, "max Cp error {worst}");
}

#[test]
fn symmetric_wing_has_no_lift_at_zero_incidence() {
    let spec = WingSpec::rectangular(6.0, 0.12);
    let s = wing_solver(&spec, true);
    let c = s.case(0.0, 0.0).unwrap();
    assert!(c.full.cl.abs() <= 1e-6, "CL = {}", c.full.cl);
}

#[test]
fn rectangular_wing_lift_slope() {
    let spec = WingSpec::rectangular(8.0, 0.06);
    let s = wing_solver(&spec, true);
    let sw = s.sweep(&[0.0, 4.0], 0.0).unwrap();
    let slope = (sw.cases[1].full.cl - sw.cases[0].full.cl) / 4f64.to_radians();
    let oracle = 2.0 * std::f64::consts::PI / (1.0 + 2.0 / 8.0);
    println!("dCL/da = {slope}, oracle {oracle}");
    println!(
        "cdi near {} trefftz {}",
        sw.cases[1].full.cdi_near, sw.cases[1].full.cdi_trefftz
    );
    assert!((slope / oracle - 1.0).abs() <= 0.10);
}

#[test]
fn elliptic_wing_induced_drag() {
    let spec = WingSpec::elliptic(7.0, 0.08);
    let s = wing_solver(&spec, true);
    let c = s.case(5.0, 0.0).unwrap();
    let ar = spec.aspect_ratio();
    let oracle = c.full.cl * c.full.cl / (std::f64::consts::PI * ar);
    println!(
        "CL {} CDi {} oracle {oracle} near {}",
        c.full.cl, c.full.cdi_trefftz, c.full.cdi_near
    );
    assert!((c.full.cdi_trefftz / oracle - 1.0).abs() <= 0.10);
}

#[test]
fn half_model_matches_full_span() {
    let spec = WingSpec::rectangular(6.0, 0.12);
    let half = wing_solver(&spec, true).case(5.0, 0.0).unwrap();
    let full = wing_solver(&spec, false).case(5.0, 0.0).unwrap();
    println!("half {:?}\nfull {:?}", half.full, full.full);
    assert!((half.full.cl - full.full.cl).abs() <= 1e-8);
    assert!((half.full.cdi_trefftz - full.full.cdi_trefftz).abs() <= 1e-8);
}

#[test]
fn lift_matches_circulation() {
    // pressure-integrated lift against Kutta-Joukowski on the wake jumps
    let spec = WingSpec::rectangular(8.0, 0.06);
    let s = wing_solver(&spec, true);
    let c = s.case(4.0, 0.0).unwrap();
    let gamma: f64 = s
        .model()
        .strips
        .iter()
        .zip(&c.strengths.wake_mu)
        .map(|(st, mu)| -mu * (st.far_edge.1.y - st.far_edge.0.y).abs())
        .sum();
    let cl_kj = 2.0 * 2.0 * gamma / spec.area();
    assert!(
        (c.full.cl / cl_kj - 1.0).abs() < 0.05,
        "{} vs {cl_kj}",
        c.full.cl
    );
}

#[test]
fn lift_is_odd_in_incidence() {
    let spec = WingSpec::rectangular(6.0, 0.12);
    let s = wing_solver(&spec, true);
    let sw = s.sweep(&[-3.0, 3.0], 0.0).unwrap();
    assert!(sw.cases[1].full.cl > 0.1);
    assert!((sw.cases[0].full.cl + sw.cases[1].full.cl).abs() < 1e-9);
    assert!((sw.cases[0].full.cdi_trefftz - sw.cases[1].full.cdi_trefftz).abs() < 1e-9);
}

#[test]
fn sideslip_is_rejected_with_symmetry() {
    let spec = WingSpec::rectangular(6.0, 0.12);
    let s = wing_solver(&spec, true);
    assert!(s.case(2.0, 1.0).is_err());
}
