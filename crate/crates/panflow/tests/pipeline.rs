#![cfg(unix)]

mod common;

use std::fs;

use common::*;
use panflow::deck::parse_a502;
use panflow::msh::parse_msh;
use panflow::pipeline::config::{Overrides, PipelineConfig};
use panflow::pipeline::manifest::{sha256_hex, Manifest, RunLock, LOCK, MANIFEST};
use panflow::pipeline::networks::NetworkSet;
use panflow::pipeline::*;
use panflow::results::{parse_ffm, parse_polar_csv};
use panflow_core::samples::{desk_aircraft_mesh, desk_aircraft_networks};

fn quick(cfg: &mut toml::Table) {
    alphas(cfg, &[0.0, 4.0]);
}

#[test]
fn config_builds_the_reference_networks() {
    let ws = Workspace::desk(|_| {});
    let cfg = PipelineConfig::load(&ws.config(), &Overrides::default()).unwrap();
    let (nets, wakes, orientation) = build_networks(&cfg, &desk_aircraft_mesh()).unwrap();
    assert_eq!(nets, desk_aircraft_networks(&desk_aircraft_mesh()).unwrap());
    assert_eq!(wakes.len(), 2);
    assert_eq!(
        (wakes[0].upper.as_str(), wakes[0].lower.as_str()),
        ("WING_UPPER", "WING_LOWER")
    );
    assert_eq!(orientation.len(), 7);
    assert!(orientation.iter().all(|(_, r)| r.fraction_outward == 1.0));
}

#[test]
fn networks_json_is_lossless() {
    let nets = desk_aircraft_networks(&desk_aircraft_mesh()).unwrap();
    let set = NetworkSet::from_networks("T", &nets);
    let back = NetworkSet::from_json(&set.to_json()).unwrap();
    assert_eq!(back.to_networks().unwrap(), nets);
    assert_eq!(back.to_json(), set.to_json());
}

#[test]
fn config_errors() {
    let ws = Workspace::desk(|c| set(c, &["mesh"], "nowhere.msh".into()));
    let o = ws.cli(&["check"]);
    assert_eq!(code(&o), 2, "{}", text(&o));
    assert!(text(&o).contains("nowhere.msh"));
    assert!(
        !ws.out().exists(),
        "no output before the configuration is valid"
    );

    let ws = Workspace::desk(|c| set(c, &["colour"], "red".into()));
    let o = ws.cli(&["check"]);
    assert_eq!(code(&o), 2);
    assert!(text(&o).contains("colour"), "{}", text(&o));

    let ws = Workspace::desk(|c| set(c, &["flow", "mach"], 0.9.into()));
    assert_eq!(code(&ws.cli(&["check"])), 2);

    let ws = Workspace::desk(|_| {});
    assert_eq!(code(&ws.cli(&["prep", "--alpha", "25"])), 2);
    assert_eq!(code(&ws.cli(&["prep", "--backend", "external"])), 2);
    assert_eq!(code(&ws.cli(&["bogus"])), 2);
}

#[test]
fn stages_need_their_inputs() {
    let ws = Workspace::desk(|_| {});
    let o = ws.cli(&["run"]);
    assert_eq!(code(&o), 2, "{}", text(&o));
    assert!(text(&o).contains("prep stage first"), "{}", text(&o));
    assert_eq!(code(&ws.cli(&["post"])), 2);
}

#[test]
fn lock_excludes_a_second_run() {
    let ws = Workspace::desk(|_| {});
    let lock = RunLock::acquire(&ws.out()).unwrap();
    assert!(RunLock::acquire(&ws.out()).is_err());
    let o = ws.cli(&["check"]);
    assert_eq!(code(&o), 2);
    assert!(text(&o).contains("in use"));
    drop(lock);
    assert!(!ws.out().join(LOCK).exists());
    assert_eq!(code(&ws.cli(&["check"])), 0);
    assert!(!ws.out().join(LOCK).exists());
}

#[test]
fn check_writes_geometry_artifacts() {
    let ws = Workspace::desk(|_| {});
    let o = ws.cli(&["check"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    let mesh =
        parse_msh(&fs::read_to_string(ws.out().join(MESH_DIR).join(MESH_FILE)).unwrap()).unwrap();
    assert_eq!(mesh, desk_aircraft_mesh());
    let set = NetworkSet::from_json(
        &fs::read_to_string(ws.out().join(NETWORKS_DIR).join(NETWORKS_FILE)).unwrap(),
    )
    .unwrap();
    assert_eq!(
        set.to_networks().unwrap(),
        desk_aircraft_networks(&desk_aircraft_mesh()).unwrap()
    );
    let abut = fs::read_to_string(ws.out().join(NETWORKS_DIR).join("abutment.txt")).unwrap();
    assert!(abut.contains(" 0 mismatched"), "{abut}");

    let m: Manifest =
        serde_json::from_str(&fs::read_to_string(ws.out().join(MANIFEST)).unwrap()).unwrap();
    assert_eq!(m.files.len(), 6);
    let json = fs::read(ws.out().join(NETWORKS_DIR).join(NETWORKS_FILE)).unwrap();
    assert_eq!(m.files["02_networks/networks.json"], sha256_hex(&json));
    assert_eq!(
        sha256_hex(b"abc"),
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
    );
}

#[test]
fn gap_is_gated_and_forcing_watermarks() {
    let ws = Workspace::with_mesh(&desk_mesh_with_gap(0.05), quick);
    let o = ws.cli(&["check"]);
    assert_eq!(code(&o), 1, "{}", text(&o));
    let t = text(&o);
    assert!(t.contains("2 mismatched"), "{t}");
    assert!(
        t.contains("at FUSELAGE_UPPER first-col (nearest FUSELAGE_LOWER last-col)"),
        "{t}"
    );
    assert!(
        t.contains("at FUSELAGE_LOWER last-col (nearest FUSELAGE_UPPER first-col)"),
        "{t}"
    );

    let o = ws.cli(&["prep"]);
    assert_eq!(code(&o), 1);
    assert!(!ws.out().join(DECKS_DIR).exists());

    let o = ws.cli(&["all", "--force"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("FORCED"));
    let deck =
        parse_a502(&fs::read_to_string(ws.out().join(DECKS_DIR).join(A502_FILE)).unwrap()).unwrap();
    assert!(deck.is_forced());
    let dat = fs::read_to_string(ws.out().join(POST_DIR).join(DAT_FILE)).unwrap();
    assert!(dat.lines().next().unwrap().contains("[FORCED]"));
    let visc = fs::read_to_string(ws.out().join(POST_DIR).join(VISCOUS_FILE)).unwrap();
    assert!(visc.starts_with("FORCED"));
}

#[test]
fn stages_one_by_one_match_all() {
    let a = Workspace::desk(quick);
    for s in ["check", "prep", "run", "post"] {
        let o = a.cli(&[s]);
        assert_eq!(code(&o), 0, "{s}: {}", text(&o));
    }
    let b = Workspace::desk(quick);
    assert_eq!(code(&b.cli(&["all"])), 0);
    assert_eq!(tree(&a.out()), tree(&b.out()));
}

#[test]
fn embedded_run_outputs() {
    let ws = Workspace::desk(quick);
    let o = ws.cli(&["all", "--alpha", "0,2,4"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert!(text(&o).contains("1613 panels"));
    let raw = ws.out().join(RAW_DIR);
    let half = parse_ffm(&fs::read_to_string(raw.join(FFM_FILE)).unwrap()).unwrap();
    let full = parse_ffm(&fs::read_to_string(raw.join(FFMF_FILE)).unwrap()).unwrap();
    assert_eq!(full.alphas(), vec![0.0, 2.0, 4.0]);
    panflow::results::verify_doubling(&half, &full, 2e-6).unwrap();
    assert!(full.rows.windows(2).all(|w| w[1].cl > w[0].cl));
    let polar =
        parse_polar_csv(&fs::read_to_string(ws.out().join(POST_DIR).join(POLAR_FILE)).unwrap())
            .unwrap();
    assert_eq!(polar.len(), 3);
    assert!((polar[0].cd0 - 0.01409).abs() < 5e-6);
    let mcr = fs::read_to_string(ws.out().join(POST_DIR).join(MACRO_FILE)).unwrap();
    assert!(mcr.contains("$!ACTIVEFIELDMAPS = [19-27]"));
}

/// Embedded results of a fresh workspace, for the stub solver to hand back.
fn embedded_fixture() -> (Workspace, std::collections::BTreeMap<String, Vec<u8>>) {
    let ws = Workspace::desk(quick);
    assert_eq!(code(&ws.cli(&["all"])), 0);
    let post = tree(&ws.out().join(POST_DIR));
    (ws, post)
}

fn external(ws: &Workspace, script: &str, timeout: f64) {
    let stub = ws.script("panair", script);
    let cfg = fs::read_to_string(ws.config()).unwrap();
    let mut t: toml::Table = cfg.parse().unwrap();
    set(&mut t, &["solver", "backend"], "external".into());
    set(
        &mut t,
        &["solver", "external", "panair"],
        stub.to_string_lossy().into_owned().into(),
    );
    set(&mut t, &["solver", "external", "timeout_s"], timeout.into());
    fs::write(ws.config(), toml::to_string(&t).unwrap()).unwrap();
}

#[test]
fn external_stub_matches_embedded() {
    let (fixture, post) = embedded_fixture();
    let raw = fixture.out().join(RAW_DIR);
    let ws = Workspace::desk(quick);
    external(
        &ws,
        &format!(
            "test -f a502.in || exit 9\ncp '{0}/agps' '{0}/ffm' '{0}/ffmf' .\necho solved",
            raw.display()
        ),
        60.0,
    );
    let o = ws.cli(&["all"]);
    assert_eq!(code(&o), 0, "{}", text(&o));
    assert_eq!(tree(&ws.out().join(POST_DIR)), post);
    for f in [AGPS_FILE, FFM_FILE, FFMF_FILE] {
        assert_eq!(
            fs::read(ws.out().join(RAW_DIR).join(f)).unwrap(),
            fs::read(raw.join(f)).unwrap()
        );
    }
    assert!(!ws.out().join(RAW_DIR).join("work").exists());
    let log = fs::read_to_string(ws.out().join(RAW_DIR).join("solver.log")).unwrap();
    assert!(log.contains("solved"));
}

#[test]
fn external_failure_is_quarantined() {
    let ws = Workspace::desk(quick);
    assert_eq!(code(&ws.cli(&["all"])), 0);
    assert!(ws.out().join(POST_DIR).exists());
    external(
        &ws,
        "echo partial > agps\necho 'singular matrix' >&2\nexit 7",
        60.0,
    );
    let o = ws.cli(&["all"]);
    assert_eq!(code(&o), 3, "{}", text(&o));
    assert!(text(&o).contains("singular matrix"));
    assert!(
        !ws.out().join(POST_DIR).exists(),
        "no post-processing after a failed solve"
    );
    let q = ws.out().join(RAW_DIR).join(QUARANTINE_DIR);
    assert_eq!(fs::read_to_string(q.join("agps")).unwrap(), "partial\n");
    assert!(fs::read_to_string(q.join("stderr.txt"))
        .unwrap()
        .contains("singular"));
    assert!(!ws.out().join(RAW_DIR).join(AGPS_FILE).exists());
    let m: Manifest =
        serde_json::from_str(&fs::read_to_string(ws.out().join(MANIFEST)).unwrap()).unwrap();
    assert!(m.files.contains_key("04_raw/quarantine/agps"));
}

#[test]
fn external_garbage_and_timeout() {
    let ws = Workspace::desk(quick);
    external(&ws, "echo '$FFMF X' > ffmf\necho junk > agps", 60.0);
    let o = ws.cli(&["all"]);
    assert_eq!(code(&o), 3, "{}", text(&o));
    assert!(ws
        .out()
        .join(RAW_DIR)
        .join(QUARANTINE_DIR)
        .join("ffmf")
        .exists());

    let ws = Workspace::desk(quick);
    external(&ws, "exec sleep 30", 0.5);
    let t = std::time::Instant::now();
    let o = ws.cli(&["all"]);
    assert_eq!(code(&o), 3, "{}", text(&o));
    assert!(text(&o).contains("did not finish"));
    assert!(t.elapsed().as_secs_f64() < 20.0);

    let ws = Workspace::desk(quick);
    external(&ws, "sleep 30", 0.5);
    let t = std::time::Instant::now();
    assert_eq!(code(&ws.cli(&["all"])), 3);
    assert!(
        t.elapsed().as_secs_f64() < 20.0,
        "a lingering grandchild must not hold the run"
    );
}
