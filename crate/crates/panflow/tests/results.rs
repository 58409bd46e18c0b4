use panflow::results::{
    parse_agps, parse_ffm, parse_polar_csv, verify_doubling, write_agps, write_ffm, write_macro,
    write_polar_csv, write_tecplot_dat, AgpsDocument, AgpsError, AgpsNetwork, CaseSelection,
    FfmError, FfmSummary, ForceRow, Geometry, TecplotError, ViewPreset,
};
use panflow_core::samples::{desk_aircraft_mesh, desk_aircraft_networks};
use panflow_core::Vec3;

fn plate() -> AgpsDocument {
    AgpsDocument {
        title: "PLATE".into(),
        alphas: vec![0.0],
        networks: vec![AgpsNetwork {
            name: "P".into(),
            n_rows: 2,
            n_cols: 2,
            points: vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
            ],
            cp: vec![vec![0.5, -0.25, 0.125, -1.0]],
        }],
    }
}

/// Desk aircraft shape with a made-up pressure field per case.
fn desk_doc(alphas: &[f64]) -> AgpsDocument {
    let nets = desk_aircraft_networks(&desk_aircraft_mesh()).unwrap();
    AgpsDocument {
        title: "DESK".into(),
        alphas: alphas.to_vec(),
        networks: nets
            .iter()
            .map(|n| AgpsNetwork {
                name: n.name().into(),
                n_rows: n.n_rows(),
                n_cols: n.n_cols(),
                points: n.points().to_vec(),
                cp: alphas
                    .iter()
                    .map(|a| {
                        n.points()
                            .iter()
                            .map(|p| (p.x * 0.37 + a).sin() * (1.0 - p.z))
                            .collect()
                    })
                    .collect(),
            })
            .collect(),
    }
}

#[test]
fn agps_small_document() {
    let text = write_agps(&plate());
    let doc = parse_agps(&text).unwrap();
    assert_eq!(doc, plate());
    assert_eq!(doc.networks[0].points.len(), 4);
    assert_eq!(write_agps(&doc), text);
}

#[test]
fn agps_missing_record() {
    let text = write_agps(&plate());
    let mut lines: Vec<&str> = text.lines().collect();
    lines.remove(5);
    match parse_agps(&(lines.join("\n") + "\n")).unwrap_err() {
        AgpsError::MalformedAgps { network, msg, .. } => {
            assert_eq!(network, "P");
            assert!(msg.contains("expected 4"), "{msg}");
        }
    }
}

#[test]
fn agps_desk_shape() {
    let doc = desk_doc(&[0.0, 4.0]);
    let back = parse_agps(&write_agps(&doc)).unwrap();
    assert_eq!(back.networks.len(), 9);
    assert_eq!(back.node_count(), 1938);
    assert_eq!(write_agps(&back), write_agps(&doc));
}

fn table(geometry: Geometry, scale: f64, n: usize) -> FfmSummary {
    FfmSummary {
        geometry,
        title: "T".into(),
        rows: (0..n)
            .map(|k| {
                let a = 2.0 * k as f64;
                ForceRow {
                    alpha: a,
                    cl: scale * (0.125 + 0.0625 * a),
                    cdi: scale * 0.0078125 * (1.0 + a),
                    cm: scale * -0.03125 * a,
                    cy: if geometry == Geometry::Half {
                        0.015625
                    } else {
                        0.0
                    },
                    croll: if geometry == Geometry::Half {
                        -0.25 * a
                    } else {
                        0.0
                    },
                    cn: 0.0,
                }
            })
            .collect(),
    }
}

#[test]
fn ffmf_eleven_cases() {
    let t = table(Geometry::Full, 2.0, 11);
    let text = write_ffm(&t);
    let back = parse_ffm(&text).unwrap();
    assert_eq!(back.rows.len(), 11);
    assert_eq!(back, t);
    assert_eq!(write_ffm(&back), text);
}

#[test]
fn ffmf_errors() {
    assert!(matches!(
        parse_ffm("$FFMF T\n$COLUMNS ALPHA CL CDI CM\n$END\n"),
        Err(FfmError::MalformedFfmf { .. })
    ));
    assert!(parse_ffm("$FFMF T\n$COLUMNS ALPHA CL CDI\n$END\n").is_err());
    assert!(parse_ffm("$FFMF T\n$COLUMNS ALPHA CL CDI CM\n2 0 0 0\n1 0 0 0\n$END\n").is_err());
}

#[test]
fn ffmf_reordered_columns() {
    let t = parse_ffm("$FFMF T\n$COLUMNS CM CL ALPHA CDI\n-0.1 0.5 4 0.01\n$END\n").unwrap();
    assert_eq!(
        t.rows[0],
        ForceRow {
            alpha: 4.0,
            cl: 0.5,
            cdi: 0.01,
            cm: -0.1,
            cy: 0.0,
            croll: 0.0,
            cn: 0.0
        }
    );
}

#[test]
fn doubling_rule() {
    let half = parse_ffm(&write_ffm(&table(Geometry::Half, 1.0, 11))).unwrap();
    let full = parse_ffm(&write_ffm(&table(Geometry::Full, 2.0, 11))).unwrap();
    assert_eq!(half.geometry, Geometry::Half);
    verify_doubling(&half, &full, 0.0).unwrap();
    let mut bad = full.clone();
    bad.rows[3].croll = 1e-3;
    assert!(matches!(
        verify_doubling(&half, &bad, 0.0),
        Err(FfmError::Doubling { what: "CROLL", .. })
    ));
    let mut bad = full;
    bad.rows[5].cl *= 1.01;
    assert!(matches!(
        verify_doubling(&half, &bad, 0.0),
        Err(FfmError::Doubling { what: "CL", .. })
    ));
}

struct Zone {
    title: String,
    i: usize,
    j: usize,
    data: Vec<[f64; 4]>,
}

/// Independent reader for the POINT zone dialect; returns the zones and any
/// diagnostics.
fn reparse_dat(text: &str) -> (Vec<Zone>, Vec<String>) {
    let mut zones: Vec<Zone> = Vec::new();
    let mut diags = Vec::new();
    let mut vars = 0;
    for (k, l) in text.lines().enumerate() {
        if l.starts_with("TITLE") {
            continue;
        }
        if let Some(v) = l.strip_prefix("VARIABLES =") {
            vars = v.split('"').filter(|s| !s.trim().is_empty()).count();
            continue;
        }
        if let Some(z) = l.strip_prefix("ZONE ") {
            let title = z.split('"').nth(1).unwrap_or("").to_string();
            let get = |key: &str| {
                z.split(", ")
                    .find_map(|kv| kv.strip_prefix(key))
                    .and_then(|v| v.parse::<usize>().ok())
            };
            match (get("I="), get("J=")) {
                (Some(i), Some(j)) if z.contains("DATAPACKING=POINT") => zones.push(Zone {
                    title,
                    i,
                    j,
                    data: vec![],
                }),
                _ => diags.push(format!("line {}: bad zone header", k + 1)),
            }
            continue;
        }
        let v: Vec<f64> = l
            .split_whitespace()
            .filter_map(|t| t.parse().ok())
            .collect();
        if v.len() != vars || vars != 4 {
            diags.push(format!("line {}: {} values", k + 1, v.len()));
            continue;
        }
        match zones.last_mut() {
            Some(z) => z.data.push([v[0], v[1], v[2], v[3]]),
            None => diags.push(format!("line {}: data before zone", k + 1)),
        }
    }
    for z in &zones {
        if z.data.len() != z.i * z.j {
            diags.push(format!(
                "zone {}: {} points for {}x{}",
                z.title,
                z.data.len(),
                z.i,
                z.j
            ));
        }
    }
    (zones, diags)
}

fn six_digits(a: f64, b: f64) -> bool {
    (a - b).abs() <= 5e-6 * a.abs().max(1e-300)
}

#[test]
fn tecplot_single_zone() {
    let text = write_tecplot_dat(&plate(), &CaseSelection::All).unwrap();
    let (zones, diags) = reparse_dat(&text);
    assert!(diags.is_empty(), "{diags:?}");
    assert_eq!(zones.len(), 1);
    assert_eq!(zones[0].data.len(), 4);
    assert_eq!((zones[0].i, zones[0].j), (2, 2));
    assert_eq!(
        write_tecplot_dat(&plate(), &CaseSelection::Alphas(vec![4.0])),
        Err(TecplotError::UnknownCase(4.0))
    );
}

#[test]
fn tecplot_desk_zones_are_lossless() {
    let doc = parse_agps(&write_agps(&desk_doc(&[0.0, 4.0, 8.0]))).unwrap();
    let text = write_tecplot_dat(&doc, &CaseSelection::Alphas(vec![0.0])).unwrap();
    let (zones, diags) = reparse_dat(&text);
    assert!(diags.is_empty(), "{diags:?}");
    assert_eq!(zones.len(), 9);

    let all = write_tecplot_dat(&doc, &CaseSelection::All).unwrap();
    let (zones, diags) = reparse_dat(&all);
    assert!(diags.is_empty());
    assert_eq!(zones.len(), 27);
    let lines: usize = zones.iter().map(|z| z.data.len()).sum();
    assert_eq!(lines, 3 * 1938);
    for (c, chunk) in zones.chunks(9).enumerate() {
        for (z, n) in chunk.iter().zip(&doc.networks) {
            assert!(z.title.starts_with(&n.name));
            for (k, d) in z.data.iter().enumerate() {
                let p = n.points[k];
                let want = [p.x, p.y, p.z, n.cp[c][k]];
                assert!(
                    want.iter().zip(d).all(|(a, b)| six_digits(*a, *b)),
                    "{want:?} {d:?}"
                );
            }
        }
    }
}

#[test]
fn macro_groups() {
    let m = write_macro("solution.dat", 9, &[0.0, 4.0, 8.0], &ViewPreset::DEFAULT);
    assert_eq!(m.lines().filter(|l| l.starts_with("# contour")).count(), 3);
    assert_eq!(m.lines().filter(|l| l.starts_with("# view")).count(), 2);
    assert!(m.contains("$!ACTIVEFIELDMAPS = [19-27]"));
    assert!(m.starts_with("#!MC"));
}

#[test]
fn polar_adds_constant_parasite_drag() {
    let t = table(Geometry::Full, 2.0, 11);
    let cd0 = 0.01409;
    let csv = write_polar_csv(&t, cd0);
    let rows = parse_polar_csv(&csv).unwrap();
    assert_eq!(rows.len(), 11);
    for r in &rows {
        assert_eq!(r.cd0, cd0);
        assert!((r.cd_total - r.cdi - cd0).abs() <= 1e-15);
    }
    let fixture = parse_ffm(&write_ffm(&t)).unwrap();
    assert_eq!(
        write_polar_csv(&fixture, cd0),
        write_polar_csv(&fixture, cd0)
    );
    assert_eq!(write_polar_csv(&fixture, cd0), csv);
}
