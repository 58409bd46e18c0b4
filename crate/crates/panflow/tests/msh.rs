use std::path::PathBuf;

use panflow::msh::{parse_msh, parse_msh_with_warnings, write_msh, MshError};
use panflow_core::mesh::{Element, ElementKind, RawMesh};
use panflow_core::samples::{desk_aircraft_mesh, wing_mesh, WingSpec};
use panflow_core::Vec3;
use proptest::prelude::*;

const SQUARE: &str = "$MeshFormat
2.2 0 8
$EndMeshFormat
$PhysicalNames
1
2 7 \"Plate\"
$EndPhysicalNames
$Nodes
4
1 0 0 0
2 1 0 0
3 1 1 0
4 0 1 0
$EndNodes
$Elements
1
1 3 2 7 1 1 2 3 4
$EndElements
";

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn golden_spec() -> WingSpec {
    WingSpec {
        n_chord: 57,
        n_span: 16,
        ..WingSpec::rectangular(6.0, 0.12)
    }
}

#[test]
fn smallest_mesh() {
    let m = parse_msh(SQUARE).unwrap();
    assert_eq!(m.nodes.len(), 4);
    assert_eq!(m.elements.len(), 1);
    assert_eq!(m.elements[0].kind, ElementKind::Quad);
    assert_eq!(m.groups["Plate"], vec![1]);
}

#[test]
fn short_node_block_is_reported_at_the_block() {
    let text = SQUARE.replace("$Nodes\n4", "$Nodes\n5");
    match parse_msh(&text).unwrap_err() {
        MshError::Malformed { line, msg } => {
            assert_eq!(line, 8, "{msg}");
            assert!(msg.contains("declares 5"));
        }
        e => panic!("{e}"),
    }
}

#[test]
fn dangling_node_reference() {
    let text = SQUARE.replace("1 3 2 7 1 1 2 3 4", "1 3 2 7 1 1 2 3 9");
    assert!(matches!(
        parse_msh(&text),
        Err(MshError::Malformed { line: 17, .. })
    ));
}

#[test]
fn other_versions_are_rejected() {
    for header in ["4.1 0 8", "2.2 1 8"] {
        let text = SQUARE.replace("2.2 0 8", header);
        let e = parse_msh(&text).unwrap_err();
        assert!(matches!(e, MshError::UnsupportedVersion { .. }));
        assert!(e.to_string().contains("2.2"));
    }
    let text = SQUARE.replace("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n", "");
    assert_eq!(
        parse_msh(&text),
        Err(MshError::MissingSection("MeshFormat"))
    );
}

#[test]
fn unknown_sections_and_elements_warn() {
    let text = SQUARE
        .replace("$Nodes", "$Periodic\n0\n$EndPeriodic\n$Nodes")
        .replace("$Elements\n1\n", "$Elements\n2\n2 1 2 7 1 1 2\n");
    let r = parse_msh_with_warnings(&text).unwrap();
    assert_eq!(r.mesh, parse_msh(SQUARE).unwrap());
    assert_eq!(r.warnings.len(), 2, "{:?}", r.warnings);
}

#[test]
fn golden_wing_fixture() {
    let path = fixture("wing_1938.msh");
    let generated = write_msh(&wing_mesh(&golden_spec()));
    if std::env::var_os("PANFLOW_BLESS").is_some() {
        std::fs::write(&path, &generated).unwrap();
    }
    let text = std::fs::read_to_string(&path).unwrap();
    let mesh = parse_msh(&text).unwrap();
    assert_eq!(mesh.nodes.len(), 1938);
    assert_eq!(mesh.elements.len(), 1824);
    // coordinates survive the text form bit for bit
    assert_eq!(mesh, wing_mesh(&golden_spec()));
    assert_eq!(write_msh(&mesh), text);
    assert_eq!(generated, text);
}

#[test]
fn desk_aircraft_round_trips() {
    let mesh = desk_aircraft_mesh();
    assert_eq!(parse_msh(&write_msh(&mesh)).unwrap(), mesh);
}

fn arb_mesh() -> impl Strategy<Value = RawMesh> {
    let coord = prop_oneof![-1e3..1e3f64, -1e-6..1e-6f64, Just(0.0)];
    (
        4usize..30,
        prop::collection::vec((coord.clone(), coord.clone(), coord), 30),
        1usize..20,
        0usize..3,
    )
        .prop_flat_map(|(n, xyz, n_el, n_groups)| {
            let el = prop::collection::vec(
                (any::<bool>(), prop::array::uniform4(0..n), 0..=n_groups),
                n_el,
            );
            (Just(n), Just(xyz), el, Just(n_groups))
        })
        .prop_map(|(n, xyz, els, n_groups)| {
            let mut m = RawMesh::default();
            for k in 0..n {
                let (x, y, z) = xyz[k];
                m.nodes.insert(10 + 3 * k as u64, Vec3::new(x, y, z));
            }
            for (k, (quad, ids, g)) in els.into_iter().enumerate() {
                let id = 100 + k as u64;
                let (kind, count) = if quad {
                    (ElementKind::Quad, 4)
                } else {
                    (ElementKind::Tri, 3)
                };
                let nodes = ids[..count].iter().map(|i| 10 + 3 * *i as u64).collect();
                m.elements.push(Element { id, kind, nodes });
                if g < n_groups {
                    m.groups.entry(format!("Group{g}")).or_default().push(id);
                }
            }
            m
        })
}

proptest! {
    #[test]
    fn write_then_parse_is_identity(m in arb_mesh()) {
        let text = write_msh(&m);
        let back = parse_msh(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(write_msh(&back), text);
    }
}
