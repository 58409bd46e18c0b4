//! Scratch workspaces for the pipeline tests: the bundled aircraft mesh, a
//! configuration for it and stub solver executables.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Output;

use panflow::msh::write_msh;
use panflow_core::mesh::RawMesh;
use panflow_core::samples::{desk_aircraft_mesh, desk_aircraft_networks};

pub const DESK_CONFIG: &str = include_str!("../../configs/desk_aircraft.toml");

pub struct Workspace {
    pub dir: tempfile::TempDir,
}

impl Workspace {
    /// Mesh and configuration of the bundled aircraft. `edit` adjusts the
    /// configuration table before it is written.
    pub fn desk(edit: impl FnOnce(&mut toml::Table)) -> Workspace {
        Workspace::with_mesh(&desk_aircraft_mesh(), edit)
    }

    pub fn with_mesh(mesh: &RawMesh, edit: impl FnOnce(&mut toml::Table)) -> Workspace {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("desk_aircraft.msh"), write_msh(mesh)).unwrap();
        let mut cfg: toml::Table = DESK_CONFIG.parse().unwrap();
        edit(&mut cfg);
        fs::write(
            dir.path().join("desk_aircraft.toml"),
            toml::to_string(&cfg).unwrap(),
        )
        .unwrap();
        Workspace { dir }
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }

    pub fn config(&self) -> PathBuf {
        self.path().join("desk_aircraft.toml")
    }

    pub fn out(&self) -> PathBuf {
        self.path().join("desk_aircraft_out")
    }

    /// Runs the command line with the workspace configuration.
    pub fn cli(&self, args: &[&str]) -> Output {
        std::process::Command::new(env!("CARGO_BIN_EXE_panflow"))
            .arg("--config")
            .arg(self.config())
            .args(args)
            .output()
            .unwrap()
    }

    /// Writes an executable shell script into the workspace.
    pub fn script(&self, name: &str, body: &str) -> PathBuf {
        use std::os::unix::fs::PermissionsExt;
        let p = self.path().join(name);
        fs::write(&p, format!("#!/bin/sh\n{body}\n")).unwrap();
        fs::set_permissions(&p, fs::Permissions::from_mode(0o755)).unwrap();
        p
    }
}

pub fn set(cfg: &mut toml::Table, path: &[&str], value: toml::Value) {
    let (last, parents) = path.split_last().unwrap();
    let mut t = cfg;
    for p in parents {
        t = t
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .unwrap();
    }
    t.insert(last.to_string(), value);
}

pub fn alphas(cfg: &mut toml::Table, a: &[f64]) {
    set(
        cfg,
        &["flow", "alphas"],
        toml::Value::Array(a.iter().map(|x| toml::Value::Float(*x)).collect()),
    );
}

pub fn code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

pub fn text(o: &Output) -> String {
    format!(
        "{}{}",
        String::from_utf8_lossy(&o.stdout),
        String::from_utf8_lossy(&o.stderr)
    )
}

/// Every file under `root`, relative path to bytes.
pub fn tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, d: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for e in fs::read_dir(d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let k = p
                    .strip_prefix(root)
                    .unwrap()
                    .to_string_lossy()
                    .replace('\\', "/");
                out.insert(k, fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    if root.exists() {
        walk(root, root, &mut out);
    }
    out
}

/// Row of `FUSELAGE_UPPER` moved off its neighbours by the gap injection.
pub const GAP_ROW: usize = 35;

/// The aircraft mesh with one station of the upper fuselage lifted by `dz`
/// and detached from the lower fuselage, which keeps its own copy of the
/// shared side nodes. Opens the side seam between the two fuselage networks.
pub fn desk_mesh_with_gap(dz: f64) -> RawMesh {
    let mut mesh = desk_aircraft_mesh();
    let nets = desk_aircraft_networks(&mesh).unwrap();
    let upper = nets.iter().find(|n| n.name() == "FUSELAGE_UPPER").unwrap();
    let x = upper.point(GAP_ROW, 0).x;
    let group: Vec<u64> = mesh.groups["FuselageUpper"].clone();
    let mut next = mesh.nodes.keys().max().unwrap() + 1;
    let mut moved: BTreeMap<u64, u64> = BTreeMap::new();
    for e in mesh.elements.iter_mut().filter(|e| group.contains(&e.id)) {
        for n in e.nodes.iter_mut() {
            if mesh.nodes[n].x != x {
                continue;
            }
            let id = *moved.entry(*n).or_insert_with(|| {
                next += 1;
                next - 1
            });
            *n = id;
        }
    }
    for (old, new) in moved {
        let mut p = mesh.nodes[&old];
        p.z += dz;
        mesh.nodes.insert(new, p);
    }
    mesh
}
