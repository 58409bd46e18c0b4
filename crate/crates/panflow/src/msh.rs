//! Gmsh MSH 2.2 ASCII subset: physical names, nodes, triangles and quads.
//!
//! Other sections are skipped with a warning. Other element types (points,
//! lines, volumes) are skipped as well, since only surface elements carry
//! panels. Binary files and the 4.x format are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use panflow_core::mesh::{Element, ElementKind, MeshError, RawMesh};
use panflow_core::Vec3;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MshError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unsupported mesh format {found:?}; expected MSH 2.2 ASCII (\"2.2 0 8\")")]
    UnsupportedVersion { found: String },
    #[error("missing required section ${0}")]
    MissingSection(&'static str),
    #[error(transparent)]
    Invalid(#[from] MeshError),
}

fn malformed(line: usize, msg: impl Into<String>) -> MshError {
    MshError::Malformed {
        line,
        msg: msg.into(),
    }
}

/// A parsed file plus the warnings raised for skipped content.
#[derive(Debug, Clone, PartialEq)]
pub struct MshRead {
    pub mesh: RawMesh,
    pub warnings: Vec<String>,
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<&'a str> {
        let (k, l) = self.inner.next()?;
        self.line = k + 1;
        Some(l.trim())
    }

    fn expect(&mut self, what: &str) -> Result<&'a str, MshError> {
        let at = self.line + 1;
        self.next()
            .ok_or_else(|| malformed(at, format!("unexpected end of file in {what}")))
    }
}

fn count(s: &str, line: usize) -> Result<usize, MshError> {
    s.parse()
        .map_err(|_| malformed(line, format!("expected a record count, found {s:?}")))
}

/// Reads a section body up to its `$End` marker: the declared count and the
/// records, each with its line number.
fn block<'a>(
    lines: &mut Lines<'a>,
    name: &str,
) -> Result<(usize, usize, Vec<(usize, &'a str)>), MshError> {
    let start = lines.line;
    let n = count(lines.expect(name)?, lines.line)?;
    let end = format!("$End{name}");
    let mut records = Vec::with_capacity(n);
    loop {
        let l = lines.expect(name)?;
        if l == end {
            break;
        }
        if l.starts_with('$') {
            return Err(malformed(lines.line, format!("{l} inside ${name}")));
        }
        if !l.is_empty() {
            records.push((lines.line, l));
        }
    }
    if records.len() != n {
        return Err(malformed(
            start,
            format!("${name} declares {n} records but {} follow", records.len()),
        ));
    }
    Ok((start, n, records))
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, MshError> {
    let tok = tok.ok_or_else(|| malformed(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| malformed(line, format!("bad {what} {tok:?}")))
}

pub fn parse_msh(text: &str) -> Result<RawMesh, MshError> {
    parse_msh_with_warnings(text).map(|r| r.mesh)
}

pub fn parse_msh_with_warnings(text: &str) -> Result<MshRead, MshError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        line: 0,
    };
    let mut warnings = Vec::new();
    let mut seen_format = false;
    let mut names: BTreeMap<i64, String> = BTreeMap::new();
    let mut nodes = None;
    let mut raw_elements = None;

    while let Some(l) = lines.next() {
        if l.is_empty() {
            continue;
        }
        let Some(section) = l.strip_prefix('$') else {
            return Err(malformed(
                lines.line,
                format!("expected a section header, found {l:?}"),
            ));
        };
        match section {
            "MeshFormat" => {
                let v = lines.expect("MeshFormat")?;
                let mut it = v.split_whitespace();
                let version = it.next().unwrap_or("");
                let file_type = it.next().unwrap_or("");
                if !version.starts_with("2.") || file_type != "0" {
                    return Err(MshError::UnsupportedVersion {
                        found: v.to_string(),
                    });
                }
                if lines.expect("MeshFormat")? != "$EndMeshFormat" {
                    return Err(malformed(lines.line, "expected $EndMeshFormat"));
                }
                seen_format = true;
            }
            "PhysicalNames" => {
                let (_, _, recs) = block(&mut lines, "PhysicalNames")?;
                for (line, r) in recs {
                    let mut it = r.splitn(3, char::is_whitespace);
                    let _dim: i64 = num(it.next(), line, "dimension")?;
                    let tag: i64 = num(it.next(), line, "physical tag")?;
                    let name = it.next().map(str::trim).unwrap_or("");
                    let name = name.strip_prefix('"').and_then(|n| n.strip_suffix('"'));
                    let name =
                        name.ok_or_else(|| malformed(line, "physical name must be quoted"))?;
                    names.insert(tag, name.to_string());
                }
            }
            "Nodes" => {
                let (_, _, recs) = block(&mut lines, "Nodes")?;
                let mut map = BTreeMap::new();
                for (line, r) in recs {
                    let mut it = r.split_whitespace();
                    let id: u64 = num(it.next(), line, "node id")?;
                    let x: f64 = num(it.next(), line, "x")?;
                    let y: f64 = num(it.next(), line, "y")?;
                    let z: f64 = num(it.next(), line, "z")?;
                    if it.next().is_some() {
                        return Err(malformed(line, "trailing fields on node record"));
                    }
                    if map.insert(id, Vec3::new(x, y, z)).is_some() {
                        return Err(malformed(line, format!("duplicate node {id}")));
                    }
                }
                nodes = Some(map);
            }
            "Elements" => {
                let (_, _, recs) = block(&mut lines, "Elements")?;
                let mut out = Vec::with_capacity(recs.len());
                for (line, r) in recs {
                    let f: Vec<&str> = r.split_whitespace().collect();
                    let id: u64 = num(f.first().copied(), line, "element id")?;
                    let ty: u32 = num(f.get(1).copied(), line, "element type")?;
                    let ntags: usize = num(f.get(2).copied(), line, "tag count")?;
                    let kind = match ty {
                        2 => ElementKind::Tri,
                        3 => ElementKind::Quad,
                        _ => {
                            warnings
                                .push(format!("line {line}: skipped element {id} of type {ty}"));
                            continue;
                        }
                    };
                    let tags = f
                        .get(3..3 + ntags)
                        .ok_or_else(|| malformed(line, "missing element tags"))?;
                    let physical: i64 = match tags.first() {
                        Some(t) => num(Some(t), line, "physical tag")?,
                        None => 0,
                    };
                    let ids = &f[3 + ntags..];
                    if ids.len() != kind.node_count() {
                        return Err(malformed(
                            line,
                            format!("element {id} of type {ty} lists {} nodes", ids.len()),
                        ));
                    }
                    let ids = ids
                        .iter()
                        .map(|t| num(Some(t), line, "node id"))
                        .collect::<Result<Vec<u64>, _>>()?;
                    out.push((
                        line,
                        physical,
                        Element {
                            id,
                            kind,
                            nodes: ids,
                        },
                    ));
                }
                raw_elements = Some(out);
            }
            other => {
                let end = format!("$End{other}");
                let start = lines.line;
                loop {
                    let l = lines.expect(other)?;
                    if l == end {
                        break;
                    }
                }
                warnings.push(format!("line {start}: skipped section ${other}"));
            }
        }
    }

    if !seen_format {
        return Err(MshError::MissingSection("MeshFormat"));
    }
    let nodes = nodes.ok_or(MshError::MissingSection("Nodes"))?;
    let raw_elements = raw_elements.ok_or(MshError::MissingSection("Elements"))?;
    let mut mesh = RawMesh {
        nodes,
        ..RawMesh::default()
    };
    for (line, physical, e) in raw_elements {
        if let Some(n) = e.nodes.iter().find(|n| !mesh.nodes.contains_key(n)) {
            return Err(malformed(
                line,
                format!("element {} references missing node {n}", e.id),
            ));
        }
        if physical != 0 {
            let name = names
                .get(&physical)
                .cloned()
                .unwrap_or_else(|| physical.to_string());
            mesh.groups.entry(name).or_default().push(e.id);
        }
        mesh.elements.push(e);
    }
    mesh.validate()?;
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(MshRead { mesh, warnings })
}

/// Canonical MSH 2.2 text. Groups get physical tags 1, 2, ... in name order;
/// coordinates are written in shortest round-trip form.
pub fn write_msh(mesh: &RawMesh) -> String {
    let mut owner: BTreeMap<u64, usize> = BTreeMap::new();
    for (tag, ids) in mesh.groups.values().enumerate() {
        for id in ids {
            owner.entry(*id).or_insert(tag + 1);
        }
    }
    let mut s = String::from("$MeshFormat\n2.2 0 8\n$EndMeshFormat\n");
    if !mesh.groups.is_empty() {
        let _ = writeln!(s, "$PhysicalNames\n{}", mesh.groups.len());
        for (tag, name) in mesh.groups.keys().enumerate() {
            let _ = writeln!(s, "2 {} \"{name}\"", tag + 1);
        }
        s.push_str("$EndPhysicalNames\n");
    }
    let _ = writeln!(s, "$Nodes\n{}", mesh.nodes.len());
    for (id, p) in &mesh.nodes {
        let _ = writeln!(s, "{id} {:?} {:?} {:?}", p.x, p.y, p.z);
    }
    let _ = writeln!(s, "$EndNodes\n$Elements\n{}", mesh.elements.len());
    for e in &mesh.elements {
        let ty = match e.kind {
            ElementKind::Tri => 2,
            ElementKind::Quad => 3,
        };
        let tag = owner.get(&e.id).copied().unwrap_or(0);
        let _ = write!(s, "{} {ty} 2 {tag} {tag}", e.id);
        for n in &e.nodes {
            let _ = write!(s, " {n}");
        }
        s.push('\n');
    }
    s.push_str("$EndElements\n");
    s
}
