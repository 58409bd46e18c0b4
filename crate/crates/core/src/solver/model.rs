//! Panel bookkeeping: which grid cells carry unknowns and how wakes attach.

use alloc::string::String;
use alloc::vec::Vec;

use super::influence::PanelGeom;
use super::SolverError;
use crate::geom::{bbox_diagonal, Point3, Vec3};
use crate::network::{ComponentKind, Edge, StructuredNetwork};

/// Reference quantities for force and moment coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct References {
    pub sref: f64,
    pub span: f64,
    pub cbar: f64,
    pub moment_ref: Point3,
}

impl Default for References {
    fn default() -> Self {
        References {
            sref: 1.0,
            span: 1.0,
            cbar: 1.0,
            moment_ref: Vec3::ZERO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Compressibility {
    #[default]
    None,
    PrandtlGlauert,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Model only `y >= 0`; the mirror image is implied.
    pub symmetry: bool,
    pub mach: f64,
    pub compressibility: Compressibility,
    pub refs: References,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            symmetry: false,
            mach: 0.0,
            compressibility: Compressibility::None,
            refs: References::default(),
        }
    }
}

/// Grid bookkeeping for one input network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkLayout {
    pub name: String,
    pub kind: ComponentKind,
    pub n_rows: usize,
    pub n_cols: usize,
    pub is_wake: bool,
    /// Per grid cell `(i, j)` at `i * (n_cols - 1) + j`: the unknown index of
    /// a body panel, or the strip index of a wake panel.
    pub cells: Vec<Option<usize>>,
    /// First and last columns coincide (closed ring).
    pub wrap_cols: bool,
    /// First and last rows coincide.
    pub wrap_rows: bool,
    /// Edges lying on the symmetry plane in symmetry mode.
    pub on_symmetry: [bool; 4],
}

impl NetworkLayout {
    pub fn cell(&self, i: usize, j: usize) -> Option<usize> {
        self.cells[i * (self.n_cols - 1) + j]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyPanel {
    pub geom: PanelGeom,
    pub net: usize,
    pub row: usize,
    pub col: usize,
}

/// One spanwise strip of wake panels carrying `μ_plus - μ_minus`.
#[derive(Debug, Clone, PartialEq)]
pub struct WakeStrip {
    pub panels: Vec<PanelGeom>,
    pub plus: usize,
    pub minus: usize,
    pub net: usize,
    pub col: usize,
    /// Downstream edge of the strip, from column `col` to `col + 1`.
    pub far_edge: (Point3, Point3),
    /// Normal of the strip; the strength is the potential jump towards it.
    pub normal: Vec3,
}

/// Surface neighbour of a body panel across one of its four grid edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Neighbour {
    Panel(usize),
    /// The mirror image of the panel itself, across the symmetry plane.
    Mirror,
}

/// Geometry prepared for assembly.
#[derive(Debug, Clone)]
pub struct SolverModel {
    pub layouts: Vec<NetworkLayout>,
    pub panels: Vec<BodyPanel>,
    pub strips: Vec<WakeStrip>,
    /// Per body panel, towards rows `i - 1`, `i + 1` and columns `j - 1`,
    /// `j + 1`. Neighbours in other networks are found through shared
    /// boundary edges; trailing edges that shed a wake are not crossed.
    pub neighbours: Vec<[Option<Neighbour>; 4]>,
    pub options: SolverOptions,
    pub scale: f64,
}

fn same(a: Point3, b: Point3, tol: f64) -> bool {
    a.distance(b) <= tol
}

impl SolverModel {
    pub fn new(
        nets: &[StructuredNetwork],
        options: SolverOptions,
    ) -> Result<SolverModel, SolverError> {
        if options.compressibility == Compressibility::PrandtlGlauert && !(options.mach < 0.8) {
            return Err(SolverError::Mach(options.mach));
        }
        if !(options.mach >= 0.0 && options.mach < 0.8) {
            return Err(SolverError::Mach(options.mach));
        }
        let scale = bbox_diagonal(nets.iter().flat_map(|n| n.points()));
        let tol = 1e-9 * scale.max(f64::MIN_POSITIVE);
        let sym_tol = 1e-7 * scale.max(f64::MIN_POSITIVE);

        let mut layouts = Vec::with_capacity(nets.len());
        let mut panels = Vec::new();
        for (k, net) in nets.iter().enumerate() {
            let is_wake = net.kind() == ComponentKind::Wake;
            let (nr, nc) = (net.n_rows(), net.n_cols());
            let mut cells = Vec::with_capacity((nr - 1) * (nc - 1));
            for i in 0..nr - 1 {
                for j in 0..nc - 1 {
                    if is_wake {
                        cells.push(None);
                        continue;
                    }
                    match PanelGeom::from_corners(net.panel_corners(i, j)) {
                        Some(geom) => {
                            cells.push(Some(panels.len()));
                            panels.push(BodyPanel {
                                geom,
                                net: k,
                                row: i,
                                col: j,
                            });
                        }
                        None => cells.push(None),
                    }
                }
            }
            let wrap_cols = (0..nr).all(|i| same(net.point(i, 0), net.point(i, nc - 1), tol));
            let wrap_rows = (0..nc).all(|j| same(net.point(0, j), net.point(nr - 1, j), tol));
            let mut on_symmetry = [false; 4];
            if options.symmetry {
                for e in Edge::ALL {
                    let pts = net.edge_points(e);
                    on_symmetry[e.index()] =
                        !net.edge_is_degenerate(e) && pts.iter().all(|p| p.y.abs() <= sym_tol);
                }
            }
            layouts.push(NetworkLayout {
                name: net.name().into(),
                kind: net.kind(),
                n_rows: nr,
                n_cols: nc,
                is_wake,
                cells,
                wrap_cols,
                wrap_rows,
                on_symmetry,
            });
        }
        if panels.is_empty() {
            return Err(SolverError::NoPanels);
        }

        let mut strips = Vec::new();
        for (k, net) in nets.iter().enumerate() {
            if net.kind() != ComponentKind::Wake {
                continue;
            }
            for j in 0..net.n_cols() - 1 {
                let a = net.point(0, j);
                let b = net.point(0, j + 1);
                if same(a, b, tol) {
                    continue;
                }
                let geoms: Vec<PanelGeom> = (0..net.n_rows() - 1)
                    .filter_map(|i| PanelGeom::from_corners(net.panel_corners(i, j)))
                    .collect();
                if geoms.is_empty() {
                    continue;
                }
                let normal = geoms[0].normal;
                let shed = shedding_panels(nets, &layouts, a, b, tol);
                if shed.len() != 2 {
                    return Err(SolverError::WakeNotAttached {
                        wake: net.name().into(),
                        column: j,
                        found: shed.len(),
                    });
                }
                let (p0, p1) = (shed[0], shed[1]);
                let d0 = panels[p0].geom.normal.dot(normal);
                let d1 = panels[p1].geom.normal.dot(normal);
                let (plus, minus) = if d0 >= d1 { (p0, p1) } else { (p1, p0) };
                let last = net.n_rows() - 1;
                strips.push(WakeStrip {
                    panels: geoms,
                    plus,
                    minus,
                    net: k,
                    col: j,
                    far_edge: (net.point(last, j), net.point(last, j + 1)),
                    normal,
                });
                let idx = strips.len() - 1;
                let nc1 = net.n_cols() - 1;
                for i in 0..net.n_rows() - 1 {
                    layouts[k].cells[i * nc1 + j] = Some(idx);
                }
            }
        }

        let neighbours = find_neighbours(nets, &layouts, &panels, tol);
        Ok(SolverModel {
            layouts,
            panels,
            strips,
            neighbours,
            options,
            scale,
        })
    }

    pub fn unknowns(&self) -> usize {
        self.panels.len()
    }

    /// Network name, row and column of unknown `k`.
    pub fn panel_label(&self, k: usize) -> (String, usize, usize) {
        let p = &self.panels[k];
        (self.layouts[p.net].name.clone(), p.row, p.col)
    }
}

// grid corners of the edge of cell (i, j) crossed by each step
const STEPS: [(isize, isize); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

fn crossed_edge(i: usize, j: usize, step: usize) -> [(usize, usize); 2] {
    match step {
        0 => [(i, j), (i, j + 1)],
        1 => [(i + 1, j), (i + 1, j + 1)],
        2 => [(i, j), (i + 1, j)],
        _ => [(i, j + 1), (i + 1, j + 1)],
    }
}

fn find_neighbours(
    nets: &[StructuredNetwork],
    layouts: &[NetworkLayout],
    panels: &[BodyPanel],
    tol: f64,
) -> Vec<[Option<Neighbour>; 4]> {
    // body panel edges lying on a grid boundary, and wake-shedding edges
    let mut open: Vec<(Point3, Point3, usize)> = Vec::new();
    let mut shed: Vec<(Point3, Point3)> = Vec::new();
    for (k, net) in nets.iter().enumerate() {
        if layouts[k].is_wake {
            for j in 0..net.n_cols() - 1 {
                shed.push((net.point(0, j), net.point(0, j + 1)));
            }
        }
    }
    let off_grid = |lay: &NetworkLayout, i: usize, j: usize, s: usize| {
        let (ii, jj) = (i as isize + STEPS[s].0, j as isize + STEPS[s].1);
        let rows_out = (ii < 0 || ii as usize >= lay.n_rows - 1) && !lay.wrap_rows;
        let cols_out = (jj < 0 || jj as usize >= lay.n_cols - 1) && !lay.wrap_cols;
        rows_out || cols_out
    };
    for (k, p) in panels.iter().enumerate() {
        let lay = &layouts[p.net];
        for s in 0..4 {
            if off_grid(lay, p.row, p.col, s) {
                let [u, v] = crossed_edge(p.row, p.col, s);
                let net = &nets[p.net];
                open.push((net.point(u.0, u.1), net.point(v.0, v.1), k));
            }
        }
    }
    let matches = |a: Point3, b: Point3, c: Point3, d: Point3| {
        (same(a, c, tol) && same(b, d, tol)) || (same(a, d, tol) && same(b, c, tol))
    };
    panels
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let lay = &layouts[p.net];
            let net = &nets[p.net];
            let mut out = [None; 4];
            for (s, slot) in out.iter_mut().enumerate() {
                if !off_grid(lay, p.row, p.col, s) {
                    let nr = (lay.n_rows - 1) as isize;
                    let nc = (lay.n_cols - 1) as isize;
                    let ii = (p.row as isize + STEPS[s].0).rem_euclid(nr) as usize;
                    let jj = (p.col as isize + STEPS[s].1).rem_euclid(nc) as usize;
                    *slot = lay.cell(ii, jj).filter(|&n| n != k).map(Neighbour::Panel);
                    continue;
                }
                if lay.on_symmetry[s] {
                    *slot = Some(Neighbour::Mirror);
                    continue;
                }
                let [u, v] = crossed_edge(p.row, p.col, s);
                let (a, b) = (net.point(u.0, u.1), net.point(v.0, v.1));
                if same(a, b, tol) || shed.iter().any(|&(c, d)| matches(a, b, c, d)) {
                    continue;
                }
                *slot = open
                    .iter()
                    .find(|&&(c, d, m)| m != k && panels[m].net != p.net && matches(a, b, c, d))
                    .map(|&(_, _, m)| Neighbour::Panel(m));
            }
            out
        })
        .collect()
}

/// Body panels with a boundary grid edge joining `a` and `b`.
fn shedding_panels(
    nets: &[StructuredNetwork],
    layouts: &[NetworkLayout],
    a: Point3,
    b: Point3,
    tol: f64,
) -> Vec<usize> {
    let mut out = Vec::new();
    for (k, net) in nets.iter().enumerate() {
        if layouts[k].is_wake {
            continue;
        }
        let (nr, nc) = (net.n_rows(), net.n_cols());
        // each boundary edge with the cell next to it
        let mut candidates: Vec<((usize, usize), (usize, usize), (usize, usize))> = Vec::new();
        for j in 0..nc - 1 {
            candidates.push(((0, j), (0, j + 1), (0, j)));
            candidates.push(((nr - 1, j), (nr - 1, j + 1), (nr - 2, j)));
        }
        for i in 0..nr - 1 {
            candidates.push(((i, 0), (i + 1, 0), (i, 0)));
            candidates.push(((i, nc - 1), (i + 1, nc - 1), (i, nc - 2)));
        }
        for (u, v, cell) in candidates {
            let (pu, pv) = (net.point(u.0, u.1), net.point(v.0, v.1));
            let hit =
                (same(pu, a, tol) && same(pv, b, tol)) || (same(pu, b, tol) && same(pv, a, tol));
            if hit {
                if let Some(idx) = layouts[k].cell(cell.0, cell.1) {
                    if !out.contains(&idx) {
                        out.push(idx);
                    }
                }
            }
        }
    }
    out
}
