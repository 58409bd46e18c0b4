//! Staged run from a surface mesh to plots: `check` builds and inspects the
//! networks, `prep` writes the solver decks, `run` solves, `post` writes
//! the plot files and the drag polar.
//!
//! Every stage owns one numbered directory under the output directory and
//! reads only what earlier stages left on disk:
//!
//! ```text
//! 01_mesh/      mesh.msh, mesh.txt
//! 02_networks/  networks.json, abutment.txt, abutment.tsv, orientation.txt
//! 03_decks/     geometry.wgs, flow.aux, a502.in
//! 04_raw/       agps, ffm, ffmf
//! 05_post/      solution.dat, solution.mcr, polar.csv, viscous.txt
//! ```
//!
//! A stage clears its own directory and every later one before writing, so
//! a tree never mixes results of different inputs. `manifest.json` at the
//! top lists the SHA-256 of every file.

pub mod config;
pub mod external;
pub mod manifest;
pub mod networks;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use panflow_core::abutment::{abutment_report, default_tolerance, AbutmentReport};
use panflow_core::builder::{
    attach_wake, body_spine, build_fuselage, build_lifting_surface, lifting_spine, BuildError,
    LiftingOptions, LiftingSurface,
};
use panflow_core::mesh::{extract_sections, Axis, RawMesh, SectionError};
use panflow_core::network::{check_orientation, OrientationReport};
use panflow_core::solver::{
    Compressibility, PanelSolver, References, SolutionSet, SolverError, SolverModel, SolverOptions,
};
use panflow_core::viscous::{
    parasite_drag, ComponentWettedItem, ParasiteDrag, ViscousError, ViscousFlight,
};
use panflow_core::{StructuredNetwork, Vec3};

use crate::deck::{
    assemble_a502, decks_for, parse_a502, parse_aux, write_a502, write_aux, write_lawgs,
    FlowConditions, WakeSpec,
};
use crate::msh::{parse_msh_with_warnings, write_msh, MshError};
use crate::results::{
    agps_from_solution, ffm_from_solution, parse_agps, parse_ffm, verify_doubling, write_agps,
    write_ffm, write_macro, write_polar_csv, write_tecplot_dat, CaseSelection, FfmSummary,
    ViewPreset,
};

use config::{
    Backend, ComponentType, CompressibilityConfig, ConfigError, ExternalConfig, PipelineConfig,
};
use external::{run_with_deadline, ExternalError, Finished};
use manifest::{Manifest, RunLock};
use networks::NetworkSet;

pub const MESH_DIR: &str = "01_mesh";
pub const NETWORKS_DIR: &str = "02_networks";
pub const DECKS_DIR: &str = "03_decks";
pub const RAW_DIR: &str = "04_raw";
pub const POST_DIR: &str = "05_post";
const STAGE_DIRS: [&str; 5] = [MESH_DIR, NETWORKS_DIR, DECKS_DIR, RAW_DIR, POST_DIR];

pub const MESH_FILE: &str = "mesh.msh";
pub const NETWORKS_FILE: &str = "networks.json";
pub const LAWGS_FILE: &str = "geometry.wgs";
pub const AUX_FILE: &str = "flow.aux";
pub const A502_FILE: &str = "a502.in";
pub const AGPS_FILE: &str = "agps";
pub const FFM_FILE: &str = "ffm";
pub const FFMF_FILE: &str = "ffmf";
pub const DAT_FILE: &str = "solution.dat";
pub const MACRO_FILE: &str = "solution.mcr";
pub const POLAR_FILE: &str = "polar.csv";
pub const VISCOUS_FILE: &str = "viscous.txt";
pub const QUARANTINE_DIR: &str = "quarantine";

/// Relative tolerance of the half/full force table consistency check; the
/// tables carry seven significant digits.
const DOUBLING_TOL: f64 = 2e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Prep,
    Run,
    Post,
    All,
}

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("output directory {0} is in use by another run (remove the lock file if it is stale)")]
    Locked(PathBuf),
    #[error("{path} is missing; run the {stage} stage first")]
    MissingStage { stage: &'static str, path: PathBuf },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("mesh: {0}")]
    Mesh(#[from] MshError),
    #[error("component {component}: {source}")]
    Section {
        component: String,
        source: SectionError,
    },
    #[error("component {component}: {source}")]
    Build {
        component: String,
        source: BuildError,
    },
    #[error("geometry check failed (use --force to write decks anyway)\n{0}")]
    Gate(String),
    #[error("{path}: {msg}")]
    Artifact { path: PathBuf, msg: String },
    #[error("solver: {0}")]
    Solver(#[from] SolverError),
    #[error("parasite drag: {0}")]
    Viscous(#[from] ViscousError),
    #[error("{0}")]
    External(#[from] ExternalError),
}

impl PipelineError {
    /// 1 for failed checks and computations, 2 for usage and configuration
    /// problems, 3 when the external solver fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_)
            | PipelineError::Locked(_)
            | PipelineError::MissingStage { .. } => 2,
            PipelineError::External(_) => 3,
            _ => 1,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), PipelineError> {
    fs::write(path, text).map_err(io_err(path))
}

fn artifact(path: &Path, msg: impl ToString) -> PipelineError {
    PipelineError::Artifact {
        path: path.to_path_buf(),
        msg: msg.to_string(),
    }
}

/// Networks and diagnostics of the geometry stage.
#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub networks: Vec<StructuredNetwork>,
    pub wakes: Vec<WakeSpec>,
    pub abutment: AbutmentReport,
    pub orientation: Vec<(String, OrientationReport)>,
    pub mesh_warnings: Vec<String>,
}

impl CheckOutcome {
    pub fn is_clean(&self) -> bool {
        self.abutment.mismatched_count() == 0
            && self.orientation.iter().all(|(_, r)| r.is_compliant())
    }

    pub fn summary(&self) -> String {
        let mut s = self.abutment.to_text();
        s.push_str(&orientation_text(&self.orientation));
        s
    }
}

fn orientation_text(rows: &[(String, OrientationReport)]) -> String {
    let mut s = String::from("network\toutward_fraction\toffending\n");
    for (name, r) in rows {
        let _ = writeln!(
            s,
            "{name}\t{:.6}\t{}",
            r.fraction_outward,
            r.offending.len()
        );
    }
    s
}

/// What a command did, for the command line summary.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub check: Option<CheckOutcome>,
    pub forced: bool,
    pub panels: Option<usize>,
    pub cases: Option<usize>,
    pub cd0: Option<f64>,
    pub manifest: Manifest,
}

pub struct Pipeline {
    pub cfg: PipelineConfig,
    pub force: bool,
}

/// Runs `cmd` under the output directory lock and refreshes the manifest,
/// also after a failure so it describes what is on disk.
pub fn execute(cfg: PipelineConfig, cmd: Command, force: bool) -> Result<Outcome, PipelineError> {
    let root = cfg.output.clone();
    let _lock = match RunLock::acquire(&root) {
        Ok(l) => l,
        Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
            return Err(PipelineError::Locked(root))
        }
        Err(e) => return Err(io_err(&root)(e)),
    };
    let p = Pipeline { cfg, force };
    let result = p.command(cmd);
    let manifest = Manifest::write(&root).map_err(io_err(&root));
    let mut outcome = result?;
    outcome.manifest = manifest?;
    Ok(outcome)
}

impl Pipeline {
    pub fn dir(&self, stage: &str) -> PathBuf {
        self.cfg.output.join(stage)
    }

    fn fresh(&self, first: &str) -> Result<(), PipelineError> {
        let from = STAGE_DIRS
            .iter()
            .position(|d| *d == first)
            .expect("known stage");
        for d in &STAGE_DIRS[from..] {
            let p = self.dir(d);
            if p.exists() {
                fs::remove_dir_all(&p).map_err(io_err(&p))?;
            }
        }
        fs::create_dir_all(self.dir(first)).map_err(io_err(&self.dir(first)))
    }

    fn read_stage(
        &self,
        stage: &'static str,
        dir: &str,
        file: &str,
    ) -> Result<String, PipelineError> {
        let path = self.dir(dir).join(file);
        if !path.is_file() {
            return Err(PipelineError::MissingStage { stage, path });
        }
        fs::read_to_string(&path).map_err(io_err(&path))
    }

    pub fn command(&self, cmd: Command) -> Result<Outcome, PipelineError> {
        let mut out = Outcome::default();
        match cmd {
            Command::Check => {
                let c = self.check()?;
                let clean = c.is_clean();
                let summary = c.summary();
                out.check = Some(c);
                if !clean {
                    return Err(PipelineError::Gate(summary));
                }
            }
            Command::Prep => self.prep(&mut out)?,
            Command::Run => self.run(&mut out)?,
            Command::Post => self.post(&mut out)?,
            Command::All => {
                self.prep(&mut out)?;
                self.run(&mut out)?;
                self.post(&mut out)?;
            }
        }
        Ok(out)
    }

    /// Reads the mesh, builds the networks and checks abutment and panel
    /// orientation. Writes `01_mesh` and `02_networks` whatever the verdict.
    pub fn check(&self) -> Result<CheckOutcome, PipelineError> {
        let text = fs::read_to_string(&self.cfg.mesh).map_err(io_err(&self.cfg.mesh))?;
        let read = parse_msh_with_warnings(&text)?;
        let (networks, wakes, orientation) = build_networks(&self.cfg, &read.mesh)?;
        let tol = self
            .cfg
            .abutment_tol
            .unwrap_or_else(|| default_tolerance(&networks));
        let abutment = abutment_report(&networks, tol, self.cfg.flow.symmetry.is_on());

        self.fresh(MESH_DIR)?;
        let d = self.dir(MESH_DIR);
        write_file(&d.join(MESH_FILE), &write_msh(&read.mesh))?;
        let mut info = format!(
            "nodes {}\nelements {}\ngroups {}\n",
            read.mesh.nodes.len(),
            read.mesh.elements.len(),
            read.mesh.groups.len()
        );
        for (g, ids) in &read.mesh.groups {
            let _ = writeln!(info, "group {g} {}", ids.len());
        }
        for w in &read.warnings {
            let _ = writeln!(info, "warning {w}");
        }
        write_file(&d.join("mesh.txt"), &info)?;

        fs::create_dir_all(self.dir(NETWORKS_DIR)).map_err(io_err(&self.dir(NETWORKS_DIR)))?;
        let d = self.dir(NETWORKS_DIR);
        write_file(
            &d.join(NETWORKS_FILE),
            &NetworkSet::from_networks(&self.cfg.title, &networks).to_json(),
        )?;
        write_file(&d.join("abutment.txt"), &abutment.to_text())?;
        write_file(&d.join("abutment.tsv"), &abutment.to_records())?;
        write_file(&d.join("orientation.txt"), &orientation_text(&orientation))?;
        for w in &read.warnings {
            log::warn!("{}: {w}", self.cfg.mesh.display());
        }
        Ok(CheckOutcome {
            networks,
            wakes,
            abutment,
            orientation,
            mesh_warnings: read.warnings,
        })
    }

    /// Geometry stage, the gate, then the solver decks. With `force` the
    /// decks are written despite a failed check and carry a watermark.
    pub fn prep(&self, out: &mut Outcome) -> Result<(), PipelineError> {
        let c = self.check()?;
        if !c.is_clean() {
            if !self.force {
                return Err(PipelineError::Gate(c.summary()));
            }
            log::warn!("writing decks despite a failed geometry check");
            out.forced = true;
        }
        let flow = self.cfg.flow.conditions();
        let (lawgs, aux) = decks_for(
            &self.cfg.title,
            &c.networks,
            &flow,
            &c.wakes,
            Some(LAWGS_FILE),
        );
        let deck_err = |e: &dyn std::fmt::Display| artifact(&self.dir(DECKS_DIR), e);
        let lawgs_text = write_lawgs(&lawgs).map_err(|e| deck_err(&e))?;
        let aux_text = write_aux(&aux).map_err(|e| deck_err(&e))?;
        let deck =
            assemble_a502(&lawgs, &aux, &c.abutment, self.force).map_err(|e| deck_err(&e))?;
        let a502_text = write_a502(&deck).map_err(|e| deck_err(&e))?;

        self.fresh(DECKS_DIR)?;
        let d = self.dir(DECKS_DIR);
        write_file(&d.join(LAWGS_FILE), &lawgs_text)?;
        write_file(&d.join(AUX_FILE), &aux_text)?;
        write_file(&d.join(A502_FILE), &a502_text)?;
        out.panels = Some(deck.panel_count());
        out.check = Some(c);
        Ok(())
    }

    fn load_flow(&self, stage: &'static str) -> Result<FlowConditions, PipelineError> {
        let text = self.read_stage(stage, DECKS_DIR, AUX_FILE)?;
        parse_aux(&text)
            .map(|a| a.flow)
            .map_err(|e| artifact(&self.dir(DECKS_DIR).join(AUX_FILE), e))
    }

    fn load_networks(&self, stage: &'static str) -> Result<Vec<StructuredNetwork>, PipelineError> {
        let path = self.dir(NETWORKS_DIR).join(NETWORKS_FILE);
        let text = self.read_stage(stage, NETWORKS_DIR, NETWORKS_FILE)?;
        NetworkSet::from_json(&text)
            .and_then(|s| s.to_networks())
            .map_err(|e| artifact(&path, e))
    }

    fn is_forced(&self) -> Result<bool, PipelineError> {
        let text = self.read_stage("prep", DECKS_DIR, A502_FILE)?;
        parse_a502(&text)
            .map(|d| d.is_forced())
            .map_err(|e| artifact(&self.dir(DECKS_DIR).join(A502_FILE), e))
    }

    /// Solves every case of the deck with the configured backend and writes
    /// the raw tables to `04_raw`.
    pub fn run(&self, out: &mut Outcome) -> Result<(), PipelineError> {
        let flow = self.load_flow("prep")?;
        out.forced |= self.is_forced()?;
        self.fresh(RAW_DIR)?;
        match self.cfg.solver.backend {
            Backend::Embedded => {
                let nets = self.load_networks("check")?;
                let sol = self.solve_embedded(&nets, &flow)?;
                let agps = agps_from_solution(&self.cfg.title, &nets, &sol);
                let (half, full) = ffm_from_solution(&self.cfg.title, &sol);
                let d = self.dir(RAW_DIR);
                write_file(&d.join(AGPS_FILE), &write_agps(&agps))?;
                if flow.symmetry.is_on() {
                    write_file(&d.join(FFM_FILE), &write_ffm(&half))?;
                }
                write_file(&d.join(FFMF_FILE), &write_ffm(&full))?;
                out.cases = Some(sol.cases.len());
            }
            Backend::External => {
                let ext = self.cfg.solver.external.as_ref().ok_or_else(|| {
                    ConfigError::Invalid(
                        "external backend selected but [solver.external] is missing".into(),
                    )
                })?;
                out.cases = Some(self.solve_external(ext)?);
            }
        }
        Ok(())
    }

    fn solve_embedded(
        &self,
        nets: &[StructuredNetwork],
        flow: &FlowConditions,
    ) -> Result<SolutionSet, PipelineError> {
        let options = SolverOptions {
            symmetry: flow.symmetry.is_on(),
            mach: flow.mach,
            compressibility: match self.cfg.solver.compressibility {
                CompressibilityConfig::None => Compressibility::None,
                CompressibilityConfig::PrandtlGlauert => Compressibility::PrandtlGlauert,
            },
            refs: References {
                sref: flow.sref,
                span: flow.span,
                cbar: flow.cbar,
                moment_ref: Vec3::new(flow.xref, flow.yref, flow.zref),
            },
        };
        let solve = || -> Result<SolutionSet, SolverError> {
            let solver = PanelSolver::new(SolverModel::new(nets, options)?)?;
            solver.sweep(&flow.alphas, flow.beta)
        };
        let started = Instant::now();
        let sol = with_jobs(self.cfg.solver.jobs, solve)?;
        log::info!(
            "solved {} case(s) in {:.1} s",
            sol.cases.len(),
            started.elapsed().as_secs_f64()
        );
        Ok(sol)
    }

    /// Hands the decks to the external programs in a scratch directory and
    /// takes back `agps`, `ffmf` and, when present, `ffm`. The tables are
    /// reparsed and rewritten, so later stages see the same text whichever
    /// backend produced them. On failure the scratch directory is kept as
    /// `04_raw/quarantine`.
    fn solve_external(&self, ext: &ExternalConfig) -> Result<usize, PipelineError> {
        let raw = self.dir(RAW_DIR);
        let work = raw.join("work");
        fs::create_dir_all(&work).map_err(io_err(&work))?;
        for f in [LAWGS_FILE, AUX_FILE, A502_FILE] {
            let from = self.dir(DECKS_DIR).join(f);
            fs::copy(&from, work.join(f)).map_err(io_err(&from))?;
        }
        let deadline = Instant::now() + Duration::from_secs_f64(ext.timeout_s);
        let mut steps: Vec<(&Path, &str)> = Vec::new();
        if let Some(p) = &ext.panin {
            steps.push((p, AUX_FILE));
        }
        steps.push((&ext.panair, A502_FILE));

        let mut log_text = String::new();
        for (program, arg) in steps {
            let left = deadline.saturating_duration_since(Instant::now());
            let finished = run_with_deadline(program, &[arg], &work, left)?;
            let (status, stdout, stderr) = match finished {
                Finished::Exited(o) => (Some(o.status), o.stdout, o.stderr),
                Finished::TimedOut { stdout, stderr } => (None, stdout, stderr),
            };
            let _ = writeln!(log_text, "$ {} {arg}\n{stdout}", program.display());
            let failure = match status {
                Some(s) if s.success() => None,
                Some(s) => Some(ExternalError::ExternalSolverFailure {
                    program: program.to_path_buf(),
                    status: s.to_string(),
                    stderr: stderr.clone(),
                    quarantine: raw.join(QUARANTINE_DIR),
                }),
                None => Some(ExternalError::Timeout {
                    program: program.to_path_buf(),
                    seconds: ext.timeout_s,
                    quarantine: raw.join(QUARANTINE_DIR),
                }),
            };
            if let Some(e) = failure {
                fs::write(work.join("stdout.txt"), &stdout).map_err(io_err(&work))?;
                fs::write(work.join("stderr.txt"), &stderr).map_err(io_err(&work))?;
                return Err(self.quarantine(&work, e));
            }
        }

        let panair = ext.panair.clone();
        let take = |file: &str, required: bool| -> Result<Option<String>, ExternalError> {
            let p = work.join(file);
            if p.is_file() {
                fs::read_to_string(&p)
                    .map(Some)
                    .map_err(|e| ExternalError::BadOutput {
                        program: panair.clone(),
                        file: file.into(),
                        msg: e.to_string(),
                    })
            } else if required {
                Err(ExternalError::MissingOutput {
                    program: panair.clone(),
                    file: file.into(),
                })
            } else {
                Ok(None)
            }
        };
        let bad = |file: &str, msg: String| ExternalError::BadOutput {
            program: panair.clone(),
            file: file.into(),
            msg,
        };
        let tables = (|| -> Result<(String, String, Option<String>, usize), ExternalError> {
            let agps_text = take(AGPS_FILE, true)?.expect("required");
            let ffmf_text = take(FFMF_FILE, true)?.expect("required");
            let agps = parse_agps(&agps_text).map_err(|e| bad(AGPS_FILE, e.to_string()))?;
            let full = parse_ffm(&ffmf_text).map_err(|e| bad(FFMF_FILE, e.to_string()))?;
            let half = match take(FFM_FILE, false)? {
                Some(t) => {
                    let h = parse_ffm(&t).map_err(|e| bad(FFM_FILE, e.to_string()))?;
                    verify_doubling(&h, &full, DOUBLING_TOL)
                        .map_err(|e| bad(FFM_FILE, e.to_string()))?;
                    Some(write_ffm(&h))
                }
                None => None,
            };
            if agps.alphas != full.alphas() {
                return Err(bad(AGPS_FILE, "cases differ from the force table".into()));
            }
            Ok((write_agps(&agps), write_ffm(&full), half, full.rows.len()))
        })();
        let (agps, ffmf, ffm, cases) = match tables {
            Ok(t) => t,
            Err(e) => return Err(self.quarantine(&work, e)),
        };
        write_file(&raw.join(AGPS_FILE), &agps)?;
        write_file(&raw.join(FFMF_FILE), &ffmf)?;
        if let Some(h) = ffm {
            write_file(&raw.join(FFM_FILE), &h)?;
        }
        write_file(&raw.join("solver.log"), &log_text)?;
        fs::remove_dir_all(&work).map_err(io_err(&work))?;
        Ok(cases)
    }

    fn quarantine(&self, work: &Path, e: ExternalError) -> PipelineError {
        let q = self.dir(RAW_DIR).join(QUARANTINE_DIR);
        if let Err(io) = fs::rename(work, &q) {
            log::error!("could not quarantine {}: {io}", work.display());
        }
        e.into()
    }

    /// Plot files, the drag polar and the parasite drag breakdown.
    pub fn post(&self, out: &mut Outcome) -> Result<(), PipelineError> {
        let flow = self.load_flow("prep")?;
        let forced = self.is_forced()?;
        out.forced |= forced;
        let raw = self.dir(RAW_DIR);
        let agps_text = self.read_stage("run", RAW_DIR, AGPS_FILE)?;
        let ffmf_text = self.read_stage("run", RAW_DIR, FFMF_FILE)?;
        let mut agps = parse_agps(&agps_text).map_err(|e| artifact(&raw.join(AGPS_FILE), e))?;
        let full = parse_ffm(&ffmf_text).map_err(|e| artifact(&raw.join(FFMF_FILE), e))?;
        if raw.join(FFM_FILE).is_file() {
            let half = parse_ffm(&self.read_stage("run", RAW_DIR, FFM_FILE)?)
                .map_err(|e| artifact(&raw.join(FFM_FILE), e))?;
            verify_doubling(&half, &full, DOUBLING_TOL)
                .map_err(|e| artifact(&raw.join(FFM_FILE), e))?;
        }
        if forced {
            agps.title = format!("{} [FORCED]", agps.title);
        }
        let nets = self.load_networks("check")?;
        let drag = match &self.cfg.viscous {
            Some(v) => Some(self.parasite(v, &nets, &flow)?),
            None => None,
        };
        let cd0 = drag.as_ref().map_or(0.0, |d| d.cd0);

        self.fresh(POST_DIR)?;
        let d = self.dir(POST_DIR);
        let dat = write_tecplot_dat(&agps, &CaseSelection::All)
            .map_err(|e| artifact(&raw.join(AGPS_FILE), e))?;
        write_file(&d.join(DAT_FILE), &dat)?;
        let mcr = write_macro(
            DAT_FILE,
            agps.networks.len(),
            &agps.alphas,
            &ViewPreset::DEFAULT,
        );
        write_file(&d.join(MACRO_FILE), &mcr)?;
        write_file(&d.join(POLAR_FILE), &write_polar_csv(&full, cd0))?;
        write_file(
            &d.join(VISCOUS_FILE),
            &viscous_text(
                drag.as_ref(),
                self.cfg.viscous.as_ref(),
                &flow,
                &full,
                forced,
            ),
        )?;
        out.cd0 = Some(cd0);
        out.cases = Some(full.rows.len());
        if let Some(viewer) = &self.cfg.post.viewer {
            match std::process::Command::new(viewer)
                .arg(d.join(MACRO_FILE))
                .spawn()
            {
                Ok(_) => log::info!("started {viewer}"),
                Err(e) => log::warn!("could not start viewer {viewer}: {e}"),
            }
        }
        Ok(())
    }

    fn parasite(
        &self,
        v: &config::ViscousConfig,
        nets: &[StructuredNetwork],
        flow: &FlowConditions,
    ) -> Result<ParasiteDrag, PipelineError> {
        let mirror = if flow.symmetry.is_on() { 2.0 } else { 1.0 };
        let mut items = Vec::with_capacity(v.components.len());
        for c in &v.components {
            let swet = match c.wetted_area {
                Some(a) => a,
                None => {
                    let mut a = 0.0;
                    for name in &c.networks {
                        let n = nets.iter().find(|n| n.name() == name).ok_or_else(|| {
                            ConfigError::Invalid(format!(
                                "viscous component {}: no network {name}",
                                c.name
                            ))
                        })?;
                        a += paneled_area(n);
                    }
                    mirror * a
                }
            };
            let mut item = ComponentWettedItem::new(c.name.clone(), swet, c.length)
                .with_form_factor(c.form_factor);
            item.tw_over_t = c.tw_over_t;
            items.push(item);
        }
        let flight = ViscousFlight::from_reference(flow.mach, v.reynolds, v.reynolds_length);
        Ok(parasite_drag(&items, flight, flow.sref)?)
    }
}

fn paneled_area(n: &StructuredNetwork) -> f64 {
    (0..n.n_rows() - 1)
        .flat_map(|i| (0..n.n_cols() - 1).map(move |j| (i, j)))
        .filter_map(|(i, j)| n.panel_metrics(i, j).ok())
        .map(|m| m.area)
        .sum()
}

fn viscous_text(
    drag: Option<&ParasiteDrag>,
    cfg: Option<&config::ViscousConfig>,
    flow: &FlowConditions,
    full: &FfmSummary,
    forced: bool,
) -> String {
    let mut s = String::new();
    if forced {
        s.push_str("FORCED: geometry check failed; results are not trustworthy\n");
    }
    let (Some(d), Some(v)) = (drag, cfg) else {
        s.push_str("no viscous model configured; CD0 = 0\n");
        return s;
    };
    s.push_str("parasite drag build-up\n");
    s.push_str("assumptions:\n");
    s.push_str("  fully turbulent flat-plate skin friction, compressible reference-temperature correction\n");
    let _ = writeln!(
        s,
        "  Reynolds number {:e} on length {}, Mach {}",
        v.reynolds, v.reynolds_length, flow.mach
    );
    if let Some(mph) = v.velocity_mph {
        let _ = writeln!(s, "  flight speed {mph} mph");
    }
    s.push_str("  wetted areas cover the complete configuration\n");
    s.push_str("  no interference, excrescence, base or cooling drag\n");
    let _ = writeln!(s, "  reference area {}", d.sref);
    s.push_str("component\treynolds\tcf\tform_factor\twetted_area\tcd0\n");
    for c in &d.components {
        let _ = writeln!(
            s,
            "{}\t{:.6e}\t{:.6e}\t{}\t{:.6}\t{:.6e}",
            c.name, c.reynolds, c.cf, c.form_factor, c.wetted_area, c.cd0
        );
    }
    let _ = writeln!(s, "total CD0 {:.6e}", d.cd0);
    if let Some(r) = full
        .rows
        .iter()
        .min_by(|a, b| a.alpha.abs().total_cmp(&b.alpha.abs()))
    {
        let _ = writeln!(
            s,
            "CD at alpha {}: {:.6e} (CDi {:.6e})",
            r.alpha,
            r.cdi + d.cd0,
            r.cdi
        );
    }
    s
}

/// Builds every configured component, then appends the wakes: lifting
/// surfaces give upper and lower networks, bodies one network each.
pub fn build_networks(
    cfg: &PipelineConfig,
    mesh: &RawMesh,
) -> Result<
    (
        Vec<StructuredNetwork>,
        Vec<WakeSpec>,
        Vec<(String, OrientationReport)>,
    ),
    PipelineError,
> {
    let mut nets = Vec::new();
    let mut wake_nets = Vec::new();
    let mut wakes = Vec::new();
    let mut orientation = Vec::new();
    let dir = Vec3::new(
        cfg.wake.direction[0],
        cfg.wake.direction[1],
        cfg.wake.direction[2],
    );
    for c in &cfg.components {
        let lifting = match c.kind {
            ComponentType::Wing => Some(LiftingSurface::Wing),
            ComponentType::Htail => Some(LiftingSurface::HTail),
            ComponentType::Fuselage => None,
        };
        let default_axis = if lifting.is_some() { Axis::Y } else { Axis::X };
        let axis = c
            .axis
            .as_deref()
            .and_then(Axis::parse)
            .unwrap_or(default_axis);
        let build = |source| PipelineError::Build {
            component: c.name.clone(),
            source,
        };
        let secs = extract_sections(mesh, &c.group, axis, cfg.station_tol).map_err(|source| {
            PipelineError::Section {
                component: c.name.clone(),
                source,
            }
        })?;
        match lifting {
            Some(surface) => {
                let mut o = LiftingOptions::new(c.name.clone());
                o.axis = axis;
                o.close_tip = c.close_tip;
                let (u, l) = build_lifting_surface(&secs, surface, &o).map_err(build)?;
                let spine = lifting_spine(&u, &l, axis);
                for n in [&u, &l] {
                    orientation.push((n.name().to_string(), check_orientation(n, &spine)));
                }
                if c.wake {
                    let w = attach_wake(&u, &l, cfg.wake.length_chords, dir, cfg.station_tol)
                        .map_err(build)?;
                    wakes.push(WakeSpec {
                        network: w.name().to_string(),
                        upper: u.name().to_string(),
                        lower: l.name().to_string(),
                        length_chords: cfg.wake.length_chords,
                        direction: cfg.wake.direction,
                    });
                    wake_nets.push(w);
                }
                nets.push(u);
                nets.push(l);
            }
            None => {
                let n = build_fuselage(&secs, &c.name, axis).map_err(build)?;
                orientation.push((
                    n.name().to_string(),
                    check_orientation(&n, &body_spine(&[&n], axis)),
                ));
                nets.push(n);
            }
        }
    }
    nets.extend(wake_nets);
    Ok((nets, wakes, orientation))
}

#[cfg(feature = "parallel")]
fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            log::warn!("cannot start {jobs} worker threads ({e}); using the global pool");
            f()
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_jobs<T>(jobs: usize, f: impl FnOnce() -> T) -> T {
    if jobs > 1 {
        log::info!("built without the parallel feature; solving on one thread");
    }
    f()
}
