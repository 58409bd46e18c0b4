//! Run configuration, read from TOML. Relative paths are resolved against
//! the directory holding the configuration file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::deck::{FlowConditions, Symmetry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentType {
    Wing,
    Htail,
    Fuselage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    /// Physical group in the mesh file.
    pub group: String,
    /// Network name, or name prefix for lifting surfaces.
    pub name: String,
    pub kind: ComponentType,
    /// Sectioning axis; `y` for lifting surfaces and `x` for bodies when
    /// omitted.
    #[serde(default)]
    pub axis: Option<String>,
    /// Close the tip of a lifting surface with a collapsed column.
    #[serde(default = "yes")]
    pub close_tip: bool,
    /// Shed a wake from a lifting surface.
    #[serde(default = "yes")]
    pub wake: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub mach: f64,
    pub alphas: Vec<f64>,
    #[serde(default)]
    pub beta: f64,
    pub sref: f64,
    pub span: f64,
    pub cbar: f64,
    #[serde(default)]
    pub xref: f64,
    #[serde(default)]
    pub yref: f64,
    #[serde(default)]
    pub zref: f64,
    #[serde(default)]
    pub symmetry: Symmetry,
}

impl FlowConfig {
    pub fn conditions(&self) -> FlowConditions {
        FlowConditions {
            mach: self.mach,
            alphas: self.alphas.clone(),
            beta: self.beta,
            sref: self.sref,
            span: self.span,
            cbar: self.cbar,
            xref: self.xref,
            yref: self.yref,
            zref: self.zref,
            symmetry: self.symmetry,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WakeConfig {
    #[serde(default = "default_wake_length")]
    pub length_chords: f64,
    #[serde(default = "default_wake_direction")]
    pub direction: [f64; 3],
}

fn default_wake_length() -> f64 {
    20.0
}

fn default_wake_direction() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

impl Default for WakeConfig {
    fn default() -> Self {
        WakeConfig {
            length_chords: default_wake_length(),
            direction: default_wake_direction(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    #[default]
    Embedded,
    External,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompressibilityConfig {
    None,
    #[default]
    PrandtlGlauert,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExternalConfig {
    /// Optional deck translator run before the solver, in place of the
    /// built-in deck assembly.
    #[serde(default)]
    pub panin: Option<PathBuf>,
    pub panair: PathBuf,
    #[serde(default = "default_timeout")]
    pub timeout_s: f64,
}

fn default_timeout() -> f64 {
    3600.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default)]
    pub backend: Backend,
    #[serde(default)]
    pub compressibility: CompressibilityConfig,
    #[serde(default = "one")]
    pub jobs: usize,
    #[serde(default)]
    pub external: Option<ExternalConfig>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WettedConfig {
    pub name: String,
    /// Explicit wetted area of the complete aircraft.
    #[serde(default)]
    pub wetted_area: Option<f64>,
    /// Networks whose paneled area makes up the wetted area, doubled in
    /// symmetry mode.
    #[serde(default)]
    pub networks: Vec<String>,
    pub length: f64,
    #[serde(default = "unit")]
    pub form_factor: f64,
    #[serde(default = "unit")]
    pub tw_over_t: f64,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViscousConfig {
    /// Reynolds number on `reynolds_length`.
    pub reynolds: f64,
    pub reynolds_length: f64,
    /// Flight speed, reported only.
    #[serde(default)]
    pub velocity_mph: Option<f64>,
    #[serde(rename = "component")]
    pub components: Vec<WettedConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct PostConfig {
    /// Command started on the macro after `post`; off when absent.
    #[serde(default)]
    pub viewer: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    #[serde(default = "default_title")]
    pub title: String,
    pub mesh: PathBuf,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    /// Station clustering tolerance for section extraction.
    #[serde(default = "default_station_tol")]
    pub station_tol: f64,
    /// Abutment tolerance; `1e-4` of the bounding-box diagonal when absent.
    #[serde(default)]
    pub abutment_tol: Option<f64>,
    pub flow: FlowConfig,
    #[serde(default)]
    pub wake: WakeConfig,
    #[serde(rename = "component")]
    pub components: Vec<Component>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub viscous: Option<ViscousConfig>,
    #[serde(default)]
    pub post: PostConfig,
}

fn default_title() -> String {
    "PANFLOW".into()
}

fn default_output() -> PathBuf {
    "panflow_out".into()
}

fn default_station_tol() -> f64 {
    1e-3
}

/// Command-line values that replace configuration keys.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub alphas: Option<Vec<f64>>,
    pub backend: Option<Backend>,
    pub jobs: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<PipelineConfig, toml::de::Error> {
        toml::from_str(text)
    }

    /// Reads, applies overrides, resolves relative paths and validates.
    pub fn load(path: &Path, o: &Overrides) -> Result<PipelineConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = PipelineConfig::from_toml(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.resolve(base);
        cfg.apply(o);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.mesh);
        fix(&mut self.output);
        if let Some(e) = &mut self.solver.external {
            fix(&mut e.panair);
            if let Some(p) = &mut e.panin {
                fix(p);
            }
        }
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(a) = &o.alphas {
            self.flow.alphas = a.clone();
        }
        if let Some(b) = o.backend {
            self.solver.backend = b;
        }
        if let Some(j) = o.jobs {
            self.solver.jobs = j;
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if !self.mesh.is_file() {
            return bad(format!("mesh file {} does not exist", self.mesh.display()));
        }
        self.flow
            .conditions()
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if self.components.is_empty() {
            return bad("no components configured".into());
        }
        for c in &self.components {
            if let Some(a) = &c.axis {
                if panflow_core::mesh::Axis::parse(a).is_none() {
                    return bad(format!("component {}: unknown axis {a:?}", c.name));
                }
            }
        }
        if !(self.station_tol > 0.0) {
            return bad("station_tol must be positive".into());
        }
        if matches!(self.abutment_tol, Some(t) if !(t > 0.0)) {
            return bad("abutment_tol must be positive".into());
        }
        if !(self.wake.length_chords > 0.0) {
            return bad("wake length must be positive".into());
        }
        if self.solver.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        if self.solver.backend == Backend::External {
            let Some(e) = &self.solver.external else {
                return bad("external backend selected but [solver.external] is missing".into());
            };
            if !e.panair.is_file() {
                return bad(format!(
                    "solver executable {} does not exist",
                    e.panair.display()
                ));
            }
            if let Some(p) = &e.panin {
                if !p.is_file() {
                    return bad(format!(
                        "translator executable {} does not exist",
                        p.display()
                    ));
                }
            }
            if !(e.timeout_s > 0.0) {
                return bad("timeout_s must be positive".into());
            }
        }
        if let Some(v) = &self.viscous {
            if !(v.reynolds > 0.0 && v.reynolds_length > 0.0) {
                return bad("viscous reynolds and reynolds_length must be positive".into());
            }
            for c in &v.components {
                if c.wetted_area.is_none() == c.networks.is_empty() {
                    return bad(format!(
                        "viscous component {}: give wetted_area or networks",
                        c.name
                    ));
                }
            }
        }
        Ok(())
    }
}
