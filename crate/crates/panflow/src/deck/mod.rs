//! Legacy solver input: LaWGS geometry, the keyword auxiliary file and the
//! combined fixed-column deck.

pub mod a502;
pub mod aux;
pub mod field10;
pub mod lawgs;

pub use a502::{assemble_a502, parse_a502, write_a502, A502Deck, A502Error, Block, Record};
pub use aux::{parse_aux, write_aux, AuxDeck, AuxError, NetworkBc, WakeSpec};
pub use field10::{format_field10, parse_field10, FieldError};
pub use lawgs::{parse_lawgs, write_lawgs, LawgsError, LawgsNetwork, LawgsObject};

/// Largest angle of attack, either sign, that the solver input accepts.
pub const MAX_ALPHA_DEG: f64 = 20.0;

/// Mach numbers in `[0.8, 1.2]` are transonic and rejected.
pub const TRANSONIC: (f64, f64) = (0.8, 1.2);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Symmetry {
    #[default]
    None,
    XzPlane,
}

impl Symmetry {
    pub fn is_on(self) -> bool {
        self == Symmetry::XzPlane
    }
}

/// Freestream and reference quantities of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowConditions {
    pub mach: f64,
    /// Degrees.
    pub alphas: Vec<f64>,
    /// Degrees.
    pub beta: f64,
    pub sref: f64,
    pub span: f64,
    pub cbar: f64,
    pub xref: f64,
    pub yref: f64,
    pub zref: f64,
    pub symmetry: Symmetry,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("Mach {0} is transonic; the method needs M < 0.8 or M > 1.2")]
    Transonic(f64),
    #[error("Mach {0} is not a valid Mach number")]
    BadMach(f64),
    #[error("angle of attack {0} deg is outside +/-20 deg")]
    AlphaOutOfRange(f64),
    #[error("no angle of attack given")]
    NoAlphas,
    #[error("sideslip {0} deg is not finite")]
    BadBeta(f64),
    #[error("{name} must be positive, got {value}")]
    NonPositiveReference { name: &'static str, value: f64 },
    #[error("moment reference is not finite")]
    BadMomentReference,
}

impl FlowConditions {
    pub fn validate(&self) -> Result<(), FlowError> {
        let m = self.mach;
        if !(m.is_finite() && m >= 0.0) {
            return Err(FlowError::BadMach(m));
        }
        if (TRANSONIC.0..=TRANSONIC.1).contains(&m) {
            return Err(FlowError::Transonic(m));
        }
        if self.alphas.is_empty() {
            return Err(FlowError::NoAlphas);
        }
        if let Some(a) = self.alphas.iter().find(|a| !(a.abs() <= MAX_ALPHA_DEG)) {
            return Err(FlowError::AlphaOutOfRange(*a));
        }
        if !self.beta.is_finite() {
            return Err(FlowError::BadBeta(self.beta));
        }
        for (name, value) in [
            ("SREF", self.sref),
            ("SPAN", self.span),
            ("CBAR", self.cbar),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(FlowError::NonPositiveReference { name, value });
            }
        }
        if ![self.xref, self.yref, self.zref]
            .iter()
            .all(|v| v.is_finite())
        {
            return Err(FlowError::BadMomentReference);
        }
        Ok(())
    }
}

/// LaWGS geometry and auxiliary deck for a set of networks. Every network
/// keeps its own boundary-condition class; wakes are as given.
pub fn decks_for(
    title: &str,
    nets: &[panflow_core::StructuredNetwork],
    flow: &FlowConditions,
    wakes: &[WakeSpec],
    geometry_file: Option<&str>,
) -> (LawgsObject, AuxDeck) {
    let symmetry = u32::from(flow.symmetry.is_on());
    let lawgs = LawgsObject {
        title: title.to_string(),
        networks: nets
            .iter()
            .map(|n| LawgsNetwork::from_network(n, symmetry))
            .collect(),
    };
    let aux = AuxDeck {
        title: title.to_string(),
        geometry_file: geometry_file.map(str::to_string),
        flow: flow.clone(),
        boundaries: nets
            .iter()
            .map(|n| NetworkBc {
                network: n.name().to_string(),
                bc: n.bc_class(),
            })
            .collect(),
        wakes: wakes.to_vec(),
        extra: Vec::new(),
    };
    (lawgs, aux)
}
