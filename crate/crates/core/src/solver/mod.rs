//! Low-order source/doublet panel method with an internal Dirichlet
//! boundary condition and rigid flat wakes.
//!
//! Every body panel carries a constant source `σ = -V∞·n` and an unknown
//! constant doublet `μ`. The perturbation potential inside the body is held at
//! zero, so `μ` equals the outer perturbation potential on the surface. Wake
//! strips carry the trailing-edge doublet jump (Kutta condition).

mod forces;
mod influence;
mod model;
mod solve;
mod surface;

use alloc::string::String;
use core::fmt;

pub use forces::{trefftz_cdi, ForceSet, WindAxes};
pub use influence::PanelGeom;
pub use model::{
    BodyPanel, Compressibility, Neighbour, NetworkLayout, References, SolverModel, SolverOptions,
    WakeStrip,
};
pub use solve::{assemble_influence, freestream, CaseResult, PanelSolver, SolutionSet, Strengths};
pub use surface::{node_cp, panel_cp, panel_velocities};

#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    NoPanels,
    Mach(f64),
    SideslipInSymmetry(f64),
    WakeNotAttached {
        wake: String,
        column: usize,
        found: usize,
    },
    SingularMatrix {
        network: String,
        row: usize,
        col: usize,
        detail: String,
    },
    Residual {
        residual: f64,
        rhs: f64,
    },
}

impl fmt::Display for SolverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverError::NoPanels => write!(f, "model has no body panels"),
            SolverError::Mach(m) => write!(f, "Mach {m} is outside the subsonic range [0, 0.8)"),
            SolverError::SideslipInSymmetry(b) => {
                write!(
                    f,
                    "sideslip {b} deg is not allowed with a symmetric half model"
                )
            }
            SolverError::WakeNotAttached {
                wake,
                column,
                found,
            } => write!(
                f,
                "wake {wake} strip {column} touches {found} trailing-edge panel(s), expected 2"
            ),
            SolverError::SingularMatrix {
                network,
                row,
                col,
                detail,
            } => write!(
                f,
                "influence matrix is singular at panel ({row}, {col}) of {network}: {detail}"
            ),
            SolverError::Residual { residual, rhs } => write!(
                f,
                "linear solve residual {residual:e} exceeds 1e-10 of the right-hand side {rhs:e}"
            ),
        }
    }
}

impl core::error::Error for SolverError {}
