//! Lossless JSON form of the built networks, the hand-off between the
//! geometry and solver stages.

use panflow_core::network::NetworkError;
use panflow_core::{BcClass, ComponentKind, Point3, StructuredNetwork};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkRecord {
    pub name: String,
    pub kind: String,
    pub bc: u32,
    pub n_rows: usize,
    pub n_cols: usize,
    /// Collapsed-edge flags in first row, last row, first column, last
    /// column order.
    pub collapsed: [bool; 4],
    pub points: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSet {
    pub title: String,
    pub networks: Vec<NetworkRecord>,
}

#[derive(Debug, thiserror::Error)]
pub enum NetworkSetError {
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("network {name}: unknown kind {kind:?}")]
    Kind { name: String, kind: String },
    #[error("network {name}: unknown boundary code {bc}")]
    Bc { name: String, bc: u32 },
    #[error("network {name}: {source}")]
    Network { name: String, source: NetworkError },
}

impl NetworkSet {
    pub fn from_networks(title: &str, nets: &[StructuredNetwork]) -> NetworkSet {
        NetworkSet {
            title: title.to_string(),
            networks: nets
                .iter()
                .map(|n| NetworkRecord {
                    name: n.name().to_string(),
                    kind: n.kind().as_str().to_string(),
                    bc: n.bc_class().code(),
                    n_rows: n.n_rows(),
                    n_cols: n.n_cols(),
                    collapsed: n.collapsed_flags(),
                    points: n.points().iter().map(|p| [p.x, p.y, p.z]).collect(),
                })
                .collect(),
        }
    }

    pub fn to_networks(&self) -> Result<Vec<StructuredNetwork>, NetworkSetError> {
        self.networks
            .iter()
            .map(|r| {
                let kind = ComponentKind::parse(&r.kind).ok_or_else(|| NetworkSetError::Kind {
                    name: r.name.clone(),
                    kind: r.kind.clone(),
                })?;
                let bc = BcClass::from_code(r.bc).ok_or_else(|| NetworkSetError::Bc {
                    name: r.name.clone(),
                    bc: r.bc,
                })?;
                let points = r
                    .points
                    .iter()
                    .map(|p| Point3::new(p[0], p[1], p[2]))
                    .collect();
                StructuredNetwork::with_flags(
                    r.name.clone(),
                    kind,
                    bc,
                    r.n_rows,
                    r.n_cols,
                    points,
                    r.collapsed,
                )
                .map_err(|source| NetworkSetError::Network {
                    name: r.name.clone(),
                    source,
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<NetworkSet, NetworkSetError> {
        Ok(serde_json::from_str(text)?)
    }
}
