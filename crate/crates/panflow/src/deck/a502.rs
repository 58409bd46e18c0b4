//! The combined solver input deck.
//!
//! Blocks open with a `$KEYWORD` line. Records inside `$TITLE` and `$FORCED`
//! are free text; every other record is numeric, at most six ten-column
//! fields. Block order: title, optional force watermark, flow, reference,
//! networks, wakes, end.
//!
//! ```text
//! $FLOW      mach  n_alpha  beta  symmetry, then the alphas
//! $REFERENCE sref  span  cbar  xref  yref  zref
//! $NETWORK   bc  n_rows  n_cols, then two points per record
//! $WAKE      bc  n_rows  n_cols  length, direction, then the points
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use panflow_core::abutment::AbutmentReport;
use panflow_core::BcClass;

use super::aux::AuxDeck;
use super::field10::{format_field10, parse_field10, split_record, FieldError, WIDTH};
use super::lawgs::{LawgsNetwork, LawgsObject};
use super::FlowError;

pub const MAX_RECORD: usize = 80;
pub const FIELDS_PER_RECORD: usize = 6;

/// Header line written into decks emitted past a failed gate.
pub const FORCE_WATERMARK: &str = "FORCED: EMITTED WITH UNRESOLVED ABUTMENT OR ORIENTATION";

#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    Text(String),
    Numeric(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    /// The directive without its `$`, e.g. `NETWORK WING_UPPER`.
    pub directive: String,
    pub records: Vec<Record>,
}

impl Block {
    pub fn keyword(&self) -> &str {
        self.directive.split_whitespace().next().unwrap_or("")
    }

    fn is_text(keyword: &str) -> bool {
        matches!(keyword, "TITLE" | "FORCED")
    }

    fn numbers(&self, k: usize) -> Option<&[f64]> {
        match self.records.get(k) {
            Some(Record::Numeric(v)) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct A502Deck {
    pub blocks: Vec<Block>,
}

impl A502Deck {
    /// `(name, n_rows, n_cols)` of every network and wake block.
    pub fn grids(&self) -> Vec<(String, usize, usize)> {
        self.blocks
            .iter()
            .filter(|b| matches!(b.keyword(), "NETWORK" | "WAKE"))
            .filter_map(|b| {
                let name = b.directive.split_whitespace().nth(1)?.to_string();
                let h = b.numbers(0)?;
                Some((name, *h.get(1)? as usize, *h.get(2)? as usize))
            })
            .collect()
    }

    pub fn panel_count(&self) -> usize {
        self.grids().iter().map(|(_, r, c)| (r - 1) * (c - 1)).sum()
    }

    pub fn is_forced(&self) -> bool {
        self.blocks.iter().any(|b| b.keyword() == "FORCED")
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum A502Error {
    #[error("unresolved abutment, refusing to write a leaking deck: {}", .0.join("; "))]
    UnresolvedAbutment(Vec<String>),
    #[error("network {0} has no boundary condition")]
    MissingBoundaryCondition(String),
    #[error("wake {wake} refers to unknown network {network}")]
    UnknownNetwork { wake: String, network: String },
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("record of {0} characters exceeds 80 columns")]
    RecordTooLong(usize),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn numeric_records(values: &[f64]) -> Vec<Record> {
    values
        .chunks(FIELDS_PER_RECORD)
        .map(|c| Record::Numeric(c.to_vec()))
        .collect()
}

fn grid_records(net: &LawgsNetwork) -> Vec<Record> {
    let mut out = Vec::with_capacity(net.points.len() / 2 + 1);
    for row in net.points.chunks(net.n_cols) {
        for pair in row.chunks(2) {
            out.push(Record::Numeric(
                pair.iter().flat_map(|p| [p.x, p.y, p.z]).collect(),
            ));
        }
    }
    out
}

/// Combines geometry and flow data into a deck.
///
/// `abutment` is the report for the networks the geometry was written from.
/// A report with mismatched edges refuses the deck unless `force` is set, in
/// which case the header carries [`FORCE_WATERMARK`] and the offending
/// edges.
pub fn assemble_a502(
    lawgs: &LawgsObject,
    aux: &AuxDeck,
    abutment: &AbutmentReport,
    force: bool,
) -> Result<A502Deck, A502Error> {
    aux.flow.validate()?;
    let gaps: Vec<String> = abutment
        .mismatched()
        .map(|e| format!("{} {} gap {:.4e}", e.network, e.edge, e.max_gap))
        .collect();
    if !gaps.is_empty() && !force {
        return Err(A502Error::UnresolvedAbutment(gaps));
    }
    let bc: BTreeMap<&str, BcClass> = aux
        .boundaries
        .iter()
        .map(|b| (b.network.as_str(), b.bc))
        .collect();
    let known: BTreeMap<&str, &LawgsNetwork> = lawgs
        .networks
        .iter()
        .map(|n| (n.name.as_str(), n))
        .collect();
    for w in &aux.wakes {
        for n in [&w.network, &w.upper, &w.lower] {
            if !known.contains_key(n.as_str()) {
                return Err(A502Error::UnknownNetwork {
                    wake: w.network.clone(),
                    network: n.clone(),
                });
            }
        }
    }
    let bc_of = |n: &LawgsNetwork| {
        bc.get(n.name.as_str())
            .copied()
            .ok_or_else(|| A502Error::MissingBoundaryCondition(n.name.clone()))
    };

    let mut blocks = Vec::new();
    let title: String = aux.title.chars().take(MAX_RECORD).collect();
    blocks.push(Block {
        directive: "TITLE".into(),
        records: vec![Record::Text(title)],
    });
    if !gaps.is_empty() {
        let mut records = vec![Record::Text(FORCE_WATERMARK.into())];
        records.extend(
            gaps.iter()
                .map(|g| Record::Text(g.chars().take(MAX_RECORD).collect())),
        );
        blocks.push(Block {
            directive: "FORCED".into(),
            records,
        });
    }
    let f = &aux.flow;
    let mut flow = numeric_records(&[
        f.mach,
        f.alphas.len() as f64,
        f.beta,
        if f.symmetry.is_on() { 1.0 } else { 0.0 },
    ]);
    flow.extend(numeric_records(&f.alphas));
    blocks.push(Block {
        directive: "FLOW".into(),
        records: flow,
    });
    blocks.push(Block {
        directive: "REFERENCE".into(),
        records: numeric_records(&[f.sref, f.span, f.cbar, f.xref, f.yref, f.zref]),
    });

    let wake_of = |name: &str| aux.wakes.iter().find(|w| w.network == name);
    for n in lawgs.networks.iter().filter(|n| wake_of(&n.name).is_none()) {
        let mut records =
            numeric_records(&[bc_of(n)?.code() as f64, n.n_rows as f64, n.n_cols as f64]);
        records.extend(grid_records(n));
        blocks.push(Block {
            directive: format!("NETWORK {}", n.name),
            records,
        });
    }
    for n in lawgs.networks.iter() {
        let Some(w) = wake_of(&n.name) else { continue };
        let mut records = numeric_records(&[
            bc_of(n)?.code() as f64,
            n.n_rows as f64,
            n.n_cols as f64,
            w.length_chords,
        ]);
        records.extend(numeric_records(&w.direction));
        records.extend(grid_records(n));
        blocks.push(Block {
            directive: format!("WAKE {} UPPER={} LOWER={}", n.name, w.upper, w.lower),
            records,
        });
    }
    blocks.push(Block {
        directive: "END".into(),
        records: Vec::new(),
    });
    let deck = A502Deck { blocks };
    // render once so overflowing values and long lines surface here
    write_a502(&deck)?;
    Ok(deck)
}

pub fn write_a502(deck: &A502Deck) -> Result<String, A502Error> {
    let mut s = String::new();
    let check = |l: &str| {
        if l.len() > MAX_RECORD {
            Err(A502Error::RecordTooLong(l.len()))
        } else {
            Ok(())
        }
    };
    for b in &deck.blocks {
        let d = format!("${}", b.directive);
        check(&d)?;
        let _ = writeln!(s, "{d}");
        for r in &b.records {
            let line = match r {
                Record::Text(t) => t.clone(),
                Record::Numeric(v) => {
                    if v.len() > FIELDS_PER_RECORD {
                        return Err(A502Error::RecordTooLong(v.len() * WIDTH));
                    }
                    v.iter()
                        .map(|x| format_field10(*x))
                        .collect::<Result<String, _>>()?
                }
            };
            check(&line)?;
            s.push_str(&line);
            s.push('\n');
        }
    }
    Ok(s)
}

pub fn parse_a502(text: &str) -> Result<A502Deck, A502Error> {
    let mut deck = A502Deck::default();
    for (k, l) in text.lines().enumerate() {
        let line = k + 1;
        if l.len() > MAX_RECORD {
            return Err(A502Error::Malformed {
                line,
                msg: format!("{} columns", l.len()),
            });
        }
        if let Some(d) = l.strip_prefix('$') {
            deck.blocks.push(Block {
                directive: d.trim_end().to_string(),
                records: Vec::new(),
            });
            continue;
        }
        let Some(b) = deck.blocks.last_mut() else {
            return Err(A502Error::Malformed {
                line,
                msg: "record before the first block".into(),
            });
        };
        if Block::is_text(b.keyword()) {
            b.records.push(Record::Text(l.to_string()));
            continue;
        }
        let fields = split_record(l.trim_end());
        if fields.len() > FIELDS_PER_RECORD {
            return Err(A502Error::Malformed {
                line,
                msg: format!("{} fields", fields.len()),
            });
        }
        let values = fields
            .iter()
            .map(|f| {
                parse_field10(f).map_err(|_| A502Error::Malformed {
                    line,
                    msg: format!("bad field {f:?}"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        b.records.push(Record::Numeric(values));
    }
    Ok(deck)
}
