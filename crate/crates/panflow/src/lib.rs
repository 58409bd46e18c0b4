//! File formats, the external-solver adapter and the pipeline behind the
//! `panflow` command line.
//!
//! Geometry, abutment and the reference solver live in `panflow-core`; this
//! crate reads and writes the legacy text formats around them.

pub mod deck;
pub mod msh;
pub mod pipeline;
pub mod results;
