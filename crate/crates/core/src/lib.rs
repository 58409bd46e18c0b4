//! Geometry, network construction, abutment repair and a reference
//! potential-flow panel solver for paneled aircraft surfaces.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. File formats, process adapters and the command line live in the
//! `panflow` companion crate.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod math;

pub mod abutment;
pub mod builder;
pub mod geom;
pub mod linalg;
pub mod mesh;
pub mod network;
pub mod samples;
pub mod solver;
pub mod viscous;

pub use geom::{Point3, Vec3};
pub use network::{BcClass, ComponentKind, Edge, StructuredNetwork};
