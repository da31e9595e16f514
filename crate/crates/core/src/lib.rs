//! Boundary anyons, Lagrangian subgroups and gapped boundary constructions for
//! translation-invariant Pauli stabilizer codes over `Z_d` qudits.

pub mod anyon;
pub mod arith;
pub mod boundary;
pub mod catalog;
pub mod constructor;
pub mod error;
pub mod frame;
pub mod lagrangian;
pub mod mge;
pub mod par;
pub mod poly;
pub mod render;
pub mod report;
pub mod snf;

pub use error::{Error, Result};
