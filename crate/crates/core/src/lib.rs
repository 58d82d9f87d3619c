//! Exact invariants of normal surface singularities with rational homology
//! sphere links, computed from their resolution graphs.

pub mod config;
pub mod abel;
pub mod corpus;
pub mod cycle;
pub mod error;
pub mod generic;
pub mod graph;
pub mod lattice;
pub mod oracle;
pub mod par;
pub mod search;
pub mod tau;

pub use config::SearchConfig;
pub use cycle::{IntegralCycle, RationalCycle};
pub use error::{Error, ErrorClass, Result};
pub use graph::{ResolutionGraph, ValidationReport};
pub use lattice::{ChernClass, Lattice};
pub use par::ExecMode;
