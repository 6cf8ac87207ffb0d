//! Cycle decompositions of the complete bipartite multigraph λK_{v,u}.
//!
//! The crate builds (M)-cycle decompositions by edge switching on packings,
//! checks the existence conditions, verifies certificates independently and
//! provides an exhaustive search for small instances.

pub mod certify;
pub mod cli;
pub mod conditions;
pub mod constructor;
pub mod error;
pub mod joining;
pub mod model;
pub mod oracle;
pub mod switching;

pub use error::{Error, Result};
pub use model::{Cycle, EdgeMultiset, GraphSpec, LengthSeq, Packing, Side, Vertex};
