//! Value types for λK_{v,u}, its cycles, packings and leaves.

mod cycle;
mod edges;
mod packing;
mod seq;
mod structure;
mod vertex;

pub use cycle::Cycle;
pub use edges::{EdgeMultiset, GraphSpec};
pub use packing::{compute_leave, Packing};
pub use seq::{even_partitions, LengthSeq};
pub use structure::{classify_leave, Component, LeaveStructure};
pub use vertex::{pair_of, Side, Vertex};
