//! Short adjacency labels for graphs from sparse hereditary families.
//!
//! The pipeline: take the rows of a graph's adjacency matrix as a vector
//! family, find a vertex ordering under which every row breaks into few
//! runs ([`low_crossing`]), and label each vertex with its position and the
//! endpoints of its neighbor runs ([`labeling`]). The remaining modules check
//! the combinatorial facts that make this work: shatter functions and robust
//! shattering ([`set_system`]), forbidden bipartite patterns ([`patterns`]),
//! and dense pattern-free instances built from finite fields ([`corpus`]).

pub mod bits;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod guard;
pub mod labeling;
pub mod low_crossing;
pub mod ordering;
pub mod patterns;
pub mod set_system;

pub use bits::BitVector;
pub use error::{Error, Result};
pub use graph::{Graph, GraphKind, VertexList};
pub use guard::Guard;
pub use ordering::Ordering;
