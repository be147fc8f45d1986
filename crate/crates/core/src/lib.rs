//! Deciding and verifying conjugacies between shifts of finite type.
//!
//! Vertex shifts are presented by [`DirectedGraph`], edge shifts by
//! [`MultiGraph`]. Sliding block codes are [`BlockMap`]s; [`verify`] decides
//! whether one is a conjugacy in polynomial time, and [`oracle`] holds the
//! independent brute-force checks used to test it.

pub mod amalgamation;
pub mod block_map;
pub mod error;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod search;
pub mod shift;
pub mod verdict;
pub mod verifier;

pub use amalgamation::{amalgamate, can_amalgamate, split, AmalgamationKind, AmalgamationStep};
pub use block_map::BlockMap;
pub use error::{Error, Result};
pub use graph::{
    is_irreducible, reverse_edges, shortest_cycle_through, strongly_connected_components,
    trace_powers, trim_to_essential, DirectedGraph, MultiGraph, TraceSequence,
};
pub use verdict::{Failure, Verdict, Witness};
pub use verifier::{verify, verify_edge_shift};
