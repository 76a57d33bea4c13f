//! Executable contractible-graph transformations.
//!
//! The crate decides membership in the family of contractible graphs
//! (reducibility to `K1` by vertex and edge deletions with contractible
//! neighbourhoods), audits the "nonadjacent vertex with contractible common
//! neighbourhood" axiom, computes clique-complex homology, and hunts
//! exhaustively for small counterexamples.
//!
//! Vertex indices are 0-based throughout the library. The edge-list
//! fixture format and the `contract` binary's output use 1-based labels.

pub mod audit;
pub mod cache;
pub mod canon;
pub mod cli;
pub mod contract;
pub mod enumerate;
pub mod fixtures;
pub mod g6;
pub mod graph;
pub mod homology;
pub mod hunt;

pub use cache::{MemoCache, PolicyTag};
pub use canon::{canonical_form, CanonicalForm, CanonicalKey};
pub use contract::{replay_certificate, Certificate, Decider, Move, MoveError, MoveSet, Policy};
pub use g6::{decode_graph6, encode_graph6};
pub use graph::{Graph, GraphError, VertexSet};
