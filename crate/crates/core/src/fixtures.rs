//! Graphs shipped with the crate as edge-list text.

use crate::graph::{Graph, GraphError};

/// Edge list of the 12-vertex heart graph (1-based labels).
pub const HEART_EDGES: &str = include_str!("../fixtures/heart.txt");

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &["heart"];

/// The heart graph: contractible, no vertex with a contractible
/// neighbourhood, and vertex 0 (label 1) has no nonadjacent vertex with a
/// contractible common neighbourhood.
pub fn heart() -> Graph {
    Graph::parse_edge_list(HEART_EDGES).expect("bundled fixture parses")
}

/// Edge-list source of a bundled fixture.
pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "heart" => Some(HEART_EDGES),
        _ => None,
    }
}

pub fn by_name(name: &str) -> Option<Result<Graph, GraphError>> {
    source(name).map(Graph::parse_edge_list)
}
