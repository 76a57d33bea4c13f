//! Checks of the "contractible nonadjacent pair" axiom and of the claim
//! that every contractible graph has at least two contractible vertices.
//!
//! For a vertex `v` and a nonadjacent vertex `u`, `O(vu)` is the subgraph
//! induced by `N(v) ∩ N(u)`. The axiom asks that every vertex of a
//! contractible graph with some nonadjacent vertex has a nonadjacent `u`
//! with `O(vu)` contractible.

use serde::Serialize;

use crate::contract::{Decider, MoveError};
use crate::graph::{Graph, GraphError, VertexSet};
use crate::homology::{betti, Field};

/// Audit record for one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexRecord {
    pub vertex: usize,
    pub nonadjacent: Vec<usize>,
    /// Nonadjacent `u` with `O(vu)` contractible.
    pub witnesses: Vec<usize>,
    pub violated: bool,
    /// `v` is adjacent to every other vertex.
    pub vacuous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    /// Canonical key (hex) of the audited graph.
    pub graph: String,
    pub contractible: bool,
    pub vertices: Vec<VertexRecord>,
    pub violations: Vec<usize>,
    pub is_counterexample: bool,
}

impl AxiomReport {
    /// Copy with every vertex label shifted by `base`.
    pub fn relabeled(&self, base: usize) -> AxiomReport {
        let shift = |vs: &[usize]| vs.iter().map(|v| v + base).collect::<Vec<_>>();
        AxiomReport {
            graph: self.graph.clone(),
            contractible: self.contractible,
            vertices: self
                .vertices
                .iter()
                .map(|r| VertexRecord {
                    vertex: r.vertex + base,
                    nonadjacent: shift(&r.nonadjacent),
                    witnesses: shift(&r.witnesses),
                    violated: r.violated,
                    vacuous: r.vacuous,
                })
                .collect(),
            violations: shift(&self.violations),
            is_counterexample: self.is_counterexample,
        }
    }
}

/// Whether `O(vu)` is contractible, for distinct nonadjacent `v`, `u`.
pub fn common_link_contractible(d: &Decider, g: &Graph, v: usize, u: usize) -> Result<bool, MoveError> {
    let common = g.common_neighborhood(v, u)?;
    if g.has_edge(v, u) {
        return Err(GraphError::AlreadyAdjacent(v, u).into());
    }
    Ok(d.is_contractible_set(g, common))
}

pub fn audit_axiom(d: &Decider, g: &Graph) -> AxiomReport {
    let contractible = d.is_contractible(g);
    audit_with_verdict(d, g, contractible)
}

/// [`audit_axiom`] with the contractibility verdict supplied by the caller.
pub fn audit_with_verdict(d: &Decider, g: &Graph, contractible: bool) -> AxiomReport {
    let vertices: Vec<VertexRecord> = (0..g.n())
        .map(|v| {
            let nonadjacent = g.vertices().without(v).difference(g.neighbors(v));
            let witnesses: Vec<usize> = nonadjacent
                .iter()
                .filter(|&u| d.is_contractible_set(g, g.neighbors(v).intersection(g.neighbors(u))))
                .collect();
            let vacuous = nonadjacent.is_empty();
            VertexRecord {
                vertex: v,
                nonadjacent: nonadjacent.iter().collect(),
                violated: !vacuous && witnesses.is_empty(),
                witnesses,
                vacuous,
            }
        })
        .collect();
    let violations: Vec<usize> = vertices.iter().filter(|r| r.violated).map(|r| r.vertex).collect();
    AxiomReport {
        graph: g.canonical_key().to_hex(),
        contractible,
        is_counterexample: contractible && !violations.is_empty(),
        vertices,
        violations,
    }
}

/// Outcome of checking "a contractible graph has two contractible vertices".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ContractibleVertexAudit {
    pub count: usize,
    pub claim_holds: bool,
}

/// `K1` has no contractible vertex but is exempt.
pub fn audit_min_contractible_vertices(d: &Decider, g: &Graph) -> ContractibleVertexAudit {
    let count = d.contractible_vertices(g).len();
    ContractibleVertexAudit { count, claim_holds: g.n() < 2 || !d.is_contractible(g) || count >= 2 }
}

/// Whether `O(vu)` is empty or has nonzero reduced homology over GF(2) or
/// the rationals. Either rules out contractibility under every policy, so a
/// violation whose links all pass this test does not depend on the limits
/// of the deletion search.
pub fn link_obstructed(g: &Graph, v: usize, u: usize) -> bool {
    let common = g.neighbors(v).intersection(g.neighbors(u));
    match g.induced_subgraph(common) {
        Err(_) => true,
        Ok(h) => [Field::Gf2, Field::Rational].into_iter().any(|f| !betti(&h, f, true).is_zero()),
    }
}

/// Whether every violated vertex of `report` is violated for
/// homological reasons (see [`link_obstructed`]).
pub fn violations_certified(g: &Graph, report: &AxiomReport) -> bool {
    report
        .violations
        .iter()
        .all(|&v| nonadjacent_set(g, v).iter().all(|u| link_obstructed(g, v, u)))
}

/// Vertices of `g` not adjacent to `v` (excluding `v`).
pub fn nonadjacent_set(g: &Graph, v: usize) -> VertexSet {
    g.vertices().without(v).difference(g.neighbors(v))
}
