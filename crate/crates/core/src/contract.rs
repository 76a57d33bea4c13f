//! Contractible transformations and the membership search.
//!
//! The four transformations:
//!
//! * delete a vertex whose neighbourhood is contractible,
//! * glue a new vertex onto a contractible induced subgraph,
//! * delete an edge whose endpoints' common neighbourhood is contractible,
//! * glue an edge between nonadjacent vertices whose common neighbourhood is
//!   contractible.
//!
//! Membership is decided as reducibility to `K1` by deletions, searched
//! depth first with verdicts memoised per canonical key. A deletion sequence
//! read backwards is a sequence of gluings from `K1`, so every positive
//! verdict comes with a replayable [`Certificate`]. An optional gluing
//! budget lets the search also try a bounded number of gluings.
//!
//! The empty graph never counts as contractible, so every predicate first
//! requires its vertex set to be nonempty.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cache::{MemoCache, PolicyTag};
use crate::graph::{Graph, GraphError, VertexSet, MAX_VERTICES};

/// Deletion moves available to the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MoveSet {
    /// Vertex deletions only (with vertex gluing when a budget is set).
    #[serde(rename = "i1")]
    I1,
    /// Vertex and edge deletions (with vertex and edge gluing under a budget).
    #[serde(rename = "i1i3")]
    I1I3,
}

impl fmt::Display for MoveSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveSet::I1 => "i1",
            MoveSet::I1I3 => "i1i3",
        })
    }
}

impl FromStr for MoveSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "i1" => Ok(MoveSet::I1),
            "i1i3" => Ok(MoveSet::I1I3),
            _ => Err(format!("unknown move set `{s}` (expected i1 or i1i3)")),
        }
    }
}

/// Search policy: allowed deletions plus the total number of gluings any
/// derivation may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Policy {
    pub moves: MoveSet,
    pub glue_depth: u32,
}

impl Default for Policy {
    fn default() -> Self {
        Policy { moves: MoveSet::I1I3, glue_depth: 0 }
    }
}

impl Policy {
    pub fn new(moves: MoveSet, glue_depth: u32) -> Self {
        Policy { moves, glue_depth }
    }

    pub fn tag(&self) -> PolicyTag {
        self.tag_with(self.glue_depth)
    }

    fn tag_with(&self, glue_budget: u32) -> PolicyTag {
        PolicyTag { moves: self.moves, glue_budget }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.tag().fmt(f)
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let tag: PolicyTag = s.parse()?;
        Ok(Policy { moves: tag.moves, glue_depth: tag.glue_budget })
    }
}

/// One contractible transformation, in the labels of the graph it acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    DeleteVertex(usize),
    GlueVertex(VertexSet),
    DeleteEdge(usize, usize),
    GlueEdge(usize, usize),
}

impl Move {
    pub fn kind(&self) -> &'static str {
        match self {
            Move::DeleteVertex(_) => "delete-vertex",
            Move::GlueVertex(_) => "glue-vertex",
            Move::DeleteEdge(..) => "delete-edge",
            Move::GlueEdge(..) => "glue-edge",
        }
    }

    pub fn is_deletion(&self) -> bool {
        matches!(self, Move::DeleteVertex(_) | Move::DeleteEdge(..))
    }

    /// Applies the rewrite without checking legality. A glued vertex gets
    /// index `n`; deleting a vertex shifts higher indices down by one.
    pub fn apply_to(&self, g: &Graph) -> Result<Graph, GraphError> {
        match *self {
            Move::DeleteVertex(v) => g.without_vertex(v),
            Move::GlueVertex(s) => g.with_vertex(s),
            Move::DeleteEdge(u, v) => g.without_edge(u, v),
            Move::GlueEdge(u, v) => g.with_edge(u, v),
        }
    }

    /// Text form with vertex labels offset by `base` (0 or 1), e.g.
    /// `delete-edge 1 3` or `glue-vertex 1,2,5`.
    pub fn to_text(&self, base: usize) -> String {
        match *self {
            Move::DeleteVertex(v) => format!("delete-vertex {}", v + base),
            Move::GlueVertex(s) => {
                let labels: Vec<String> = s.iter().map(|v| (v + base).to_string()).collect();
                format!("glue-vertex {}", labels.join(","))
            }
            Move::DeleteEdge(u, v) => format!("delete-edge {} {}", u + base, v + base),
            Move::GlueEdge(u, v) => format!("glue-edge {} {}", u + base, v + base),
        }
    }

    /// Parses [`Move::to_text`] output written with label offset `base`.
    pub fn parse(text: &str, base: usize) -> Result<Move, MoveError> {
        let bad = |msg: &str| MoveError::Parse(format!("`{}`: {msg}", text.trim()));
        let mut parts = text.split_whitespace();
        let kind = parts.next().ok_or_else(|| bad("empty move"))?;
        let label = |s: &str| -> Result<usize, MoveError> {
            let l: usize = s.parse().map_err(|_| bad("vertex label is not a number"))?;
            l.checked_sub(base)
                .filter(|&v| v < MAX_VERTICES)
                .ok_or_else(|| bad("vertex label out of range"))
        };
        let args: Vec<&str> = parts.collect();
        let mv = match (kind, args.as_slice()) {
            ("delete-vertex", [v]) => Move::DeleteVertex(label(v)?),
            ("delete-edge", [u, v]) => Move::DeleteEdge(label(u)?, label(v)?),
            ("glue-edge", [u, v]) => Move::GlueEdge(label(u)?, label(v)?),
            ("glue-vertex", [set]) => Move::GlueVertex(
                set.split(',').map(label).collect::<Result<VertexSet, _>>()?,
            ),
            _ => return Err(bad("expected delete-vertex V | glue-vertex V,V,.. | delete-edge U V | glue-edge U V")),
        };
        Ok(mv)
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(0))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("illegal {kind}: {predicate}")]
    Illegal { kind: &'static str, predicate: String },
    #[error("cannot parse move {0}")]
    Parse(String),
}

/// Ordered moves taking a graph to `K1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub steps: Vec<Move>,
}

impl Certificate {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_text(&self, base: usize) -> String {
        self.steps.iter().map(|m| m.to_text(base) + "\n").collect()
    }
}

/// Why a certificate failed to replay.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("certificate step {step}: {reason}")]
pub struct ReplayError {
    pub step: usize,
    pub reason: String,
}

/// Memoised membership search under a fixed policy.
#[derive(Clone, Copy, Debug)]
pub struct Decider<'c> {
    cache: &'c MemoCache,
    policy: Policy,
    cone_shortcut: bool,
}

impl<'c> Decider<'c> {
    pub fn new(cache: &'c MemoCache, policy: Policy) -> Self {
        Decider { cache, policy, cone_shortcut: true }
    }

    /// Disables the "cones are contractible" fast path so cones go through
    /// the full search.
    pub fn without_cone_shortcut(mut self) -> Self {
        self.cone_shortcut = false;
        self
    }

    pub fn policy(&self) -> Policy {
        self.policy
    }

    pub fn cache(&self) -> &'c MemoCache {
        self.cache
    }

    pub fn is_contractible(&self, g: &Graph) -> bool {
        self.decide(g, self.policy.glue_depth)
    }

    /// Verdict plus, when positive, a certificate.
    pub fn check(&self, g: &Graph) -> (bool, Option<Certificate>) {
        match self.certificate(g) {
            Some(c) => (true, Some(c)),
            None => (false, None),
        }
    }

    /// A certificate for `g`, if it is contractible under the policy.
    pub fn certificate(&self, g: &Graph) -> Option<Certificate> {
        let mut budget = self.policy.glue_depth;
        if !self.decide(g, budget) {
            return None;
        }
        let mut steps = Vec::new();
        let mut cur = g.clone();
        while cur.n() > 1 {
            let (mv, next, b) = self
                .winning_move(&cur, budget)
                .expect("a contractible graph has a move to a contractible graph");
            steps.push(mv);
            cur = next;
            budget = b;
        }
        Some(Certificate { steps })
    }

    /// Whether the subgraph induced on `s` is contractible; false for the
    /// empty set.
    pub fn is_contractible_set(&self, g: &Graph, s: VertexSet) -> bool {
        self.set_contractible(g, s, self.policy.glue_depth)
    }

    pub fn can_delete_vertex(&self, g: &Graph, v: usize) -> Result<bool, MoveError> {
        let nb = g.neighborhood(v)?;
        Ok(g.n() >= 2 && self.is_contractible_set(g, nb))
    }

    pub fn can_delete_edge(&self, g: &Graph, u: usize, v: usize) -> Result<bool, MoveError> {
        let common = g.common_neighborhood(u, v)?;
        if !g.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v).into());
        }
        Ok(self.is_contractible_set(g, common))
    }

    pub fn can_glue_edge(&self, g: &Graph, u: usize, v: usize) -> Result<bool, MoveError> {
        let common = g.common_neighborhood(u, v)?;
        if g.has_edge(u, v) {
            return Err(GraphError::AlreadyAdjacent(u, v).into());
        }
        Ok(self.is_contractible_set(g, common))
    }

    pub fn can_glue_vertex(&self, g: &Graph, attach: VertexSet) -> Result<bool, MoveError> {
        if g.n() == MAX_VERTICES {
            return Err(GraphError::VertexCount(MAX_VERTICES + 1).into());
        }
        if attach.is_empty() {
            return Ok(false);
        }
        g.induced_subgraph(attach)?;
        Ok(self.is_contractible_set(g, attach))
    }

    /// Applies `m` after checking its legality predicate.
    pub fn apply_move(&self, g: &Graph, m: &Move) -> Result<Graph, MoveError> {
        let illegal = |predicate: String| MoveError::Illegal { kind: m.kind(), predicate };
        match *m {
            Move::DeleteVertex(v) => {
                let nb = g.neighborhood(v)?;
                if g.n() < 2 {
                    return Err(illegal("cannot delete the only vertex".into()));
                }
                if nb.is_empty() {
                    return Err(illegal("the neighbourhood is empty".into()));
                }
                if !self.is_contractible_set(g, nb) {
                    return Err(illegal("the neighbourhood is not contractible".into()));
                }
            }
            Move::GlueVertex(s) => {
                if !self.can_glue_vertex(g, s)? {
                    return Err(illegal(if s.is_empty() {
                        "the attachment set is empty".into()
                    } else {
                        "the attachment set is not contractible".into()
                    }));
                }
            }
            Move::DeleteEdge(u, v) | Move::GlueEdge(u, v) => {
                let ok = if matches!(m, Move::DeleteEdge(..)) {
                    self.can_delete_edge(g, u, v)?
                } else {
                    self.can_glue_edge(g, u, v)?
                };
                if !ok {
                    let common = g.common_neighborhood(u, v)?;
                    return Err(illegal(if common.is_empty() {
                        "the common neighbourhood is empty".into()
                    } else {
                        "the common neighbourhood is not contractible".into()
                    }));
                }
            }
        }
        Ok(m.apply_to(g)?)
    }

    /// Vertices whose neighbourhood is contractible.
    pub fn contractible_vertices(&self, g: &Graph) -> VertexSet {
        if g.n() < 2 {
            return VertexSet::empty();
        }
        (0..g.n()).filter(|&v| self.is_contractible_set(g, g.neighbors(v))).collect()
    }

    fn set_contractible(&self, g: &Graph, s: VertexSet, budget: u32) -> bool {
        if s.is_empty() {
            return false;
        }
        if s.len() == 1 {
            return true;
        }
        if !g.is_connected_within(s) {
            return false;
        }
        if s.len() == 2 || self.cone_shortcut && g.is_cone_within(s) {
            return true;
        }
        self.decide(&g.induce(s), budget)
    }

    fn decide(&self, g: &Graph, budget: u32) -> bool {
        if g.n() == 1 {
            return true;
        }
        if !g.is_connected() {
            return false;
        }
        if self.cone_shortcut && g.cone_apex().is_some() {
            return true;
        }
        let key = g.canonical_key();
        let tag = self.policy.tag_with(budget);
        if let Some(v) = self.cache.get(&key, tag) {
            return v;
        }
        // Every move preserves the clique-complex Euler characteristic, and
        // K1 has characteristic 1.
        let verdict = g.clique_euler_characteristic() == 1 && self.winning_move(g, budget).is_some();
        self.cache.insert(key, tag, verdict);
        verdict
    }

    /// The first legal move (in search order) whose result is contractible,
    /// with the resulting graph and remaining gluing budget.
    ///
    /// Order: vertices with a cone neighbourhood, other vertices by
    /// ascending degree, edges by ascending common-neighbourhood size, then
    /// (budget permitting) edge and vertex gluings.
    fn winning_move(&self, g: &Graph, budget: u32) -> Option<(Move, Graph, u32)> {
        let n = g.n();
        if n < 2 {
            return None;
        }
        let mut by_degree: Vec<usize> = (0..n).filter(|&v| g.degree(v) > 0).collect();
        by_degree.sort_by_key(|&v| (g.degree(v), v));
        let (cone_nb, other): (Vec<usize>, Vec<usize>) =
            by_degree.into_iter().partition(|&v| self.cone_shortcut && g.is_cone_within(g.neighbors(v)));

        for &v in &cone_nb {
            let child = g.induce(g.vertices().without(v));
            if self.decide(&child, budget) {
                return Some((Move::DeleteVertex(v), child, budget));
            }
        }
        for &v in &other {
            if !self.set_contractible(g, g.neighbors(v), budget) {
                continue;
            }
            let child = g.induce(g.vertices().without(v));
            if self.decide(&child, budget) {
                return Some((Move::DeleteVertex(v), child, budget));
            }
        }

        if self.policy.moves == MoveSet::I1I3 {
            let mut edges: Vec<(usize, usize, usize)> = g
                .edges()
                .map(|(u, v)| (g.neighbors(u).intersection(g.neighbors(v)).len(), u, v))
                .filter(|&(k, _, _)| k > 0)
                .collect();
            edges.sort_unstable();
            for (_, u, v) in edges {
                let common = g.neighbors(u).intersection(g.neighbors(v));
                if !self.set_contractible(g, common, budget) {
                    continue;
                }
                let child = g.without_edge(u, v).expect("edge exists");
                if self.decide(&child, budget) {
                    return Some((Move::DeleteEdge(u, v), child, budget));
                }
            }
        }

        if budget == 0 || n == MAX_VERTICES {
            return None;
        }
        // A gluing and the check of its attachment share one unit of budget.
        let rest = budget - 1;
        if self.policy.moves == MoveSet::I1I3 {
            let mut pairs: Vec<(usize, usize, usize)> = g
                .non_edges()
                .map(|(u, v)| (g.neighbors(u).intersection(g.neighbors(v)).len(), u, v))
                .filter(|&(k, _, _)| k > 0)
                .collect();
            pairs.sort_unstable();
            for (_, u, v) in pairs {
                let common = g.neighbors(u).intersection(g.neighbors(v));
                if !self.set_contractible(g, common, rest) {
                    continue;
                }
                let child = g.with_edge(u, v).expect("pair is nonadjacent");
                if self.decide(&child, rest) {
                    return Some((Move::GlueEdge(u, v), child, rest));
                }
            }
        }
        // Gluing onto the whole vertex set only yields a cone over `g`.
        let full = g.vertices().bits();
        for bits in 1..full {
            let s = VertexSet::from_bits(bits);
            if !self.set_contractible(g, s, rest) {
                continue;
            }
            let child = g.with_vertex(s).expect("room for one more vertex");
            if self.decide(&child, rest) {
                return Some((Move::GlueVertex(s), child, rest));
            }
        }
        None
    }
}

/// Replays `cert` on `g`, checking every step's legality predicate with a
/// private cache. Succeeds iff every step is legal and the final graph is
/// `K1`.
pub fn replay_certificate(g: &Graph, cert: &Certificate, policy: Policy) -> Result<(), ReplayError> {
    let cache = MemoCache::new();
    let decider = Decider::new(&cache, policy);
    let mut cur = g.clone();
    for (step, m) in cert.steps.iter().enumerate() {
        cur = decider
            .apply_move(&cur, m)
            .map_err(|e| ReplayError { step, reason: e.to_string() })?;
    }
    if cur.n() != 1 {
        return Err(ReplayError {
            step: cert.steps.len(),
            reason: format!("final graph has {} vertices", cur.n()),
        });
    }
    Ok(())
}
