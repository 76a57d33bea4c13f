//! Simple undirected graphs on at most 64 vertices.
//!
//! Every adjacency row is a single `u64`, so neighbourhood, intersection and
//! containment tests are word operations. Values are immutable: all
//! transformations return a fresh [`Graph`].

use std::fmt;

use thiserror::Error;

/// Largest vertex count a [`Graph`] can hold.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} outside 1..=64")]
    VertexCount(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("expected two distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("{{{0}, {1}}} is not an edge")]
    NotAnEdge(usize, usize),
    #[error("vertices {0} and {1} are already adjacent")]
    AlreadyAdjacent(usize, usize),
    #[error("permutation is not a bijection on 0..{0}")]
    BadPermutation(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A set of vertex indices, one bit per vertex.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const fn empty() -> Self {
        VertexSet(0)
    }

    /// `{0, .., n-1}`.
    pub const fn full(n: usize) -> Self {
        if n >= 64 {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << n) - 1)
        }
    }

    pub const fn singleton(v: usize) -> Self {
        VertexSet(1u64 << v)
    }

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    #[must_use]
    pub const fn with(self, v: usize) -> Self {
        VertexSet(self.0 | 1u64 << v)
    }

    #[must_use]
    pub const fn without(self, v: usize) -> Self {
        VertexSet(self.0 & !(1u64 << v))
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub const fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Largest member.
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(VertexSet::empty(), VertexSet::with)
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

/// Ascending iterator over the members of a [`VertexSet`].
#[derive(Clone, Debug)]
pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Members {}

/// An undirected simple graph with vertices `0..n`, `1 <= n <= 64`.
///
/// The empty graph is deliberately unrepresentable: every operation that
/// could produce it (inducing on an empty set, deleting the last vertex)
/// fails instead.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        Ok(Graph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.check_pair(u, v)?;
            g.set_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency rows, checking the symmetry,
    /// loop-freedom and range invariants.
    pub fn from_adjacency(rows: Vec<u64>) -> Result<Self, GraphError> {
        let n = rows.len();
        if n == 0 || n > MAX_VERTICES {
            return Err(GraphError::VertexCount(n));
        }
        let range = VertexSet::full(n).bits();
        for (v, &row) in rows.iter().enumerate() {
            if row & !range != 0 {
                let bad = (row & !range).trailing_zeros() as usize;
                return Err(GraphError::VertexOutOfRange { vertex: bad, n });
            }
            if row >> v & 1 == 1 {
                return Err(GraphError::SameVertex(v));
            }
            for u in VertexSet(row) {
                if rows[u] >> v & 1 == 0 {
                    return Err(GraphError::Parse {
                        line: 0,
                        msg: format!("asymmetric adjacency between {v} and {u}"),
                    });
                }
            }
        }
        Ok(Graph { n, adj: rows })
    }

    /// `K_n`. Panics unless `1 <= n <= 64`.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n).expect("complete graph size");
        let all = VertexSet::full(n).bits();
        for v in 0..n {
            g.adj[v] = all & !(1u64 << v);
        }
        g
    }

    /// Path `0 - 1 - .. - n-1`. Panics unless `1 <= n <= 64`.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n).expect("path size");
        for v in 1..n {
            g.set_edge(v - 1, v);
        }
        g
    }

    /// Cycle `0 - 1 - .. - n-1 - 0`. Panics unless `3 <= n <= 64`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.set_edge(0, n - 1);
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// Raw adjacency rows.
    pub fn rows(&self) -> &[u64] {
        &self.adj
    }

    /// Neighbours of `v`; panics if `v` is out of range.
    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// `N_G(v)`.
    pub fn neighborhood(&self, v: usize) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(self.neighbors(v))
    }

    /// `N_G(u) ∩ N_G(v)`, independent of whether `u` and `v` are adjacent.
    pub fn common_neighborhood(&self, u: usize, v: usize) -> Result<VertexSet, GraphError> {
        self.check_pair(u, v)?;
        Ok(self.neighbors(u).intersection(self.neighbors(v)))
    }

    /// Subgraph induced on `s`, relabelled `0..|s|` in ascending original
    /// order.
    pub fn induced_subgraph(&self, s: VertexSet) -> Result<Graph, GraphError> {
        if s.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        self.check_set(s)?;
        Ok(self.induce(s))
    }

    /// Unchecked variant of [`Graph::induced_subgraph`] for hot loops; `s`
    /// must be a nonempty subset of the vertex set.
    pub(crate) fn induce(&self, s: VertexSet) -> Graph {
        debug_assert!(!s.is_empty() && s.is_subset(self.vertices()));
        let verts: Vec<usize> = s.iter().collect();
        let mut adj = vec![0u64; verts.len()];
        for (i, &v) in verts.iter().enumerate() {
            let row = self.adj[v] & s.bits();
            adj[i] = pext(row, s.bits());
        }
        Graph { n: verts.len(), adj }
    }

    pub fn is_connected(&self) -> bool {
        self.component_of(0) == self.vertices()
    }

    /// Vertices reachable from `v`.
    pub fn component_of(&self, v: usize) -> VertexSet {
        let mut seen = 1u64 << v;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for u in VertexSet(frontier) {
                next |= self.adj[u];
            }
            frontier = next & !seen;
            seen |= next;
        }
        VertexSet(seen)
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut rest = self.vertices();
        let mut count = 0;
        while let Some(v) = rest.first() {
            rest = rest.difference(self.component_of(v));
            count += 1;
        }
        count
    }

    /// Whether the induced subgraph on `s` is connected (false when empty).
    pub fn is_connected_within(&self, s: VertexSet) -> bool {
        let Some(start) = s.first() else {
            return false;
        };
        let mut seen = 1u64 << start;
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for u in VertexSet(frontier) {
                next |= self.adj[u];
            }
            next &= s.bits();
            frontier = next & !seen;
            seen |= next;
        }
        seen == s.bits()
    }

    /// A vertex adjacent to every other vertex, if any. `K1` counts as a
    /// cone with apex 0.
    pub fn cone_apex(&self) -> Option<usize> {
        let full = self.vertices().bits();
        (0..self.n).find(|&v| self.adj[v] | 1u64 << v == full)
    }

    /// Whether the subgraph induced on the nonempty set `s` is a cone.
    pub fn is_cone_within(&self, s: VertexSet) -> bool {
        s.iter()
            .any(|a| s.without(a).is_subset(VertexSet(self.adj[a])))
    }

    /// Euler characteristic of the clique complex: the alternating count of
    /// nonempty cliques, `#K1 - #K2 + #K3 - ...`.
    pub fn clique_euler_characteristic(&self) -> i64 {
        fn extend(adj: &[u64], cand: u64, sign: i64) -> i64 {
            let mut total = 0;
            let mut rest = cand;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                total += sign + extend(adj, rest & adj[v], -sign);
            }
            total
        }
        extend(&self.adj, self.vertices().bits(), 1)
    }

    /// All edges `(u, v)` with `u < v`, ordered by `(u, v)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            VertexSet(self.adj[u] & !((2u64 << u) - 1)).iter().map(move |v| (u, v))
        })
    }

    /// All nonadjacent pairs `(u, v)` with `u < v`.
    pub fn non_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let full = self.vertices().bits();
        (0..self.n).flat_map(move |u| {
            VertexSet(!self.adj[u] & full & !((2u64 << u) - 1))
                .iter()
                .map(move |v| (u, v))
        })
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_pair(u, v)?;
        if self.has_edge(u, v) {
            return Err(GraphError::AlreadyAdjacent(u, v));
        }
        let mut g = self.clone();
        g.set_edge(u, v);
        Ok(g)
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        self.check_pair(u, v)?;
        if !self.has_edge(u, v) {
            return Err(GraphError::NotAnEdge(u, v));
        }
        let mut g = self.clone();
        g.adj[u] &= !(1u64 << v);
        g.adj[v] &= !(1u64 << u);
        Ok(g)
    }

    /// Removes `v`; vertices above `v` shift down by one.
    pub fn without_vertex(&self, v: usize) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        if self.n == 1 {
            return Err(GraphError::VertexCount(0));
        }
        Ok(self.induce(self.vertices().without(v)))
    }

    /// Appends vertex `n` adjacent to exactly `attach`.
    pub fn with_vertex(&self, attach: VertexSet) -> Result<Graph, GraphError> {
        if self.n == MAX_VERTICES {
            return Err(GraphError::VertexCount(MAX_VERTICES + 1));
        }
        self.check_set(attach)?;
        let mut g = self.clone();
        let new = self.n;
        g.adj.push(attach.bits());
        g.n += 1;
        for u in attach {
            g.adj[u] |= 1u64 << new;
        }
        Ok(g)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph, GraphError> {
        if perm.len() != self.n {
            return Err(GraphError::BadPermutation(self.n));
        }
        let mut seen = 0u64;
        for &p in perm {
            if p >= self.n || seen >> p & 1 == 1 {
                return Err(GraphError::BadPermutation(self.n));
            }
            seen |= 1u64 << p;
        }
        Ok(self.relabel(perm))
    }

    pub(crate) fn relabel(&self, perm: &[usize]) -> Graph {
        let mut adj = vec![0u64; self.n];
        for v in 0..self.n {
            let mut row = 0u64;
            for u in VertexSet(self.adj[v]) {
                row |= 1u64 << perm[u];
            }
            adj[perm[v]] = row;
        }
        Graph { n: self.n, adj }
    }

    /// Parses the fixture edge-list format: a header line `n <count>`, then
    /// one `u v` pair per line using 1-based labels. Blank lines and `#`
    /// comments are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
        let mut graph: Option<Graph> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| GraphError::Parse { line: line_no, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match graph.as_mut() {
                None => {
                    if fields.len() != 2 || fields[0] != "n" {
                        return Err(err(format!("expected header `n <count>`, found `{line}`")));
                    }
                    let n: usize = fields[1]
                        .parse()
                        .map_err(|_| err(format!("bad vertex count `{}`", fields[1])))?;
                    graph = Some(Graph::new(n).map_err(|e| err(e.to_string()))?);
                }
                Some(g) => {
                    if fields.len() != 2 {
                        return Err(err(format!("expected `u v`, found `{line}`")));
                    }
                    let mut ends = [0usize; 2];
                    for (slot, f) in ends.iter_mut().zip(&fields) {
                        let label: usize =
                            f.parse().map_err(|_| err(format!("bad vertex label `{f}`")))?;
                        if label == 0 || label > g.n {
                            return Err(err(format!(
                                "vertex label {label} outside 1..={}",
                                g.n
                            )));
                        }
                        *slot = label - 1;
                    }
                    let [u, v] = ends;
                    if u == v {
                        return Err(err(format!("loop at vertex {}", u + 1)));
                    }
                    g.set_edge(u, v);
                }
            }
        }
        graph.ok_or(GraphError::Parse {
            line: 0,
            msg: "missing header `n <count>`".into(),
        })
    }

    /// Inverse of [`Graph::parse_edge_list`] (1-based labels, edges sorted).
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        out
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.adj[u] |= 1u64 << v;
        self.adj[v] |= 1u64 << u;
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<(), GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SameVertex(u));
        }
        Ok(())
    }

    fn check_set(&self, s: VertexSet) -> Result<(), GraphError> {
        match s.difference(self.vertices()).first() {
            None => Ok(()),
            Some(vertex) => Err(GraphError::VertexOutOfRange { vertex, n: self.n }),
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// Packs the bits of `x` selected by `mask` into the low bits of the result.
#[inline]
fn pext(x: u64, mask: u64) -> u64 {
    let mut out = 0u64;
    let mut k = 0;
    let mut m = mask;
    while m != 0 {
        let bit = m & m.wrapping_neg();
        if x & bit != 0 {
            out |= 1u64 << k;
        }
        k += 1;
        m &= m - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[usize]) -> VertexSet {
        vs.iter().copied().collect()
    }

    #[test]
    fn neighborhoods() {
        assert_eq!(Graph::complete(3).neighborhood(0).unwrap(), set(&[1, 2]));
        assert_eq!(Graph::new(1).unwrap().neighborhood(0).unwrap(), VertexSet::empty());
        assert_eq!(Graph::path(3).neighborhood(1).unwrap(), set(&[0, 2]));
        assert!(matches!(
            Graph::path(3).neighborhood(3),
            Err(GraphError::VertexOutOfRange { vertex: 3, n: 3 })
        ));
    }

    #[test]
    fn common_neighborhoods() {
        assert_eq!(Graph::cycle(4).common_neighborhood(0, 2).unwrap(), set(&[1, 3]));
        let k4 = Graph::complete(4);
        for (u, v) in k4.edges() {
            let rest = k4.vertices().without(u).without(v);
            assert_eq!(k4.common_neighborhood(u, v).unwrap(), rest);
        }
        assert_eq!(Graph::path(3).common_neighborhood(0, 2).unwrap(), set(&[1]));
        assert_eq!(Graph::path(3).common_neighborhood(1, 1), Err(GraphError::SameVertex(1)));
    }

    #[test]
    fn induced_subgraphs() {
        let k4 = Graph::complete(4);
        assert_eq!(k4.induced_subgraph(set(&[0, 1, 2])).unwrap(), Graph::complete(3));
        let c5 = Graph::cycle(5);
        let two = c5.induced_subgraph(set(&[0, 2])).unwrap();
        assert_eq!((two.n(), two.edge_count()), (2, 0));
        assert_eq!(c5.induced_subgraph(c5.vertices()).unwrap(), c5);
        assert_eq!(c5.induced_subgraph(VertexSet::empty()), Err(GraphError::EmptyVertexSet));
        // relabelling keeps ascending order: {1,3,4} of C5 is 3-4 plus isolated 1
        let sub = c5.induced_subgraph(set(&[1, 3, 4])).unwrap();
        assert_eq!(sub, Graph::from_edges(3, &[(1, 2)]).unwrap());
    }

    #[test]
    fn connectivity() {
        assert!(Graph::new(1).unwrap().is_connected());
        assert!(!Graph::new(2).unwrap().is_connected());
        assert!(Graph::cycle(6).is_connected());
        assert_eq!(Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap().component_count(), 3);
    }

    #[test]
    fn vertex_deletion_shifts_labels() {
        let p4 = Graph::path(4);
        let g = p4.without_vertex(1).unwrap();
        assert_eq!(g, Graph::from_edges(3, &[(1, 2)]).unwrap());
        assert!(Graph::new(1).unwrap().without_vertex(0).is_err());
    }

    #[test]
    fn gluing_appends_vertex() {
        let g = Graph::new(1).unwrap().with_vertex(set(&[0])).unwrap();
        assert_eq!(g, Graph::complete(2));
        assert!(Graph::path(2).with_vertex(set(&[5])).is_err());
    }

    #[test]
    fn euler_characteristic() {
        assert_eq!(Graph::complete(4).clique_euler_characteristic(), 1);
        assert_eq!(Graph::cycle(5).clique_euler_characteristic(), 0);
        assert_eq!(Graph::new(3).unwrap().clique_euler_characteristic(), 3);
        let pairs: Vec<_> = (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).filter(|&(u, v)| v != u + 3).collect();
        let octahedron = Graph::from_edges(6, &pairs).unwrap();
        assert_eq!(octahedron.clique_euler_characteristic(), 2);
    }

    #[test]
    fn cone_detection() {
        assert_eq!(Graph::complete(5).cone_apex(), Some(0));
        assert_eq!(Graph::path(3).cone_apex(), Some(1));
        assert_eq!(Graph::cycle(4).cone_apex(), None);
        assert_eq!(Graph::new(1).unwrap().cone_apex(), Some(0));
    }

    #[test]
    fn edge_list_roundtrip_and_errors() {
        let text = "# triangle\nn 3\n1 2\n\n2 3 # spoke\n1 3\n";
        let g = Graph::parse_edge_list(text).unwrap();
        assert_eq!(g, Graph::complete(3));
        assert_eq!(Graph::parse_edge_list(&g.to_edge_list()).unwrap(), g);
        assert!(matches!(Graph::parse_edge_list(""), Err(GraphError::Parse { .. })));
        assert!(matches!(
            Graph::parse_edge_list("n 3\n1 4\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            Graph::parse_edge_list("n 3\n2 2\n"),
            Err(GraphError::Parse { line: 2, .. })
        ));
        assert!(Graph::parse_edge_list("n 0\n").is_err());
    }

    #[test]
    fn adjacency_invariants_checked() {
        assert!(Graph::from_adjacency(vec![0b10, 0b01]).is_ok());
        assert!(Graph::from_adjacency(vec![0b10, 0b00]).is_err());
        assert!(Graph::from_adjacency(vec![0b01]).is_err());
        assert!(Graph::from_adjacency(vec![0b100, 0b000]).is_err());
    }

    #[test]
    fn full_width_sets() {
        let g = Graph::complete(64);
        assert_eq!(g.degree(63), 63);
        assert!(g.is_connected());
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(g.without_vertex(0).unwrap(), Graph::complete(63));
    }
}
