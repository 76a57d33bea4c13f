//! Exact canonical labelling by individualisation and refinement.
//!
//! The search tree is the usual one: start from the degree partition, refine
//! to an equitable ordered partition, branch on the first smallest
//! non-singleton cell. Every leaf is a labelling; the canonical key is the
//! lexicographically least upper-triangle bitstring among the leaves.
//! Subtrees are cut when their fixed prefix already exceeds the best leaf,
//! and by automorphisms discovered from equal leaves.

use std::cmp::Ordering;
use std::fmt;

use crate::graph::{Graph, VertexSet};

/// Complete isomorphism invariant: the vertex count followed by the upper
/// triangle of the canonically relabelled adjacency matrix, column by
/// column (`x(0,1), x(0,2), x(1,2), x(0,3), ..`), packed most significant
/// bit first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(Box<[u8]>);

/// A canonical key together with the labelling that realises it.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// `labeling[v]` is the canonical label of vertex `v`.
    pub labeling: Vec<usize>,
}

impl CanonicalForm {
    /// The canonically relabelled graph.
    pub fn graph(&self) -> Graph {
        self.key.to_graph()
    }
}

impl CanonicalKey {
    pub fn n(&self) -> usize {
        self.0[0] as usize
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Parses the output of [`CanonicalKey::to_hex`] for an uncoloured key.
    pub fn from_hex(s: &str) -> Option<CanonicalKey> {
        if s.len() % 2 != 0 || s.is_empty() {
            return None;
        }
        let bytes: Option<Vec<u8>> = (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(s.get(i..i + 2)?, 16).ok())
            .collect();
        let bytes = bytes?;
        let n = bytes[0] as usize;
        if n == 0 || n > 64 || bytes.len() != 1 + packed_len(n) {
            return None;
        }
        let nbits = n * (n - 1) / 2;
        if nbits % 8 != 0 {
            let last = *bytes.last()?;
            if last & (0xffu8 >> (nbits % 8)) != 0 {
                return None;
            }
        }
        Some(CanonicalKey(bytes.into_boxed_slice()))
    }

    /// Rebuilds the canonical representative.
    pub fn to_graph(&self) -> Graph {
        let n = self.n();
        let bits = &self.0[1..];
        let mut rows = vec![0u64; n];
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if bits[k / 8] >> (7 - k % 8) & 1 == 1 {
                    rows[i] |= 1u64 << j;
                    rows[j] |= 1u64 << i;
                }
                k += 1;
            }
        }
        Graph::from_adjacency(rows).expect("canonical key decodes to a valid graph")
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalKey({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Graph {
    pub fn canonical_key(&self) -> CanonicalKey {
        canonical_form(self).key
    }

    /// Whether `self` and `other` are isomorphic.
    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.n() == other.n()
            && self.edge_count() == other.edge_count()
            && self.canonical_key() == other.canonical_key()
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_form_colored(g, &vec![0; g.n()])
}

/// Canonical form of a vertex-coloured graph: isomorphisms must preserve
/// colours. Colour classes occupy label ranges in ascending colour order,
/// and the key records the colour of every label.
pub fn canonical_form_colored(g: &Graph, colors: &[u8]) -> CanonicalForm {
    assert_eq!(colors.len(), g.n(), "one colour per vertex");
    let n = g.n();
    let mut classes: Vec<(u8, usize, u64)> = Vec::new();
    for v in 0..n {
        let c = (colors[v], g.degree(v));
        match classes.iter_mut().find(|(col, deg, _)| (*col, *deg) == c) {
            Some(slot) => slot.2 |= 1u64 << v,
            None => classes.push((c.0, c.1, 1u64 << v)),
        }
    }
    classes.sort_unstable_by_key(|&(c, d, _)| (c, d));
    let mut cells: Vec<u64> = classes.into_iter().map(|(_, _, m)| m).collect();
    refine(g, &mut cells);

    let mut search = Search { g, best: None, automorphisms: Vec::new() };
    search.explore(cells, &mut Vec::new());
    let best = search.best.expect("search tree has at least one leaf");

    let colored = colors.iter().any(|&c| c != 0);
    let mut bytes = Vec::with_capacity(1 + best.bits.len() + if colored { n } else { 0 });
    bytes.push(n as u8);
    bytes.extend_from_slice(&best.bits);
    if colored {
        let mut by_label = vec![0u8; n];
        for v in 0..n {
            by_label[best.labeling[v]] = colors[v];
        }
        bytes.extend_from_slice(&by_label);
    }
    CanonicalForm { key: CanonicalKey(bytes.into_boxed_slice()), labeling: best.labeling }
}

struct Leaf {
    bits: Vec<u8>,
    labeling: Vec<usize>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    best: Option<Leaf>,
    automorphisms: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Returns `Some(d)` when every remaining leaf below depth `d` is known to
    /// repeat an explored one, so ancestors deeper than `d` should stop.
    fn explore(&mut self, cells: Vec<u64>, path: &mut Vec<usize>) -> Option<usize> {
        let n = self.g.n();
        let depth = path.len();

        let fixed = cells.iter().take_while(|c| c.count_ones() == 1).count();
        if fixed >= 2 && fixed < n {
            if let Some(best) = &self.best {
                let order: Vec<usize> =
                    cells[..fixed].iter().map(|c| c.trailing_zeros() as usize).collect();
                let prefix = pack_upper_triangle(self.g, &order);
                if cmp_prefix(&prefix, &best.bits, fixed * (fixed - 1) / 2) == Ordering::Greater {
                    return None;
                }
            }
        }

        if cells.len() == n {
            return self.leaf(&cells, path);
        }

        let target = (0..cells.len())
            .filter(|&i| cells[i].count_ones() > 1)
            .min_by_key(|&i| (cells[i].count_ones(), i))
            .expect("non-discrete partition has a non-singleton cell");

        let mut explored: Vec<usize> = Vec::new();
        for w in VertexSet::from_bits(cells[target]) {
            if !explored.is_empty() && self.same_orbit_as_any(path, &explored, w) {
                continue;
            }
            explored.push(w);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(1u64 << w);
            child.push(cells[target] & !(1u64 << w));
            child.extend_from_slice(&cells[target + 1..]);
            refine(self.g, &mut child);

            path.push(w);
            let back = self.explore(child, path);
            path.pop();
            if let Some(d) = back {
                if d < depth {
                    return Some(d);
                }
            }
        }
        None
    }

    fn leaf(&mut self, cells: &[u64], path: &[usize]) -> Option<usize> {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let bits = pack_upper_triangle(self.g, &order);
        let mut labeling = vec![0usize; order.len()];
        for (label, &v) in order.iter().enumerate() {
            labeling[v] = label;
        }
        let Some(best) = &self.best else {
            self.best = Some(Leaf { bits, labeling, path: path.to_vec() });
            return None;
        };
        match bits.cmp(&best.bits) {
            Ordering::Less => {
                self.best = Some(Leaf { bits, labeling, path: path.to_vec() });
                None
            }
            Ordering::Greater => None,
            Ordering::Equal => {
                // Both labellings give the same graph, so this maps the best
                // leaf's vertices onto ours.
                let sigma: Vec<usize> = best.labeling.iter().map(|&l| order[l]).collect();
                let divergence = (best.path.len() == path.len()
                    && best.path.iter().zip(path).all(|(&b, &c)| sigma[b] == c))
                .then(|| best.path.iter().zip(path).position(|(b, c)| b != c))
                .flatten();
                if sigma.iter().enumerate().any(|(v, &s)| v != s) {
                    self.automorphisms.push(sigma);
                }
                divergence
            }
        }
    }

    /// Orbit test under the known automorphisms that fix `path` pointwise.
    fn same_orbit_as_any(&self, path: &[usize], explored: &[usize], w: usize) -> bool {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut any = false;
        for sigma in &self.automorphisms {
            if path.iter().any(|&p| sigma[p] != p) {
                continue;
            }
            any = true;
            for (v, &s) in sigma.iter().enumerate() {
                let (a, b) = (find(&mut parent, v), find(&mut parent, s));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut parent, w);
        explored.iter().any(|&e| find(&mut parent, e) == root)
    }
}

/// Refines an ordered partition to the coarsest equitable refinement.
/// Cells split by the vector of neighbour counts into every current cell;
/// fragments are ordered by that vector, so the result is equivariant.
fn refine(g: &Graph, cells: &mut Vec<u64>) {
    loop {
        let mut next: Vec<u64> = Vec::with_capacity(g.n());
        let mut changed = false;
        for &cell in cells.iter() {
            if cell.count_ones() == 1 {
                next.push(cell);
                continue;
            }
            let mut sigs: Vec<(Vec<u8>, usize)> = VertexSet::from_bits(cell)
                .iter()
                .map(|v| {
                    let row = g.rows()[v];
                    (cells.iter().map(|&c| (row & c).count_ones() as u8).collect(), v)
                })
                .collect();
            sigs.sort_unstable();
            let mut current = 0u64;
            let mut pieces = 0;
            for i in 0..sigs.len() {
                if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                    next.push(current);
                    current = 0;
                    pieces += 1;
                }
                current |= 1u64 << sigs[i].1;
            }
            next.push(current);
            if pieces > 0 {
                changed = true;
            }
        }
        *cells = next;
        if !changed {
            return;
        }
    }
}

fn packed_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(8)
}

/// Upper-triangle bits of `g` relabelled so that `order[i]` gets label `i`,
/// restricted to the first `order.len()` labels.
fn pack_upper_triangle(g: &Graph, order: &[usize]) -> Vec<u8> {
    let k = order.len();
    let mut out = vec![0u8; packed_len(k)];
    let mut pos = 0;
    for j in 1..k {
        let row = g.rows()[order[j]];
        for &u in &order[..j] {
            if row >> u & 1 == 1 {
                out[pos / 8] |= 0x80 >> (pos % 8);
            }
            pos += 1;
        }
    }
    out
}

fn cmp_prefix(a: &[u8], b: &[u8], nbits: usize) -> Ordering {
    let whole = nbits / 8;
    match a[..whole].cmp(&b[..whole]) {
        Ordering::Equal => {}
        other => return other,
    }
    let rem = nbits % 8;
    if rem == 0 {
        return Ordering::Equal;
    }
    let mask = !(0xffu8 >> rem);
    (a[whole] & mask).cmp(&(b[whole] & mask))
}
