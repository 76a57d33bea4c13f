#![allow(dead_code)]

use contractible::Graph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdős–Rényi graph with edge probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// Every labelled graph on `n` vertices, by edge subset.
pub fn all_labelled(n: usize) -> impl Iterator<Item = Graph> {
    let ps = pairs(n);
    (0u64..1 << ps.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> = ps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        Graph::from_edges(n, &edges).unwrap()
    })
}

/// Upper triangle of the adjacency matrix under `perm`, as a bit vector.
fn code(g: &Graph, perm: &[usize]) -> Vec<bool> {
    let n = g.n();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    pairs(n).into_iter().map(|(a, b)| g.has_edge(inv[a], inv[b])).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Isomorphism-class representative by minimising over all `n!` relabellings.
pub struct BruteCanon {
    perms: Vec<Vec<usize>>,
}

impl BruteCanon {
    pub fn new(n: usize) -> Self {
        BruteCanon { perms: permutations(n) }
    }

    pub fn key(&self, g: &Graph) -> Vec<bool> {
        self.perms.iter().map(|p| code(g, p)).min().unwrap()
    }
}
