//! Connected graphs up to isomorphism by canonical augmentation.
//!
//! Every connected graph on `n` vertices arises from a connected graph on
//! `n - 1` vertices by adding a vertex with a nonempty neighbour set. A
//! child is kept only if its new vertex lies in the orbit of the
//! designated vertex: the non-cut vertex with the largest canonical label.
//! Remaining duplicates (equivalent augmentations of one parent) are removed
//! by canonical key.

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonical_form, canonical_form_colored, CanonicalKey};
use crate::graph::{Graph, VertexSet};

/// Largest vertex count the enumerator accepts.
pub const MAX_ENUMERATION_N: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("vertex count {0} outside 1..={MAX_ENUMERATION_N}")]
    OutOfRange(usize),
}

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, in ascending canonical-key order. Representatives are the
/// canonical graphs.
pub fn enumerate_connected(n: usize) -> Result<Vec<Graph>, EnumError> {
    Ok(connected_keys(n)?.into_iter().map(|k| k.to_graph()).collect())
}

/// Canonical keys of the connected graphs on `n` vertices, ascending.
pub fn connected_keys(n: usize) -> Result<Vec<CanonicalKey>, EnumError> {
    let mut levels = connected_levels(n)?;
    Ok(levels.pop().expect("at least one level"))
}

/// Canonical keys for every `k` in `1..=max_n`; index `k - 1` holds
/// vertex count `k`.
pub fn connected_levels(max_n: usize) -> Result<Vec<Vec<CanonicalKey>>, EnumError> {
    if max_n == 0 || max_n > MAX_ENUMERATION_N {
        return Err(EnumError::OutOfRange(max_n));
    }
    let mut levels = vec![vec![Graph::new(1).expect("K1").canonical_key()]];
    for _ in 2..=max_n {
        let next = augment(levels.last().expect("nonempty"));
        levels.push(next);
    }
    Ok(levels)
}

fn augment(parents: &[CanonicalKey]) -> Vec<CanonicalKey> {
    let mut children: Vec<CanonicalKey> = parents
        .par_iter()
        .flat_map_iter(|key| {
            let parent = key.to_graph();
            let full = parent.vertices().bits();
            (1..=full).filter_map(move |bits| {
                let child = parent.with_vertex(VertexSet::from_bits(bits)).expect("n < 64");
                accept(&child).then(|| canonical_form(&child).key)
            })
        })
        .collect();
    children.par_sort_unstable();
    children.dedup();
    children
}

/// Canonical-augmentation test for the last vertex of `child`.
fn accept(child: &Graph) -> bool {
    let n = child.n();
    let new = n - 1;
    let form = canonical_form(child);
    let designated = (0..n)
        .filter(|&v| child.without_vertex(v).is_ok_and(|h| h.is_connected()))
        .max_by_key(|&v| form.labeling[v])
        .expect("a connected graph has a non-cut vertex");
    if designated == new {
        return true;
    }
    if child.degree(designated) != child.degree(new) {
        return false;
    }
    let marked = |v: usize| {
        let mut colors = vec![0u8; n];
        colors[v] = 1;
        canonical_form_colored(child, &colors).key
    };
    marked(designated) == marked(new)
}
