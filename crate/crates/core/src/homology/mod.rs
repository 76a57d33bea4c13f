//! Simplicial homology of clique complexes.
//!
//! The `p`-simplices of a graph's clique complex are its `(p+1)`-cliques.
//! Boundaries carry the usual alternating signs, rows and columns ordered
//! lexicographically by sorted vertex list. Betti numbers are
//! `beta_p = f_p - rank d_p - rank d_(p+1)`.

pub mod rank;
pub mod snf;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::contract::{Decider, Move, MoveError};
use crate::graph::{Graph, VertexSet};

pub use snf::{smith_normal_form, SnfDiagonal, SnfError};

/// Coefficient field for ranks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Field {
    #[serde(rename = "GF2")]
    Gf2,
    #[serde(rename = "Q")]
    Rational,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Gf2 => "GF2",
            Field::Rational => "Q",
        })
    }
}

/// Cliques of a graph by dimension; `simplices(p)` lists the `(p+1)`-cliques
/// in lexicographic order of their sorted vertex lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliqueComplex {
    levels: Vec<Vec<VertexSet>>,
}

impl CliqueComplex {
    /// Top dimension present (at least 0).
    pub fn dimension(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn simplices(&self, p: usize) -> &[VertexSet] {
        self.levels.get(p).map_or(&[], Vec::as_slice)
    }

    /// `f_p` for `p = 0..=dimension`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Boundary matrix of `d_p`: rows are `(p-1)`-simplices, columns are
    /// `p`-simplices. Removing the `i`-th vertex (sorted order) contributes
    /// `(-1)^i`.
    pub fn boundary_matrix(&self, p: usize) -> Vec<Vec<i64>> {
        assert!(p >= 1, "d_0 is the zero map");
        let faces = self.simplices(p - 1);
        let cells = self.simplices(p);
        let index: HashMap<u64, usize> = faces.iter().enumerate().map(|(i, s)| (s.bits(), i)).collect();
        let mut m = vec![vec![0i64; cells.len()]; faces.len()];
        for (j, s) in cells.iter().enumerate() {
            for (i, v) in s.iter().enumerate() {
                let row = index[&s.without(v).bits()];
                m[row][j] = if i % 2 == 0 { 1 } else { -1 };
            }
        }
        m
    }
}

/// All cliques with at most `pmax + 1` vertices.
pub fn clique_complex(g: &Graph, pmax: usize) -> CliqueComplex {
    let mut levels = vec![(0..g.n()).map(VertexSet::singleton).collect::<Vec<_>>()];
    while levels.len() <= pmax {
        let prev = levels.last().expect("nonempty");
        let mut next = Vec::new();
        for &s in prev {
            let top = s.last().expect("simplices are nonempty");
            let common = s
                .iter()
                .fold(g.vertices(), |acc, v| acc.intersection(g.neighbors(v)));
            let above = VertexSet::from_bits(common.bits() & !((2u64 << top) - 1));
            next.extend(above.iter().map(|w| s.with(w)));
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    CliqueComplex { levels }
}

/// The full clique complex.
pub fn full_clique_complex(g: &Graph) -> CliqueComplex {
    clique_complex(g, g.n())
}

/// Rank of `d_p` over `field`; zero above the top dimension.
pub fn boundary_rank(c: &CliqueComplex, p: usize, field: Field) -> usize {
    assert!(p >= 1, "d_0 is the zero map");
    if p > c.dimension() {
        return 0;
    }
    match field {
        Field::Gf2 => {
            let faces = c.simplices(p - 1);
            let index: HashMap<u64, usize> =
                faces.iter().enumerate().map(|(i, s)| (s.bits(), i)).collect();
            let words = faces.len().div_ceil(64);
            let columns = c
                .simplices(p)
                .iter()
                .map(|s| {
                    let mut col = vec![0u64; words];
                    for v in s.iter() {
                        let r = index[&s.without(v).bits()];
                        col[r / 64] |= 1u64 << (r % 64);
                    }
                    col
                })
                .collect();
            rank::gf2_rank(columns)
        }
        Field::Rational => rank::rational_rank(&c.boundary_matrix(p)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub betti: Vec<usize>,
    pub reduced: bool,
    pub field: Field,
}

impl BettiVector {
    /// Betti numbers with trailing zeros removed.
    pub fn trimmed(&self) -> &[usize] {
        let end = self.betti.iter().rposition(|&b| b != 0).map_or(0, |i| i + 1);
        &self.betti[..end]
    }

    pub fn is_zero(&self) -> bool {
        self.betti.iter().all(|&b| b == 0)
    }

    /// Alternating sum, with the reduced shift undone.
    pub fn euler_characteristic(&self) -> i64 {
        let s: i64 = self
            .betti
            .iter()
            .enumerate()
            .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum();
        if self.reduced { s + 1 } else { s }
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.betti.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn betti(g: &Graph, field: Field, reduced: bool) -> BettiVector {
    betti_of(&full_clique_complex(g), field, reduced)
}

/// Betti numbers `beta_0..=beta_pmax` from a complex built to `pmax + 1`.
pub fn betti_truncated(g: &Graph, field: Field, reduced: bool, pmax: usize) -> BettiVector {
    let c = clique_complex(g, pmax + 1);
    let mut b = betti_of(&c, field, reduced);
    b.betti.truncate(pmax + 1);
    b
}

/// Betti numbers of the complex as given (top boundary treated as zero).
pub fn betti_of(c: &CliqueComplex, field: Field, reduced: bool) -> BettiVector {
    let dim = c.dimension();
    let ranks: Vec<usize> = (0..=dim + 1)
        .map(|p| if p == 0 { 0 } else { boundary_rank(c, p, field) })
        .collect();
    let mut betti: Vec<usize> = (0..=dim)
        .map(|p| c.simplices(p).len() - ranks[p] - ranks[p + 1])
        .collect();
    if reduced {
        betti[0] -= 1;
    }
    BettiVector { betti, reduced, field }
}

/// Integral homology in one dimension: free rank plus torsion coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralGroup {
    pub rank: usize,
    pub torsion: Vec<i128>,
}

/// `H_p(G; Z)` for every dimension of the full clique complex, via the
/// invariant factors of each boundary matrix.
pub fn integral_homology(g: &Graph) -> Result<Vec<IntegralGroup>, SnfError> {
    let c = full_clique_complex(g);
    let dim = c.dimension();
    let mut diagonals: Vec<Option<SnfDiagonal>> = vec![None];
    for p in 1..=dim {
        diagonals.push(Some(smith_normal_form(&c.boundary_matrix(p))?));
    }
    diagonals.push(None);
    let rank_of = |d: &Option<SnfDiagonal>| d.as_ref().map_or(0, SnfDiagonal::rank);
    Ok((0..=dim)
        .map(|p| IntegralGroup {
            rank: c.simplices(p).len() - rank_of(&diagonals[p]) - rank_of(&diagonals[p + 1]),
            torsion: diagonals[p + 1].as_ref().map_or_else(Vec::new, SnfDiagonal::torsion),
        })
        .collect())
}

/// Whether a legal move leaves the Betti numbers unchanged over both GF(2)
/// and the rationals. Illegal moves are rejected.
pub fn check_invariance(decider: &Decider, g: &Graph, m: &Move) -> Result<bool, MoveError> {
    let h = decider.apply_move(g, m)?;
    Ok(same_homology(g, &h))
}

/// Betti numbers agree over both fields (trailing zeros ignored).
pub fn same_homology(g: &Graph, h: &Graph) -> bool {
    [Field::Gf2, Field::Rational]
        .into_iter()
        .all(|f| betti(g, f, false).trimmed() == betti(h, f, false).trimmed())
}
