mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::Rng;

use contractible::homology::rank::{gf2_rank, rational_rank};
use contractible::homology::{betti, boundary_rank, full_clique_complex, integral_homology, smith_normal_form, Field};
use contractible::{fixtures, Graph};

fn q_rank_oracle(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    gauss(&mut a)
}

fn gauss(a: &mut [Vec<BigRational>]) -> usize {
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            if !a[r][c].is_zero() {
                let f = &a[r][c] / &a[rank][c];
                for j in c..cols {
                    let t = &f * &a[rank][j];
                    a[r][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn det_oracle(m: &[Vec<i64>]) -> BigRational {
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect();
    let n = a.len();
    let mut det = BigRational::from_integer(BigInt::from(1));
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(c, p);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

fn gf2_rank_oracle(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|&x| x % 2 != 0).collect()).collect();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..a.len()).find(|&r| a[r][c]) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..a.len() {
            if a[r][c] {
                for j in c..cols {
                    a[r][j] ^= a[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64, density: f64) -> Vec<Vec<i64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| if rng.gen_bool(density) { rng.gen_range(-bound..=bound) } else { 0 }).collect())
        .collect()
}

/// Flag complex of the barycentric subdivision of the six-vertex
/// triangulated projective plane.
fn projective_plane() -> Graph {
    const FACETS: [[usize; 3]; 10] =
        [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6], [2, 3, 5], [2, 4, 5], [3, 5, 6], [3, 4, 6], [2, 4, 6]];
    let mut faces: Vec<u64> = Vec::new();
    for f in FACETS {
        let bits: Vec<u64> = f.iter().map(|v| 1u64 << v).collect();
        for mask in 1..8u32 {
            let s = (0..3).filter(|i| mask >> i & 1 == 1).fold(0, |acc, i| acc | bits[i]);
            if !faces.contains(&s) {
                faces.push(s);
            }
        }
    }
    let mut g = Graph::new(faces.len()).unwrap();
    for i in 0..faces.len() {
        for j in 0..faces.len() {
            if i != j && faces[i] & faces[j] == faces[i] {
                g = g.with_edge(i, j).unwrap();
            }
        }
    }
    g
}

#[test]
fn boundary_ranks_match_oracles() {
    let mut rng = common::rng(3);
    for i in 0..150 {
        let p = 0.3 + 0.5 * rng.gen::<f64>();
        let g = common::random_graph(&mut rng, 4 + i % 7, p);
        let c = full_clique_complex(&g);
        for p in 1..=c.dimension() {
            let m = c.boundary_matrix(p);
            assert_eq!(boundary_rank(&c, p, Field::Rational), q_rank_oracle(&m));
            assert_eq!(boundary_rank(&c, p, Field::Gf2), gf2_rank_oracle(&m));
            assert_eq!(rational_rank(&m), q_rank_oracle(&m));
        }
    }
}

#[test]
fn rational_rank_survives_overflow() {
    let mut rng = common::rng(5);
    for _ in 0..100 {
        let (r, c) = (rng.gen_range(1..9), rng.gen_range(1..9));
        let m = random_matrix(&mut rng, r, c, i64::MAX / 4, 0.8);
        assert_eq!(rational_rank(&m), q_rank_oracle(&m));
        // a dependent row keeps the rank
        let mut dup = m.clone();
        dup.push(m[0].clone());
        assert_eq!(rational_rank(&dup), q_rank_oracle(&m));
    }
}

#[test]
fn gf2_rank_of_bitsets() {
    let mut rng = common::rng(6);
    for _ in 0..200 {
        let (r, c) = (rng.gen_range(1..40), rng.gen_range(1..150));
        let m = random_matrix(&mut rng, r, c, 1, 0.3);
        let rows = m
            .iter()
            .map(|row| {
                let mut w = vec![0u64; c.div_ceil(64)];
                for (j, &x) in row.iter().enumerate() {
                    if x != 0 {
                        w[j / 64] |= 1 << (j % 64);
                    }
                }
                w
            })
            .collect();
        assert_eq!(gf2_rank(rows), gf2_rank_oracle(&m));
    }
}

#[test]
fn smith_form_invariants() {
    let mut rng = common::rng(7);
    for _ in 0..300 {
        let n = rng.gen_range(1..7);
        let (r, c) = if rng.gen_bool(0.5) { (n, n) } else { (rng.gen_range(1..7), rng.gen_range(1..7)) };
        let m = random_matrix(&mut rng, r, c, 9, 0.6);
        let d = smith_normal_form(&m).unwrap();
        assert_eq!(d.rank(), q_rank_oracle(&m));
        assert!(d.factors.iter().all(|&x| x > 0));
        for w in d.factors.windows(2) {
            assert_eq!(w[1] % w[0], 0, "{:?}", d.factors);
        }
        if r == c {
            let det = det_oracle(&m).abs();
            let prod = d.factors.iter().fold(BigInt::from(1), |acc, &x| acc * BigInt::from(x));
            let expect = if d.rank() == r { prod } else { BigInt::zero() };
            assert_eq!(BigRational::from_integer(expect), det);
        }
    }
    assert_eq!(smith_normal_form(&[vec![2, 4], vec![6, 8]]).unwrap().factors, vec![2, 4]);
    assert!(smith_normal_form(&[vec![1, 2], vec![3]]).is_err());
    assert!(smith_normal_form(&[]).unwrap().factors.is_empty());
}

#[test]
fn f_vectors() {
    assert_eq!(full_clique_complex(&Graph::complete(3)).f_vector(), vec![3, 3, 1]);
    assert_eq!(full_clique_complex(&Graph::cycle(4)).f_vector(), vec![4, 4]);
    let octahedron = Graph::complete(6).without_edge(0, 1).unwrap().without_edge(2, 3).unwrap().without_edge(4, 5).unwrap();
    assert_eq!(full_clique_complex(&octahedron).f_vector(), vec![6, 12, 8]);
    assert_eq!(full_clique_complex(&Graph::complete(5)).f_vector(), vec![5, 10, 10, 5, 1]);
}

#[test]
fn small_betti_numbers() {
    for f in [Field::Gf2, Field::Rational] {
        assert_eq!(betti(&Graph::cycle(5), f, false).trimmed(), &[1, 1]);
        assert_eq!(betti(&Graph::complete(4), f, false).trimmed(), &[1]);
        assert!(betti(&Graph::complete(4), f, true).is_zero());
        assert_eq!(betti(&Graph::new(3).unwrap(), f, true).trimmed(), &[2]);
        assert!(betti(&fixtures::heart(), f, true).is_zero());
        let octahedron = Graph::complete(6).without_edge(0, 1).unwrap().without_edge(2, 3).unwrap().without_edge(4, 5).unwrap();
        assert_eq!(betti(&octahedron, f, false).trimmed(), &[1, 0, 1]);
    }
}

#[test]
fn projective_plane_has_two_torsion() {
    let g = projective_plane();
    assert_eq!(g.n(), 31);
    let c = full_clique_complex(&g);
    assert_eq!(c.f_vector(), vec![31, 90, 60]);
    assert_eq!(betti(&g, Field::Gf2, false).trimmed(), &[1, 1, 1]);
    assert_eq!(betti(&g, Field::Rational, false).trimmed(), &[1]);
    let z = integral_homology(&g).unwrap();
    assert_eq!((z[0].rank, z[1].rank, z[2].rank), (1, 0, 0));
    assert_eq!(z[1].torsion, vec![2]);
    assert!(z[0].torsion.is_empty() && z[2].torsion.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn euler_characteristic_three_ways(seed in any::<u64>(), n in 1usize..=10, p in 0.1f64..0.9) {
        let g = common::random_graph(&mut common::rng(seed), n, p);
        let f = full_clique_complex(&g).f_vector();
        let chi: i64 = f.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        prop_assert_eq!(chi, g.clique_euler_characteristic());
        for field in [Field::Gf2, Field::Rational] {
            prop_assert_eq!(betti(&g, field, false).euler_characteristic(), chi);
            prop_assert_eq!(betti(&g, field, true).euler_characteristic(), chi);
        }
    }

    #[test]
    fn gf2_dominates_rational(seed in any::<u64>(), n in 1usize..=10, p in 0.1f64..0.9) {
        let g = common::random_graph(&mut common::rng(seed), n, p);
        let two = betti(&g, Field::Gf2, false);
        let q = betti(&g, Field::Rational, false);
        for (a, b) in two.betti.iter().zip(&q.betti) {
            prop_assert!(a >= b);
        }
        let z = integral_homology(&g).unwrap();
        let ranks: Vec<usize> = z.iter().map(|h| h.rank).collect();
        prop_assert_eq!(&ranks[..], &q.betti[..]);
        prop_assert_eq!(betti(&g, Field::Rational, false).betti[0], g.component_count());
    }
}
