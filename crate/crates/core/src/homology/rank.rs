//! Exact matrix ranks over GF(2) and over the rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rank over GF(2) of the vectors in `rows`, each a little-endian bitset.
///
/// Vectors are reduced against a pivot table keyed by their highest set
/// bit, 64 coordinates per XOR.
pub fn gf2_rank(rows: Vec<Vec<u64>>) -> usize {
    let words = rows.iter().map(Vec::len).max().unwrap_or(0);
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; words * 64];
    let mut rank = 0;
    for mut row in rows {
        row.resize(words, 0);
        while let Some(lead) = highest_bit(&row) {
            match &pivots[lead] {
                Some(p) => {
                    for (a, b) in row.iter_mut().zip(p) {
                        *a ^= b;
                    }
                }
                None => {
                    pivots[lead] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

fn highest_bit(v: &[u64]) -> Option<usize> {
    v.iter()
        .enumerate()
        .rev()
        .find(|(_, &w)| w != 0)
        .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
}

/// Rank over the rationals by fraction-free (Bareiss) elimination. Runs in
/// `i128` and falls back to big integers if an intermediate overflows.
pub fn rational_rank(m: &[Vec<i64>]) -> usize {
    bareiss_i128(m).unwrap_or_else(|| bareiss_big(m))
}

fn bareiss_i128(m: &[Vec<i64>]) -> Option<usize> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev: i128 = 1;
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col];
        for i in rank + 1..rows {
            let lead = a[i][col];
            for j in col + 1..cols {
                let x = pivot.checked_mul(a[i][j])?.checked_sub(lead.checked_mul(a[rank][j])?)?;
                a[i][j] = x / prev;
            }
            a[i][col] = 0;
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Some(rank)
}

fn bareiss_big(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][col].clone();
        for i in rank + 1..rows {
            let lead = a[i][col].clone();
            for j in col + 1..cols {
                let x = &pivot * &a[i][j] - &lead * &a[rank][j];
                a[i][j] = x / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_small() {
        assert_eq!(gf2_rank(vec![]), 0);
        assert_eq!(gf2_rank(vec![vec![0b011], vec![0b110], vec![0b101]]), 2);
        assert_eq!(gf2_rank(vec![vec![0b001], vec![0b010], vec![0b100]]), 3);
        assert_eq!(gf2_rank(vec![vec![0, 1], vec![0, 1], vec![1, 0]]), 2);
    }

    #[test]
    fn rational_small() {
        assert_eq!(rational_rank(&[]), 0);
        assert_eq!(rational_rank(&[vec![1, 1], vec![1, -1]]), 2);
        assert_eq!(rational_rank(&[vec![1, 2, 3], vec![2, 4, 6]]), 1);
        assert_eq!(rational_rank(&[vec![0, 0], vec![0, 3]]), 1);
        // characteristic matters: over GF(2) this has rank 2
        assert_eq!(rational_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]), 3);
    }

    #[test]
    fn big_fallback_agrees() {
        let m: Vec<Vec<i64>> = (0..6)
            .map(|i| (0..6).map(|j| if i == j { i64::MAX / 3 } else { (i * 7 + j) as i64 - 17 }).collect())
            .collect();
        assert_eq!(bareiss_i128(&m), None);
        assert_eq!(rational_rank(&m), 6);
    }
}
