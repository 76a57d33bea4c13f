//! Smith normal form of small integer matrices.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SnfError {
    #[error("integer overflow during Smith normal form elimination")]
    Overflow,
    #[error("row {0} has a different length from row 0")]
    Ragged(usize),
}

/// Nonzero invariant factors `d1 | d2 | ..`, all positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDiagonal {
    pub factors: Vec<i128>,
}

impl SnfDiagonal {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Factors greater than one: the torsion coefficients of the cokernel.
    pub fn torsion(&self) -> Vec<i128> {
        self.factors.iter().copied().filter(|&d| d > 1).collect()
    }
}

/// Invariant factors of `m` by integer row and column operations, always
/// pivoting on an entry of least absolute value.
pub fn smith_normal_form(m: &[Vec<i64>]) -> Result<SnfDiagonal, SnfError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if let Some(i) = m.iter().position(|r| r.len() != cols) {
        return Err(SnfError::Ragged(i));
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut factors = Vec::new();

    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        move_to(&mut a, t, pi, pj);
        loop {
            let pivot = a[t][t];
            for i in t + 1..rows {
                let q = a[i][t] / pivot;
                if q != 0 {
                    sub_row(&mut a, i, t, q)?;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / pivot;
                if q != 0 {
                    sub_col(&mut a, j, t, q)?;
                }
            }
            let line = (t + 1..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
            if let Some((i, j)) = min_entry(&a, line) {
                // a remainder smaller than the pivot survived
                move_to(&mut a, t, i, j);
                continue;
            }
            let bad = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| a[i][j] % pivot != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        a[t][j] = a[t][j].checked_add(a[i][j]).ok_or(SnfError::Overflow)?;
                    }
                }
                None => break,
            }
        }
        factors.push(a[t][t].checked_abs().ok_or(SnfError::Overflow)?);
    }
    Ok(SnfDiagonal { factors })
}

fn min_entry(a: &[Vec<i128>], cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    cells
        .filter(|&(i, j)| a[i][j] != 0)
        .min_by_key(|&(i, j)| a[i][j].unsigned_abs())
}

fn move_to(a: &mut [Vec<i128>], t: usize, i: usize, j: usize) {
    a.swap(t, i);
    for row in a.iter_mut() {
        row.swap(t, j);
    }
}

fn sub_row(a: &mut [Vec<i128>], target: usize, src: usize, q: i128) -> Result<(), SnfError> {
    for j in 0..a[src].len() {
        let d = q.checked_mul(a[src][j]).ok_or(SnfError::Overflow)?;
        a[target][j] = a[target][j].checked_sub(d).ok_or(SnfError::Overflow)?;
    }
    Ok(())
}

fn sub_col(a: &mut [Vec<i128>], target: usize, src: usize, q: i128) -> Result<(), SnfError> {
    for row in a.iter_mut() {
        let d = q.checked_mul(row[src]).ok_or(SnfError::Overflow)?;
        row[target] = row[target].checked_sub(d).ok_or(SnfError::Overflow)?;
    }
    Ok(())
}
