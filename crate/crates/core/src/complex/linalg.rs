//! Exact matrix ranks over GF(2), GF(p) and the rationals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::Field;

/// Integer matrix in coordinate form. Duplicate coordinates are summed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    pub nrows: usize,
    pub ncols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, ncols, entries: Vec::new() }
    }

    pub fn push(&mut self, row: usize, col: usize, value: i64) {
        debug_assert!(row < self.nrows && col < self.ncols);
        self.entries.push((row, col, value));
    }

    fn dense_i128(&self) -> Vec<Vec<i128>> {
        let mut m = vec![vec![0i128; self.ncols]; self.nrows];
        for &(r, c, v) in &self.entries {
            m[r][c] += i128::from(v);
        }
        m
    }
}

/// Rank of `m` over `field`.
pub fn rank(m: &SparseMatrix, field: Field) -> usize {
    if m.nrows == 0 || m.ncols == 0 {
        return 0;
    }
    match field {
        Field::Gf2 => rank_gf2(m),
        Field::Gfp(p) => rank_mod_p(m, u64::from(p)),
        Field::Rational => rank_rational(m),
    }
}

fn rank_gf2(m: &SparseMatrix) -> usize {
    let words = m.ncols.div_ceil(64);
    let mut rows = vec![vec![0u64; words]; m.nrows];
    for &(r, c, v) in &m.entries {
        if v & 1 == 1 {
            rows[r][c / 64] ^= 1 << (c % 64);
        }
    }
    gf2_row_rank(&mut rows, m.ncols)
}

/// Gaussian elimination on packed rows; destroys `rows`.
pub(crate) fn gf2_row_rank(rows: &mut [Vec<u64>], ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        for row in tail.iter_mut() {
            if row[w] & bit != 0 {
                for (a, b) in row[w..].iter_mut().zip(&pivot_row[w..]) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let mut a = vec![vec![0u64; m.ncols]; m.nrows];
    for &(r, c, v) in &m.entries {
        let v = v.rem_euclid(p as i64) as u64;
        a[r][c] = (a[r][c] + v) % p;
    }
    let mut rank = 0;
    for col in 0..m.ncols {
        let Some(pivot) = (rank..m.nrows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let inv = mod_pow(a[rank][col], p - 2, p);
        for r in rank + 1..m.nrows {
            if a[r][col] == 0 {
                continue;
            }
            let factor = a[r][col] * inv % p;
            for c in col..m.ncols {
                let sub = factor * a[rank][c] % p;
                a[r][c] = (a[r][c] + p - sub) % p;
            }
        }
        rank += 1;
        if rank == m.nrows {
            break;
        }
    }
    rank
}

fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Fraction-free (Bareiss) elimination. Runs in `i128` and restarts with
/// big integers if an intermediate value overflows.
fn rank_rational(m: &SparseMatrix) -> usize {
    bareiss_i128(m.dense_i128()).unwrap_or_else(|| {
        let big = m
            .dense_i128()
            .into_iter()
            .map(|row| row.into_iter().map(BigInt::from).collect())
            .collect();
        bareiss_big(big)
    })
}

fn bareiss_i128(mut a: Vec<Vec<i128>>) -> Option<usize> {
    let (nrows, ncols) = (a.len(), a[0].len());
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, pivot);
        let p = a[rank][col];
        for r in rank + 1..nrows {
            let f = a[r][col];
            for c in col + 1..ncols {
                let num = p.checked_mul(a[r][c])?.checked_sub(f.checked_mul(a[rank][c])?)?;
                debug_assert_eq!(num % prev, 0);
                a[r][c] = num / prev;
            }
            a[r][col] = 0;
        }
        prev = p;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    Some(rank)
}

fn bareiss_big(mut a: Vec<Vec<BigInt>>) -> usize {
    let (nrows, ncols) = (a.len(), a[0].len());
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..ncols {
        let Some(pivot) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let p = a[rank][col].clone();
        for r in rank + 1..nrows {
            let f = a[r][col].clone();
            for c in col + 1..ncols {
                let num = &p * &a[r][c] - &f * &a[rank][c];
                a[r][c] = num / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = p.abs().max(BigInt::from(1)) * p.signum();
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}
