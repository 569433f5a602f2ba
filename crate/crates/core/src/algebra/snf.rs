//! Invariant factors of sparse integer matrices.
//!
//! Rows are stored as ordered maps from column index to a nonzero `BigInt`;
//! a column index keeps the set of rows touching each column so that both row
//! and column operations stay sparse.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix in row-major form.
#[derive(Debug, Clone, Default)]
pub struct SparseIntMatrix {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

impl SparseIntMatrix {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self {
            rows: vec![BTreeMap::new(); nrows],
            cols: vec![BTreeSet::new(); ncols],
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Add `v` to entry `(r, c)`.
    pub fn add(&mut self, r: usize, c: usize, v: &BigInt) {
        if v.is_zero() {
            return;
        }
        let e = self.rows[r].entry(c).or_insert_with(BigInt::zero);
        *e += v;
        if e.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.cols[c].insert(r);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.rows[r].get(&c).cloned().unwrap_or_else(BigInt::zero)
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    /// row[dst] -= q * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        let src_entries: Vec<(usize, BigInt)> = self.rows[src].iter().map(|(c, v)| (*c, v.clone())).collect();
        for (c, v) in src_entries {
            let cur = self.get(dst, c);
            self.set(dst, c, cur - q * v);
        }
    }

    /// col[dst] -= q * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        let src_rows: Vec<usize> = self.cols[src].iter().copied().collect();
        for r in src_rows {
            let v = self.get(r, src);
            let cur = self.get(r, dst);
            self.set(r, dst, cur - q * v);
        }
    }

    fn clear_row_and_col(&mut self, r: usize, c: usize) {
        let cols: Vec<usize> = self.rows[r].keys().copied().collect();
        for cc in cols {
            self.cols[cc].remove(&r);
        }
        self.rows[r].clear();
        let rows: Vec<usize> = self.cols[c].iter().copied().collect();
        for rr in rows {
            self.rows[rr].remove(&c);
        }
        self.cols[c].clear();
    }

    fn smallest_entry(&self) -> Option<(usize, usize, BigInt)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let better = match &best {
                    None => true,
                    Some((_, _, b)) => v.abs() < b.abs(),
                };
                if better {
                    best = Some((r, *c, v.clone()));
                    if best.as_ref().map(|b| b.2.abs().is_one()).unwrap_or(false) {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Invariant factors `d_1 | d_2 | ... | d_r` (all positive), consuming the matrix.
    pub fn invariant_factors(mut self) -> Vec<BigInt> {
        let mut diagonal = Vec::new();
        while let Some((r, c, _)) = self.smallest_entry() {
            let (pr, pc) = self.isolate_pivot(r, c);
            let p = self.get(pr, pc);
            diagonal.push(p.abs());
            self.clear_row_and_col(pr, pc);
        }
        normalize_divisibility(diagonal)
    }

    /// Euclid on the pivot's row and column until the pivot divides every entry
    /// in both, then clear them. Returns the final pivot position.
    fn isolate_pivot(&mut self, mut r: usize, mut c: usize) -> (usize, usize) {
        loop {
            let p = self.get(r, c);
            // column c: reduce other rows
            let mut moved = false;
            let others: Vec<usize> = self.cols[c].iter().copied().filter(|&x| x != r).collect();
            for r2 in others {
                let v = self.get(r2, c);
                let q = v.div_floor(&p);
                self.row_axpy(r2, r, &q);
                let rem = self.get(r2, c);
                if !rem.is_zero() {
                    // remainder smaller than pivot: switch pivot
                    r = r2;
                    moved = true;
                    break;
                }
            }
            if moved {
                continue;
            }
            let p = self.get(r, c);
            let others: Vec<usize> = self.rows[r].keys().copied().filter(|&x| x != c).collect();
            for c2 in others {
                let v = self.get(r, c2);
                let q = v.div_floor(&p);
                self.col_axpy(c2, c, &q);
                let rem = self.get(r, c2);
                if !rem.is_zero() {
                    c = c2;
                    moved = true;
                    break;
                }
            }
            if !moved {
                return (r, c);
            }
        }
    }
}

/// Turn an arbitrary list of positive diagonal entries into the divisibility
/// chain describing the same finitely generated abelian group.
pub fn normalize_divisibility(mut d: Vec<BigInt>) -> Vec<BigInt> {
    let n = d.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_dense(m: &[&[i64]]) -> SparseIntMatrix {
        let nr = m.len();
        let nc = m.first().map(|r| r.len()).unwrap_or(0);
        let mut s = SparseIntMatrix::new(nr, nc);
        for (r, row) in m.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                s.add(r, c, &BigInt::from(*v));
            }
        }
        s
    }

    fn factors(m: &[&[i64]]) -> Vec<i64> {
        from_dense(m)
            .invariant_factors()
            .into_iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    #[test]
    fn diagonal_chain() {
        assert_eq!(factors(&[&[2, 0], &[0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), vec![2, 6, 12]);
    }

    #[test]
    fn zero_and_rank_deficient() {
        assert!(factors(&[&[0, 0], &[0, 0]]).is_empty());
        assert_eq!(factors(&[&[1, 2], &[2, 4]]), vec![1]);
    }

    #[test]
    fn boundary_of_projective_plane() {
        // cellular chain complex of RP^2: d2 = [2]
        assert_eq!(factors(&[&[2]]), vec![2]);
    }
}
