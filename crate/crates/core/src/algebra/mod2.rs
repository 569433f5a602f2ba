//! Sparse linear algebra over the two-element field.
//!
//! A column is a sorted list of row indices holding a `1`. Reduction is the
//! usual left-to-right column reduction keyed on the lowest (largest) row.

use std::collections::HashMap;

/// Sparse vector over F2: strictly increasing indices.
pub type Column = Vec<usize>;

/// Symmetric difference of two sorted columns.
pub fn add_into(target: &mut Column, other: &[usize]) {
    let mut out = Vec::with_capacity(target.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() && j < other.len() {
        match target[i].cmp(&other[j]) {
            std::cmp::Ordering::Less => {
                out.push(target[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(other[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&target[i..]);
    out.extend_from_slice(&other[j..]);
    *target = out;
}

/// Build a sorted column from an unsorted list of indices, cancelling pairs.
pub fn column_from_indices(mut idx: Vec<usize>) -> Column {
    idx.sort_unstable();
    let mut out: Column = Vec::with_capacity(idx.len());
    for i in idx {
        if out.last() == Some(&i) {
            out.pop();
        } else {
            out.push(i);
        }
    }
    out
}

/// Result of reducing a list of columns.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Reduced columns; zero columns are empty.
    pub reduced: Vec<Column>,
    /// `transform[k]` lists the original columns summing to `reduced[k]`.
    pub transform: Vec<Column>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.reduced.iter().filter(|c| !c.is_empty()).count()
    }

    /// Combinations of the input columns that sum to zero (a kernel basis).
    pub fn kernel(&self) -> Vec<Column> {
        self.reduced
            .iter()
            .zip(&self.transform)
            .filter(|(r, _)| r.is_empty())
            .map(|(_, t)| t.clone())
            .collect()
    }

    /// Nonzero reduced columns (a basis of the column span).
    pub fn image(&self) -> Vec<Column> {
        self.reduced.iter().filter(|c| !c.is_empty()).cloned().collect()
    }
}

/// Column-reduce `columns`, tracking the change of basis.
pub fn reduce(columns: &[Column]) -> Reduction {
    let mut reduced: Vec<Column> = columns.to_vec();
    let mut transform: Vec<Column> = (0..columns.len()).map(|k| vec![k]).collect();
    let mut pivot_owner: HashMap<usize, usize> = HashMap::new();
    for k in 0..reduced.len() {
        while let Some(&low) = reduced[k].last() {
            match pivot_owner.get(&low) {
                Some(&owner) => {
                    let (rk, ro) = split_pair(&mut reduced, k, owner);
                    add_into(rk, ro);
                    let (tk, to) = split_pair(&mut transform, k, owner);
                    add_into(tk, to);
                }
                None => {
                    pivot_owner.insert(low, k);
                    break;
                }
            }
        }
    }
    Reduction { reduced, transform }
}

fn split_pair<T>(v: &mut [T], a: usize, b: usize) -> (&mut T, &T) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &lo[b])
    }
}

/// Rank of the span of the given columns.
pub fn rank(columns: &[Column]) -> usize {
    reduce(columns).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_difference() {
        let mut a = vec![0, 2, 5];
        add_into(&mut a, &[2, 3]);
        assert_eq!(a, vec![0, 3, 5]);
    }

    #[test]
    fn cancelling_indices() {
        assert_eq!(column_from_indices(vec![3, 1, 3, 2, 3]), vec![1, 2, 3]);
    }

    #[test]
    fn rank_and_kernel() {
        // columns: e0+e1, e1+e2, e0+e2 -> rank 2, kernel spanned by sum of all
        let cols = vec![vec![0, 1], vec![1, 2], vec![0, 2]];
        let red = reduce(&cols);
        assert_eq!(red.rank(), 2);
        let ker = red.kernel();
        assert_eq!(ker.len(), 1);
        let mut sum = Vec::new();
        for &k in &ker[0] {
            add_into(&mut sum, &cols[k]);
        }
        assert!(sum.is_empty());
    }
}
