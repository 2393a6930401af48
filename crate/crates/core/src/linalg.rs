//! Exact linear algebra over ℚ: dense row reduction and a sparse reducer
//! that keeps a fully reduced basis of a subspace keyed by arbitrary labels.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rational::Q;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Q::from_integer(1.into()) / m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x = &*x - &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Basis of the right kernel {v : m v = 0}.
pub fn nullspace(m: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::from_integer(1.into());
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(Q::zero(), |acc, (x, br)| acc + x * &br[j])
                })
                .collect()
        })
        .collect()
}

pub type SparseVec<K> = BTreeMap<K, Q>;

pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Q, x: &SparseVec<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let e = y.entry(k.clone()).or_insert_with(Q::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

/// Fully reduced basis of a subspace. Pivot of each row is its largest key,
/// normalized to 1, and absent from every other row, so `reduce` yields a
/// canonical coset representative.
#[derive(Clone, Debug, Default)]
pub struct SparseReducer<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> SparseReducer<K> {
    pub fn new() -> Self {
        SparseReducer { rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut out = v.clone();
        let hits: Vec<K> = v.keys().filter(|k| self.rows.contains_key(*k)).cloned().collect();
        for k in hits {
            if let Some(c) = out.get(&k).cloned() {
                axpy(&mut out, &-c, &self.rows[&k]);
            }
        }
        out
    }

    /// Adds `v` to the span; returns false if it was already there.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let r = self.reduce(v);
        let Some((p, c)) = r.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Q::from_integer(1.into()) / c;
        let row: SparseVec<K> = r.into_iter().map(|(k, x)| (k, x * &inv)).collect();
        for other in self.rows.values_mut() {
            if let Some(f) = other.get(&p).cloned() {
                axpy(other, &-f, &row);
            }
        }
        self.rows.insert(p, row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn rank_and_kernel() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(1), q(0), q(1)]];
        assert_eq!(rank(&m), 2);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 1);
        for row in &m {
            let dot = row.iter().zip(&ns[0]).fold(Q::zero(), |acc, (x, y)| acc + x * y);
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn reducer_is_canonical() {
        let mut red = SparseReducer::new();
        let v = |xs: &[(u8, Q)]| xs.iter().cloned().collect::<SparseVec<u8>>();
        red.insert(&v(&[(0, q(1)), (2, q(1))]));
        red.insert(&v(&[(1, q(2)), (2, q(1))]));
        assert!(!red.insert(&v(&[(0, q(2)), (2, q(2))])));
        let a = red.reduce(&v(&[(2, q(1))]));
        let b = red.reduce(&v(&[(0, q(-1))]));
        assert_eq!(a, b);
        let c = red.reduce(&v(&[(1, qf(1, 2))]));
        assert_eq!(c, b.iter().map(|(k, x)| (*k, x * qf(-1, 4))).collect::<SparseVec<u8>>());
    }
}
