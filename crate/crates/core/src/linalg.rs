//! Exact linear algebra over the rationals.
//!
//! Dense routines serve the small lattice systems (at most a handful of
//! rows); the sparse echelon form carries every span computation.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::ops::Bound;

use serde::Serialize;

use crate::algebra::{GradedKey, Window};
use crate::rational::Rational;

/// Row-reduces `m` in place and returns the pivot column of each nonzero row.
fn rref_dense(m: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(sel) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, sel);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..m[r].len() {
                    let delta = &f * &m[row][c];
                    m[r][c] -= &delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

/// Rank of a dense matrix with `cols` columns.
pub fn rank(rows: &[Vec<Rational>], cols: usize) -> usize {
    let mut m = rows.to_vec();
    rref_dense(&mut m, cols).len()
}

/// A basis of the rational kernel `{x : rows · x = 0}`, each vector scaled to
/// coprime integers.
pub fn kernel_basis(rows: &[Vec<Rational>], cols: usize) -> Vec<Vec<i64>> {
    let mut m = rows.to_vec();
    let pivots = rref_dense(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::new();
    for &f in &free {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&m[r][f];
        }
        out.push(integral_direction(&v));
    }
    out
}

/// Scales a rational vector to the primitive integer vector on its ray.
fn integral_direction(v: &[Rational]) -> Vec<i64> {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    let lcm = v.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(&x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::from(0), |acc, x| acc.gcd(x));
    ints.iter().map(|x| (x / &g).to_i64().expect("kernel vector exceeds i64")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    Inconsistent,
    Underdetermined,
}

/// Solves `rows · x = rhs` over the rationals.
pub fn solve(rows: &[Vec<Rational>], rhs: &[Rational], cols: usize) -> Solution {
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref_dense(&mut m, cols + 1);
    if pivots.contains(&cols) {
        return Solution::Inconsistent;
    }
    if pivots.len() < cols {
        return Solution::Underdetermined;
    }
    Solution::Unique((0..cols).map(|c| m[c][cols].clone()).collect())
}

pub type SparseVec<C> = BTreeMap<C, Rational>;

/// `target += factor * source`, dropping cancelled entries.
pub fn axpy<C: Ord + Clone>(target: &mut SparseVec<C>, factor: &Rational, source: &SparseVec<C>) {
    for (c, x) in source {
        let delta = factor * x;
        match target.get_mut(c) {
            Some(y) => {
                *y += &delta;
                if y.is_zero() {
                    target.remove(c);
                }
            }
            None => {
                if !delta.is_zero() {
                    target.insert(c.clone(), delta);
                }
            }
        }
    }
}

/// Incremental semi-echelon basis: each stored row has its pivot as its
/// smallest column with coefficient 1, and no row contains an earlier
/// row's pivot at insertion time.
#[derive(Clone, Debug)]
pub struct Echelon<C: Ord + Clone + Hash> {
    rows: Vec<SparseVec<C>>,
    pivots: HashMap<C, usize>,
}

impl<C: Ord + Clone + Hash> Default for Echelon<C> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), pivots: HashMap::new() }
    }
}

impl<C: Ord + Clone + Hash> Echelon<C> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<C>] {
        &self.rows
    }

    pub fn is_pivot(&self, c: &C) -> bool {
        self.pivots.contains_key(c)
    }

    /// Eliminates every pivot column from `v`, scanning columns upward.
    pub fn reduce(&self, v: &mut SparseVec<C>) {
        let mut cursor: Option<C> = None;
        loop {
            let lower = match &cursor {
                Some(c) => Bound::Excluded(c),
                None => Bound::Unbounded,
            };
            let next = v
                .range((lower, Bound::Unbounded))
                .find(|(c, _)| self.pivots.contains_key(*c))
                .map(|(c, x)| (c.clone(), x.clone()));
            let Some((c, x)) = next else { break };
            let row = &self.rows[self.pivots[&c]];
            axpy(v, &-x, row);
            cursor = Some(c);
        }
    }

    pub fn contains(&self, v: &SparseVec<C>) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_empty()
    }

    /// Adds `v` to the span. Returns `true` when the rank grew.
    pub fn insert(&mut self, mut v: SparseVec<C>) -> bool {
        self.reduce(&mut v);
        let Some((pivot, lead)) = v.iter().next().map(|(c, x)| (c.clone(), x.clone())) else {
            return false;
        };
        if !lead.is_one() {
            let inv = lead.recip();
            for x in v.values_mut() {
                *x = &*x * &inv;
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(v);
        true
    }

    /// The canonical reduced row echelon form, rows sorted by pivot.
    pub fn to_rref(&self) -> Vec<SparseVec<C>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by(|&a, &b| self.pivot_of(b).cmp(self.pivot_of(a)));
        let mut done: HashMap<C, SparseVec<C>> = HashMap::new();
        let mut out_desc = Vec::with_capacity(order.len());
        for i in order {
            let mut row = self.rows[i].clone();
            let pivot = self.pivot_of(i).clone();
            let hits: Vec<(C, Rational)> = row
                .iter()
                .filter(|(c, _)| **c != pivot && done.contains_key(*c))
                .map(|(c, x)| (c.clone(), x.clone()))
                .collect();
            for (c, x) in hits {
                axpy(&mut row, &-x, &done[&c]);
            }
            done.insert(pivot, row.clone());
            out_desc.push(row);
        }
        out_desc.reverse();
        out_desc
    }

    fn pivot_of(&self, row: usize) -> &C {
        self.rows[row].keys().next().expect("stored rows are nonzero")
    }
}

/// Exact row-reduced basis of a subspace, with columns indexed by graded
/// basis keys of `window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubspaceBasis {
    pub window: Window,
    rows: Vec<SparseVec<GradedKey>>,
}

impl SubspaceBasis {
    /// Reduces the given spanning vectors to canonical form.
    pub fn from_vectors<I: IntoIterator<Item = SparseVec<GradedKey>>>(window: Window, vectors: I) -> Self {
        let mut ech = Echelon::new();
        for v in vectors {
            ech.insert(v);
        }
        SubspaceBasis { window, rows: ech.to_rref() }
    }

    pub fn empty(window: Window) -> Self {
        SubspaceBasis { window, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec<GradedKey>] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<&GradedKey> {
        self.rows.iter().map(|r| r.keys().next().expect("nonzero row")).collect()
    }

    pub fn contains(&self, v: &SparseVec<GradedKey>) -> bool {
        let mut w = v.clone();
        for row in &self.rows {
            let pivot = row.keys().next().expect("nonzero row");
            if let Some(x) = w.get(pivot).cloned() {
                axpy(&mut w, &-x, row);
            }
        }
        w.is_empty()
    }

    pub fn contains_key(&self, g: &GradedKey) -> bool {
        let mut v = SparseVec::new();
        v.insert(g.clone(), Rational::one());
        self.contains(&v)
    }

    /// Whether some vector of the span has a nonzero `g` coordinate.
    pub fn touches(&self, g: &GradedKey) -> bool {
        self.rows.iter().any(|r| r.contains_key(g))
    }

    /// Re-reduces the rows; canonical form makes this the identity.
    pub fn rereduced(&self) -> SubspaceBasis {
        SubspaceBasis::from_vectors(self.window, self.rows.iter().cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn dense_solve_and_kernel() {
        let rows = vec![vec![r(1), r(0)], vec![r(0), r(2)]];
        assert_eq!(solve(&rows, &[r(0), r(1)], 2), Solution::Unique(vec![r(0), Rational::new(1, 2)]));
        let rows = vec![vec![r(1), r(1), r(0)]];
        assert_eq!(rank(&rows, 3), 1);
        let k = kernel_basis(&rows, 3);
        assert_eq!(k, vec![vec![-1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(solve(&rows, &[r(1)], 3), Solution::Underdetermined);
        let rows = vec![vec![r(1)], vec![r(2)]];
        assert_eq!(solve(&rows, &[r(1), r(1)], 1), Solution::Inconsistent);
    }

    #[test]
    fn echelon_rank_and_rref() {
        let mut e: Echelon<u32> = Echelon::new();
        let v = |xs: &[(u32, i64)]| xs.iter().map(|&(c, x)| (c, r(x))).collect::<SparseVec<u32>>();
        assert!(e.insert(v(&[(2, 1), (3, 1)])));
        assert!(e.insert(v(&[(1, 2), (2, 2)])));
        assert!(!e.insert(v(&[(1, 1), (3, -1)])));
        assert!(e.insert(v(&[(3, 5)])));
        assert_eq!(e.rank(), 3);
        let rref = e.to_rref();
        assert_eq!(rref, vec![v(&[(1, 1)]), v(&[(2, 1)]), v(&[(3, 1)])]);
        assert!(e.contains(&v(&[(1, 3), (2, 4)])));
    }
}
