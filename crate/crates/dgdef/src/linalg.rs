//! Exact linear algebra over ℚ.
//!
//! Ranks use fraction-free Bareiss elimination on integer-scaled rows.
//! Solving and kernels use a sparse reduced row echelon form. Pivots are
//! chosen column by column, taking the first remaining row with a nonzero
//! entry, so results are reproducible.

use crate::Q;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

pub type SparseRow = BTreeMap<usize, Q>;

/// Rank of a dense rational matrix given by rows.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    bareiss_rank(&mut m)
}

/// Rank of a sparse matrix given by rows with `ncols` columns.
pub fn rank_sparse(rows: &[SparseRow], ncols: usize) -> usize {
    let dense: Vec<Vec<Q>> = rows
        .iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let mut v = vec![Q::zero(); ncols];
            for (c, x) in r {
                v[*c] = x.clone();
            }
            v
        })
        .collect();
    rank(&dense)
}

fn integer_row(r: &[Q]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in r {
        l = l.lcm(x.denom());
    }
    r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let n = m.len();
    if n == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..n {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form of a sparse matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<SparseRow>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn new(input: Vec<SparseRow>, ncols: usize) -> Echelon {
        let mut pending: Vec<SparseRow> = input.into_iter().filter(|r| !r.is_empty()).collect();
        let mut rows: Vec<SparseRow> = Vec::new();
        let mut pivots = Vec::new();
        for c in 0..ncols {
            let Some(p) = pending.iter().position(|r| r.contains_key(&c)) else {
                continue;
            };
            let mut prow = pending.remove(p);
            let inv = Q::one() / prow[&c].clone();
            for v in prow.values_mut() {
                *v *= &inv;
            }
            for r in pending.iter_mut().chain(rows.iter_mut()) {
                if let Some(f) = r.get(&c).cloned() {
                    axpy(r, &(-f), &prow);
                }
            }
            pending.retain(|r| !r.is_empty());
            rows.push(prow);
            pivots.push(c);
        }
        Echelon { rows, pivots, ncols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let pivset: BTreeMap<usize, usize> =
            self.pivots.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if pivset.contains_key(&f) {
                continue;
            }
            let mut v = vec![Q::zero(); self.ncols];
            v[f] = Q::one();
            for (i, row) in self.rows.iter().enumerate() {
                if let Some(x) = row.get(&f) {
                    v[self.pivots[i]] = -x.clone();
                }
            }
            out.push(v);
        }
        out
    }
}

/// `r += f * s`, dropping zeros.
pub fn axpy(r: &mut SparseRow, f: &Q, s: &SparseRow) {
    if f.is_zero() {
        return;
    }
    for (k, v) in s {
        let e = r.entry(*k).or_insert_with(Q::zero);
        *e += f * v;
        if e.is_zero() {
            r.remove(k);
        }
    }
}

/// A linear system given column by column, with rows indexed by arbitrary keys.
#[derive(Clone, Debug)]
pub struct LinearSystem<R: Ord + Clone> {
    pub columns: Vec<BTreeMap<R, Q>>,
}

impl<R: Ord + Clone> Default for LinearSystem<R> {
    fn default() -> Self {
        LinearSystem { columns: Vec::new() }
    }
}

impl<R: Ord + Clone> LinearSystem<R> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_column(&mut self, col: BTreeMap<R, Q>) -> usize {
        self.columns.push(col);
        self.columns.len() - 1
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    fn rows(&self, rhs: Option<&BTreeMap<R, Q>>) -> (Vec<SparseRow>, usize) {
        let mut index: BTreeMap<R, usize> = BTreeMap::new();
        let mut rows: Vec<SparseRow> = Vec::new();
        let mut slot = |k: &R, rows: &mut Vec<SparseRow>| -> usize {
            if let Some(i) = index.get(k) {
                return *i;
            }
            index.insert(k.clone(), rows.len());
            rows.push(SparseRow::new());
            rows.len() - 1
        };
        for (j, col) in self.columns.iter().enumerate() {
            for (k, v) in col {
                if v.is_zero() {
                    continue;
                }
                let i = slot(k, &mut rows);
                rows[i].insert(j, v.clone());
            }
        }
        let n = self.columns.len();
        if let Some(b) = rhs {
            for (k, v) in b {
                if v.is_zero() {
                    continue;
                }
                let i = slot(k, &mut rows);
                rows[i].insert(n, v.clone());
            }
        }
        (rows, n)
    }

    /// A particular solution of `A x = b` with free variables set to zero.
    pub fn solve(&self, rhs: &BTreeMap<R, Q>) -> Option<Vec<Q>> {
        let (rows, n) = self.rows(Some(rhs));
        let ech = Echelon::new(rows, n + 1);
        let mut x = vec![Q::zero(); n];
        for (i, &p) in ech.pivots.iter().enumerate() {
            if p == n {
                return None;
            }
            x[p] = ech.rows[i].get(&n).cloned().unwrap_or_else(Q::zero);
        }
        Some(x)
    }

    pub fn rank(&self) -> usize {
        let (rows, n) = self.rows(None);
        rank_sparse(&rows, n)
    }

    pub fn kernel(&self) -> Vec<Vec<Q>> {
        let (rows, n) = self.rows(None);
        Echelon::new(rows, n).kernel()
    }
}

/// Row space built one vector at a time (reduced against earlier pivots).
#[derive(Clone, Debug, Default)]
pub struct IncrementalSpan {
    rows: Vec<(usize, SparseRow)>,
}

impl IncrementalSpan {
    pub fn new() -> Self {
        Self::default()
    }

    /// Remainder of `v` after reduction by the current rows.
    pub fn reduce(&self, v: &SparseRow) -> SparseRow {
        let mut r = v.clone();
        for (p, row) in &self.rows {
            if let Some(f) = r.get(p).cloned() {
                axpy(&mut r, &(-f), row);
            }
        }
        r
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &SparseRow) -> bool {
        let r = self.reduce(v);
        let Some((&p, c)) = r.iter().next() else {
            return false;
        };
        let inv = Q::one() / c.clone();
        let r: SparseRow = r.iter().map(|(k, x)| (*k, x * &inv)).collect();
        for (_, row) in self.rows.iter_mut() {
            if let Some(f) = row.get(&p).cloned() {
                axpy(row, &(-f), &r);
            }
        }
        self.rows.push((p, r));
        true
    }

    pub fn contains(&self, v: &SparseRow) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Dense matrix product.
pub fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let m = b.first().map(|r| r.len()).unwrap_or(0);
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(Q::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn is_zero_matrix(a: &[Vec<Q>]) -> bool {
    a.iter().all(|r| r.iter().all(|x| x.is_zero()))
}

/// Least common multiple of the denominators in `v`, as a positive integer.
pub fn denominator_lcm(v: &[Q]) -> BigInt {
    v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom())).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn bareiss_matches_echelon() {
        let m = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank(&m), 2);
        let rows: Vec<SparseRow> = m
            .iter()
            .map(|r| r.iter().cloned().enumerate().filter(|(_, x)| !x.is_zero()).collect())
            .collect();
        assert_eq!(Echelon::new(rows, 3).rank(), 2);
    }

    #[test]
    fn solve_and_kernel() {
        let mut s: LinearSystem<u8> = LinearSystem::new();
        s.add_column([(0u8, q(1)), (1, q(1))].into_iter().collect());
        s.add_column([(0u8, q(1)), (1, q(1))].into_iter().collect());
        let x = s.solve(&[(0u8, q(2)), (1, q(2))].into_iter().collect()).unwrap();
        assert_eq!(x, vec![q(2), q(0)]);
        assert!(s.solve(&[(0u8, q(1))].into_iter().collect()).is_none());
        assert_eq!(s.kernel(), vec![vec![q(-1), q(1)]]);
    }
}
