//! Exact linear algebra over the rationals.
//!
//! Ranks of the (large, very sparse) differentials are computed with a
//! fraction-free sparse elimination: every row is scaled to a primitive integer
//! vector, pivots are chosen Markowitz-style (shortest row, then the pivot column
//! with the fewest remaining entries) and row updates are `p * r - a * pivot`
//! followed by division by the row content. The elimination first runs in
//! `i128` and restarts in arbitrary precision if any product overflows.
//!
//! The small dense routines at the bottom (reduced row echelon form, kernels,
//! linear solves) are used where explicit bases are needed.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Sparse matrix with exact rational entries, stored row-wise.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseRationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BTreeMap<usize, Rational>>,
}

impl SparseRationalMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BTreeMap::new(); rows] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `value` to entry `(r, c)`. Entries that cancel to zero are removed.
    pub fn add(&mut self, r: usize, c: usize, value: Rational) {
        assert!(r < self.rows && c < self.cols, "entry ({r}, {c}) out of bounds");
        if value.is_zero() {
            return;
        }
        let row = &mut self.entries[r];
        let slot = row.entry(c).or_insert_with(Rational::zero);
        *slot += value;
        if slot.is_zero() {
            row.remove(&c);
        }
    }

    pub fn add_int(&mut self, r: usize, c: usize, value: i64) {
        self.add(r, c, rat(value));
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.entries[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, Rational> {
        &self.entries[r]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(BTreeMap::len).sum()
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n, n);
        for i in 0..n {
            m.add_int(i, i, 1);
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::new(self.cols, self.rows);
        for (r, row) in self.entries.iter().enumerate() {
            for (&c, v) in row {
                t.entries[c].insert(r, v.clone());
            }
        }
        t
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::new(self.rows, other.cols);
        for (r, row) in self.entries.iter().enumerate() {
            for (&k, a) in row {
                for (&c, b) in &other.entries[k] {
                    out.add(r, c, a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        self.entries.iter().map(|row| row.iter().fold(Rational::zero(), |acc, (&c, a)| acc + a * &v[c])).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(BTreeMap::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut d = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, row) in self.entries.iter().enumerate() {
            for (&c, v) in row {
                d[r][c] = v.clone();
            }
        }
        d
    }

    /// Exact rank over the rationals.
    pub fn rank_q(&self) -> usize {
        rank_q(self)
    }
}

/// Exact rank over the rationals via fraction-free sparse elimination.
pub fn rank_q(m: &SparseRationalMatrix) -> usize {
    let rows: Vec<Vec<(usize, BigInt)>> = m.entries.iter().map(primitive_row).filter(|r| !r.is_empty()).collect();
    let small: Option<Vec<Vec<(usize, i128)>>> =
        rows.iter().map(|r| r.iter().map(|(c, v)| v.to_i128().map(|x| (*c, x))).collect::<Option<Vec<_>>>()).collect();
    if let Some(small) = small {
        if let Some(rank) = sparse_rank(small, m.cols) {
            return rank;
        }
    }
    sparse_rank(rows, m.cols).expect("arbitrary precision elimination cannot overflow")
}

fn primitive_row(row: &BTreeMap<usize, Rational>) -> Vec<(usize, BigInt)> {
    let lcm = row.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<(usize, BigInt)> = row.iter().map(|(&c, v)| (c, v.numer() * (&lcm / v.denom()))).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if content.is_zero() {
        return Vec::new();
    }
    ints.into_iter().map(|(c, v)| (c, v / &content)).collect()
}

trait ElimInt: Clone + PartialEq + Signed + Integer {
    /// `a * b - c * d`, or `None` on overflow.
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self>;
}

impl ElimInt for i128 {
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)
    }
}

impl ElimInt for BigInt {
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<Self> {
        Some(a * b - c * d)
    }
}

fn sparse_rank<T: ElimInt>(rows: Vec<Vec<(usize, T)>>, ncols: usize) -> Option<usize> {
    let mut rows: Vec<Option<Vec<(usize, T)>>> = rows.into_iter().map(Some).collect();
    let mut col_rows: Vec<HashSet<usize>> = vec![HashSet::new(); ncols];
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_ref().expect("fresh row");
        for (c, _) in row {
            col_rows[*c].insert(i);
        }
        queue.insert((row.len(), i));
    }
    let mut rank = 0;
    let zero = T::zero();
    while let Some((_, pr)) = queue.pop_first() {
        let pivot_row = rows[pr].take().expect("queued row is live");
        for (c, _) in &pivot_row {
            col_rows[*c].remove(&pr);
        }
        let (pc, pv) = pivot_row
            .iter()
            .min_by_key(|(c, _)| (col_rows[*c].len(), *c))
            .map(|(c, v)| (*c, v.clone()))
            .expect("rows in the queue are nonempty");
        rank += 1;
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in targets {
            let row = rows[r].take().expect("indexed row is live");
            queue.remove(&(row.len(), r));
            let rv = row.iter().find(|(c, _)| *c == pc).map(|(_, v)| v.clone()).expect("indexed entry");
            let g = pv.gcd(&rv);
            let (a, b) = (pv.div_floor(&g), rv.div_floor(&g));
            // new = a * row - b * pivot_row
            let mut merged: Vec<(usize, T)> = Vec::with_capacity(row.len() + pivot_row.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < pivot_row.len() {
                let take_row = j >= pivot_row.len() || (i < row.len() && row[i].0 < pivot_row[j].0);
                let take_piv = i >= row.len() || (j < pivot_row.len() && pivot_row[j].0 < row[i].0);
                let (c, v) = if take_row {
                    let (c, v) = &row[i];
                    i += 1;
                    (*c, T::mul_sub(&a, v, &zero, &zero)?)
                } else if take_piv {
                    let (c, v) = &pivot_row[j];
                    j += 1;
                    (*c, T::mul_sub(&zero, &zero, &b, v)?)
                } else {
                    let c = row[i].0;
                    let v = T::mul_sub(&a, &row[i].1, &b, &pivot_row[j].1)?;
                    i += 1;
                    j += 1;
                    (c, v)
                };
                if v.is_zero() {
                    col_rows[c].remove(&r);
                } else {
                    col_rows[c].insert(r);
                    merged.push((c, v));
                }
            }
            if merged.is_empty() {
                continue;
            }
            let content = merged.iter().fold(T::zero(), |acc, (_, v)| acc.gcd(v));
            if !content.is_one() {
                for (_, v) in merged.iter_mut() {
                    *v = v.div_floor(&content);
                }
            }
            queue.insert((merged.len(), r));
            rows[r] = Some(merged);
        }
    }
    Some(rank)
}

/// Reduces `m` in place to reduced row echelon form and returns the pivot columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, target) in m.iter_mut().enumerate() {
            if i != r && !target[c].is_zero() {
                let factor = target[c].clone();
                for (t, p) in target.iter_mut().zip(pivot_row.iter()) {
                    if !p.is_zero() {
                        *t -= &factor * p;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank_dense(m: &[Vec<Rational>]) -> usize {
    let mut work = m.to_vec();
    rref(&mut work).len()
}

/// Basis of `{x : m x = 0}` where `m` has `ncols` columns.
pub fn kernel_basis(m: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut work = m.to_vec();
    let pivots = rref(&mut work);
    let pivot_set: HashMap<usize, usize> = pivots.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    (0..ncols)
        .filter(|c| !pivot_set.contains_key(c))
        .map(|free| {
            let mut v = vec![Rational::zero(); ncols];
            v[free] = Rational::one();
            for (&pc, &row) in &pivot_set {
                v[pc] = -work[row][free].clone();
            }
            v
        })
        .collect()
}

/// Solves `sum_j x_j columns[j] = target`, returning one solution if any exists.
pub fn solve_columns(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = target.len();
    let k = columns.len();
    let mut aug: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = columns.iter().map(|col| col[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut x = vec![Rational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][k].clone();
    }
    Some(x)
}

/// Greedily selects the candidates that extend the span of `base`, in order.
pub fn extend_basis(base: &[Vec<Rational>], candidates: &[Vec<Rational>]) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<Rational>)> = Vec::new();
    let reduce_and_insert = |mut v: Vec<Rational>, echelon: &mut Vec<(usize, Vec<Rational>)>| -> bool {
        for (pivot, row) in echelon.iter() {
            if !v[*pivot].is_zero() {
                let factor = v[*pivot].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a -= &factor * b;
                    }
                }
            }
        }
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[pivot].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in echelon.iter_mut() {
            if !row[pivot].is_zero() {
                let factor = row[pivot].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    if !b.is_zero() {
                        *a -= &factor * b;
                    }
                }
            }
        }
        echelon.push((pivot, v));
        true
    };
    for b in base {
        reduce_and_insert(b.clone(), &mut echelon);
    }
    candidates.iter().enumerate().filter_map(|(i, c)| reduce_and_insert(c.clone(), &mut echelon).then_some(i)).collect()
}

/// Exact rank of a matrix given by integer rows of `(column, value)` pairs.
/// Repeated columns within a row are summed.
pub fn rank_of_integer_rows(rows: Vec<Vec<(usize, i64)>>, ncols: usize) -> usize {
    let rows: Vec<Vec<(usize, i128)>> = rows
        .into_iter()
        .filter_map(|row| {
            let mut acc: BTreeMap<usize, i128> = BTreeMap::new();
            for (c, v) in row {
                *acc.entry(c).or_default() += i128::from(v);
            }
            let row: Vec<(usize, i128)> = acc.into_iter().filter(|(_, v)| *v != 0).collect();
            let content = row.iter().fold(0i128, |g, (_, v)| g.gcd(v));
            (!row.is_empty()).then(|| row.into_iter().map(|(c, v)| (c, v / content)).collect())
        })
        .collect();
    if let Some(rank) = sparse_rank(rows.clone(), ncols) {
        return rank;
    }
    let big = rows.into_iter().map(|r| r.into_iter().map(|(c, v)| (c, BigInt::from(v))).collect()).collect();
    sparse_rank(big, ncols).expect("arbitrary precision elimination cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_ints(rows: &[&[i64]]) -> SparseRationalMatrix {
        let mut m = SparseRationalMatrix::new(rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.add_int(r, c, v);
            }
        }
        m
    }

    #[test]
    fn rank_of_zero_identity_and_ones() {
        assert_eq!(SparseRationalMatrix::new(4, 3).rank_q(), 0);
        assert_eq!(SparseRationalMatrix::identity(5).rank_q(), 5);
        assert_eq!(from_ints(&[&[1, 1, 1], &[1, 1, 1], &[1, 1, 1]]).rank_q(), 1);
    }

    #[test]
    fn rank_with_fractions_matches_dense() {
        let mut m = SparseRationalMatrix::new(3, 3);
        m.add(0, 0, ratio(1, 2));
        m.add(0, 1, ratio(1, 3));
        m.add(1, 0, ratio(3, 2));
        m.add(1, 1, rat(1));
        m.add(2, 2, ratio(-7, 5));
        assert_eq!(m.rank_q(), 2);
        assert_eq!(rank_dense(&m.to_dense()), 2);
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let big = i64::MAX / 3;
        let m = from_ints(&[&[big, big - 1, 7], &[big - 5, big, 11], &[3, 5, big]]);
        assert_eq!(m.rank_q(), rank_dense(&m.to_dense()));
    }

    #[test]
    fn kernel_and_solve() {
        let m = from_ints(&[&[1, 2, 3], &[2, 4, 6]]).to_dense();
        let k = kernel_basis(&m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let mv: Vec<Rational> = m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect();
            assert!(mv.iter().all(Zero::is_zero));
        }
        let cols = vec![vec![rat(1), rat(0)], vec![rat(1), rat(1)]];
        assert_eq!(solve_columns(&cols, &[rat(3), rat(2)]), Some(vec![rat(1), rat(2)]));
        let dependent = vec![vec![rat(1), rat(1)]];
        assert_eq!(solve_columns(&dependent, &[rat(1), rat(2)]), None);
    }
}
