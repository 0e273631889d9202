//! Cohomology of the action groupoid `K ⋊ G` through the nerve double complex.
//!
//! Level `p` of the nerve is the set of composable strings `(x; g_1, ..., g_p)`,
//! identified with `K × G^p`. A `(p, q)`-cochain assigns a rational to every
//! pair (q-simplex, p-tuple). The right action is `x·g = g^{-1}(x)`, so the
//! face maps are
//!
//! * `∂_0 (x; g_1, ..., g_p) = (x·g_1; g_2, ..., g_p)`,
//! * `∂_i (x; ...) = (x; ..., g_i g_{i+1}, ...)` for `0 < i < p`,
//! * `∂_p (x; g_1, ..., g_p) = (x; g_1, ..., g_{p-1})`,
//!
//! the horizontal differential is `∂ = Σ (-1)^i ∂_i^*`, the vertical one is the
//! simplicial coboundary `d`, and the total differential on a `(p, q)` entry is
//! `δ = ∂ + (-1)^p d`.
//!
//! Degree `n` of the total complex only involves columns `p <= n + 1`, so every
//! computation here is finite and exact.

use std::collections::BTreeMap;

use num::traits::Zero;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::gspace::GComplex;
use crate::linalg::{self, rank_of_integer_rows, Rational, SparseRationalMatrix};

/// Cochains on nerve levels, keyed by `(p, q)`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DoubleCochain {
    pub entries: BTreeMap<(usize, usize), Vec<Rational>>,
}

impl DoubleCochain {
    pub fn single(p: usize, q: usize, values: Vec<Rational>) -> Self {
        Self { entries: BTreeMap::from([((p, q), values)]) }
    }

    pub fn get(&self, p: usize, q: usize) -> Option<&[Rational]> {
        self.entries.get(&(p, q)).map(Vec::as_slice)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().flatten().all(Zero::is_zero)
    }

    fn accumulate(&mut self, p: usize, q: usize, len: usize, values: Vec<Rational>) {
        let slot = self.entries.entry((p, q)).or_insert_with(|| vec![Rational::zero(); len]);
        for (a, b) in slot.iter_mut().zip(values) {
            *a += b;
        }
    }
}

/// Index bookkeeping and face maps for the nerve of `K ⋊ G`.
pub struct Nerve<'a> {
    space: &'a GComplex,
    order: usize,
    /// `right[q][g][σ]`: index and sign of `σ·g = g^{-1}(σ)`.
    right: Vec<Vec<Vec<(usize, i8)>>>,
}

impl<'a> Nerve<'a> {
    pub fn new(space: &'a GComplex) -> Self {
        let group = space.group();
        let dims = space.complex().dim().map_or(0, |d| d + 1);
        let right = (0..dims)
            .map(|q| {
                let table = space.simplex_action_table(q);
                group.elements().map(|g| table[group.inv(g)].clone()).collect()
            })
            .collect();
        Self { space, order: group.order(), right }
    }

    pub fn space(&self) -> &GComplex {
        self.space
    }

    fn top_dim(&self) -> Option<usize> {
        self.space.complex().dim()
    }

    fn tuples(&self, p: usize) -> usize {
        self.order.checked_pow(p as u32).expect("nerve level size overflows")
    }

    /// Number of `(q-simplex, p-tuple)` pairs.
    pub fn level_size(&self, p: usize, q: usize) -> usize {
        self.space.complex().count(q) * self.tuples(p)
    }

    fn decode(&self, p: usize, mut code: usize) -> Vec<usize> {
        let mut t = vec![0; p];
        for slot in t.iter_mut().rev() {
            *slot = code % self.order;
            code /= self.order;
        }
        t
    }

    fn encode(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &g| acc * self.order + g)
    }

    /// Face `∂_i` of `(σ; tuple)` at level `p = tuple.len()`, as (index at level
    /// `p - 1`, sign of the induced orientation).
    fn face(&self, q: usize, i: usize, simplex: usize, tuple: &[usize]) -> (usize, i8) {
        let p = tuple.len();
        let group = self.space.group();
        let (s, sign, rest): (usize, i8, Vec<usize>) = if i == 0 {
            let (img, sign) = self.right[q][tuple[0]][simplex];
            (img, sign, tuple[1..].to_vec())
        } else if i == p {
            (simplex, 1, tuple[..p - 1].to_vec())
        } else {
            let mut rest = tuple[..i - 1].to_vec();
            rest.push(group.mul(tuple[i - 1], tuple[i]));
            rest.extend_from_slice(&tuple[i + 1..]);
            (simplex, 1, rest)
        };
        (s * self.tuples(p - 1) + self.encode(&rest), sign)
    }

    /// Sparse rows of `∂ : (p-1, q) -> (p, q)`, one per target entry.
    fn horizontal_rows(&self, p: usize, q: usize) -> Vec<Vec<(usize, i64)>> {
        let tuples = self.tuples(p);
        let mut rows = Vec::with_capacity(self.level_size(p, q));
        for s in 0..self.space.complex().count(q) {
            for code in 0..tuples {
                let tuple = self.decode(p, code);
                let row = (0..=p)
                    .map(|i| {
                        let (col, sign) = self.face(q, i, s, &tuple);
                        let alt = if i % 2 == 0 { 1 } else { -1 };
                        (col, alt * i64::from(sign))
                    })
                    .collect();
                rows.push(row);
            }
        }
        rows
    }

    /// Sparse rows of `d : (p, q-1) -> (p, q)`.
    fn vertical_rows(&self, p: usize, q: usize) -> Vec<Vec<(usize, i64)>> {
        let complex = self.space.complex();
        let tuples = self.tuples(p);
        let mut rows = Vec::with_capacity(self.level_size(p, q));
        for simplex in complex.simplices(q) {
            let faces: Vec<(usize, i64)> = (0..simplex.len())
                .map(|i| {
                    let mut f = simplex.clone();
                    f.remove(i);
                    (complex.index_of(&f).expect("face-closed"), if i % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            for code in 0..tuples {
                rows.push(faces.iter().map(|&(f, sign)| (f * tuples + code, sign)).collect());
            }
        }
        rows
    }

    /// `(p, q)` blocks of total degree `n`, ordered by `q`, with their offsets.
    fn blocks(&self, n: usize) -> Vec<(usize, usize, usize)> {
        let Some(d) = self.top_dim() else { return Vec::new() };
        let mut offset = 0;
        (0..=n.min(d))
            .map(|q| {
                let p = n - q;
                let block = (p, q, offset);
                offset += self.level_size(p, q);
                block
            })
            .collect()
    }

    /// Dimension of degree `n` of the total complex.
    pub fn total_dim(&self, n: usize) -> usize {
        self.blocks(n).iter().map(|&(p, q, _)| self.level_size(p, q)).sum()
    }

    /// Integer rows of the total differential `δ_n : C^n -> C^{n+1}`.
    fn delta_rows(&self, n: usize) -> Vec<Vec<(usize, i64)>> {
        let source: BTreeMap<(usize, usize), usize> = self.blocks(n).into_iter().map(|(p, q, o)| ((p, q), o)).collect();
        let mut rows = Vec::new();
        for (p, q, _) in self.blocks(n + 1) {
            let mut block_rows = vec![Vec::new(); self.level_size(p, q)];
            if p >= 1 {
                if let Some(&off) = source.get(&(p - 1, q)) {
                    for (row, h) in block_rows.iter_mut().zip(self.horizontal_rows(p, q)) {
                        row.extend(h.into_iter().map(|(c, v)| (c + off, v)));
                    }
                }
            }
            if q >= 1 {
                if let Some(&off) = source.get(&(p, q - 1)) {
                    let sign = if p % 2 == 0 { 1 } else { -1 };
                    for (row, v) in block_rows.iter_mut().zip(self.vertical_rows(p, q)) {
                        row.extend(v.into_iter().map(|(c, x)| (c + off, sign * x)));
                    }
                }
            }
            rows.extend(block_rows);
        }
        rows
    }

    /// `δ_n` as an exact sparse matrix.
    pub fn delta_matrix(&self, n: usize) -> SparseRationalMatrix {
        let rows = self.delta_rows(n);
        let mut m = SparseRationalMatrix::new(rows.len(), self.total_dim(n));
        for (r, row) in rows.into_iter().enumerate() {
            for (c, v) in row {
                m.add_int(r, c, v);
            }
        }
        m
    }

    pub fn delta_rank(&self, n: usize) -> usize {
        rank_of_integer_rows(self.delta_rows(n), self.total_dim(n))
    }

    /// Splits a flat vector of degree `n` into its `(p, q)` components.
    pub fn unflatten(&self, n: usize, flat: &[Rational]) -> DoubleCochain {
        let mut c = DoubleCochain::default();
        for (p, q, off) in self.blocks(n) {
            c.entries.insert((p, q), flat[off..off + self.level_size(p, q)].to_vec());
        }
        c
    }

    /// Flattens the degree-`n` components of `c` (missing blocks are zero).
    pub fn flatten(&self, n: usize, c: &DoubleCochain) -> Vec<Rational> {
        let mut flat = vec![Rational::zero(); self.total_dim(n)];
        for (p, q, off) in self.blocks(n) {
            if let Some(v) = c.get(p, q) {
                flat[off..off + v.len()].clone_from_slice(v);
            }
        }
        flat
    }
}

fn apply_rows(rows: &[Vec<(usize, i64)>], v: &[Rational]) -> Vec<Rational> {
    rows.iter()
        .map(|row| row.iter().fold(Rational::zero(), |acc, &(c, x)| acc + &v[c] * Rational::from_integer(x.into())))
        .collect()
}

/// `∂` applied to every entry: `(p - 1, q) -> (p, q)`.
pub fn horizontal_differential(nerve: &Nerve<'_>, c: &DoubleCochain) -> DoubleCochain {
    let mut out = DoubleCochain::default();
    for (&(p, q), v) in &c.entries {
        let rows = nerve.horizontal_rows(p + 1, q);
        out.accumulate(p + 1, q, rows.len(), apply_rows(&rows, v));
    }
    out
}

/// Simplicial coboundary applied to every entry: `(p, q) -> (p, q + 1)`.
pub fn vertical_differential(nerve: &Nerve<'_>, c: &DoubleCochain) -> DoubleCochain {
    let mut out = DoubleCochain::default();
    let top = nerve.top_dim();
    for (&(p, q), v) in &c.entries {
        if top.is_some_and(|d| q < d) {
            let rows = nerve.vertical_rows(p, q + 1);
            out.accumulate(p, q + 1, rows.len(), apply_rows(&rows, v));
        }
    }
    out
}

/// `δ = ∂ + (-1)^p d`.
pub fn total_differential(nerve: &Nerve<'_>, c: &DoubleCochain) -> DoubleCochain {
    let mut out = horizontal_differential(nerve, c);
    for (&(p, q), v) in &c.entries {
        let single = DoubleCochain::single(p, q, v.clone());
        for ((pp, qq), w) in vertical_differential(nerve, &single).entries {
            let w = if p % 2 == 0 { w } else { w.into_iter().map(|x| -x).collect() };
            let len = w.len();
            out.accumulate(pp, qq, len, w);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct TotalCohomology {
    pub degree: usize,
    pub dim: usize,
    /// Representative cocycles, one per basis class.
    pub basis: Vec<DoubleCochain>,
}

fn check_degree(k: &GComplex, n: usize) -> Result<()> {
    let max = k.complex().dim().map_or(0, |d| d + 1);
    if n > max {
        return Err(Error::DegreeOutOfRange { degree: n, max });
    }
    Ok(())
}

/// `dim H^n(K ⋊ G)` from exact ranks of the total differentials.
pub fn total_cohomology_dim(k: &GComplex, n: usize) -> Result<usize> {
    k.ensure_regular()?;
    check_degree(k, n)?;
    let nerve = Nerve::new(k);
    let below = if n == 0 { 0 } else { nerve.delta_rank(n - 1) };
    Ok(nerve.total_dim(n) - nerve.delta_rank(n) - below)
}

/// `H^n(K ⋊ G)` with representative cocycles.
pub fn total_cohomology(k: &GComplex, n: usize, caps: &Caps) -> Result<TotalCohomology> {
    k.ensure_regular()?;
    check_degree(k, n)?;
    let nerve = Nerve::new(k);
    let size = nerve.total_dim(n).max(nerve.total_dim(n + 1));
    if size > caps.dense_basis {
        return Err(Error::CapExceeded {
            what: "total complex degree for explicit bases",
            size,
            cap: caps.dense_basis,
        });
    }
    let dn = nerve.delta_matrix(n).to_dense();
    let kernel = linalg::kernel_basis(&dn, nerve.total_dim(n));
    let image: Vec<Vec<Rational>> = if n == 0 { Vec::new() } else { nerve.delta_matrix(n - 1).transpose().to_dense() };
    let chosen = linalg::extend_basis(&image, &kernel);
    let basis: Vec<DoubleCochain> = chosen.iter().map(|&i| nerve.unflatten(n, &kernel[i])).collect();
    Ok(TotalCohomology { degree: n, dim: basis.len(), basis })
}

/// `P_q = Σ_g g^*` on simplicial q-cochains: row `s`, column `g(s)` carries the
/// orientation sign of `g` on `s`.
pub fn reynolds_operator(k: &GComplex, q: usize) -> SparseRationalMatrix {
    let count = k.complex().count(q);
    let mut p = SparseRationalMatrix::new(count, count);
    for table in k.simplex_action_table(q) {
        for (s, (img, sign)) in table.into_iter().enumerate() {
            p.add_int(s, img, i64::from(sign));
        }
    }
    p
}

/// `dim H^n` of the complex of `G`-invariant simplicial cochains, computed with
/// the averaging projector `P = Σ_g g^*`:
/// `rank P_n - rank(d_n P_n) - rank(d_{n-1} P_{n-1})`.
pub fn invariant_oracle(k: &GComplex, n: usize) -> usize {
    let complex = k.complex();
    let Some(d) = complex.dim() else { return 0 };
    if n > d {
        return 0;
    }
    let projector = |q: usize| reynolds_operator(k, q);
    let pn = projector(n);
    let dpn = complex.coboundary_matrix(n).mul(&pn).rank_q();
    let below = if n == 0 { 0 } else { complex.coboundary_matrix(n - 1).mul(&projector(n - 1)).rank_q() };
    pn.rank_q() - dpn - below
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gspace::SimplicialComplex;
    use crate::linalg::rat;

    fn point_with(order: usize) -> GComplex {
        let gens: Vec<Vec<usize>> = if order == 1 { vec![] } else { vec![(1..order).chain([0]).collect()] };
        let group = crate::grp::group_from_permutations(order, &gens, &Caps::default()).unwrap();
        GComplex::with_trivial_action(SimplicialComplex::new(1, &[]), group)
    }

    fn square_with(perm: Vec<usize>) -> GComplex {
        let sq = SimplicialComplex::new(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]);
        GComplex::from_permutations(sq, &[perm], &Caps::default()).unwrap()
    }

    #[test]
    fn horizontal_of_constant_is_zero() {
        let k = square_with(vec![2, 3, 0, 1]);
        let nerve = Nerve::new(&k);
        let one = DoubleCochain::single(0, 0, vec![rat(1); 4]);
        assert!(horizontal_differential(&nerve, &one).is_zero());
    }

    #[test]
    fn horizontal_three_term_sum_on_a_point() {
        // c = indicator of (pt; s) at p = 1. The three faces of (pt; g1, g2) are
        // (g2), (g1 g2), (g1), so ∂c = c(g2) - c(g1 g2) + c(g1):
        // (e,e) -> 0, (e,s) -> 1 - 1 = 0, (s,e) -> 0 - 1 + 1 = 0, (s,s) -> 1 - 0 + 1 = 2.
        let k = point_with(2);
        let nerve = Nerve::new(&k);
        let c = DoubleCochain::single(1, 0, vec![rat(0), rat(1)]);
        let dc = horizontal_differential(&nerve, &c);
        assert_eq!(dc.get(2, 0).unwrap(), &[rat(0), rat(0), rat(0), rat(2)]);
    }

    #[test]
    fn trivial_group_horizontal_alternates() {
        let k = GComplex::trivial(SimplicialComplex::new(2, &[vec![0, 1]]));
        let nerve = Nerve::new(&k);
        let c = DoubleCochain::single(0, 1, vec![rat(5)]);
        assert!(horizontal_differential(&nerve, &c).is_zero());
        let c = DoubleCochain::single(1, 1, vec![rat(5)]);
        assert_eq!(horizontal_differential(&nerve, &c).get(2, 1).unwrap(), &[rat(5)]);
    }

    #[test]
    fn vertical_examples() {
        let k = GComplex::trivial(SimplicialComplex::new(2, &[vec![0, 1]]));
        let nerve = Nerve::new(&k);
        let top = DoubleCochain::single(0, 1, vec![rat(3)]);
        assert!(vertical_differential(&nerve, &top).is_zero());
        let v1 = DoubleCochain::single(0, 0, vec![rat(0), rat(1)]);
        assert_eq!(vertical_differential(&nerve, &v1).get(0, 1).unwrap(), &[rat(1)]);
        let v0 = DoubleCochain::single(0, 0, vec![rat(1), rat(0)]);
        assert_eq!(vertical_differential(&nerve, &v0).get(0, 1).unwrap(), &[rat(-1)]);
    }

    #[test]
    fn delta_squares_to_zero() {
        let k = square_with(vec![0, 3, 2, 1]);
        let nerve = Nerve::new(&k);
        for n in 0..2 {
            let product = nerve.delta_matrix(n + 1).mul(&nerve.delta_matrix(n));
            assert!(product.is_zero(), "δ_{} δ_{n} != 0", n + 1);
        }
    }

    #[test]
    fn cohomology_examples() {
        assert_eq!(total_cohomology_dim(&point_with(1), 0).unwrap(), 1);
        let z2 = point_with(2);
        assert_eq!(total_cohomology_dim(&z2, 0).unwrap(), 1);
        assert_eq!(total_cohomology_dim(&z2, 1).unwrap(), 0);
        let refl = square_with(vec![0, 3, 2, 1]);
        assert_eq!(total_cohomology_dim(&refl, 0).unwrap(), 1);
        assert_eq!(total_cohomology_dim(&refl, 1).unwrap(), 0);
        assert_eq!(total_cohomology_dim(&refl, 3), Err(Error::DegreeOutOfRange { degree: 3, max: 2 }));
    }

    #[test]
    fn invariant_oracle_examples() {
        let trivial = GComplex::trivial(SimplicialComplex::new(4, &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]]));
        assert_eq!((invariant_oracle(&trivial, 0), invariant_oracle(&trivial, 1)), (1, 1));
        assert_eq!(invariant_oracle(&square_with(vec![0, 3, 2, 1]), 1), 0);
        assert_eq!(invariant_oracle(&square_with(vec![2, 3, 0, 1]), 1), 1);
    }

    #[test]
    fn basis_cocycles_are_closed() {
        let k = square_with(vec![2, 3, 0, 1]);
        let nerve = Nerve::new(&k);
        for n in 0..=2 {
            let h = total_cohomology(&k, n, &Caps::default()).unwrap();
            assert_eq!(h.dim, total_cohomology_dim(&k, n).unwrap());
            for c in &h.basis {
                assert!(total_differential(&nerve, c).is_zero());
            }
        }
    }
}
