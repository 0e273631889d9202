//! Finite permutation groups, their conjugacy structure, and the conjugacy-class
//! decomposition of periodic cyclic homology of the rational group algebra.
//!
//! For a finite group every element has finite order and the centralizer
//! quotients `N_g` are finite, so their rational cohomology vanishes in positive
//! degrees (transfer). Periodic cyclic homology of the group algebra therefore
//! reduces to one even class per conjugacy class and nothing in odd degree.
//! This is taken as a known lemma here; [`hh0_group_oracle`] recomputes the
//! degree-zero count independently as `dim A / [A, A]`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use num::integer::Integer;
use num::traits::Zero;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::linalg::{Rational, SparseRationalMatrix};

pub type ElementId = usize;

/// Elements are composed as functions: `(g * h)(v) = g(h(v))`.
fn compose(g: &[usize], h: &[usize]) -> Vec<usize> {
    h.iter().map(|&v| g[v]).collect()
}

fn perm_order(p: &[usize]) -> u64 {
    let mut seen = vec![false; p.len()];
    let mut order = 1u64;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0u64;
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            v = p[v];
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

const TABLE_LIMIT: usize = 2048;

/// A finite group realized as permutations of `0..degree`.
///
/// Element ids index the lexicographically sorted permutations, so the identity
/// is always element `0`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    degree: usize,
    perms: Vec<Vec<usize>>,
    lookup: HashMap<Vec<usize>, ElementId>,
    table: Option<Vec<ElementId>>,
    inverses: Vec<ElementId>,
    generators: Vec<ElementId>,
    exponent: u64,
    classes: OnceLock<Vec<ConjugacyClass>>,
    class_index: OnceLock<Vec<usize>>,
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.perms == other.perms
    }
}

impl Eq for FiniteGroup {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyClass {
    pub representative: ElementId,
    pub members: Vec<ElementId>,
}

impl ConjugacyClass {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Centralizer {
    pub element: ElementId,
    pub members: Vec<ElementId>,
}

/// A subgroup re-indexed as a group of its own, with the embedding into the parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: FiniteGroup,
    pub embedding: Vec<ElementId>,
}

/// Closure of `gens` under composition, as permutations of `0..points`.
pub fn group_from_permutations(points: usize, gens: &[Vec<usize>], caps: &Caps) -> Result<FiniteGroup> {
    for (i, g) in gens.iter().enumerate() {
        if g.len() != points {
            return Err(Error::NotBijective(format!("generator {i} has {} images, expected {points}", g.len())));
        }
        let mut hit = vec![false; points];
        for &v in g {
            if v >= points || std::mem::replace(&mut hit[v], true) {
                return Err(Error::NotBijective(format!("generator {i} is not a permutation of 0..{points}")));
            }
        }
    }
    let identity: Vec<usize> = (0..points).collect();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(w) = queue.pop_front() {
        for g in gens {
            let next = compose(&w, g);
            if seen.insert(next.clone()) {
                if seen.len() > caps.closure {
                    return Err(Error::ClosureCapExceeded { cap: caps.closure });
                }
                queue.push_back(next);
            }
        }
    }
    let mut group = FiniteGroup::from_elements(points, seen.into_iter().collect());
    group.generators = gens.iter().map(|g| group.lookup[g]).collect();
    Ok(group)
}

impl FiniteGroup {
    pub fn trivial() -> Self {
        Self::from_elements(1, vec![vec![0]])
    }

    /// Builds a group from a complete, composition-closed set of permutations.
    fn from_elements(degree: usize, mut perms: Vec<Vec<usize>>) -> Self {
        perms.sort();
        perms.dedup();
        let lookup: HashMap<Vec<usize>, ElementId> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let n = perms.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for g in &perms {
                for h in &perms {
                    t.push(lookup[&compose(g, h)]);
                }
            }
            t
        });
        let inverses = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0; degree];
                for (i, &v) in p.iter().enumerate() {
                    inv[v] = i;
                }
                lookup[&inv]
            })
            .collect();
        let exponent = perms.iter().map(|p| perm_order(p)).fold(1, |a, b| a.lcm(&b));
        let mut group = Self {
            degree,
            perms,
            lookup,
            table,
            inverses,
            generators: Vec::new(),
            exponent,
            classes: OnceLock::new(),
            class_index: OnceLock::new(),
        };
        group.generators = group.small_generating_set(&(0..n).collect::<Vec<_>>());
        group
    }

    fn small_generating_set(&self, members: &[ElementId]) -> Vec<ElementId> {
        let mut gens = Vec::new();
        let mut span: HashSet<ElementId> = HashSet::from([0]);
        for &m in members {
            if span.contains(&m) {
                continue;
            }
            gens.push(m);
            let mut queue: VecDeque<ElementId> = span.iter().copied().collect();
            while let Some(w) = queue.pop_front() {
                for &g in &gens {
                    let next = self.mul(w, g);
                    if span.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
        }
        gens
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    /// Number of points permuted.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> ElementId {
        0
    }

    pub fn elements(&self) -> std::ops::Range<ElementId> {
        0..self.order()
    }

    pub fn generators(&self) -> &[ElementId] {
        &self.generators
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn permutation(&self, g: ElementId) -> &[usize] {
        &self.perms[g]
    }

    pub fn element_of(&self, perm: &[usize]) -> Option<ElementId> {
        self.lookup.get(perm).copied()
    }

    pub fn contains(&self, g: ElementId) -> bool {
        g < self.order()
    }

    pub fn mul(&self, g: ElementId, h: ElementId) -> ElementId {
        match &self.table {
            Some(t) => t[g * self.order() + h],
            None => self.lookup[&compose(&self.perms[g], &self.perms[h])],
        }
    }

    pub fn inv(&self, g: ElementId) -> ElementId {
        self.inverses[g]
    }

    /// `h g h^-1`.
    pub fn conjugate(&self, g: ElementId, h: ElementId) -> ElementId {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn element_order(&self, g: ElementId) -> u64 {
        perm_order(&self.perms[g])
    }

    pub fn is_abelian(&self) -> bool {
        self.generators.iter().all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Conjugacy classes ordered by representative; each representative is the
    /// smallest element id in its class.
    pub fn conjugacy_classes(&self) -> &[ConjugacyClass] {
        self.classes.get_or_init(|| {
            let mut assigned = vec![false; self.order()];
            let mut classes = Vec::new();
            for g in self.elements() {
                if assigned[g] {
                    continue;
                }
                let mut members = vec![g];
                assigned[g] = true;
                let mut i = 0;
                while i < members.len() {
                    let x = members[i];
                    for &s in &self.generators {
                        let y = self.conjugate(x, s);
                        if !assigned[y] {
                            assigned[y] = true;
                            members.push(y);
                        }
                    }
                    i += 1;
                }
                members.sort_unstable();
                classes.push(ConjugacyClass { representative: g, members });
            }
            classes
        })
    }

    /// Index into [`Self::conjugacy_classes`] of the class containing `g`.
    pub fn class_index(&self, g: ElementId) -> usize {
        self.class_index.get_or_init(|| {
            let mut idx = vec![0; self.order()];
            for (i, c) in self.conjugacy_classes().iter().enumerate() {
                for &m in &c.members {
                    idx[m] = i;
                }
            }
            idx
        })[g]
    }

    pub fn centralizer(&self, g: ElementId) -> Result<Centralizer> {
        if !self.contains(g) {
            return Err(Error::ElementNotInGroup(g));
        }
        let members: Vec<ElementId> = self.elements().filter(|&h| self.mul(h, g) == self.mul(g, h)).collect();
        let class_size = self.conjugacy_classes()[self.class_index(g)].size();
        assert_eq!(class_size * members.len(), self.order(), "orbit-stabilizer violated for element {g}");
        Ok(Centralizer { element: g, members })
    }

    /// The subgroup with the given (closed) member set, re-indexed.
    pub fn subgroup(&self, members: &[ElementId]) -> Subgroup {
        let perms: Vec<Vec<usize>> = members.iter().map(|&m| self.perms[m].clone()).collect();
        let group = Self::from_elements(self.degree, perms);
        let embedding = group.perms.iter().map(|p| self.lookup[p]).collect();
        Subgroup { group, embedding }
    }
}

/// An element of the rational group algebra, indexed by element id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    pub coeffs: Vec<Rational>,
}

impl GroupAlgebraElement {
    pub fn zero(group: &FiniteGroup) -> Self {
        Self { coeffs: vec![Rational::zero(); group.order()] }
    }

    pub fn basis(group: &FiniteGroup, g: ElementId) -> Self {
        let mut e = Self::zero(group);
        e.coeffs[g] = Rational::from_integer(1.into());
        e
    }

    pub fn mul(&self, other: &Self, group: &FiniteGroup) -> Self {
        let mut out = Self::zero(group);
        for (g, a) in self.coeffs.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (h, b) in other.coeffs.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out.coeffs[group.mul(g, h)] += a * b;
            }
        }
        out
    }
}

/// The trace `sum_h a_h h |-> sum_{h in [g]} a_h` attached to a conjugacy class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicTrace {
    pub class_rep: ElementId,
    pub members: Vec<ElementId>,
}

impl CyclicTrace {
    pub fn for_class(class: &ConjugacyClass) -> Self {
        Self { class_rep: class.representative, members: class.members.clone() }
    }

    pub fn evaluate(&self, a: &GroupAlgebraElement) -> Rational {
        self.members.iter().map(|&m| a.coeffs[m].clone()).sum()
    }
}

/// Periodic cyclic homology of the rational group algebra of a finite group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HpGroupAlgebra {
    pub even_dim: usize,
    pub odd_dim: usize,
    pub basis: Vec<CyclicTrace>,
}

pub fn burghelea_hp(group: &FiniteGroup) -> HpGroupAlgebra {
    let basis: Vec<CyclicTrace> = group.conjugacy_classes().iter().map(CyclicTrace::for_class).collect();
    HpGroupAlgebra { even_dim: basis.len(), odd_dim: 0, basis }
}

/// `dim A / [A, A]` for the rational group algebra `A`, by exact rank of the
/// span of all commutators `gh - hg`.
pub fn hh0_group_oracle(group: &FiniteGroup, caps: &Caps) -> Result<usize> {
    let n = group.order();
    if n > caps.hh0_group {
        return Err(Error::CapExceeded { what: "group order for the commutator oracle", size: n, cap: caps.hh0_group });
    }
    let mut seen = HashSet::new();
    let mut rows: Vec<(usize, usize)> = Vec::new();
    for g in 0..n {
        for h in 0..n {
            let (a, b) = (group.mul(g, h), group.mul(h, g));
            if a != b && seen.insert((a.min(b), a.max(b))) {
                rows.push((a, b));
            }
        }
    }
    let mut m = SparseRationalMatrix::new(rows.len(), n);
    for (r, (a, b)) in rows.into_iter().enumerate() {
        m.add_int(r, a, 1);
        m.add_int(r, b, -1);
    }
    Ok(n - m.rank_q())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> FiniteGroup {
        group_from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], &Caps::default()).unwrap()
    }

    #[test]
    fn trivial_generation() {
        let g = group_from_permutations(1, &[], &Caps::default()).unwrap();
        assert_eq!(g.order(), 1);
        assert_eq!(g.conjugacy_classes().len(), 1);
    }

    #[test]
    fn closure_orders() {
        assert_eq!(s3().order(), 6);
        let c4 = group_from_permutations(4, &[vec![1, 2, 3, 0]], &Caps::default()).unwrap();
        assert_eq!(c4.order(), 4);
        assert_eq!(c4.exponent(), 4);
        let classes = c4.conjugacy_classes();
        assert_eq!(classes.len(), 4);
        assert!(classes.iter().all(|c| c.size() == 1));
    }

    #[test]
    fn malformed_generators() {
        let caps = Caps::default();
        assert!(matches!(group_from_permutations(3, &[vec![0, 0, 1]], &caps), Err(Error::NotBijective(_))));
        assert!(matches!(group_from_permutations(3, &[vec![0, 1]], &caps), Err(Error::NotBijective(_))));
        let tiny = Caps { closure: 3, ..caps };
        assert_eq!(
            group_from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], &tiny).unwrap_err(),
            Error::ClosureCapExceeded { cap: 3 }
        );
    }

    #[test]
    fn s3_classes_and_centralizers() {
        let g = s3();
        let mut sizes: Vec<usize> = g.conjugacy_classes().iter().map(ConjugacyClass::size).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(g.conjugacy_classes()[0].members, vec![0]);
        let t = g.element_of(&[1, 0, 2]).unwrap();
        let c = g.centralizer(t).unwrap();
        assert_eq!(c.members, vec![0, t]);
        assert_eq!(g.centralizer(0).unwrap().members.len(), 6);
        assert_eq!(g.centralizer(17), Err(Error::ElementNotInGroup(17)));
    }

    #[test]
    fn hp_matches_oracle() {
        let caps = Caps::default();
        let z2 = group_from_permutations(2, &[vec![1, 0]], &caps).unwrap();
        for (g, expected) in [(FiniteGroup::trivial(), 1), (z2, 2), (s3(), 3)] {
            let hp = burghelea_hp(&g);
            assert_eq!((hp.even_dim, hp.odd_dim), (expected, 0));
            assert_eq!(hh0_group_oracle(&g, &caps).unwrap(), expected);
        }
        let small = Caps { hh0_group: 5, ..caps };
        assert!(matches!(hh0_group_oracle(&s3(), &small), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn subgroup_embedding() {
        let g = s3();
        let t = g.element_of(&[1, 0, 2]).unwrap();
        let sub = g.subgroup(&g.centralizer(t).unwrap().members);
        assert_eq!(sub.group.order(), 2);
        assert_eq!(sub.embedding, vec![0, t]);
        for a in sub.group.elements() {
            for b in sub.group.elements() {
                assert_eq!(sub.embedding[sub.group.mul(a, b)], g.mul(sub.embedding[a], sub.embedding[b]));
            }
        }
    }
}
