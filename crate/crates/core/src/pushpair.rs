//! Cup and cap products, the Poincaré pairing on inertia components, and umkehr
//! maps defined through Poincaré duality.
//!
//! A class in `H^k(M_g ⋊ Γ_g)` is represented by a `Γ_g`-invariant simplicial
//! cocycle on `M_g`. Cup and cap use the front-face/back-face formulas with the
//! ascending vertex order:
//!
//! * `(a ∪ b)[v_0..v_{p+q}] = a[v_0..v_p] · b[v_p..v_{p+q}]`,
//! * `[v_0..v_d] ∩ c = c[v_0..v_k] · [v_k..v_d]`.
//!
//! Umkehr maps are `f_! = PD_T^{-1} ∘ f_* ∘ PD_S` class by class, where
//! `PD(c) = [M_g] ∩ c`. This needs an orientation of `M_g` preserved by `Γ_g`;
//! classes without one are left undefined.

use std::collections::{BTreeMap, VecDeque};

use num::traits::{One, Zero};

use crate::deloc::DelocClass;
use crate::error::{Error, Result};
use crate::grp::ElementId;
use crate::gspace::{
    check_orientation, fixed_subcomplex, sort_with_sign, FixedSubcomplex, GComplex, Orientation, SimplicialComplex,
};
use crate::linalg::{extend_basis, kernel_basis, solve_columns, Rational};
use crate::nervecoh::reynolds_operator;

/// A simplicial cochain of fixed degree, valued on the simplices of that degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: usize,
    pub values: Vec<Rational>,
}

/// A simplicial chain of fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub degree: usize,
    pub values: Vec<Rational>,
}

impl Cochain {
    pub fn zero(complex: &SimplicialComplex, degree: usize) -> Self {
        Self { degree, values: vec![Rational::zero(); complex.count(degree)] }
    }

    /// The constant function `1` on vertices.
    pub fn one(complex: &SimplicialComplex) -> Self {
        Self { degree: 0, values: vec![Rational::one(); complex.count(0)] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    fn check(&self, complex: &SimplicialComplex) -> Result<()> {
        if self.values.len() != complex.count(self.degree) {
            return Err(Error::ComplexMismatch);
        }
        Ok(())
    }

    pub fn evaluate(&self, chain: &Chain) -> Result<Rational> {
        if self.degree != chain.degree || self.values.len() != chain.values.len() {
            return Err(Error::DegreeMismatch(format!(
                "cochain of degree {} against chain of degree {}",
                self.degree, chain.degree
            )));
        }
        Ok(self.values.iter().zip(&chain.values).map(|(a, b)| a * b).sum())
    }
}

pub fn cup(complex: &SimplicialComplex, a: &Cochain, b: &Cochain) -> Result<Cochain> {
    a.check(complex)?;
    b.check(complex)?;
    let (p, q) = (a.degree, b.degree);
    let values = complex
        .simplices(p + q)
        .iter()
        .map(|s| {
            let x = &a.values[complex.index_of(&s[..=p]).expect("face")];
            if x.is_zero() {
                return Rational::zero();
            }
            x * &b.values[complex.index_of(&s[p..]).expect("face")]
        })
        .collect();
    Ok(Cochain { degree: p + q, values })
}

pub fn cap(complex: &SimplicialComplex, chain: &Chain, c: &Cochain) -> Result<Chain> {
    c.check(complex)?;
    if chain.values.len() != complex.count(chain.degree) {
        return Err(Error::ComplexMismatch);
    }
    let (d, k) = (chain.degree, c.degree);
    if k > d {
        return Err(Error::DegreeMismatch(format!("cap of a {d}-chain with a {k}-cochain")));
    }
    let mut values = vec![Rational::zero(); complex.count(d - k)];
    for (s, z) in complex.simplices(d).iter().zip(&chain.values) {
        if z.is_zero() {
            continue;
        }
        let x = &c.values[complex.index_of(&s[..=k]).expect("face")];
        if !x.is_zero() {
            values[complex.index_of(&s[k..]).expect("face")] += z * x;
        }
    }
    Ok(Chain { degree: d - k, values })
}

/// The signed sum of top simplices of an oriented closed pseudomanifold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalClass {
    pub chain: Chain,
}

impl FundamentalClass {
    pub fn new(complex: &SimplicialComplex, orientation: &Orientation) -> Result<Self> {
        let d = complex.dim().ok_or_else(|| Error::NotOriented("empty complex".into()))?;
        if !check_orientation(complex, orientation)? {
            return Err(Error::NotOriented("signed top simplices do not form a cycle".into()));
        }
        let values =
            complex.simplices(d).iter().map(|s| Rational::from_integer(orientation.sign(s).unwrap().into())).collect();
        Ok(Self { chain: Chain { degree: d, values } })
    }

    /// A top-degree cocycle evaluating to `1` on the fundamental class.
    pub fn dual_cocycle(&self) -> Cochain {
        let mut values = vec![Rational::zero(); self.chain.values.len()];
        if let Some(first) = self.chain.values.first() {
            values[0] = first.recip();
        }
        Cochain { degree: self.chain.degree, values }
    }
}

/// Finds an orientation of a closed pseudomanifold that is coherent and
/// preserved by the group, if one exists.
pub fn equivariant_orientation(k: &GComplex) -> Option<Orientation> {
    let complex = k.complex();
    if !complex.is_pure() {
        return None;
    }
    let d = complex.dim()?;
    let tops = complex.simplices(d);
    // Constraint graph: sign[t] = rel * sign[s].
    let mut edges: Vec<Vec<(usize, i8)>> = vec![Vec::new(); tops.len()];
    if d > 0 {
        let mut cofaces: BTreeMap<Vec<usize>, Vec<(usize, i8)>> = BTreeMap::new();
        for (t, s) in tops.iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                cofaces.entry(face).or_default().push((t, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        for list in cofaces.values() {
            for w in list.windows(2) {
                let ((a, sa), (b, sb)) = (w[0], w[1]);
                edges[a].push((b, -sa * sb));
                edges[b].push((a, -sa * sb));
            }
        }
    }
    for table in k.simplex_action_table(d) {
        for (s, (img, sign)) in table.into_iter().enumerate() {
            edges[s].push((img, sign));
            edges[img].push((s, sign));
        }
    }
    let mut sign = vec![0i8; tops.len()];
    for start in 0..tops.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            for &(t, rel) in &edges[s] {
                let want = rel * sign[s];
                if sign[t] == 0 {
                    sign[t] = want;
                    queue.push_back(t);
                } else if sign[t] != want {
                    return None;
                }
            }
        }
    }
    let orientation = Orientation::from_signs(tops.iter().cloned().zip(sign));
    check_orientation(complex, &orientation).ok()?.then_some(orientation)
}

/// Cohomology of one inertia component `M_g ⋊ Γ_g`, modelled by invariant cochains.
#[derive(Clone, Debug)]
pub struct ClassModel {
    pub representative: ElementId,
    pub fixed: FixedSubcomplex,
    /// Set iff `M_g` is a nonempty closed pseudomanifold with a `Γ_g`-invariant orientation.
    pub fundamental: Option<FundamentalClass>,
    /// Invariant cocycles forming a basis of `H^k`, per degree `k <= dim M_g`.
    pub bases: Vec<Vec<Vec<Rational>>>,
}

fn dense_coboundary(complex: &SimplicialComplex, k: usize) -> Vec<Vec<Rational>> {
    let rows = complex.count(k + 1);
    let m = complex.coboundary_matrix(k);
    if rows == 0 {
        return Vec::new();
    }
    m.to_dense()
}

/// Columns spanning the coboundaries in degree `k`.
fn coboundary_columns(complex: &SimplicialComplex, k: usize) -> Vec<Vec<Rational>> {
    if k == 0 {
        return Vec::new();
    }
    complex.coboundary_matrix(k - 1).transpose().to_dense()
}

/// Columns spanning the boundaries in degree `j`.
fn boundary_columns(complex: &SimplicialComplex, j: usize) -> Vec<Vec<Rational>> {
    if complex.count(j + 1) == 0 {
        return Vec::new();
    }
    complex.boundary_matrix(j + 1).transpose().to_dense()
}

impl ClassModel {
    pub fn new(k: &GComplex, g: ElementId, orientation: Option<Orientation>) -> Result<Self> {
        let fixed = fixed_subcomplex(k, g)?;
        let complex = fixed.complex();
        let fundamental = match orientation {
            Some(o) => {
                let fc = FundamentalClass::new(complex, &o)?;
                if !crate::gspace::preserves_orientation(&fixed.space, &o) {
                    return Err(Error::NotOriented(format!(
                        "orientation of the fixed set of {g} is not centralizer-invariant"
                    )));
                }
                Some(fc)
            }
            None if complex.is_empty() => None,
            None => equivariant_orientation(&fixed.space).map(|o| FundamentalClass::new(complex, &o)).transpose()?,
        };
        let bases = match complex.dim() {
            None => Vec::new(),
            Some(d) => (0..=d)
                .map(|q| {
                    let kernel = kernel_basis(&dense_coboundary(complex, q), complex.count(q));
                    let p = reynolds_operator(&fixed.space, q);
                    let averaged: Vec<Vec<Rational>> = kernel.iter().map(|z| p.mul_vec(z)).collect();
                    let chosen = extend_basis(&coboundary_columns(complex, q), &averaged);
                    chosen.into_iter().map(|i| averaged[i].clone()).collect()
                })
                .collect(),
        };
        Ok(Self { representative: g, fixed, fundamental, bases })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        self.fixed.complex()
    }

    pub fn dim(&self) -> Option<usize> {
        self.complex().dim()
    }

    pub fn is_oriented(&self) -> bool {
        self.fundamental.is_some()
    }

    pub fn centralizer_order(&self) -> usize {
        self.fixed.centralizer.len()
    }

    pub fn betti(&self, k: usize) -> usize {
        self.bases.get(k).map_or(0, Vec::len)
    }

    pub fn basis_cochain(&self, k: usize, i: usize) -> Cochain {
        Cochain { degree: k, values: self.bases[k][i].clone() }
    }

    /// Coordinates of the class of a cocycle in the invariant basis.
    pub fn coordinates(&self, c: &Cochain) -> Result<Vec<Rational>> {
        c.check(self.complex())?;
        let k = c.degree;
        if self.dim().is_none_or(|d| k > d) {
            return if c.is_zero() { Ok(Vec::new()) } else { Err(Error::NotInSpan) };
        }
        let basis = &self.bases[k];
        let mut columns = basis.clone();
        columns.extend(coboundary_columns(self.complex(), k));
        let x = solve_columns(&columns, &c.values).ok_or(Error::NotInSpan)?;
        Ok(x[..basis.len()].to_vec())
    }

    pub fn from_coordinates(&self, k: usize, coords: &[Rational]) -> Cochain {
        let mut values = vec![Rational::zero(); self.complex().count(k)];
        for (b, x) in self.bases.get(k).into_iter().flatten().zip(coords) {
            for (v, y) in values.iter_mut().zip(b) {
                *v += x * y;
            }
        }
        Cochain { degree: k, values }
    }

    fn fundamental(&self) -> Result<&FundamentalClass> {
        self.fundamental.as_ref().ok_or(Error::OrientationMissing(self.representative))
    }

    /// `[M_g] ∩ c`.
    pub fn poincare_dual(&self, c: &Cochain) -> Result<Chain> {
        cap(self.complex(), &self.fundamental()?.chain, c)
    }

    /// The invariant class `c` with `[M_g] ∩ c` homologous to `z`.
    pub fn poincare_dual_inverse(&self, z: &Chain) -> Result<Cochain> {
        let fc = self.fundamental()?;
        let d = fc.chain.degree;
        let k = d
            .checked_sub(z.degree)
            .ok_or_else(|| Error::DegreeMismatch(format!("{}-chain in dimension {d}", z.degree)))?;
        let mut columns: Vec<Vec<Rational>> = (0..self.betti(k))
            .map(|i| cap(self.complex(), &fc.chain, &self.basis_cochain(k, i)).map(|c| c.values))
            .collect::<Result<_>>()?;
        let classes = columns.len();
        columns.extend(boundary_columns(self.complex(), z.degree));
        let x = solve_columns(&columns, &z.values).ok_or(Error::NotInSpan)?;
        Ok(self.from_coordinates(k, &x[..classes]))
    }
}

/// Per-class models of a G-complex, in conjugacy-class order.
#[derive(Clone, Debug)]
pub struct OrientedGComplex {
    pub space: GComplex,
    pub classes: Vec<ClassModel>,
}

impl OrientedGComplex {
    /// Orientations are searched for automatically on every fixed set.
    pub fn new(space: GComplex) -> Result<Self> {
        Self::with_orientations(space, &BTreeMap::new())
    }

    /// Uses the given orientations (keyed by class representative) and searches
    /// for the rest.
    pub fn with_orientations(space: GComplex, orientations: &BTreeMap<ElementId, Orientation>) -> Result<Self> {
        space.ensure_regular()?;
        let classes = space
            .group()
            .conjugacy_classes()
            .iter()
            .map(|c| ClassModel::new(&space, c.representative, orientations.get(&c.representative).cloned()))
            .collect::<Result<_>>()?;
        Ok(Self { space, classes })
    }

    pub fn class(&self, g: ElementId) -> &ClassModel {
        &self.classes[self.space.group().class_index(g)]
    }

    /// The zero delocalized class, with cochains of the right shapes.
    pub fn zero_class(&self) -> DelocClass {
        DelocClass {
            parts: self
                .classes
                .iter()
                .map(|c| {
                    let degrees =
                        c.dim().map_or(Vec::new(), |d| (0..=d).map(|k| Cochain::zero(c.complex(), k).values).collect());
                    (c.representative, degrees)
                })
                .collect(),
        }
    }

    /// The class given by one basis element of `H^k(M_g ⋊ Γ_g)`.
    pub fn basis_class(&self, g: ElementId, k: usize, i: usize) -> DelocClass {
        let mut x = self.zero_class();
        let c = self.class(g);
        x.parts.get_mut(&c.representative).unwrap()[k] = c.bases[k][i].clone();
        x
    }

    /// Cohomology coordinates of every part of `x`, per class and degree.
    pub fn coordinates(&self, x: &DelocClass) -> Result<BTreeMap<(ElementId, usize), Vec<Rational>>> {
        let mut out = BTreeMap::new();
        for (&g, degrees) in &x.parts {
            let model = self.class(g);
            for (k, values) in degrees.iter().enumerate() {
                out.insert(
                    (model.representative, k),
                    model.coordinates(&Cochain { degree: k, values: values.clone() })?,
                );
            }
        }
        Ok(out)
    }
}

/// `(1/|Γ_g|) ⟨ω ∪ γ, [M_g]⟩`.
pub fn pd_pairing(model: &ClassModel, omega: &Cochain, gamma: &Cochain) -> Result<Rational> {
    let fc = model
        .fundamental
        .as_ref()
        .ok_or_else(|| Error::NotOriented(format!("fixed set of element {}", model.representative)))?;
    if omega.degree + gamma.degree != fc.chain.degree {
        return Err(Error::DegreeMismatch(format!(
            "degrees {} + {} do not add up to {}",
            omega.degree, gamma.degree, fc.chain.degree
        )));
    }
    let product = cup(model.complex(), omega, gamma)?;
    Ok(product.evaluate(&fc.chain)? / Rational::from_integer(model.centralizer_order().into()))
}

/// Matrix of `pd_pairing` between the bases of `H^k` and `H^{d-k}`.
pub fn gram_matrix(model: &ClassModel, k: usize) -> Result<Vec<Vec<Rational>>> {
    let d = model.dim().ok_or_else(|| Error::NotOriented("empty fixed set".into()))?;
    let j = d.checked_sub(k).ok_or_else(|| Error::DegreeMismatch(format!("degree {k} above dimension {d}")))?;
    (0..model.betti(k))
        .map(|a| {
            (0..model.betti(j))
                .map(|b| pd_pairing(model, &model.basis_cochain(k, a), &model.basis_cochain(j, b)))
                .collect()
        })
        .collect()
}

/// A simplicial equivariant map, as vertex images indexed by source vertex position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMap {
    pub images: Vec<usize>,
}

impl GMap {
    pub fn new(source: &GComplex, target: &GComplex, images: Vec<usize>) -> Result<Self> {
        let (s, t) = (source.complex(), target.complex());
        if images.len() != s.vertices().len() {
            return Err(Error::NotSimplicial(format!("{} images for {} vertices", images.len(), s.vertices().len())));
        }
        let map = Self { images };
        for simplex in s.all_simplices() {
            let mut img = map.image_set(s, simplex);
            img.dedup();
            if !t.contains(&img) {
                return Err(Error::NotSimplicial(format!("{simplex:?} maps to {img:?}")));
            }
        }
        if source.group() != target.group() {
            return Err(Error::NotEquivariant("source and target groups differ".into()));
        }
        for g in source.group().elements() {
            for &v in s.vertices() {
                if map.vertex(s, source.act_vertex(g, v)) != target.act_vertex(g, map.vertex(s, v)) {
                    return Err(Error::NotEquivariant(format!("f(g v) != g f(v) for element {g}, vertex {v}")));
                }
            }
        }
        Ok(map)
    }

    pub fn identity(k: &GComplex) -> Self {
        Self { images: k.complex().vertices().to_vec() }
    }

    pub fn vertex(&self, source: &SimplicialComplex, v: usize) -> usize {
        self.images[source.vertex_position(v).expect("source vertex")]
    }

    fn image_set(&self, source: &SimplicialComplex, simplex: &[usize]) -> Vec<usize> {
        let mut img: Vec<usize> = simplex.iter().map(|&v| self.vertex(source, v)).collect();
        img.sort_unstable();
        img
    }

    /// `other ∘ self`.
    pub fn then(&self, source: &SimplicialComplex, middle: &SimplicialComplex, other: &GMap) -> GMap {
        GMap { images: source.vertices().iter().map(|&v| other.vertex(middle, self.vertex(source, v))).collect() }
    }

    /// Image of a simplex with its orientation sign, or `None` if it collapses.
    fn push_simplex(&self, source: &SimplicialComplex, simplex: &[usize]) -> Option<(Vec<usize>, i8)> {
        let mut img: Vec<usize> = simplex.iter().map(|&v| self.vertex(source, v)).collect();
        let sign = sort_with_sign(&mut img);
        (sign != 0).then_some((img, sign))
    }

    /// `f_*` on chains between subcomplexes containing the domain and its image.
    pub fn push_chain(
        &self,
        s: &SimplicialComplex,
        t: &SimplicialComplex,
        sub_s: &SimplicialComplex,
        z: &Chain,
    ) -> Chain {
        let mut values = vec![Rational::zero(); t.count(z.degree)];
        for (simplex, x) in sub_s.simplices(z.degree).iter().zip(&z.values) {
            if x.is_zero() {
                continue;
            }
            if let Some((img, sign)) = self.push_simplex(s, simplex) {
                values[t.index_of(&img).expect("image in target")] += x * Rational::from_integer(sign.into());
            }
        }
        Chain { degree: z.degree, values }
    }

    /// `f^*` on cochains between subcomplexes.
    pub fn pull_cochain(
        &self,
        s: &SimplicialComplex,
        sub_s: &SimplicialComplex,
        t: &SimplicialComplex,
        c: &Cochain,
    ) -> Cochain {
        let values = sub_s
            .simplices(c.degree)
            .iter()
            .map(|simplex| match self.push_simplex(s, simplex) {
                Some((img, sign)) => {
                    &c.values[t.index_of(&img).expect("image in target")] * Rational::from_integer(sign.into())
                }
                None => Rational::zero(),
            })
            .collect();
        Cochain { degree: c.degree, values }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UmkehrClass {
    pub representative: ElementId,
    pub defined: bool,
    /// `dim M_g(target) - dim M_g(source)`, when both are nonempty.
    pub degree_shift: Option<i64>,
}

/// `f_!` between two oriented G-complexes.
pub struct UmkehrMap<'a> {
    pub source: &'a OrientedGComplex,
    pub target: &'a OrientedGComplex,
    pub map: GMap,
    pub classes: Vec<UmkehrClass>,
    /// Set when the per-class degree shifts do not all have the same parity.
    pub parity_mismatch: bool,
}

impl<'a> UmkehrMap<'a> {
    pub fn new(source: &'a OrientedGComplex, target: &'a OrientedGComplex, map: GMap) -> Result<Self> {
        let map = GMap::new(&source.space, &target.space, map.images)?;
        let classes: Vec<UmkehrClass> = source
            .classes
            .iter()
            .zip(&target.classes)
            .map(|(s, t)| {
                let shift = match (s.dim(), t.dim()) {
                    (Some(a), Some(b)) => Some(b as i64 - a as i64),
                    _ => None,
                };
                let defined = s.complex().is_empty() || (s.is_oriented() && t.is_oriented());
                UmkehrClass { representative: s.representative, defined, degree_shift: shift }
            })
            .collect();
        let parities: Vec<i64> = classes.iter().filter_map(|c| c.degree_shift).map(|s| s.rem_euclid(2)).collect();
        let parity_mismatch = parities.windows(2).any(|w| w[0] != w[1]);
        Ok(Self { source, target, map, classes, parity_mismatch })
    }

    pub fn class_status(&self, g: ElementId) -> &UmkehrClass {
        &self.classes[self.source.space.group().class_index(g)]
    }

    /// `f_!` on a single invariant cocycle on `M_g(source)`. `None` means the
    /// image would sit in negative degree, so it is zero.
    pub fn apply_class(&self, g: ElementId, c: &Cochain) -> Result<Option<Cochain>> {
        let (s, t) = (self.source.class(g), self.target.class(g));
        if !self.class_status(g).defined {
            let missing = if s.is_oriented() { t.representative } else { s.representative };
            return Err(Error::OrientationMissing(missing));
        }
        let z = s.poincare_dual(c)?;
        if t.dim().is_none_or(|d| z.degree > d) {
            return Ok(None);
        }
        let pushed = self.map.push_chain(self.source.space.complex(), t.complex(), s.complex(), &z);
        t.poincare_dual_inverse(&pushed).map(Some)
    }

    /// `f_!` on a delocalized class; parts that are zero are skipped, so classes
    /// without orientation data only fail when they carry a nonzero part.
    pub fn apply(&self, x: &DelocClass) -> Result<DelocClass> {
        let mut out = self.target.zero_class();
        for (&g, degrees) in &x.parts {
            for (k, values) in degrees.iter().enumerate() {
                if values.iter().all(Zero::is_zero) {
                    continue;
                }
                let Some(image) = self.apply_class(g, &Cochain { degree: k, values: values.clone() })? else {
                    continue;
                };
                let slot = &mut out.parts.get_mut(&self.target.class(g).representative).expect("class")[image.degree];
                for (a, b) in slot.iter_mut().zip(image.values) {
                    *a += b;
                }
            }
        }
        Ok(out)
    }

    /// `f^*` on a single invariant cocycle on `M_g(target)`.
    pub fn pullback_class(&self, g: ElementId, c: &Cochain) -> Cochain {
        let (s, t) = (self.source.class(g), self.target.class(g));
        self.map.pull_cochain(self.source.space.complex(), s.complex(), t.complex(), c)
    }
}

/// Equality of cohomology classes, where `None` stands for zero.
fn same_class(model: &ClassModel, a: Option<&Cochain>, b: Option<&Cochain>) -> Result<bool> {
    let is_zero = |c: &Cochain| -> Result<bool> { Ok(model.coordinates(c)?.iter().all(Zero::is_zero)) };
    match (a, b) {
        (None, None) => Ok(true),
        (Some(c), None) | (None, Some(c)) => is_zero(c),
        (Some(x), Some(y)) => {
            Ok(x.degree == y.degree && model.coordinates(x)? == model.coordinates(y)? || is_zero(x)? && is_zero(y)?)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub class: ElementId,
    pub degree: usize,
    pub basis_index: usize,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FunctorialityReport {
    pub checked: usize,
    /// Classes where one of the maps is undefined.
    pub skipped_classes: Vec<ElementId>,
    pub discrepancies: Vec<Discrepancy>,
}

impl FunctorialityReport {
    pub fn holds(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Compares `(g ∘ f)_!` with `g_! ∘ f_!` on every basis class of the source.
pub fn check_functoriality(
    s: &OrientedGComplex,
    t: &OrientedGComplex,
    u: &OrientedGComplex,
    f: &GMap,
    g: &GMap,
) -> Result<FunctorialityReport> {
    let f_shriek = UmkehrMap::new(s, t, f.clone())?;
    let g_shriek = UmkehrMap::new(t, u, g.clone())?;
    let gf = f.then(s.space.complex(), t.space.complex(), g);
    let gf_shriek = UmkehrMap::new(s, u, gf)?;
    let mut report = FunctorialityReport::default();
    for model in &s.classes {
        let h = model.representative;
        if model.complex().is_empty() {
            continue;
        }
        if ![&f_shriek, &g_shriek, &gf_shriek].iter().all(|m| m.class_status(h).defined) {
            report.skipped_classes.push(h);
            continue;
        }
        for k in 0..model.bases.len() {
            for i in 0..model.betti(k) {
                let x = model.basis_cochain(k, i);
                let lhs = gf_shriek.apply_class(h, &x)?;
                let rhs = match f_shriek.apply_class(h, &x)? {
                    Some(y) => g_shriek.apply_class(h, &y)?,
                    None => None,
                };
                report.checked += 1;
                if !same_class(u.class(h), lhs.as_ref(), rhs.as_ref())? {
                    report.discrepancies.push(Discrepancy {
                        class: h,
                        degree: k,
                        basis_index: i,
                        detail: format!("{lhs:?} vs {rhs:?}"),
                    });
                }
            }
        }
    }
    Ok(report)
}

/// Checks `f_!(f^*(a) ∪ b) = (-1)^{|a| r} a ∪ f_!(b)` over basis classes, where
/// `r` is the degree shift of the class. The sign is `+1` whenever `|a| r` is even.
pub fn check_projection_formula(s: &OrientedGComplex, t: &OrientedGComplex, f: &GMap) -> Result<FunctorialityReport> {
    let shriek = UmkehrMap::new(s, t, f.clone())?;
    let mut report = FunctorialityReport::default();
    for model in &s.classes {
        let h = model.representative;
        if model.complex().is_empty() {
            continue;
        }
        let status = shriek.class_status(h);
        if !status.defined {
            report.skipped_classes.push(h);
            continue;
        }
        let shift = status.degree_shift.expect("both fixed sets nonempty");
        let tm = t.class(h);
        for i in 0..tm.bases.len() {
            for j in 0..model.bases.len() {
                for (ai, bj) in (0..tm.betti(i)).flat_map(|a| (0..model.betti(j)).map(move |b| (a, b))) {
                    let a = tm.basis_cochain(i, ai);
                    let b = model.basis_cochain(j, bj);
                    let lhs = if i + j <= model.dim().unwrap_or(0) {
                        shriek.apply_class(h, &cup(model.complex(), &shriek.pullback_class(h, &a), &b)?)?
                    } else {
                        None
                    };
                    let rhs = match shriek.apply_class(h, &b)? {
                        Some(fb) if i + fb.degree <= tm.dim().unwrap_or(0) => {
                            let mut r = cup(tm.complex(), &a, &fb)?;
                            if (i as i64 * shift).rem_euclid(2) == 1 {
                                r.values.iter_mut().for_each(|v| *v = -v.clone());
                            }
                            Some(r)
                        }
                        _ => None,
                    };
                    report.checked += 1;
                    if !same_class(tm, lhs.as_ref(), rhs.as_ref())? {
                        report.discrepancies.push(Discrepancy {
                            class: h,
                            degree: i + j,
                            basis_index: ai * model.betti(j).max(1) + bj,
                            detail: format!("a in degree {i}, b in degree {j}"),
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::linalg::{rank_dense, rat, ratio};

    fn polygon(n: usize) -> SimplicialComplex {
        let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        SimplicialComplex::new(n, &edges)
    }

    fn torus7() -> SimplicialComplex {
        let tris: Vec<Vec<usize>> =
            (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect();
        SimplicialComplex::new(7, &tris)
    }

    fn trivial(c: SimplicialComplex) -> OrientedGComplex {
        OrientedGComplex::new(GComplex::trivial(c)).unwrap()
    }

    fn reflection_square() -> OrientedGComplex {
        OrientedGComplex::new(GComplex::from_permutations(polygon(4), &[vec![0, 3, 2, 1]], &Caps::default()).unwrap())
            .unwrap()
    }

    #[test]
    fn cup_examples() {
        let t = torus7();
        let one = Cochain::one(&t);
        let model = &trivial(t.clone()).classes[0];
        let a = model.basis_cochain(1, 0);
        assert_eq!(cup(&t, &one, &a).unwrap(), a);
        let product = cup(&t, &model.basis_cochain(1, 0), &model.basis_cochain(1, 1)).unwrap();
        assert_eq!(model.coordinates(&product).unwrap().len(), 1);
        assert!(!model.coordinates(&product).unwrap()[0].is_zero());
        let circle = polygon(5);
        let c = &trivial(circle.clone()).classes[0];
        let a = c.basis_cochain(1, 0);
        assert!(cup(&circle, &a, &a).unwrap().values.is_empty());
        assert_eq!(cup(&circle, &Cochain::one(&t), &a), Err(Error::ComplexMismatch));
    }

    #[test]
    fn cup_is_graded_commutative_on_classes() {
        let t = torus7();
        let model = &trivial(t.clone()).classes[0];
        for i in 0..2 {
            for j in 0..2 {
                let (a, b) = (model.basis_cochain(1, i), model.basis_cochain(1, j));
                let ab = model.coordinates(&cup(&t, &a, &b).unwrap()).unwrap();
                let ba = model.coordinates(&cup(&t, &b, &a).unwrap()).unwrap();
                assert_eq!(ab, ba.iter().map(|x| -x).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn orientation_search() {
        assert!(equivariant_orientation(&GComplex::trivial(torus7())).is_some());
        let refl = GComplex::from_permutations(polygon(4), &[vec![0, 3, 2, 1]], &Caps::default()).unwrap();
        assert!(equivariant_orientation(&refl).is_none());
        let rot = GComplex::from_permutations(polygon(4), &[vec![1, 2, 3, 0]], &Caps::default()).unwrap();
        assert!(equivariant_orientation(&rot).is_some());
    }

    #[test]
    fn pairing_examples() {
        let circle = trivial(polygon(4));
        let m = &circle.classes[0];
        let fc = m.fundamental.as_ref().unwrap();
        let one = Cochain::one(m.complex());
        assert_eq!(pd_pairing(m, &one, &fc.dual_cocycle()).unwrap(), rat(1));
        assert_eq!(pd_pairing(m, &Cochain::zero(m.complex(), 0), &fc.dual_cocycle()).unwrap(), rat(0));
        assert!(matches!(pd_pairing(m, &one, &one), Err(Error::DegreeMismatch(_))));

        let refl = reflection_square();
        let sigma = &refl.classes[1];
        let points = sigma.complex();
        let e = |i: usize| Cochain { degree: 0, values: (0..2).map(|j| rat(i64::from(i == j))).collect() };
        assert_eq!(points.vertices(), &[0, 2]);
        assert_eq!(pd_pairing(sigma, &e(0), &e(0)).unwrap(), ratio(1, 2));
        assert_eq!(pd_pairing(sigma, &e(0), &e(1)).unwrap(), rat(0));
        assert!(matches!(pd_pairing(&refl.classes[0], &e(0), &e(0)), Err(Error::NotOriented(_))));
    }

    #[test]
    fn gram_matrices_are_nondegenerate() {
        let torus = trivial(torus7());
        for k in 0..=2 {
            let g = gram_matrix(&torus.classes[0], k).unwrap();
            assert_eq!(rank_dense(&g), g.len());
        }
    }

    #[test]
    fn pd_round_trip() {
        let torus = trivial(torus7());
        let m = &torus.classes[0];
        for k in 0..=2 {
            for i in 0..m.betti(k) {
                let c = m.basis_cochain(k, i);
                let back = m.poincare_dual_inverse(&m.poincare_dual(&c).unwrap()).unwrap();
                assert_eq!(m.coordinates(&back).unwrap(), m.coordinates(&c).unwrap());
            }
        }
    }

    #[test]
    fn umkehr_examples() {
        let circle = trivial(polygon(4));
        let point = trivial(SimplicialComplex::new(1, &[]));
        let collapse = GMap { images: vec![0; 4] };
        let f = UmkehrMap::new(&circle, &point, collapse).unwrap();
        let m = &circle.classes[0];
        let dual = m.fundamental.as_ref().unwrap().dual_cocycle();
        assert_eq!(f.apply_class(0, &dual).unwrap().unwrap().values, vec![rat(1)]);
        assert_eq!(f.apply_class(0, &Cochain::one(m.complex())).unwrap(), None);

        let id = UmkehrMap::new(&circle, &circle, GMap::identity(&circle.space)).unwrap();
        for k in 0..=1 {
            let c = m.basis_cochain(k, 0);
            assert_eq!(m.coordinates(&id.apply_class(0, &c).unwrap().unwrap()).unwrap(), m.coordinates(&c).unwrap());
        }

        let hexagon = trivial(polygon(6));
        let triangle = trivial(polygon(3));
        let cover = UmkehrMap::new(&hexagon, &triangle, GMap { images: (0..6).map(|i| i % 3).collect() }).unwrap();
        let tm = &triangle.classes[0];
        let a = tm.basis_cochain(1, 0);
        let round = cover.apply_class(0, &cover.pullback_class(0, &a)).unwrap().unwrap();
        let doubled: Vec<Rational> = tm.coordinates(&a).unwrap().iter().map(|x| x * rat(2)).collect();
        assert_eq!(tm.coordinates(&round).unwrap(), doubled);
    }

    #[test]
    fn functoriality_and_projection() {
        let hexagon = trivial(polygon(6));
        let triangle = trivial(polygon(3));
        let point = trivial(SimplicialComplex::new(1, &[]));
        let cover = GMap { images: (0..6).map(|i| i % 3).collect() };
        let collapse = GMap { images: vec![0; 3] };
        let report = check_functoriality(&hexagon, &triangle, &point, &cover, &collapse).unwrap();
        assert!(report.holds() && report.checked == 2);
        assert!(check_projection_formula(&hexagon, &triangle, &cover).unwrap().holds());
        assert!(check_projection_formula(&triangle, &point, &collapse).unwrap().holds());
    }

    #[test]
    fn orientation_missing_is_reported() {
        let refl = reflection_square();
        let f = UmkehrMap::new(&refl, &refl, GMap::identity(&refl.space)).unwrap();
        assert!(!f.class_status(0).defined);
        assert!(f.class_status(1).defined);
        let one = Cochain::one(refl.classes[0].complex());
        assert!(matches!(f.apply_class(0, &one), Err(Error::OrientationMissing(_))));
    }
}
