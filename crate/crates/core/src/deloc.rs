//! The inertia groupoid, delocalized cohomology, and the degree-zero Tu–Xu trace.
//!
//! For a class `[g]` the component of the inertia groupoid is the fixed
//! subcomplex `M_g` acted on by the centralizer `Γ_g`; the delocalized
//! cohomology is the sum over classes of `H^*(M_g ⋊ Γ_g)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::traits::Zero;
use rayon::prelude::*;

use crate::caps::Caps;
use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::error::{Error, Result};
use crate::grp::ElementId;
use crate::gspace::{fixed_subcomplex, FixedSubcomplex, GComplex};
use crate::linalg::{rank_of_integer_rows, Rational};
use crate::nervecoh::total_cohomology_dim;

#[derive(Clone, Debug)]
pub struct InertiaComponent {
    pub class_index: usize,
    pub class_size: usize,
    pub fixed: FixedSubcomplex,
}

impl InertiaComponent {
    pub fn representative(&self) -> ElementId {
        self.fixed.element
    }
}

/// One component per conjugacy class, in class order.
#[derive(Clone, Debug)]
pub struct InertiaDecomposition {
    pub components: Vec<InertiaComponent>,
}

pub fn inertia(k: &GComplex) -> Result<InertiaDecomposition> {
    k.ensure_regular()?;
    let components = k
        .group()
        .conjugacy_classes()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            Ok(InertiaComponent { class_index: i, class_size: c.size(), fixed: fixed_subcomplex(k, c.representative)? })
        })
        .collect::<Result<_>>()?;
    Ok(InertiaDecomposition { components })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// A delocalized class: for every class representative `g`, degree-indexed
/// `Γ_g`-invariant cochains on `M_g` (entry `k` lists values on the k-simplices).
#[derive(Clone, Debug, PartialEq)]
pub struct DelocClass<S = Rational> {
    pub parts: BTreeMap<ElementId, Vec<Vec<S>>>,
}

impl<S> Default for DelocClass<S> {
    fn default() -> Self {
        Self { parts: BTreeMap::new() }
    }
}

impl<S> DelocClass<S> {
    /// `None` for the zero class or when both parities occur.
    pub fn parity(&self, is_zero: impl Fn(&S) -> bool) -> Option<Parity> {
        let mut seen = [false; 2];
        for degrees in self.parts.values() {
            for (k, v) in degrees.iter().enumerate() {
                if v.iter().any(|x| !is_zero(x)) {
                    seen[k % 2] = true;
                }
            }
        }
        match seen {
            [true, false] => Some(Parity::Even),
            [false, true] => Some(Parity::Odd),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCohomology {
    pub representative: ElementId,
    pub class_size: usize,
    pub centralizer_order: usize,
    /// `dims[k] = dim H^k(M_g ⋊ Γ_g)` for `k <= dim M_g`; empty if `M_g` is empty.
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelocCohomology {
    pub classes: Vec<ClassCohomology>,
    pub even: usize,
    pub odd: usize,
}

/// Cohomology dims of the inertia component of an arbitrary element `g`.
pub fn class_cohomology(k: &GComplex, g: ElementId) -> Result<ClassCohomology> {
    let fixed = fixed_subcomplex(k, g)?;
    let dims = match fixed.complex().dim() {
        None => Vec::new(),
        Some(d) => (0..=d).map(|q| total_cohomology_dim(&fixed.space, q)).collect::<Result<_>>()?,
    };
    let group = k.group();
    Ok(ClassCohomology {
        representative: g,
        class_size: group.conjugacy_classes()[group.class_index(g)].size(),
        centralizer_order: fixed.centralizer.len(),
        dims,
    })
}

pub fn deloc_cohomology(k: &GComplex) -> Result<DelocCohomology> {
    deloc_cohomology_with(k, |c| c.representative)
}

/// As [`deloc_cohomology`], with a caller-chosen representative per class.
pub fn deloc_cohomology_with(
    k: &GComplex,
    choose: impl Fn(&crate::grp::ConjugacyClass) -> ElementId + Sync,
) -> Result<DelocCohomology> {
    k.ensure_regular()?;
    let classes: Vec<ClassCohomology> =
        k.group().conjugacy_classes().par_iter().map(|c| class_cohomology(k, choose(c))).collect::<Result<_>>()?;
    let (mut even, mut odd) = (0, 0);
    for c in &classes {
        for (q, &d) in c.dims.iter().enumerate() {
            if q % 2 == 0 {
                even += d;
            } else {
                odd += d;
            }
        }
    }
    Ok(DelocCohomology { classes, even, odd })
}

/// Arrows of `K_0 ⋊ G`: `(x, g)` with target `x` and source `x·g = g^{-1}(x)`.
/// Arrow `(x, g)` has index `position(x) * |G| + g`.
#[derive(Clone, Debug)]
pub struct ActionGroupoid<'a> {
    space: &'a GComplex,
    /// `right[g][i]` is the position of `x_i · g`.
    right: Vec<Vec<usize>>,
    field: Arc<CyclotomicField>,
}

impl<'a> ActionGroupoid<'a> {
    pub fn new(space: &'a GComplex) -> Self {
        let group = space.group();
        let complex = space.complex();
        let right = group
            .elements()
            .map(|g| {
                let ginv = group.inv(g);
                complex
                    .vertices()
                    .iter()
                    .map(|&v| complex.vertex_position(space.act_vertex(ginv, v)).expect("vertex"))
                    .collect()
            })
            .collect();
        let exponent = u32::try_from(group.exponent()).expect("group exponent fits in u32");
        Self { space, right, field: CyclotomicField::new(exponent) }
    }

    pub fn space(&self) -> &GComplex {
        self.space
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn points(&self) -> usize {
        self.space.complex().vertices().len()
    }

    pub fn arrows(&self) -> usize {
        self.points() * self.space.group().order()
    }

    pub fn arrow(&self, x: usize, g: ElementId) -> usize {
        x * self.space.group().order() + g
    }

    /// Position of `x·g`.
    pub fn act(&self, x: usize, g: ElementId) -> usize {
        self.right[g][x]
    }

    /// Inertia points `(x, g)` with `x·g = x`, sorted.
    pub fn inertia_points(&self) -> Vec<(usize, ElementId)> {
        (0..self.points())
            .flat_map(|x| self.space.group().elements().filter(move |&g| self.act(x, g) == x).map(move |g| (x, g)))
            .collect()
    }
}

/// An element of the convolution algebra of `K_0 ⋊ G` with coefficients in `Q(ζ_N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupoidAlgebraElement {
    pub coeffs: Vec<Cyclotomic>,
}

impl GroupoidAlgebraElement {
    pub fn zero(gpd: &ActionGroupoid<'_>) -> Self {
        Self { coeffs: vec![gpd.field.zero(); gpd.arrows()] }
    }

    pub fn indicator(gpd: &ActionGroupoid<'_>, x: usize, g: ElementId) -> Self {
        let mut a = Self::zero(gpd);
        a.coeffs[gpd.arrow(x, g)] = gpd.field.one();
        a
    }

    /// A `(1, 0)` nerve cochain is a function on arrows with the same indexing.
    pub fn from_nerve_cochain(gpd: &ActionGroupoid<'_>, values: &[Rational]) -> Result<Self> {
        if values.len() != gpd.arrows() {
            return Err(Error::DegreeMismatch(format!("{} values for {} arrows", values.len(), gpd.arrows())));
        }
        Ok(Self { coeffs: values.iter().map(|q| gpd.field.from_rational(q.clone())).collect() })
    }

    /// `(a * b)(x, g) = Σ_h a(x, h) b(x·h, h^{-1} g)`.
    pub fn convolve(&self, other: &Self, gpd: &ActionGroupoid<'_>) -> Self {
        let group = gpd.space.group();
        let mut out = Self::zero(gpd);
        for x in 0..gpd.points() {
            for h in group.elements() {
                let a = &self.coeffs[gpd.arrow(x, h)];
                if a.is_zero() {
                    continue;
                }
                let y = gpd.act(x, h);
                for k in group.elements() {
                    let b = &other.coeffs[gpd.arrow(y, k)];
                    if !b.is_zero() {
                        out.coeffs[gpd.arrow(x, group.mul(h, k))] += &(a * b);
                    }
                }
            }
        }
        out
    }
}

/// A function on the inertia points `{(x, g) : x·g = x}`.
pub type InertiaFunction = BTreeMap<(usize, ElementId), Cyclotomic>;

/// `Tr(a)(x, g) = Σ_γ a(x·γ, γ^{-1} g γ)` on inertia points.
pub fn tuxu_trace(a: &GroupoidAlgebraElement, gpd: &ActionGroupoid<'_>) -> InertiaFunction {
    let group = gpd.space.group();
    gpd.inertia_points()
        .into_iter()
        .map(|(x, g)| {
            let mut sum = gpd.field.zero();
            for c in group.elements() {
                let conj = group.mul(group.inv(c), group.mul(g, c));
                sum += &a.coeffs[gpd.arrow(gpd.act(x, c), conj)];
            }
            ((x, g), sum)
        })
        .collect()
}

/// `Tr(a)` pulled back to the fixed vertices of `g`, keyed by vertex label.
pub fn tr_g(a: &GroupoidAlgebraElement, gpd: &ActionGroupoid<'_>, g: ElementId) -> Result<BTreeMap<usize, Cyclotomic>> {
    if !gpd.space.group().contains(g) {
        return Err(Error::ElementNotInGroup(g));
    }
    let labels = gpd.space.complex().vertices();
    Ok(tuxu_trace(a, gpd).into_iter().filter(|((_, h), _)| *h == g).map(|((x, _), v)| (labels[x], v)).collect())
}

/// `dim A / [A, A]` for the convolution algebra of the groupoid `K_0 ⋊ G` on the
/// vertex set, by exact rank of the span of commutators of arrow indicators.
pub fn hh0_groupoid_oracle(k: &GComplex, caps: &Caps) -> Result<usize> {
    let gpd = ActionGroupoid::new(k);
    let n = gpd.arrows();
    if n > caps.hh0_groupoid {
        return Err(Error::CapExceeded {
            what: "arrows for the groupoid commutator oracle",
            size: n,
            cap: caps.hh0_groupoid,
        });
    }
    let group = k.group();
    let mut rows = Vec::new();
    // [e_(x,g), e_(x·g,h)] = e_(x,gh) - [x·gh = x] e_(x·g,hg); other pairs are
    // either zero or the negative of one of these.
    for x in 0..gpd.points() {
        for g in group.elements() {
            let y = gpd.act(x, g);
            for h in group.elements() {
                let gh = group.mul(g, h);
                let mut row = vec![(gpd.arrow(x, gh), 1)];
                if gpd.act(x, gh) == x {
                    row.push((gpd.arrow(y, group.mul(h, g)), -1));
                }
                rows.push(row);
            }
        }
    }
    Ok(n - rank_of_integer_rows(rows, n))
}

/// Degree-0 delocalized total: the number of `Γ_g`-orbits on fixed points, summed over classes.
pub fn deloc_h0_total(k: &GComplex) -> Result<usize> {
    Ok(deloc_cohomology(k)?.classes.iter().filter_map(|c| c.dims.first()).sum())
}

impl<S: Clone + Zero> DelocClass<S> {
    pub fn zero_for(inertia: &InertiaDecomposition) -> Self {
        let parts = inertia
            .components
            .iter()
            .map(|c| {
                let complex = c.fixed.complex();
                let degrees =
                    complex.dim().map_or(Vec::new(), |d| (0..=d).map(|q| vec![S::zero(); complex.count(q)]).collect());
                (c.representative(), degrees)
            })
            .collect();
        Self { parts }
    }
}
