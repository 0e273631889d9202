//! Flat equivariant bundles, their delocalized Chern character, the Euler
//! assembly into class functions, and the two-sided index pairing check.
//!
//! Bundles here have trivial parallel transport along edges: `rho(g, v)` maps
//! the fiber at `v` to the fiber at `g·v` and must agree at the two ends of every
//! edge. With that, the Chern character of `E` at `g` is the locally constant
//! function `v ↦ tr rho(g, v)` on `M_g`, and higher components vanish.

use std::collections::VecDeque;
use std::sync::Arc;

use rayon::prelude::*;

use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::deloc::DelocClass;
use crate::error::{Error, Result};
use crate::grp::{CyclicTrace, ElementId, FiniteGroup};
use crate::gspace::{fixed_subcomplex, GComplex};

pub type Matrix = Vec<Vec<Cyclotomic>>;

pub fn identity_matrix(field: &Arc<CyclotomicField>, n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, field: &Arc<CyclotomicField>) -> Matrix {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = field.zero();
                    for (x, brow) in row.iter().zip(b) {
                        if !x.is_zero() && !brow[j].is_zero() {
                            acc += &(x * &brow[j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn trace(m: &Matrix, field: &Arc<CyclotomicField>) -> Cyclotomic {
    let mut acc = field.zero();
    for (i, row) in m.iter().enumerate() {
        acc += &row[i];
    }
    acc
}

fn block_diagonal(a: &Matrix, b: &Matrix, field: &Arc<CyclotomicField>) -> Matrix {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![field.zero(); n + m]; n + m];
    for i in 0..n {
        out[i][..n].clone_from_slice(&a[i]);
    }
    for i in 0..m {
        out[n + i][n..].clone_from_slice(&b[i]);
    }
    out
}

/// The field `Q(ζ_N)` with `N` the exponent of the group.
pub fn field_for(group: &FiniteGroup) -> Arc<CyclotomicField> {
    CyclotomicField::new(u32::try_from(group.exponent()).expect("group exponent fits in u32"))
}

/// Matrices of the left regular representation, indexed by element id.
pub fn regular_representation(group: &FiniteGroup) -> Vec<Matrix> {
    let field = field_for(group);
    let n = group.order();
    group
        .elements()
        .map(|g| {
            let mut m = vec![vec![field.zero(); n]; n];
            for h in group.elements() {
                m[group.mul(g, h)][h] = field.one();
            }
            m
        })
        .collect()
}

/// A one-dimensional representation given by its values on all elements.
pub fn character_representation(values: Vec<Cyclotomic>) -> Vec<Matrix> {
    values.into_iter().map(|v| vec![vec![v]]).collect()
}

#[derive(Clone, Debug)]
pub struct FlatEquivBundle {
    pub base: GComplex,
    pub field: Arc<CyclotomicField>,
    /// Fiber dimension per vertex position.
    pub fibers: Vec<usize>,
    /// `rho[g][i]`: fiber at vertex `i` to fiber at `g·v_i`.
    pub rho: Vec<Vec<Matrix>>,
}

impl FlatEquivBundle {
    pub fn trivial(base: &GComplex, rank: usize) -> Self {
        let field = field_for(base.group());
        let n = base.complex().vertices().len();
        let rho = vec![vec![identity_matrix(&field, rank); n]; base.group().order()];
        Self { base: base.clone(), field, fibers: vec![rank; n], rho }
    }

    /// The same representation matrix over every vertex.
    pub fn from_representation(base: &GComplex, rep: &[Matrix]) -> Result<Self> {
        let field = field_for(base.group());
        if rep.len() != base.group().order() {
            return Err(Error::InvalidBundle(format!(
                "{} matrices for a group of order {}",
                rep.len(),
                base.group().order()
            )));
        }
        let rank = rep[0].len();
        let n = base.complex().vertices().len();
        let rho = rep.iter().map(|m| vec![m.clone(); n]).collect();
        Ok(Self { base: base.clone(), field, fibers: vec![rank; n], rho })
    }

    /// Extends per-vertex matrices of the generators along words, using
    /// `rho(w s, v) = rho(w, s·v) rho(s, v)`. Inconsistent data shows up in
    /// [`validate_bundle`].
    pub fn from_generators(base: &GComplex, fibers: Vec<usize>, gens: Vec<Vec<Matrix>>) -> Result<Self> {
        let group = base.group();
        let field = field_for(group);
        let n = base.complex().vertices().len();
        if gens.len() != group.generators().len() || gens.iter().any(|g| g.len() != n) || fibers.len() != n {
            return Err(Error::InvalidBundle("generator data does not match the group and vertices".into()));
        }
        let position = |g: ElementId, i: usize| {
            base.complex().vertex_position(base.act_vertex(g, base.complex().vertices()[i])).expect("vertex")
        };
        let mut rho: Vec<Option<Vec<Matrix>>> = vec![None; group.order()];
        rho[group.identity()] = Some(fibers.iter().map(|&r| identity_matrix(&field, r)).collect());
        let mut queue = VecDeque::from([group.identity()]);
        while let Some(w) = queue.pop_front() {
            for (gi, &s) in group.generators().iter().enumerate() {
                let ws = group.mul(w, s);
                if rho[ws].is_some() {
                    continue;
                }
                let rw = rho[w].as_ref().expect("visited");
                let next = (0..n).map(|i| mat_mul(&rw[position(s, i)], &gens[gi][i], &field)).collect();
                rho[ws] = Some(next);
                queue.push_back(ws);
            }
        }
        let rho = rho.into_iter().map(|r| r.expect("generators generate")).collect();
        Ok(Self { base: base.clone(), field, fibers, rho })
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let rho = self
            .rho
            .iter()
            .zip(&other.rho)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| block_diagonal(x, y, &self.field)).collect())
            .collect();
        let fibers = self.fibers.iter().zip(&other.fibers).map(|(a, b)| a + b).collect();
        Self { base: self.base.clone(), field: self.field.clone(), fibers, rho }
    }

    fn position(&self, label: usize) -> usize {
        self.base.complex().vertex_position(label).expect("vertex")
    }

    pub fn rho_at(&self, g: ElementId, label: usize) -> &Matrix {
        &self.rho[g][self.position(label)]
    }

    /// `tr rho(g, v)`.
    pub fn fiber_trace(&self, g: ElementId, label: usize) -> Cyclotomic {
        trace(self.rho_at(g, label), &self.field)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BundleReport {
    pub shape: Vec<String>,
    pub identity: Vec<usize>,
    /// Witnessing triples `(g, h, v)` with `rho(gh, v) != rho(g, h·v) rho(h, v)`.
    pub cocycle: Vec<(ElementId, ElementId, usize)>,
    /// `(g, v, w)` for edges `{v, w}` where `rho(g, v) != rho(g, w)`.
    pub flatness: Vec<(ElementId, usize, usize)>,
}

impl BundleReport {
    pub fn is_valid(&self) -> bool {
        self.shape.is_empty() && self.identity.is_empty() && self.cocycle.is_empty() && self.flatness.is_empty()
    }

    pub fn summary(&self) -> String {
        if let Some(s) = self.shape.first() {
            return s.clone();
        }
        if let Some(v) = self.identity.first() {
            return format!("rho(e, {v}) is not the identity");
        }
        if let Some((g, h, v)) = self.cocycle.first() {
            return format!("cocycle identity fails at (g, h, v) = ({g}, {h}, {v})");
        }
        if let Some((g, v, w)) = self.flatness.first() {
            return format!("rho({g}, -) differs along edge {{{v}, {w}}}");
        }
        "valid".into()
    }
}

pub fn validate_bundle(e: &FlatEquivBundle) -> BundleReport {
    let mut report = BundleReport::default();
    let group = e.base.group();
    let complex = e.base.complex();
    let labels = complex.vertices();
    if e.rho.len() != group.order() || e.fibers.len() != labels.len() {
        report.shape.push("bundle data does not match the group and vertices".into());
        return report;
    }
    for g in group.elements() {
        for (i, &v) in labels.iter().enumerate() {
            let m = &e.rho[g][i];
            let target = e.fibers[e.position(e.base.act_vertex(g, v))];
            if m.len() != target || m.iter().any(|row| row.len() != e.fibers[i]) {
                report.shape.push(format!("rho({g}, {v}) has the wrong shape"));
            }
        }
    }
    if !report.shape.is_empty() {
        return report;
    }
    for (i, &v) in labels.iter().enumerate() {
        if e.rho[group.identity()][i] != identity_matrix(&e.field, e.fibers[i]) {
            report.identity.push(v);
        }
    }
    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            for &v in labels {
                let rhs = mat_mul(e.rho_at(g, e.base.act_vertex(h, v)), e.rho_at(h, v), &e.field);
                if *e.rho_at(gh, v) != rhs {
                    report.cocycle.push((g, h, v));
                }
            }
        }
    }
    for edge in complex.simplices(1) {
        let (v, w) = (edge[0], edge[1]);
        for g in group.elements() {
            if e.rho_at(g, v) != e.rho_at(g, w) {
                report.flatness.push((g, v, w));
            }
        }
    }
    report
}

fn ensure_valid(e: &FlatEquivBundle) -> Result<()> {
    let report = validate_bundle(e);
    if report.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidBundle(report.summary()))
    }
}

/// `ch^g(E)`: per class representative, the degree-0 cochain `v ↦ tr rho(g, v)`
/// on `M_g`; higher degrees are zero.
pub fn deloc_chern(e: &FlatEquivBundle) -> Result<DelocClass<Cyclotomic>> {
    ensure_valid(e)?;
    e.base.ensure_regular()?;
    let group = e.base.group();
    let mut parts = std::collections::BTreeMap::new();
    for class in group.conjugacy_classes() {
        let g = class.representative;
        let fixed = fixed_subcomplex(&e.base, g)?;
        let complex = fixed.complex();
        let degrees: Vec<Vec<Cyclotomic>> = match complex.dim() {
            None => Vec::new(),
            Some(d) => (0..=d)
                .map(|q| {
                    if q == 0 {
                        complex.vertices().iter().map(|&v| e.fiber_trace(g, v)).collect()
                    } else {
                        vec![e.field.zero(); complex.count(q)]
                    }
                })
                .collect(),
        };
        parts.insert(g, degrees);
    }
    Ok(DelocClass { parts })
}

/// A class function, listed by conjugacy class representative.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassFunction {
    pub values: Vec<(ElementId, Cyclotomic)>,
}

impl ClassFunction {
    pub fn value_at_class(&self, group: &FiniteGroup, g: ElementId) -> &Cyclotomic {
        &self.values[group.class_index(g)].1
    }
}

/// `Σ_k (-1)^k tr(g on C^k(K; E))`, counting simplices fixed by `g` with the
/// orientation sign of `g` on them and the fiber trace at their first vertex.
pub fn euler_character_at(e: &FlatEquivBundle, g: ElementId) -> Cyclotomic {
    let complex = e.base.complex();
    let mut acc = e.field.zero();
    let Some(d) = complex.dim() else { return acc };
    for k in 0..=d {
        for s in complex.simplices(k) {
            let (img, sign) = e.base.act_simplex(g, s);
            if img != *s {
                continue;
            }
            let tr = e.fiber_trace(g, s[0]);
            let signed = if (k % 2 == 0) == (sign > 0) { tr } else { -&tr };
            acc += &signed;
        }
    }
    acc
}

pub fn euler_assembly(e: &FlatEquivBundle) -> Result<ClassFunction> {
    ensure_valid(e)?;
    e.base.ensure_regular()?;
    let values = e
        .base
        .group()
        .conjugacy_classes()
        .par_iter()
        .map(|c| (c.representative, euler_character_at(e, c.representative)))
        .collect();
    Ok(ClassFunction { values })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IndexReport {
    pub class_rep: ElementId,
    pub lhs: Cyclotomic,
    pub rhs: Cyclotomic,
    pub equal: bool,
}

/// Compares the assembly character at the class of `tau` with
/// `Σ_C χ(C) · ch^g(E)|_C` over the connected components `C` of `M_g`.
pub fn index_pairing(e: &FlatEquivBundle, tau: &CyclicTrace) -> Result<IndexReport> {
    let g = tau.class_rep;
    let lhs = euler_assembly(e)?.value_at_class(e.base.group(), g).clone();
    let chern = deloc_chern(e)?;
    let fixed = fixed_subcomplex(&e.base, g)?;
    let complex = fixed.complex();
    let rep = e.base.group().conjugacy_classes()[e.base.group().class_index(g)].representative;
    let values = &chern.parts[&rep];
    let mut rhs = e.field.zero();
    for component in complex.connected_components() {
        let sub = complex.induced(&component);
        let chi = e.field.from_int(sub.euler_characteristic());
        let pos = complex.vertex_position(component[0]).expect("vertex");
        let ch = if rep == g { values[0][pos].clone() } else { e.fiber_trace(g, component[0]) };
        rhs += &(&chi * &ch);
    }
    Ok(IndexReport { class_rep: g, equal: lhs == rhs, lhs, rhs })
}

#[derive(Clone, Debug)]
pub struct AssemblyCase {
    pub name: String,
    pub bundle: FlatEquivBundle,
    pub trace: CyclicTrace,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AssemblySummary {
    pub total: usize,
    pub passed: usize,
    /// `(case name, witness)` for every failing case.
    pub failures: Vec<(String, String)>,
    pub reports: Vec<(String, Option<IndexReport>)>,
}

pub fn chern_assembly_check(corpus: &[AssemblyCase]) -> AssemblySummary {
    let results: Vec<(String, Result<IndexReport>)> =
        corpus.par_iter().map(|c| (c.name.clone(), index_pairing(&c.bundle, &c.trace))).collect();
    let mut summary = AssemblySummary { total: corpus.len(), ..Default::default() };
    for (name, result) in results {
        match result {
            Ok(r) if r.equal => {
                summary.passed += 1;
                summary.reports.push((name, Some(r)));
            }
            Ok(r) => {
                summary.failures.push((name.clone(), format!("lhs {} != rhs {}", r.lhs, r.rhs)));
                summary.reports.push((name, Some(r)));
            }
            Err(err) => {
                summary.failures.push((name.clone(), err.to_string()));
                summary.reports.push((name, None));
            }
        }
    }
    summary
}
