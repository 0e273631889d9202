//! Finite simplicial complexes with simplicial group actions.
//!
//! Vertices carry integer labels; a simplex is its sorted label list, and all
//! simplicial signs use the ascending label order. Group elements act on the
//! left, `(gh)(v) = g(h(v))`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::grp::{group_from_permutations, ElementId, FiniteGroup};
use crate::linalg::SparseRationalMatrix;

pub type Simplex = Vec<usize>;

/// Sorts `seq` in place and returns the sign of the sorting permutation, or 0
/// if `seq` has a repeated entry.
pub fn sort_with_sign(seq: &mut [usize]) -> i8 {
    let mut sign = 1i8;
    for i in 1..seq.len() {
        let mut j = i;
        while j > 0 && seq[j - 1] > seq[j] {
            seq.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if seq.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<usize>,
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self { vertices: Vec::new(), by_dim: Vec::new(), index: Vec::new() }
    }

    /// Complex on vertices `0..n` generated by `simplices` (closed under faces).
    pub fn new(n: usize, simplices: &[Vec<usize>]) -> Self {
        Self::from_labeled(0..n, simplices)
    }

    /// Complex on the given vertex labels generated by `simplices`. Labels that
    /// occur only inside simplices are added as vertices.
    pub fn from_labeled(vertices: impl IntoIterator<Item = usize>, simplices: &[Vec<usize>]) -> Self {
        let mut all: Vec<HashSet<Simplex>> = Vec::new();
        let insert = |s: Simplex, all: &mut Vec<HashSet<Simplex>>| {
            let d = s.len() - 1;
            if all.len() <= d {
                all.resize_with(d + 1, HashSet::new);
            }
            all[d].insert(s);
        };
        for v in vertices {
            insert(vec![v], &mut all);
        }
        for s in simplices {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            let n = s.len();
            for mask in 1u64..(1u64 << n) {
                let face: Simplex = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                insert(face, &mut all);
            }
        }
        let by_dim: Vec<Vec<Simplex>> = all
            .into_iter()
            .map(|set| {
                let mut v: Vec<Simplex> = set.into_iter().collect();
                v.sort();
                v
            })
            .collect();
        let vertices = by_dim.first().map(|v| v.iter().map(|s| s[0]).collect()).unwrap_or_default();
        let index = by_dim.iter().map(|v| v.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        Self { vertices, by_dim, index }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn vertex_position(&self, label: usize) -> Option<usize> {
        self.vertices.binary_search(&label).ok()
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex.len().checked_sub(1)?)?.get(simplex).copied()
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.index_of(simplex).is_some()
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(k, s)| if k % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) }).sum()
    }

    /// Boundary `C_k -> C_{k-1}` (rows: (k-1)-simplices, columns: k-simplices).
    pub fn boundary_matrix(&self, k: usize) -> SparseRationalMatrix {
        let rows = if k == 0 { 0 } else { self.count(k - 1) };
        let mut m = SparseRationalMatrix::new(rows, self.count(k));
        if k == 0 {
            return m;
        }
        for (j, s) in self.simplices(k).iter().enumerate() {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                let r = self.index[k - 1][&face];
                m.add_int(r, j, if i % 2 == 0 { 1 } else { -1 });
            }
        }
        m
    }

    /// Coboundary `C^k -> C^{k+1}`.
    pub fn coboundary_matrix(&self, k: usize) -> SparseRationalMatrix {
        self.boundary_matrix(k + 1).transpose()
    }

    /// Rational Betti numbers in degrees `0..=dim`.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let Some(d) = self.dim() else { return Vec::new() };
        let ranks: Vec<usize> = (0..=d + 1).map(|k| self.boundary_matrix(k).rank_q()).collect();
        (0..=d).map(|k| self.count(k) - ranks[k] - ranks[k + 1]).collect()
    }

    /// Vertex sets of connected components, ordered by smallest label.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for e in self.simplices(1) {
            let (a, b) = (self.vertex_position(e[0]).unwrap(), self.vertex_position(e[1]).unwrap());
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(self.vertices[i]);
        }
        groups.into_values().collect()
    }

    /// Full subcomplex spanned by the given vertex labels.
    pub fn induced(&self, labels: &[usize]) -> SimplicialComplex {
        let keep: HashSet<usize> = labels.iter().copied().collect();
        let simplices: Vec<Simplex> =
            self.all_simplices().filter(|s| s.iter().all(|v| keep.contains(v))).cloned().collect();
        SimplicialComplex::from_labeled(std::iter::empty(), &simplices)
    }

    /// Simplices that are not faces of any other simplex.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: HashSet<&Simplex> = HashSet::new();
        let mut faces = Vec::new();
        for k in 1..self.by_dim.len() {
            for s in &self.by_dim[k] {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    faces.push((k - 1, f));
                }
            }
        }
        for (k, f) in &faces {
            covered.insert(&self.by_dim[*k][self.index[*k][f]]);
        }
        self.all_simplices().filter(|s| !covered.contains(s)).cloned().collect()
    }

    pub fn is_pure(&self) -> bool {
        match self.dim() {
            None => true,
            Some(d) => self.maximal_simplices().iter().all(|s| s.len() == d + 1),
        }
    }
}

/// Signs on top simplices relative to ascending vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Orientation {
    top_signs: BTreeMap<Simplex, i8>,
}

impl Orientation {
    pub fn from_signs(signs: impl IntoIterator<Item = (Simplex, i8)>) -> Self {
        let top_signs = signs
            .into_iter()
            .map(|(mut s, sign)| {
                let perm_sign = sort_with_sign(&mut s);
                (s, sign * perm_sign)
            })
            .collect();
        Self { top_signs }
    }

    /// Orientation given by ordered vertex tuples, one per top simplex.
    pub fn from_ordered(tuples: &[Vec<usize>]) -> Self {
        Self::from_signs(tuples.iter().map(|t| (t.clone(), 1)))
    }

    /// The `+1` orientation on every vertex of a 0-dimensional complex.
    pub fn points(complex: &SimplicialComplex) -> Self {
        Self::from_signs(complex.simplices(0).iter().map(|s| (s.clone(), 1)))
    }

    pub fn sign(&self, simplex: &[usize]) -> Option<i8> {
        self.top_signs.get(simplex).copied()
    }

    pub fn top_signs(&self) -> &BTreeMap<Simplex, i8> {
        &self.top_signs
    }

    /// Induced orientation on the barycentric subdivision (labels as in
    /// [`barycentric_subdivide`]).
    pub fn subdivided(&self, complex: &SimplicialComplex) -> Orientation {
        let labels = subdivision_labels(complex);
        let mut signs = Vec::new();
        for (top, &sign) in &self.top_signs {
            let d = top.len();
            for perm in permutations(d) {
                let mut p = perm.clone();
                let perm_sign = sort_with_sign(&mut p);
                let chain: Simplex = (1..=d)
                    .map(|i| {
                        let mut face: Simplex = perm[..i].iter().map(|&j| top[j]).collect();
                        face.sort_unstable();
                        labels[&face]
                    })
                    .collect();
                signs.push((chain, sign * perm_sign));
            }
        }
        Orientation::from_signs(signs)
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// True iff the signed sum of top simplices is a cycle. Missing or extra signs
/// make the check fail.
pub fn check_orientation(complex: &SimplicialComplex, orientation: &Orientation) -> Result<bool> {
    if !complex.is_pure() {
        return Err(Error::NotPure);
    }
    let Some(d) = complex.dim() else { return Ok(orientation.top_signs.is_empty()) };
    let tops = complex.simplices(d);
    if orientation.top_signs.len() != tops.len() || tops.iter().any(|s| orientation.sign(s).is_none()) {
        return Ok(false);
    }
    if d == 0 {
        return Ok(true);
    }
    let mut boundary: HashMap<Simplex, i64> = HashMap::new();
    for s in tops {
        let sign = i64::from(orientation.sign(s).unwrap());
        for i in 0..s.len() {
            let mut face = s.clone();
            face.remove(i);
            *boundary.entry(face).or_default() += if i % 2 == 0 { sign } else { -sign };
        }
    }
    Ok(boundary.values().all(|&v| v == 0))
}

/// A finite group acting simplicially on a complex.
#[derive(Clone, Debug)]
pub struct GComplex {
    complex: SimplicialComplex,
    group: FiniteGroup,
    /// `action[g][position of v]` is the label of `g(v)`.
    action: Vec<Vec<usize>>,
    regular: OnceLock<bool>,
}

impl GComplex {
    pub fn new(complex: SimplicialComplex, group: FiniteGroup, action: Vec<Vec<usize>>) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidAction(format!(
                "{} vertex maps for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        for (g, images) in action.iter().enumerate() {
            if images.len() != complex.vertices().len() || images.iter().any(|&v| complex.vertex_position(v).is_none())
            {
                return Err(Error::InvalidAction(format!(
                    "vertex map of element {g} does not map vertices to vertices"
                )));
            }
        }
        Ok(Self { complex, group, action, regular: OnceLock::new() })
    }

    pub fn trivial(complex: SimplicialComplex) -> Self {
        Self::with_trivial_action(complex, FiniteGroup::trivial())
    }

    /// `group` acting by the identity on every vertex.
    pub fn with_trivial_action(complex: SimplicialComplex, group: FiniteGroup) -> Self {
        let action = vec![complex.vertices().to_vec(); group.order()];
        Self { complex, group, action, regular: OnceLock::new() }
    }

    /// Extends vertex maps given for the group generators (indexed by vertex
    /// position, valued in labels) along words in the generators. Inconsistent
    /// data is detected by [`validate_gcomplex`].
    pub fn from_generator_images(
        complex: SimplicialComplex,
        group: FiniteGroup,
        images: &[Vec<usize>],
    ) -> Result<Self> {
        if images.len() != group.generators().len() {
            return Err(Error::InvalidAction(format!(
                "{} generator images for {} generators",
                images.len(),
                group.generators().len()
            )));
        }
        let positions: Vec<Vec<usize>> = images
            .iter()
            .enumerate()
            .map(|(i, img)| {
                if img.len() != complex.vertices().len() {
                    return Err(Error::InvalidAction(format!("generator {i} image has wrong length")));
                }
                img.iter()
                    .map(|&v| {
                        complex
                            .vertex_position(v)
                            .ok_or_else(|| Error::InvalidAction(format!("generator {i} maps to unknown vertex {v}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let n = complex.vertices().len();
        let mut act_pos: Vec<Option<Vec<usize>>> = vec![None; group.order()];
        act_pos[group.identity()] = Some((0..n).collect());
        let mut queue = std::collections::VecDeque::from([group.identity()]);
        while let Some(w) = queue.pop_front() {
            let wa = act_pos[w].clone().expect("visited");
            for (gi, &s) in group.generators().iter().enumerate() {
                let ws = group.mul(w, s);
                if act_pos[ws].is_none() {
                    act_pos[ws] = Some(positions[gi].iter().map(|&p| wa[p]).collect());
                    queue.push_back(ws);
                }
            }
        }
        let verts = complex.vertices().to_vec();
        let action = act_pos
            .into_iter()
            .map(|p| p.expect("generators generate").into_iter().map(|i| verts[i]).collect())
            .collect();
        Self::new(complex, group, action)
    }

    /// The group generated by the given vertex permutations, acting through them.
    /// Vertices must be labeled `0..n`.
    pub fn from_permutations(complex: SimplicialComplex, gens: &[Vec<usize>], caps: &Caps) -> Result<Self> {
        let n = complex.vertices().len();
        if complex.vertices().iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::InvalidAction("vertices must be labeled 0..n".into()));
        }
        let group = group_from_permutations(n, gens, caps)?;
        let action = group.elements().map(|g| group.permutation(g).to_vec()).collect();
        Self::new(complex, group, action)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn vertex_map(&self, g: ElementId) -> &[usize] {
        &self.action[g]
    }

    pub fn act_vertex(&self, g: ElementId, label: usize) -> usize {
        self.action[g][self.complex.vertex_position(label).expect("vertex of the complex")]
    }

    /// Image of a simplex as a sorted simplex together with the orientation sign
    /// of the induced vertex bijection (0 if the image is degenerate).
    pub fn act_simplex(&self, g: ElementId, simplex: &[usize]) -> (Simplex, i8) {
        let mut image: Simplex = simplex.iter().map(|&v| self.act_vertex(g, v)).collect();
        let sign = sort_with_sign(&mut image);
        (image, sign)
    }

    /// `action[g]` as a table from simplex index to (image index, sign) in degree `k`.
    pub fn simplex_action_table(&self, k: usize) -> Vec<Vec<(usize, i8)>> {
        self.group
            .elements()
            .map(|g| {
                self.complex
                    .simplices(k)
                    .iter()
                    .map(|s| {
                        let (img, sign) = self.act_simplex(g, s);
                        (self.complex.index_of(&img).expect("validated simplicial action"), sign)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_regular(&self) -> bool {
        *self.regular.get_or_init(|| validate_gcomplex(self).is_regular())
    }

    pub fn ensure_regular(&self) -> Result<()> {
        if self.is_regular() {
            Ok(())
        } else {
            let report = validate_gcomplex(self);
            Err(Error::NotRegular(report.summary()))
        }
    }

    /// Restriction of the action to a subgroup and an invariant subcomplex.
    pub fn restrict(&self, sub: &SimplicialComplex, members: &[ElementId]) -> Result<(GComplex, Vec<ElementId>)> {
        let subgroup = self.group.subgroup(members);
        let action = subgroup
            .embedding
            .iter()
            .map(|&g| sub.vertices().iter().map(|&v| self.act_vertex(g, v)).collect())
            .collect();
        Ok((GComplex::new(sub.clone(), subgroup.group, action)?, subgroup.embedding))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub not_bijective: Vec<ElementId>,
    pub homomorphism: Vec<(ElementId, ElementId)>,
    pub non_simplicial: Vec<(ElementId, Simplex)>,
    pub irregular: Vec<(ElementId, Simplex)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.not_bijective.is_empty() && self.homomorphism.is_empty() && self.non_simplicial.is_empty()
    }

    pub fn is_regular(&self) -> bool {
        self.is_valid() && self.irregular.is_empty()
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if let Some(g) = self.not_bijective.first() {
            parts.push(format!("element {g} is not a bijection on vertices"));
        }
        if let Some((g, h)) = self.homomorphism.first() {
            parts.push(format!("action of {g}*{h} differs from the composite"));
        }
        if let Some((g, s)) = self.non_simplicial.first() {
            parts.push(format!("element {g} maps simplex {s:?} outside the complex"));
        }
        if let Some((g, s)) = self.irregular.first() {
            parts.push(format!("element {g} fixes simplex {s:?} setwise but not pointwise"));
        }
        if parts.is_empty() {
            "valid and regular".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Checks bijectivity, the homomorphism property, simpliciality and regularity,
/// collecting every violation.
pub fn validate_gcomplex(k: &GComplex) -> ValidationReport {
    let mut report = ValidationReport::default();
    let group = &k.group;
    for g in group.elements() {
        let mut seen: Vec<usize> = k.action[g].clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != k.complex.vertices().len() {
            report.not_bijective.push(g);
        }
    }
    for g in group.elements() {
        for h in group.elements() {
            let gh = group.mul(g, h);
            let ok = k.complex.vertices().iter().all(|&v| k.act_vertex(gh, v) == k.act_vertex(g, k.act_vertex(h, v)));
            if !ok {
                report.homomorphism.push((g, h));
            }
        }
    }
    for g in group.elements() {
        for s in k.complex.all_simplices() {
            let (img, _) = k.act_simplex(g, s);
            if img.len() != s.len() || !k.complex.contains(&img) {
                report.non_simplicial.push((g, s.clone()));
            } else if &img == s && s.iter().any(|&v| k.act_vertex(g, v) != v) {
                report.irregular.push((g, s.clone()));
            }
        }
    }
    report
}

/// Labels of the barycentric subdivision: every simplex, in (dimension, lexicographic) order.
fn subdivision_labels(complex: &SimplicialComplex) -> HashMap<Simplex, usize> {
    complex.all_simplices().cloned().enumerate().map(|(i, s)| (s, i)).collect()
}

/// Barycentric subdivision with the induced action. Vertex `i` of the result is
/// the barycenter of the `i`-th simplex in (dimension, lexicographic) order.
pub fn barycentric_subdivide(k: &GComplex) -> GComplex {
    let labels = subdivision_labels(&k.complex);
    let mut chains = Vec::new();
    for s in k.complex.maximal_simplices() {
        for perm in permutations(s.len()) {
            let chain: Simplex = (1..=s.len())
                .map(|i| {
                    let mut face: Simplex = perm[..i].iter().map(|&j| s[j]).collect();
                    face.sort_unstable();
                    labels[&face]
                })
                .collect();
            chains.push(chain);
        }
    }
    let complex = SimplicialComplex::new(labels.len(), &chains);
    let order: Vec<&Simplex> = k.complex.all_simplices().collect();
    let action = k.group.elements().map(|g| order.iter().map(|s| labels[&k.act_simplex(g, s).0]).collect()).collect();
    GComplex { complex, group: k.group.clone(), action, regular: OnceLock::new() }
}

/// The fixed-point subcomplex of an element with the residual centralizer action.
#[derive(Clone, Debug)]
pub struct FixedSubcomplex {
    pub element: ElementId,
    /// The subcomplex, acted on by the centralizer (re-indexed as its own group).
    pub space: GComplex,
    /// Centralizer element ids in the parent group, indexed by subgroup element id.
    pub centralizer: Vec<ElementId>,
}

impl FixedSubcomplex {
    pub fn complex(&self) -> &SimplicialComplex {
        self.space.complex()
    }
}

/// Simplices fixed pointwise by `g`, with the action of the centralizer of `g`.
pub fn fixed_subcomplex(k: &GComplex, g: ElementId) -> Result<FixedSubcomplex> {
    if !k.group.contains(g) {
        return Err(Error::ElementNotInGroup(g));
    }
    k.ensure_regular()?;
    let fixed: Vec<usize> = k.complex.vertices().iter().copied().filter(|&v| k.act_vertex(g, v) == v).collect();
    let sub = if fixed.is_empty() { SimplicialComplex::empty() } else { k.complex.induced(&fixed) };
    let centralizer = k.group.centralizer(g)?;
    let (space, embedding) = k.restrict(&sub, &centralizer.members)?;
    Ok(FixedSubcomplex { element: g, space, centralizer: embedding })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCell {
    /// Smallest simplex of the orbit.
    pub representative: Simplex,
    pub members: Vec<Simplex>,
}

/// Orbit data in one degree: orbit index and orientation sign relative to the
/// representative for every simplex.
#[derive(Clone, Debug)]
pub struct Orbits {
    pub cells: Vec<OrbitCell>,
    pub orbit_of: Vec<usize>,
    pub sign: Vec<i8>,
}

pub fn orbits(k: &GComplex, dim: usize) -> Orbits {
    let simplices = k.complex.simplices(dim);
    let mut orbit_of = vec![usize::MAX; simplices.len()];
    let mut sign = vec![0i8; simplices.len()];
    let mut cells = Vec::new();
    for (i, s) in simplices.iter().enumerate() {
        if orbit_of[i] != usize::MAX {
            continue;
        }
        let id = cells.len();
        let mut members = Vec::new();
        for g in k.group.elements() {
            let (img, sg) = k.act_simplex(g, s);
            let j = k.complex.index_of(&img).expect("simplicial action");
            if orbit_of[j] == usize::MAX {
                orbit_of[j] = id;
                sign[j] = sg;
                members.push(img);
            }
        }
        members.sort();
        cells.push(OrbitCell { representative: s.clone(), members });
    }
    Orbits { cells, orbit_of, sign }
}

/// The orbit complex: one cell per orbit of simplices, with induced signed face maps.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub cells: Vec<Vec<OrbitCell>>,
    /// `boundaries[k]` maps orbit k-cells to orbit (k-1)-cells.
    pub boundaries: Vec<SparseRationalMatrix>,
}

impl QuotientComplex {
    pub fn dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells.iter().enumerate().map(|(k, c)| if k % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) }).sum()
    }

    /// Rational Betti numbers of the orbit complex.
    pub fn betti_numbers(&self) -> Vec<usize> {
        let n = self.cells.len();
        let ranks: Vec<usize> =
            (0..=n).map(|k| self.boundaries.get(k).map_or(0, SparseRationalMatrix::rank_q)).collect();
        (0..n).map(|k| self.cells[k].len() - ranks[k] - ranks[k + 1]).collect()
    }
}

pub fn quotient_complex(k: &GComplex) -> Result<QuotientComplex> {
    k.ensure_regular()?;
    let Some(d) = k.complex.dim() else {
        return Ok(QuotientComplex { cells: Vec::new(), boundaries: Vec::new() });
    };
    let orbs: Vec<Orbits> = (0..=d).map(|q| orbits(k, q)).collect();
    let mut boundaries = vec![SparseRationalMatrix::new(0, orbs[0].cells.len())];
    for q in 1..=d {
        let mut m = SparseRationalMatrix::new(orbs[q - 1].cells.len(), orbs[q].cells.len());
        for (j, cell) in orbs[q].cells.iter().enumerate() {
            let rep = &cell.representative;
            for i in 0..rep.len() {
                let mut face = rep.clone();
                face.remove(i);
                let fi = k.complex.index_of(&face).expect("face-closed");
                let alt = if i % 2 == 0 { 1 } else { -1 };
                m.add_int(orbs[q - 1].orbit_of[fi], j, alt * i64::from(orbs[q - 1].sign[fi]));
            }
        }
        boundaries.push(m);
    }
    Ok(QuotientComplex { cells: orbs.into_iter().map(|o| o.cells).collect(), boundaries })
}

/// True iff every group element maps the oriented fundamental cycle to itself.
pub fn preserves_orientation(k: &GComplex, orientation: &Orientation) -> bool {
    let Some(d) = k.complex.dim() else { return true };
    k.group.elements().all(|g| {
        k.complex.simplices(d).iter().all(|s| {
            let (img, sg) = k.act_simplex(g, s);
            match (orientation.sign(s), orientation.sign(&img)) {
                (Some(a), Some(b)) => a * sg == b,
                _ => false,
            }
        })
    })
}
