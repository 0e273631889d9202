//! Built-in groups, spaces, bundles and maps used by the CLI and the test suites.

use std::collections::BTreeMap;

use crate::assembly::{character_representation, field_for, regular_representation, AssemblyCase, FlatEquivBundle};
use crate::caps::Caps;
use crate::dnc::SmoothPairMap;
use crate::grp::{group_from_permutations, CyclicTrace, FiniteGroup};
use crate::gspace::{barycentric_subdivide, GComplex, SimplicialComplex};
use crate::pushpair::GMap;

fn perm_group(points: usize, gens: &[Vec<usize>]) -> FiniteGroup {
    group_from_permutations(points, gens, &Caps::default()).expect("built-in generators are valid")
}

fn rotation(n: usize, k: usize) -> Vec<usize> {
    (0..n).map(|i| (i + k) % n).collect()
}

/// `i ↦ c - i mod n`.
fn reflection(n: usize, c: usize) -> Vec<usize> {
    (0..n).map(|i| (c + n - i) % n).collect()
}

pub fn trivial_group() -> FiniteGroup {
    perm_group(1, &[])
}

pub fn cyclic(n: usize) -> FiniteGroup {
    if n == 1 {
        return trivial_group();
    }
    perm_group(n, &[rotation(n, 1)])
}

pub fn symmetric3() -> FiniteGroup {
    perm_group(3, &[vec![1, 0, 2], vec![1, 2, 0]])
}

pub fn dihedral4() -> FiniteGroup {
    perm_group(4, &[rotation(4, 1), reflection(4, 0)])
}

/// Left multiplication on `±1, ±i, ±j, ±k` (points 0..8 in that order).
pub fn quaternion8() -> FiniteGroup {
    perm_group(8, &[vec![2, 3, 1, 0, 6, 7, 5, 4], vec![4, 5, 7, 6, 1, 0, 2, 3]])
}

/// Groups by name.
pub fn groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("trivial", trivial_group()),
        ("z2", cyclic(2)),
        ("z3", cyclic(3)),
        ("z4", cyclic(4)),
        ("s3", symmetric3()),
        ("d4", dihedral4()),
        ("q8", quaternion8()),
        ("z7", cyclic(7)),
    ]
}

pub fn point() -> SimplicialComplex {
    SimplicialComplex::new(1, &[])
}

pub fn polygon(n: usize) -> SimplicialComplex {
    let edges: Vec<Vec<usize>> = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    SimplicialComplex::new(n, &edges)
}

/// The 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7() -> SimplicialComplex {
    let tris: Vec<Vec<usize>> =
        (0..7).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]).collect();
    SimplicialComplex::new(7, &tris)
}

pub fn tetrahedron_boundary() -> SimplicialComplex {
    SimplicialComplex::new(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
}

/// Vertices `+x, -x, +y, -y, +z, -z`.
pub fn octahedron() -> SimplicialComplex {
    let tris: Vec<Vec<usize>> = (0..8).map(|m| vec![m & 1, 2 + ((m >> 1) & 1), 4 + ((m >> 2) & 1)]).collect();
    SimplicialComplex::new(6, &tris)
}

fn acting(complex: SimplicialComplex, gens: &[Vec<usize>]) -> GComplex {
    GComplex::from_permutations(complex, gens, &Caps::default()).expect("built-in action is valid")
}

/// Regular actions by name.
pub fn spaces() -> Vec<(&'static str, GComplex)> {
    let oct_rot = vec![1, 0, 3, 2, 4, 5];
    let oct_refl = vec![0, 1, 2, 3, 5, 4];
    let two_squares = SimplicialComplex::new(
        8,
        &[vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3], vec![4, 5], vec![5, 6], vec![6, 7], vec![4, 7]],
    );
    vec![
        ("point", GComplex::trivial(point())),
        ("point_z2", GComplex::with_trivial_action(point(), cyclic(2))),
        ("point_s3", GComplex::with_trivial_action(point(), symmetric3())),
        ("circle", GComplex::trivial(polygon(4))),
        ("circle_reflection", acting(polygon(4), &[reflection(4, 0)])),
        ("circle_rotation2", acting(polygon(4), &[rotation(4, 2)])),
        ("circle_rotation4", acting(polygon(4), &[rotation(4, 1)])),
        ("hexagon_z3", acting(polygon(6), &[rotation(6, 2)])),
        ("hexagon_z6", acting(polygon(6), &[rotation(6, 1)])),
        ("hexagon_d3", acting(polygon(6), &[rotation(6, 2), reflection(6, 0)])),
        ("octagon_d4", acting(polygon(8), &[rotation(8, 2), reflection(8, 0)])),
        ("two_circles_swap", acting(two_squares, &[rotation(8, 4)])),
        ("torus", GComplex::trivial(torus7())),
        ("torus_z7", acting(torus7(), &[rotation(7, 1)])),
        ("sphere", GComplex::trivial(tetrahedron_boundary())),
        ("sphere_rotation", acting(octahedron(), std::slice::from_ref(&oct_rot))),
        ("sphere_reflection", acting(octahedron(), std::slice::from_ref(&oct_refl))),
        ("sphere_antipodal", acting(octahedron(), &[vec![1, 0, 3, 2, 5, 4]])),
        ("sphere_klein", acting(octahedron(), &[oct_rot, oct_refl])),
        ("sphere_z3", barycentric_subdivide(&acting(tetrahedron_boundary(), &[vec![1, 2, 0, 3]]))),
        ("gset_z3_free", acting(SimplicialComplex::new(3, &[]), &[rotation(3, 1)])),
        ("gset_s3_natural", acting(SimplicialComplex::new(3, &[]), &[vec![1, 0, 2], vec![1, 2, 0]])),
    ]
}

pub fn space(name: &str) -> Option<GComplex> {
    spaces().into_iter().find(|(n, _)| *n == name).map(|(_, k)| k)
}

fn gset(n: usize, gens: &[Vec<usize>]) -> GComplex {
    acting(SimplicialComplex::new(n, &[]), gens)
}

/// Finite G-sets (0-dimensional regular G-complexes) by name.
pub fn gsets() -> Vec<(&'static str, GComplex)> {
    vec![
        ("trivial_3", GComplex::trivial(SimplicialComplex::new(3, &[]))),
        ("z2_free", gset(2, &[vec![1, 0]])),
        ("z2_fixed_point", GComplex::with_trivial_action(point(), cyclic(2))),
        ("z2_free_plus_fixed", gset(3, &[vec![1, 0, 2]])),
        ("z3_free", gset(3, &[rotation(3, 1)])),
        ("z4_free", gset(4, &[rotation(4, 1)])),
        ("klein_4", gset(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])),
        ("s3_natural", gset(3, &[vec![1, 0, 2], vec![1, 2, 0]])),
        ("s3_regular", gset(6, &[vec![1, 0, 3, 2, 5, 4], vec![2, 4, 0, 5, 1, 3]])),
        ("d4_square_vertices", gset(4, &[rotation(4, 1), reflection(4, 0)])),
        ("q8_regular", gset(8, &[vec![2, 3, 1, 0, 6, 7, 5, 4], vec![4, 5, 7, 6, 1, 0, 2, 3]])),
        ("s3_fixed_point", GComplex::with_trivial_action(point(), symmetric3())),
    ]
}

/// A composable pair `S --f--> T --g--> U` of equivariant simplicial maps.
#[derive(Clone, Debug)]
pub struct MapChain {
    pub name: &'static str,
    pub source: GComplex,
    pub middle: GComplex,
    pub target: GComplex,
    pub f: GMap,
    pub g: GMap,
}

fn with_action(complex: SimplicialComplex, group: &FiniteGroup, gen_images: &[Vec<usize>]) -> GComplex {
    GComplex::from_generator_images(complex, group.clone(), gen_images).expect("built-in action is valid")
}

pub fn map_chains() -> Vec<MapChain> {
    let z2 = cyclic(2);
    let z3 = cyclic(3);
    let z4 = cyclic(4);
    let id_chain = |name, k: GComplex| MapChain {
        name,
        f: GMap::identity(&k),
        g: GMap::identity(&k),
        source: k.clone(),
        middle: k.clone(),
        target: k,
    };
    vec![
        id_chain("identity_circle", GComplex::trivial(polygon(4))),
        MapChain {
            name: "double_cover_then_collapse",
            source: GComplex::trivial(polygon(6)),
            middle: GComplex::trivial(polygon(3)),
            target: GComplex::trivial(point()),
            f: GMap { images: (0..6).map(|i| i % 3).collect() },
            g: GMap { images: vec![0; 3] },
        },
        MapChain {
            name: "reflection_fixed_points_into_circle",
            source: GComplex::with_trivial_action(SimplicialComplex::new(2, &[]), z2.clone()),
            middle: with_action(polygon(4), &z2, &[reflection(4, 0)]),
            target: GComplex::with_trivial_action(point(), z2.clone()),
            f: GMap { images: vec![0, 2] },
            g: GMap { images: vec![0; 4] },
        },
        MapChain {
            name: "reflection_double_cover_then_collapse",
            source: with_action(polygon(8), &z2, &[reflection(8, 0)]),
            middle: with_action(polygon(4), &z2, &[reflection(4, 0)]),
            target: GComplex::with_trivial_action(point(), z2.clone()),
            f: GMap { images: (0..8).map(|i| i % 4).collect() },
            g: GMap { images: vec![0; 4] },
        },
        MapChain {
            name: "z3_cover_then_collapse",
            source: with_action(polygon(6), &z3, &[rotation(6, 2)]),
            middle: with_action(polygon(3), &z3, &[rotation(3, 2)]),
            target: GComplex::with_trivial_action(point(), z3.clone()),
            f: GMap { images: (0..6).map(|i| i % 3).collect() },
            g: GMap { images: vec![0; 3] },
        },
        MapChain {
            name: "rotation_identity_then_collapse",
            source: with_action(polygon(4), &z4, &[rotation(4, 1)]),
            middle: with_action(polygon(4), &z4, &[rotation(4, 1)]),
            target: GComplex::with_trivial_action(point(), z4.clone()),
            f: GMap { images: (0..4).collect() },
            g: GMap { images: vec![0; 4] },
        },
        MapChain {
            name: "sphere_poles_then_collapse",
            source: GComplex::with_trivial_action(SimplicialComplex::new(2, &[]), z2.clone()),
            middle: with_action(octahedron(), &z2, &[vec![1, 0, 3, 2, 4, 5]]),
            target: GComplex::with_trivial_action(point(), z2.clone()),
            f: GMap { images: vec![4, 5] },
            g: GMap { images: vec![0; 6] },
        },
        MapChain {
            name: "subdivided_sphere_fixed_points_then_collapse",
            source: GComplex::with_trivial_action(SimplicialComplex::new(2, &[]), z3.clone()),
            middle: {
                let k = with_action(tetrahedron_boundary(), &z3, &[vec![1, 2, 0, 3]]);
                barycentric_subdivide(&k)
            },
            target: GComplex::with_trivial_action(point(), z3.clone()),
            f: GMap { images: vec![3, 10] },
            g: GMap { images: vec![0; 14] },
        },
    ]
}

/// Spaces on which Gram matrices of the pairing are checked.
pub fn pairing_spaces() -> Vec<(&'static str, GComplex)> {
    let wanted = [
        "circle",
        "circle_reflection",
        "circle_rotation4",
        "torus",
        "torus_z7",
        "sphere",
        "sphere_rotation",
        "sphere_reflection",
        "sphere_z3",
    ];
    spaces().into_iter().filter(|(n, _)| wanted.contains(n)).collect()
}

fn trace_for(k: &GComplex, class: usize) -> CyclicTrace {
    CyclicTrace::for_class(&k.group().conjugacy_classes()[class])
}

fn case(name: &str, bundle: FlatEquivBundle, class: usize) -> AssemblyCase {
    let trace = trace_for(&bundle.base, class);
    AssemblyCase { name: name.to_string(), bundle, trace }
}

/// The sign character of a group given as values on element ids.
fn sign_bundle(k: &GComplex) -> FlatEquivBundle {
    let group = k.group();
    let field = field_for(group);
    let values = group.elements().map(|g| field.from_int(permutation_sign(group.permutation(g)))).collect();
    FlatEquivBundle::from_representation(k, &character_representation(values)).expect("one matrix per element")
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut q = p.to_vec();
    i64::from(crate::gspace::sort_with_sign(&mut q))
}

/// `g ↦ ζ^k` for the cyclic group generated by the first generator, `k` the
/// exponent of `g` in that generator.
fn cyclic_character_bundle(k: &GComplex) -> FlatEquivBundle {
    let group = k.group();
    let field = field_for(group);
    let gen = group.generators()[0];
    let mut values = vec![field.zero(); group.order()];
    let mut g = group.identity();
    for e in 0..group.order() {
        values[g] = field.zeta_pow(e as i64);
        g = group.mul(gen, g);
    }
    FlatEquivBundle::from_representation(k, &character_representation(values)).expect("one matrix per element")
}

/// The twelve `(K, E, τ)` triples of the Chern–assembly check.
pub fn assembly_corpus() -> Vec<AssemblyCase> {
    let refl = space("circle_reflection").unwrap();
    let rot = space("circle_rotation2").unwrap();
    let z2pt = space("point_z2").unwrap();
    let torus = space("torus_z7").unwrap();
    let hexagon = space("hexagon_d3").unwrap();
    let sphere = space("sphere_z3").unwrap();
    let s3set = space("gset_s3_natural").unwrap();
    let regular = FlatEquivBundle::from_representation(&z2pt, &regular_representation(z2pt.group())).unwrap();
    let s3_classes: BTreeMap<usize, usize> = s3set
        .group()
        .conjugacy_classes()
        .iter()
        .enumerate()
        .map(|(i, c)| (s3set.group().element_order(c.representative) as usize, i))
        .collect();
    vec![
        case("circle_reflection_trivial_tau_sigma", FlatEquivBundle::trivial(&refl, 1), 1),
        case("circle_reflection_trivial_tau_e", FlatEquivBundle::trivial(&refl, 1), 0),
        case("circle_free_rotation_trivial_tau_sigma", FlatEquivBundle::trivial(&rot, 1), 1),
        case("point_regular_tau_e", regular.clone(), 0),
        case("point_regular_tau_sigma", regular, 1),
        case("point_sign_tau_e", sign_bundle(&z2pt), 0),
        case("point_sign_tau_sigma", sign_bundle(&z2pt), 1),
        case("torus_z7_trivial_tau_e", FlatEquivBundle::trivial(&torus, 1), 0),
        case("torus_z7_character_tau_generator", cyclic_character_bundle(&torus), 1),
        case("hexagon_d3_sign_tau_reflection", sign_bundle(&hexagon), s3_index_of_order(&hexagon, 2)),
        case("sphere_z3_character_tau_rotation", cyclic_character_bundle(&sphere), 1),
        case("s3_points_rank2_tau_transposition", FlatEquivBundle::trivial(&s3set, 2), s3_classes[&2]),
    ]
}

fn s3_index_of_order(k: &GComplex, order: u64) -> usize {
    let group = k.group();
    group.conjugacy_classes().iter().position(|c| group.element_order(c.representative) == order).expect("class exists")
}

/// Named pair maps for the DNC checks: `(name, F, G)` composable pairs.
pub fn dnc_pairs() -> Vec<(&'static str, SmoothPairMap, SmoothPairMap)> {
    let poly_f = SmoothPairMap::new((1, 1), (1, 1), |m| {
        vec![m[0] + 0.5 * m[0] * m[0] + m[1] * m[1], m[1] + m[1].powi(3) + m[0] * m[1]]
    });
    let poly_g = SmoothPairMap::new((1, 1), (1, 1), |m| vec![m[0].powi(3) - m[0] + m[1], m[1] * (1.0 + m[0] * m[0])]);
    let poly_h = SmoothPairMap::new((2, 1), (2, 1), |m| {
        vec![m[0] * m[1] + m[2] * m[2], m[1] - m[0] * m[0], m[2] * (2.0 + m[0]) + m[2].powi(2) * m[1]]
    });
    let poly_k =
        SmoothPairMap::new((2, 1), (2, 1), |m| vec![m[0] + m[2], m[1] * m[1] + m[0], m[2] * (1.0 - m[1] * m[1])]);
    vec![
        ("identity", SmoothPairMap::identity(2, 2), SmoothPairMap::identity(2, 2)),
        (
            "linear",
            SmoothPairMap::linear(
                (2, 2),
                (2, 2),
                vec![
                    vec![1.0, 2.0, 0.5, -1.0],
                    vec![0.0, 1.5, 2.0, 0.25],
                    vec![0.0, 0.0, 3.0, 1.0],
                    vec![0.0, 0.0, -1.0, 0.5],
                ],
            ),
            SmoothPairMap::linear(
                (2, 2),
                (2, 2),
                vec![
                    vec![0.5, -1.0, 1.0, 2.0],
                    vec![2.0, 1.0, 0.0, -0.5],
                    vec![0.0, 0.0, 1.0, -2.0],
                    vec![0.0, 0.0, 0.75, 1.0],
                ],
            ),
        ),
        ("polynomial_plane", poly_f, poly_g),
        ("polynomial_space", poly_h, poly_k),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gspace::validate_gcomplex;

    #[test]
    fn groups_have_expected_orders() {
        let orders: Vec<usize> = groups().iter().map(|(_, g)| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 6, 8, 8, 7]);
        assert!(!quaternion8().is_abelian());
    }

    #[test]
    fn spaces_are_regular() {
        for (name, k) in spaces().into_iter().chain(gsets()) {
            let report = validate_gcomplex(&k);
            assert!(report.is_regular(), "{name}: {}", report.summary());
        }
        assert!(spaces().len() >= 20);
        assert!(gsets().len() >= 10);
    }

    #[test]
    fn map_chains_are_admissible() {
        for chain in map_chains() {
            GMap::new(&chain.source, &chain.middle, chain.f.images.clone())
                .unwrap_or_else(|e| panic!("{}: {e}", chain.name));
            GMap::new(&chain.middle, &chain.target, chain.g.images.clone())
                .unwrap_or_else(|e| panic!("{}: {e}", chain.name));
        }
    }

    #[test]
    fn assembly_corpus_has_twelve_valid_bundles() {
        let corpus = assembly_corpus();
        assert_eq!(corpus.len(), 12);
        for c in &corpus {
            assert!(crate::assembly::validate_bundle(&c.bundle).is_valid(), "{}", c.name);
        }
    }
}
