use deloc_core::assembly::{euler_character_at, FlatEquivBundle};
use deloc_core::corpus;
use deloc_core::deloc::class_cohomology;
use deloc_core::dnc::{check_dnc_functoriality, psi, psi_inv, DncPoint, SmoothPairMap};
use deloc_core::grp::{CyclicTrace, GroupAlgebraElement};
use deloc_core::gspace::GComplex;
use deloc_core::linalg::{rank_dense, rat, ratio, Rational};
use deloc_core::nervecoh::{total_differential, Nerve};
use deloc_core::pushpair::{cup, Cochain};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ratio(n, d))
}

fn spaces() -> Vec<(&'static str, GComplex)> {
    corpus::spaces().into_iter().chain(corpus::gsets()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn class_traces_are_traces(gi in 0usize..8, a in prop::collection::vec(small_rational(), 8), b in prop::collection::vec(small_rational(), 8)) {
        let group = corpus::groups().swap_remove(gi).1;
        let n = group.order();
        let a = GroupAlgebraElement { coeffs: a[..n].to_vec() };
        let b = GroupAlgebraElement { coeffs: b[..n].to_vec() };
        let (ab, ba) = (a.mul(&b, &group), b.mul(&a, &group));
        for class in group.conjugacy_classes() {
            let tau = CyclicTrace::for_class(class);
            prop_assert_eq!(tau.evaluate(&ab), tau.evaluate(&ba));
        }
    }

    #[test]
    fn total_differential_squares_to_zero(si in 0usize..34, n in 0usize..3, seed in prop::collection::vec(-3i64..=3, 64)) {
        let all = spaces();
        let k = &all[si % all.len()].1;
        let nerve = Nerve::new(k);
        let size = nerve.total_dim(n);
        prop_assume!(size <= 5000);
        let flat: Vec<Rational> = (0..size).map(|i| rat(seed[(i * 7 + i / 64) % 64])).collect();
        let c = nerve.unflatten(n, &flat);
        prop_assert!(total_differential(&nerve, &total_differential(&nerve, &c)).is_zero());
    }

    #[test]
    fn cup_is_associative(ci in 0usize..3, degs in (0usize..=2, 0usize..=2, 0usize..=2), seed in prop::collection::vec(-2i64..=2, 32)) {
        let complex = [corpus::torus7(), corpus::octahedron(), corpus::polygon(5)][ci].clone();
        let (p, q, r) = degs;
        prop_assume!(p + q + r <= complex.dim().unwrap());
        let cochain = |k: usize, shift: usize| Cochain {
            degree: k,
            values: (0..complex.count(k)).map(|i| rat(seed[(i + shift) % 32])).collect(),
        };
        let (a, b, c) = (cochain(p, 0), cochain(q, 5), cochain(r, 11));
        let left = cup(&complex, &cup(&complex, &a, &b).unwrap(), &c).unwrap();
        let right = cup(&complex, &a, &cup(&complex, &b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn class_cohomology_is_conjugation_invariant(si in 0usize..34, gi in 0usize..64, hi in 0usize..64) {
        let all = spaces();
        let k = &all[si % all.len()].1;
        let group = k.group();
        let (g, h) = (gi % group.order(), hi % group.order());
        let a = class_cohomology(k, g).unwrap();
        let b = class_cohomology(k, group.conjugate(g, h)).unwrap();
        prop_assert_eq!((a.dims, a.centralizer_order, a.class_size), (b.dims, b.centralizer_order, b.class_size));
    }

    #[test]
    fn euler_character_is_additive(ci in 0usize..12, rank in 1usize..3, gi in 0usize..64) {
        let e = corpus::assembly_corpus().swap_remove(ci).bundle;
        let f = FlatEquivBundle::trivial(&e.base, rank);
        let g = gi % e.base.group().order();
        let sum = e.direct_sum(&f);
        prop_assert_eq!(euler_character_at(&sum, g), &euler_character_at(&e, g) + &euler_character_at(&f, g));
    }

    #[test]
    fn rank_is_invariant_under_row_operations(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 1..6),
        scale in prop::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 6),
        rotate in 0usize..6,
    ) {
        let m: Vec<Vec<Rational>> = rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect();
        let mut permuted: Vec<Vec<Rational>> =
            m.iter().zip(&scale).map(|(r, &s)| r.iter().map(|v| v * rat(s)).collect()).collect();
        let len = permuted.len();
        permuted.rotate_left(rotate % len);
        let transpose: Vec<Vec<Rational>> = (0..5).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect();
        prop_assert_eq!(rank_dense(&m), rank_dense(&permuted));
        prop_assert_eq!(rank_dense(&m), rank_dense(&transpose));
    }

    #[test]
    fn psi_round_trip(x in prop::collection::vec(-1e3f64..1e3, 2), xi in prop::collection::vec(-1e3f64..1e3, 3), t in prop_oneof![Just(0.0), 1e-8f64..1.0]) {
        let p = DncPoint::new(x, xi, t);
        let back = psi_inv(&psi(&p));
        let scale = p.xi.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!(back.distance(&p) <= 1e-12 * scale);
    }

    #[test]
    fn linear_dnc_is_functorial(a in prop::collection::vec(-2.0f64..2.0, 6), b in prop::collection::vec(-2.0f64..2.0, 6)) {
        // Block upper-triangular 3x3 maps of (R^2 x R^1, R^2 x 0).
        let block = |v: &[f64]| vec![vec![v[0], v[1], v[2]], vec![v[3], v[4], v[5]], vec![0.0, 0.0, 1.0 + v[0].abs()]];
        let f = SmoothPairMap::linear((2, 1), (2, 1), block(&a));
        let g = SmoothPairMap::linear((2, 1), (2, 1), block(&b));
        let points: Vec<DncPoint> = [0.0, 0.25, 0.5, 1.0]
            .iter()
            .map(|&t| DncPoint::new(vec![a[0], b[1]], vec![a[2] - b[3]], t))
            .collect();
        prop_assert!(check_dnc_functoriality(&f, &g, &points).unwrap().max_error <= 1e-12);
    }
}

/// For a transitive G-set `G/H` the number of points fixed by `g` is
/// `(1/|H|) #{x in G : x^{-1} g x in H}`, the induced character of the trivial
/// representation. The Euler character of the trivial line bundle must match it.
#[test]
fn euler_character_of_gsets_is_induced_character() {
    for (name, k) in corpus::gsets() {
        let group = k.group();
        let labels = k.complex().vertices().to_vec();
        let v0 = labels[0];
        let orbit: std::collections::BTreeSet<usize> = group.elements().map(|g| k.act_vertex(g, v0)).collect();
        if orbit.len() != labels.len() {
            continue;
        }
        let stabilizer: Vec<usize> = group.elements().filter(|&h| k.act_vertex(h, v0) == v0).collect();
        let e = FlatEquivBundle::trivial(&k, 1);
        for g in group.elements() {
            let hits =
                group.elements().filter(|&x| stabilizer.contains(&group.mul(group.inv(x), group.mul(g, x)))).count();
            let induced = ratio(hits as i64, stabilizer.len() as i64);
            assert_eq!(euler_character_at(&e, g), e.field.from_rational(induced), "{name} at {g}");
        }
    }
}
