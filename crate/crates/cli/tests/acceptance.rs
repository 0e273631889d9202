//! The nine acceptance criteria, each printed as one pass/fail line.
//!
//! Run with `cargo test -p deloc-cli --test acceptance -- --nocapture` to see the lines.

use std::process::Command;
use std::time::{Duration, Instant};

use deloc_core::assembly::chern_assembly_check;
use deloc_core::corpus;
use deloc_core::deloc::{deloc_h0_total, hh0_groupoid_oracle, tuxu_trace, ActionGroupoid, GroupoidAlgebraElement};
use deloc_core::dnc::{check_dnc_functoriality, continuity_error, psi, psi_inv, sample_points};
use deloc_core::grp::{burghelea_hp, hh0_group_oracle};
use deloc_core::gspace::{quotient_complex, GComplex};
use deloc_core::linalg::{rank_dense, ratio};
use deloc_core::nervecoh::{invariant_oracle, total_cohomology, total_cohomology_dim, Nerve};
use deloc_core::pushpair::{check_functoriality, check_projection_formula, gram_matrix, OrientedGComplex};
use deloc_core::Caps;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn within(outcome: Outcome, elapsed: Duration, budget: Duration) -> Outcome {
    if elapsed <= budget {
        outcome
    } else {
        Outcome { passed: false, detail: format!("{} (took {elapsed:?}, budget {budget:?})", outcome.detail) }
    }
}

fn burghelea_agreement() -> Outcome {
    let caps = Caps::default();
    let groups = [
        ("trivial", corpus::trivial_group(), 1),
        ("z2", corpus::cyclic(2), 2),
        ("z4", corpus::cyclic(4), 4),
        ("s3", corpus::symmetric3(), 3),
        ("q8", corpus::quaternion8(), 5),
    ];
    let mut ok = true;
    let mut seen = Vec::new();
    for (name, g, expected) in groups {
        let hp = burghelea_hp(&g);
        let oracle = hh0_group_oracle(&g, &caps).expect("within caps");
        ok &= hp.even_dim == oracle && oracle == g.conjugacy_classes().len() && oracle == expected && hp.odd_dim == 0;
        seen.push(format!("{name}={oracle}"));
    }
    outcome(ok, seen.join(" "))
}

fn regular_actions() -> Vec<(&'static str, GComplex)> {
    corpus::spaces().into_iter().chain(corpus::gsets()).collect()
}

fn double_complex_vs_invariants() -> Outcome {
    let caps = Caps::default();
    let spaces = regular_actions();
    let mut bad = Vec::new();
    let mut with_bases = 0;
    for (name, k) in &spaces {
        let top = k.complex().dim().map_or(0, |d| d + 1);
        let quotient = quotient_complex(k).expect("regular").betti_numbers();
        let nerve = Nerve::new(k);
        for n in 0..=top {
            let dim = total_cohomology_dim(k, n).expect("in range");
            let orbit = quotient.get(n).copied().unwrap_or(0);
            if dim != invariant_oracle(k, n) || dim != orbit {
                bad.push(format!("{name} H^{n}"));
            }
            // Explicit bases where the dense computation is affordable.
            if nerve.total_dim(n).max(nerve.total_dim(n + 1)) <= 600 {
                with_bases += 1;
                if total_cohomology(k, n, &caps).expect("within caps").dim != dim {
                    bad.push(format!("{name} basis H^{n}"));
                }
            }
        }
    }
    let ok = bad.is_empty() && spaces.len() >= 20;
    outcome(ok, format!("{} actions, {with_bases} degrees with explicit bases, mismatches {bad:?}", spaces.len()))
}

fn tu_xu_degree_zero() -> Outcome {
    let caps = Caps::default();
    let gsets: Vec<(&str, GComplex)> =
        regular_actions().into_iter().filter(|(_, k)| k.complex().dim() == Some(0)).collect();
    let mut bad = Vec::new();
    for (name, k) in &gsets {
        let oracle = hh0_groupoid_oracle(k, &caps).expect("within caps");
        if oracle != deloc_h0_total(k).expect("regular") {
            bad.push(*name);
        }
    }
    outcome(bad.is_empty() && gsets.len() >= 10, format!("{} G-sets, mismatches {bad:?}", gsets.len()))
}

fn random_element(gpd: &ActionGroupoid<'_>, rng: &mut ChaCha8Rng) -> GroupoidAlgebraElement {
    let field = gpd.field().clone();
    let mut a = GroupoidAlgebraElement::zero(gpd);
    for c in a.coeffs.iter_mut() {
        if rng.gen_bool(0.5) {
            let q = field.from_rational(ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5)));
            *c = &q * &field.zeta_pow(rng.gen_range(0..8));
        }
    }
    a
}

fn trace_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let spaces = regular_actions();
    let mut bad = Vec::new();
    for (name, k) in &spaces {
        let gpd = ActionGroupoid::new(k);
        for _ in 0..100 {
            let a = random_element(&gpd, &mut rng);
            let b = random_element(&gpd, &mut rng);
            if tuxu_trace(&a.convolve(&b, &gpd), &gpd) != tuxu_trace(&b.convolve(&a, &gpd), &gpd) {
                bad.push(*name);
                break;
            }
        }
    }
    outcome(bad.is_empty(), format!("{} groupoids x 100 pairs, failures {bad:?}", spaces.len()))
}

fn pairing_perfection() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut kinds = [false; 3];
    for (name, k) in corpus::pairing_spaces() {
        let oriented = OrientedGComplex::new(k).expect("regular");
        for model in oriented.classes.iter().filter(|m| m.is_oriented()) {
            for j in 0..model.bases.len() {
                let gram = gram_matrix(model, j).expect("oriented");
                checked += 1;
                if rank_dense(&gram) != model.betti(j) || gram.len() != model.betti(j) {
                    bad.push(format!("{name} class {} degree {j}", model.representative));
                }
            }
        }
        for (i, prefix) in ["circle", "torus", "sphere"].iter().enumerate() {
            kinds[i] |= name.starts_with(prefix);
        }
    }
    outcome(bad.is_empty() && kinds.iter().all(|&k| k), format!("{checked} Gram matrices, degenerate {bad:?}"))
}

fn umkehr_functoriality() -> Outcome {
    let chains = corpus::map_chains();
    let mut bad = Vec::new();
    let mut checked = 0;
    for c in &chains {
        let s = OrientedGComplex::new(c.source.clone()).expect("regular");
        let m = OrientedGComplex::new(c.middle.clone()).expect("regular");
        let t = OrientedGComplex::new(c.target.clone()).expect("regular");
        let reports = [
            check_functoriality(&s, &m, &t, &c.f, &c.g).expect("valid chain"),
            check_projection_formula(&s, &m, &c.f).expect("valid map"),
            check_projection_formula(&m, &t, &c.g).expect("valid map"),
        ];
        checked += reports.iter().map(|r| r.checked).sum::<usize>();
        if !reports.iter().all(|r| r.holds()) {
            bad.push(c.name);
        }
    }
    let named = ["double_cover_then_collapse", "reflection_fixed_points_into_circle"];
    let covered = named.iter().all(|n| chains.iter().any(|c| c.name == *n));
    outcome(
        bad.is_empty() && chains.len() >= 6 && covered,
        format!("{} chains, {checked} identities, failures {bad:?}", chains.len()),
    )
}

fn chern_assembly() -> Outcome {
    let cases = corpus::assembly_corpus();
    let summary = chern_assembly_check(&cases);
    let value = |name: &str| {
        summary.reports.iter().find(|(n, _)| n == name).and_then(|(_, r)| r.as_ref()).map(|r| r.lhs.to_string())
    };
    let anchors = value("circle_reflection_trivial_tau_sigma").as_deref() == Some("2")
        && value("circle_free_rotation_trivial_tau_sigma").as_deref() == Some("0")
        && value("point_regular_tau_e").as_deref() == Some("2")
        && value("point_sign_tau_sigma").as_deref() == Some("-1");
    let ok = summary.total == 12 && summary.passed == 12 && anchors;
    outcome(ok, format!("{}/{} identities, failures {:?}", summary.passed, summary.total, summary.failures))
}

fn dnc_numerics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let round_trip = sample_points(3, 2, 10_000, &mut rng)
        .iter()
        .map(|p| psi_inv(&psi(p)).distance(p).max(psi(&psi_inv(p)).distance(p)))
        .fold(0.0, f64::max);
    let mut ok = round_trip <= 1e-12;
    let mut parts = vec![format!("round trip {round_trip:.1e}")];
    for (name, f, g) in corpus::dnc_pairs() {
        let tol = if f.has_analytic_jacobian() && g.has_analytic_jacobian() { 1e-12 } else { 1e-8 };
        let points = sample_points(f.source.0, f.source.1, 1000, &mut rng);
        let err = check_dnc_functoriality(&f, &g, &points).expect("pair maps").max_error;
        let cont = points
            .iter()
            .take(50)
            .map(|p| continuity_error(&f, &p.x, &p.xi).expect("pair map"))
            .chain(points.iter().take(50).map(|p| continuity_error(&f.then(&g), &p.x, &p.xi).expect("pair map")))
            .fold(0.0, f64::max);
        ok &= err <= tol && cont <= 1e-6;
        parts.push(format!("{name} {err:.1e}/{cont:.1e}"));
    }
    outcome(ok, parts.join(", "))
}

fn run_cli(args: &[&str], out: &std::path::Path) -> (i32, Vec<u8>) {
    let status =
        Command::new(env!("CARGO_BIN_EXE_deloc")).args(args).arg("--out").arg(out).output().expect("binary runs");
    (status.status.code().unwrap_or(-1), std::fs::read(out).unwrap_or_default())
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("temp dir");
    let commands: [&[&str]; 7] = [
        &["hp-group", "--corpus", "builtin"],
        &["cohomology", "--corpus", "builtin"],
        &["deloc", "--corpus", "builtin"],
        &["pairing", "--corpus", "builtin"],
        &["assembly-check", "--corpus", "builtin"],
        &["umkehr", "--corpus", "builtin"],
        &["dnc-check", "--seed", "5"],
    ];
    let mut bad = Vec::new();
    for args in commands {
        let (c1, r1) = run_cli(args, &dir.path().join("a.json"));
        let threaded: Vec<&str> = args.iter().copied().chain(["--threads", "1"]).collect();
        let (c2, r2) = run_cli(&threaded, &dir.path().join("b.json"));
        if c1 != 0 || c2 != 0 || r1.is_empty() || r1 != r2 {
            bad.push(args[0]);
        }
    }
    outcome(bad.is_empty(), format!("{} commands run twice, differing {bad:?}", commands.len()))
}

#[test]
fn acceptance_criteria() {
    type Criterion = (&'static str, fn() -> Outcome, Option<u64>);
    let criteria: [Criterion; 9] = [
        ("1 burghelea agreement", burghelea_agreement, Some(10)),
        ("2 double complex vs invariants", double_complex_vs_invariants, Some(60)),
        ("3 tu-xu degree 0", tu_xu_degree_zero, Some(30)),
        ("4 trace property", trace_property, None),
        ("5 pairing perfection", pairing_perfection, None),
        ("6 umkehr functoriality", umkehr_functoriality, None),
        ("7 chern-assembly identity", chern_assembly, None),
        ("8 dnc numerics", dnc_numerics, None),
        ("9 cli determinism", cli_determinism, None),
    ];
    let mut failed = Vec::new();
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let mut result = check();
        if let Some(secs) = budget {
            result = within(result, start.elapsed(), Duration::from_secs(secs));
        }
        println!("[{}] {name}: {}", if result.passed { "PASS" } else { "FAIL" }, result.detail);
        if !result.passed {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
