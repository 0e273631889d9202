//! Subcommand implementations. Each produces human text and a JSON report.

use std::fmt::Write as _;

use deloc_core::assembly::{chern_assembly_check, validate_bundle, AssemblyCase, AssemblySummary};
use deloc_core::corpus::{self, MapChain};
use deloc_core::deloc::{deloc_cohomology, deloc_h0_total, hh0_groupoid_oracle};
use deloc_core::dnc::{check_dnc_functoriality, continuity_error, psi, psi_inv, sample_points};
use deloc_core::grp::{burghelea_hp, hh0_group_oracle, CyclicTrace, FiniteGroup};
use deloc_core::gspace::{quotient_complex, GComplex};
use deloc_core::linalg::rank_dense;
use deloc_core::nervecoh::{invariant_oracle, total_cohomology_dim};
use deloc_core::pushpair::{
    check_functoriality, check_projection_formula, gram_matrix, FunctorialityReport, OrientedGComplex,
};
use deloc_core::Caps;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::{input, Command, Failure};

pub const SCHEMA_VERSION: u32 = 1;

pub struct Report {
    pub text: String,
    pub json: Value,
    pub passed: bool,
}

impl Report {
    fn new(command: &str, passed: bool, text: String, results: Value) -> Self {
        let json =
            json!({ "schema_version": SCHEMA_VERSION, "command": command, "passed": passed, "results": results });
        Report { text, json, passed }
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

pub fn run(command: &Command) -> Result<Report, Failure> {
    let caps = Caps::from_env();
    match command {
        Command::HpGroup { group, corpus } => hp_group(group.as_deref(), corpus.as_deref(), &caps),
        Command::Cohomology { space, corpus, degree } => {
            cohomology(space.as_deref(), corpus.as_deref(), *degree, &caps)
        }
        Command::Deloc { space, corpus } => deloc(space.as_deref(), corpus.as_deref(), &caps),
        Command::Pairing { space, corpus, degree } => pairing(space.as_deref(), corpus.as_deref(), *degree, &caps),
        Command::AssemblyCheck { corpus, space, bundle } => {
            assembly(corpus.as_deref(), space.as_deref(), bundle.as_deref(), &caps)
        }
        Command::Umkehr { chain, corpus } => umkehr(chain.as_deref(), corpus.as_deref(), &caps),
        Command::DncCheck { seed, samples } => dnc(*seed, *samples),
    }
}

/// Exactly one of `--corpus builtin` or the single-input flag.
fn select<T>(
    single: Option<&str>,
    corpus: Option<&str>,
    flag: &str,
    load: impl Fn(&str) -> Result<(String, T), Failure>,
    builtin: impl FnOnce() -> Vec<(String, T)>,
) -> Result<Vec<(String, T)>, Failure> {
    match (single, corpus) {
        (Some(s), None) => Ok(vec![load(s)?]),
        (None, Some(c)) => {
            input::require_builtin(c)?;
            Ok(builtin())
        }
        _ => Err(Failure::Input(format!("give exactly one of --{flag} or --corpus"))),
    }
}

fn named<T>(items: Vec<(&'static str, T)>) -> Vec<(String, T)> {
    items.into_iter().map(|(n, t)| (n.to_string(), t)).collect()
}

fn hp_group(group: Option<&str>, corpus: Option<&str>, caps: &Caps) -> Result<Report, Failure> {
    let groups: Vec<(String, FiniteGroup)> =
        select(group, corpus, "group", |r| input::group(r, caps), || named(corpus::groups()))?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut passed = true;
    for (name, g) in &groups {
        let hp = burghelea_hp(g);
        let oracle = hh0_group_oracle(g, caps)?;
        let ok = oracle == hp.even_dim;
        passed &= ok;
        let classes: Vec<Value> = g
            .conjugacy_classes()
            .iter()
            .map(|c| json!({ "representative": c.representative, "size": c.size(), "order": g.element_order(c.representative) }))
            .collect();
        let _ = writeln!(
            text,
            "{name}: |G| = {}, classes = {}, HP_even = {}, HP_odd = {}, HH_0 oracle = {oracle} [{}]",
            g.order(),
            classes.len(),
            hp.even_dim,
            hp.odd_dim,
            mark(ok)
        );
        results.push(json!({
            "name": name, "order": g.order(), "classes": classes,
            "even": hp.even_dim, "odd": hp.odd_dim, "hh0_oracle": oracle, "agree": ok,
        }));
    }
    Ok(Report::new("hp-group", passed, text, Value::Array(results)))
}

fn spaces_for(space: Option<&str>, corpus: Option<&str>, caps: &Caps) -> Result<Vec<(String, GComplex)>, Failure> {
    select(space, corpus, "space", |r| input::space(r, caps), || named(corpus::spaces()))
}

fn cohomology(
    space: Option<&str>,
    corpus: Option<&str>,
    degree: Option<usize>,
    caps: &Caps,
) -> Result<Report, Failure> {
    let spaces = spaces_for(space, corpus, caps)?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut passed = true;
    for (name, k) in &spaces {
        k.ensure_regular()?;
        let top = k.complex().dim().map_or(0, |d| d + 1);
        if let Some(n) = degree {
            if n > top {
                return Err(Failure::Input(format!("{name}: degree {n} exceeds {top}")));
            }
        }
        let quotient = quotient_complex(k)?.betti_numbers();
        let degrees: Vec<usize> = match degree {
            Some(n) => vec![n],
            None => (0..=top).collect(),
        };
        let mut rows = Vec::new();
        let mut all = true;
        for &n in &degrees {
            let nerve = total_cohomology_dim(k, n)?;
            let invariant = invariant_oracle(k, n);
            let orbit = quotient.get(n).copied().unwrap_or(0);
            let ok = nerve == invariant && nerve == orbit;
            all &= ok;
            rows.push(json!({ "degree": n, "nerve": nerve, "invariant": invariant, "quotient": orbit, "agree": ok }));
        }
        passed &= all;
        let dims: Vec<String> = rows.iter().map(|r| r["nerve"].to_string()).collect();
        let _ = writeln!(text, "{name}: H^* = [{}] [{}]", dims.join(", "), mark(all));
        results.push(json!({ "name": name, "degrees": rows, "agree": all }));
    }
    Ok(Report::new("cohomology", passed, text, Value::Array(results)))
}

fn deloc(space: Option<&str>, corpus: Option<&str>, caps: &Caps) -> Result<Report, Failure> {
    let spaces = select(
        space,
        corpus,
        "space",
        |r| input::space(r, caps),
        || named(corpus::spaces().into_iter().chain(corpus::gsets()).collect()),
    )?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut passed = true;
    for (name, k) in &spaces {
        let h = deloc_cohomology(k)?;
        let classes: Vec<Value> = h
            .classes
            .iter()
            .map(|c| {
                json!({ "representative": c.representative, "class_size": c.class_size,
                        "centralizer_order": c.centralizer_order, "dims": c.dims })
            })
            .collect();
        let _ = write!(text, "{name}: {} classes, even = {}, odd = {}", h.classes.len(), h.even, h.odd);
        let mut entry = json!({ "name": name, "classes": classes, "even": h.even, "odd": h.odd });
        if k.complex().dim() == Some(0) {
            let oracle = hh0_groupoid_oracle(k, caps)?;
            let total = deloc_h0_total(k)?;
            let ok = oracle == total;
            passed &= ok;
            let _ = write!(text, ", HH_0 oracle = {oracle} [{}]", mark(ok));
            entry["hh0_oracle"] = json!(oracle);
            entry["agree"] = json!(ok);
        }
        text.push('\n');
        results.push(entry);
    }
    Ok(Report::new("deloc", passed, text, Value::Array(results)))
}

fn pairing(space: Option<&str>, corpus: Option<&str>, degree: Option<usize>, caps: &Caps) -> Result<Report, Failure> {
    let spaces = select(space, corpus, "space", |r| input::space(r, caps), || named(corpus::pairing_spaces()))?;
    let mut text = String::new();
    let mut results = Vec::new();
    let mut passed = true;
    for (name, k) in spaces {
        let oriented = OrientedGComplex::new(k)?;
        let mut classes = Vec::new();
        for model in &oriented.classes {
            let g = model.representative;
            if model.complex().is_empty() {
                let _ = writeln!(text, "{name} class {g}: empty fixed set");
                classes.push(json!({ "representative": g, "empty": true }));
                continue;
            }
            if !model.is_oriented() {
                let _ = writeln!(text, "{name} class {g}: not equivariantly oriented, pairing undefined");
                classes.push(json!({ "representative": g, "oriented": false }));
                continue;
            }
            let mut degrees = Vec::new();
            for j in 0..model.bases.len() {
                if degree.is_some_and(|d| d != j) {
                    continue;
                }
                let gram = gram_matrix(model, j)?;
                let rank = rank_dense(&gram);
                let ok = rank == model.betti(j) && rank == model.betti(model.bases.len() - 1 - j);
                passed &= ok;
                let _ = writeln!(
                    text,
                    "{name} class {g} degree {j}: betti {}, gram rank {rank} [{}]",
                    model.betti(j),
                    mark(ok)
                );
                let entries: Vec<Vec<String>> =
                    gram.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
                degrees.push(
                    json!({ "degree": j, "betti": model.betti(j), "rank": rank, "gram": entries, "full_rank": ok }),
                );
            }
            classes.push(json!({ "representative": g, "oriented": true, "degrees": degrees }));
        }
        results.push(json!({ "name": name, "classes": classes }));
    }
    Ok(Report::new("pairing", passed, text, Value::Array(results)))
}

fn assembly_json(summary: &AssemblySummary) -> Value {
    let cases: Vec<Value> = summary
        .reports
        .iter()
        .map(|(name, r)| match r {
            Some(r) => json!({ "name": name, "class": r.class_rep, "lhs": r.lhs.to_string(), "rhs": r.rhs.to_string(), "equal": r.equal }),
            None => json!({ "name": name, "equal": false }),
        })
        .collect();
    let failures: Vec<Value> = summary.failures.iter().map(|(n, w)| json!({ "name": n, "witness": w })).collect();
    json!({ "total": summary.total, "passed": summary.passed, "cases": cases, "failures": failures })
}

fn assembly(corpus: Option<&str>, space: Option<&str>, bundle: Option<&str>, caps: &Caps) -> Result<Report, Failure> {
    let cases = match (corpus, space, bundle) {
        (Some(c), None, None) => {
            input::require_builtin(c)?;
            corpus::assembly_corpus()
        }
        (None, Some(s), Some(b)) => {
            let (name, k) = input::space(s, caps)?;
            let e = input::bundle(&k, b)?;
            let report = validate_bundle(&e);
            if !report.is_valid() {
                return Err(Failure::Input(format!("invalid bundle: {}", report.summary())));
            }
            k.group()
                .conjugacy_classes()
                .iter()
                .map(|c| AssemblyCase {
                    name: format!("{name}@class{}", c.representative),
                    bundle: e.clone(),
                    trace: CyclicTrace::for_class(c),
                })
                .collect()
        }
        _ => return Err(Failure::Input("give --corpus builtin, or both --space and --bundle".into())),
    };
    let summary = chern_assembly_check(&cases);
    let mut text = String::new();
    for (name, r) in &summary.reports {
        match r {
            Some(r) => {
                let _ = writeln!(text, "{name}: index {} = {} [{}]", r.lhs, r.rhs, mark(r.equal));
            }
            None => {
                let _ = writeln!(text, "{name}: [FAIL]");
            }
        }
    }
    let _ = writeln!(text, "{}/{} cases pass", summary.passed, summary.total);
    for (name, witness) in &summary.failures {
        let _ = writeln!(text, "  {name}: {witness}");
    }
    let passed = summary.failures.is_empty();
    Ok(Report::new("assembly-check", passed, text, assembly_json(&summary)))
}

fn functoriality_json(r: &FunctorialityReport) -> Value {
    let discrepancies: Vec<Value> = r
        .discrepancies
        .iter()
        .map(|d| json!({ "class": d.class, "degree": d.degree, "basis_index": d.basis_index, "detail": d.detail }))
        .collect();
    json!({ "checked": r.checked, "skipped_classes": r.skipped_classes, "discrepancies": discrepancies, "holds": r.holds() })
}

pub struct ChainOutcome {
    pub functoriality: FunctorialityReport,
    pub projection_f: FunctorialityReport,
    pub projection_g: FunctorialityReport,
}

impl ChainOutcome {
    pub fn holds(&self) -> bool {
        self.functoriality.holds() && self.projection_f.holds() && self.projection_g.holds()
    }
}

pub fn check_chain(chain: &MapChain) -> Result<ChainOutcome, Failure> {
    let s = OrientedGComplex::new(chain.source.clone())?;
    let m = OrientedGComplex::new(chain.middle.clone())?;
    let t = OrientedGComplex::new(chain.target.clone())?;
    Ok(ChainOutcome {
        functoriality: check_functoriality(&s, &m, &t, &chain.f, &chain.g)?,
        projection_f: check_projection_formula(&s, &m, &chain.f)?,
        projection_g: check_projection_formula(&m, &t, &chain.g)?,
    })
}

fn umkehr(chain: Option<&str>, corpus: Option<&str>, caps: &Caps) -> Result<Report, Failure> {
    let chains = match (chain, corpus) {
        (Some(path), None) => vec![input::map_chain(path, caps)?],
        (None, Some(c)) => {
            input::require_builtin(c)?;
            corpus::map_chains()
        }
        _ => return Err(Failure::Input("give exactly one of --chain or --corpus".into())),
    };
    let mut text = String::new();
    let mut results = Vec::new();
    let mut passed = true;
    for chain in &chains {
        let out = check_chain(chain)?;
        let ok = out.holds();
        passed &= ok;
        let _ = writeln!(
            text,
            "{}: functoriality {} checks ({} skipped classes), projection {} + {} checks [{}]",
            chain.name,
            out.functoriality.checked,
            out.functoriality.skipped_classes.len(),
            out.projection_f.checked,
            out.projection_g.checked,
            mark(ok)
        );
        results.push(json!({
            "name": chain.name,
            "functoriality": functoriality_json(&out.functoriality),
            "projection_f": functoriality_json(&out.projection_f),
            "projection_g": functoriality_json(&out.projection_g),
            "holds": ok,
        }));
    }
    Ok(Report::new("umkehr", passed, text, Value::Array(results)))
}

pub const ROUND_TRIP_TOL: f64 = 1e-12;
pub const EXACT_TOL: f64 = 1e-12;
pub const FD_TOL: f64 = 1e-8;
pub const CONTINUITY_TOL: f64 = 1e-6;

fn dnc(seed: u64, samples: usize) -> Result<Report, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut text = String::new();
    let mut results = Vec::new();
    let mut passed = true;

    let round_trip = sample_points(3, 2, samples * 10, &mut rng)
        .iter()
        .map(|p| psi_inv(&psi(p)).distance(p).max(psi(&psi_inv(p)).distance(p)))
        .fold(0.0, f64::max);
    let ok = round_trip <= ROUND_TRIP_TOL;
    passed &= ok;
    let _ = writeln!(text, "psi round trip over {} points: {round_trip:.3e} [{}]", samples * 10, mark(ok));

    for (name, f, g) in corpus::dnc_pairs() {
        let exact = f.has_analytic_jacobian() && g.has_analytic_jacobian();
        let tol = if exact { EXACT_TOL } else { FD_TOL };
        let points = sample_points(f.source.0, f.source.1, samples, &mut rng);
        let report = check_dnc_functoriality(&f, &g, &points)?;
        let mut continuity: f64 = 0.0;
        for p in points.iter().take(20) {
            continuity = continuity.max(continuity_error(&f, &p.x, &p.xi)?);
        }
        let ok = report.max_error <= tol && continuity <= CONTINUITY_TOL;
        passed &= ok;
        let _ = writeln!(
            text,
            "{name}: functoriality {:.3e} (tol {tol:.0e}), continuity {continuity:.3e} [{}]",
            report.max_error,
            mark(ok)
        );
        results.push(json!({
            "name": name, "samples": report.samples, "functoriality_error": report.max_error,
            "tolerance": tol, "continuity_error": continuity, "passed": ok,
        }));
    }
    let json = json!({ "seed": seed, "round_trip_error": round_trip, "pairs": results });
    Ok(Report::new("dnc-check", passed, text, json))
}
