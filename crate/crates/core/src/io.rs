//! JSON input formats.
//!
//! * group: `{"degree": n, "generators": [[perm], ...]}`
//! * space: `{"vertices": n, "simplices": [[v, ...], ...], "generators": [[perm], ...]}`,
//!   or with `"group": {..}` and `"action": [[image of each vertex], ...]` (one list
//!   per group generator) for actions that are not faithful on vertices
//! * bundle: `{"fiber_dim": n, "rho": {"<generator>": {"<vertex>" | "*": matrix}}}`
//!   where a scalar is an integer, a `"p/q"` string, or a list of coefficients of
//!   powers of `ζ_N` (`N` the group exponent)
//! * map chain: `{"source": space, "middle": space, "target": space, "f": [..], "g": [..]}`

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Deserialize;

use crate::assembly::{field_for, FlatEquivBundle, Matrix};
use crate::caps::Caps;
use crate::cyclotomic::{Cyclotomic, CyclotomicField};
use crate::error::{Error, Result};
use crate::grp::{group_from_permutations, FiniteGroup};
use crate::gspace::{GComplex, SimplicialComplex};
use crate::linalg::Rational;
use crate::pushpair::GMap;

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub degree: usize,
    #[serde(default)]
    pub generators: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub vertices: usize,
    #[serde(default)]
    pub simplices: Vec<Vec<usize>>,
    pub generators: Option<Vec<Vec<usize>>>,
    pub group: Option<GroupSpec>,
    pub action: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
    Coefficients(Vec<Scalar>),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub fiber_dim: usize,
    pub rho: BTreeMap<String, BTreeMap<String, Vec<Vec<Scalar>>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapChainSpec {
    pub source: SpaceSpec,
    pub middle: SpaceSpec,
    pub target: SpaceSpec,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn group_from_spec(spec: &GroupSpec, caps: &Caps) -> Result<FiniteGroup> {
    group_from_permutations(spec.degree, &spec.generators, caps)
}

pub fn parse_group(text: &str, caps: &Caps) -> Result<FiniteGroup> {
    group_from_spec(&parse_json(text)?, caps)
}

pub fn space_from_spec(spec: &SpaceSpec, caps: &Caps) -> Result<GComplex> {
    if let Some(s) = spec.simplices.iter().flatten().find(|&&v| v >= spec.vertices) {
        return Err(Error::Parse(format!("simplex vertex {s} out of range")));
    }
    let complex = SimplicialComplex::new(spec.vertices, &spec.simplices);
    match (&spec.group, &spec.action, &spec.generators) {
        (Some(g), Some(action), None) => GComplex::from_generator_images(complex, group_from_spec(g, caps)?, action),
        (None, None, Some(gens)) => GComplex::from_permutations(complex, gens, caps),
        (Some(g), None, None) => Ok(GComplex::with_trivial_action(complex, group_from_spec(g, caps)?)),
        (None, None, None) => Ok(GComplex::trivial(complex)),
        _ => Err(Error::Parse("give either \"generators\" or \"group\" (with optional \"action\")".into())),
    }
}

pub fn parse_space(text: &str, caps: &Caps) -> Result<GComplex> {
    space_from_spec(&parse_json(text)?, caps)
}

fn rational(text: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::new(n.into(), d.into()))
        }
        None => Ok(Rational::from_integer(text.trim().parse::<i64>().map_err(|_| bad())?.into())),
    }
}

fn scalar_rational(s: &Scalar) -> Result<Rational> {
    match s {
        Scalar::Int(n) => Ok(Rational::from_integer((*n).into())),
        Scalar::Text(t) => rational(t),
        Scalar::Coefficients(_) => Err(Error::Parse("nested coefficient list".into())),
    }
}

pub fn scalar(s: &Scalar, field: &Arc<CyclotomicField>) -> Result<Cyclotomic> {
    match s {
        Scalar::Coefficients(cs) => Ok(field.from_coefficients(cs.iter().map(scalar_rational).collect::<Result<_>>()?)),
        other => Ok(field.from_rational(scalar_rational(other)?)),
    }
}

fn generator_index(key: &str) -> Result<usize> {
    key.trim_start_matches("gen").parse().map_err(|_| Error::Parse(format!("bad generator key {key:?}")))
}

pub fn bundle_from_spec(base: &GComplex, spec: &BundleSpec) -> Result<FlatEquivBundle> {
    let field = field_for(base.group());
    let gens = base.group().generators().len();
    let labels = base.complex().vertices();
    let mut per_gen: Vec<Vec<Option<Matrix>>> = vec![vec![None; labels.len()]; gens];
    for (key, by_vertex) in &spec.rho {
        let gi = generator_index(key)?;
        if gi >= gens {
            return Err(Error::Parse(format!("generator {gi} out of range ({gens} generators)")));
        }
        for (vkey, rows) in by_vertex {
            let m: Matrix = rows
                .iter()
                .map(|r| r.iter().map(|s| scalar(s, &field)).collect::<Result<_>>())
                .collect::<Result<_>>()?;
            if vkey == "*" {
                for slot in per_gen[gi].iter_mut().filter(|s| s.is_none()) {
                    *slot = Some(m.clone());
                }
            } else {
                let v: usize = vkey.parse().map_err(|_| Error::Parse(format!("bad vertex key {vkey:?}")))?;
                let pos =
                    base.complex().vertex_position(v).ok_or_else(|| Error::Parse(format!("unknown vertex {v}")))?;
                per_gen[gi][pos] = Some(m);
            }
        }
    }
    let gens_data = per_gen
        .into_iter()
        .enumerate()
        .map(|(gi, ms)| {
            ms.into_iter()
                .enumerate()
                .map(|(pos, m)| {
                    m.ok_or_else(|| Error::Parse(format!("missing rho for generator {gi} at vertex {}", labels[pos])))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    FlatEquivBundle::from_generators(base, vec![spec.fiber_dim; labels.len()], gens_data)
}

pub fn parse_bundle(base: &GComplex, text: &str) -> Result<FlatEquivBundle> {
    bundle_from_spec(base, &parse_json(text)?)
}

/// `(source, middle, target, f, g)`; maps are validated.
pub fn parse_map_chain(text: &str, caps: &Caps) -> Result<(GComplex, GComplex, GComplex, GMap, GMap)> {
    let spec: MapChainSpec = parse_json(text)?;
    let s = space_from_spec(&spec.source, caps)?;
    let m = space_from_spec(&spec.middle, caps)?;
    let t = space_from_spec(&spec.target, caps)?;
    let f = GMap::new(&s, &m, spec.f)?;
    let g = GMap::new(&m, &t, spec.g)?;
    Ok((s, m, t, f, g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assembly::validate_bundle;

    #[test]
    fn parses_spaces_and_bundles() {
        let caps = Caps::default();
        let k =
            parse_space(r#"{"vertices": 4, "simplices": [[0,1],[1,2],[2,3],[0,3]], "generators": [[0,3,2,1]]}"#, &caps)
                .unwrap();
        assert_eq!(k.group().order(), 2);
        let e = parse_bundle(&k, r#"{"fiber_dim": 1, "rho": {"0": {"*": [[-1]]}}}"#).unwrap();
        assert!(validate_bundle(&e).is_valid());
        let z = parse_bundle(&k, r#"{"fiber_dim": 1, "rho": {"gen0": {"*": [["1/2"]]}}}"#).unwrap();
        assert!(!validate_bundle(&z).is_valid());
        assert!(matches!(parse_space("{", &caps), Err(Error::Parse(_))));
        assert!(matches!(parse_space(r#"{"vertices": 1, "simplices": [[3]]}"#, &caps), Err(Error::Parse(_))));
    }

    #[test]
    fn cyclotomic_scalars() {
        let f = CyclotomicField::new(3);
        let z = scalar(&Scalar::Coefficients(vec![Scalar::Int(0), Scalar::Int(1)]), &f).unwrap();
        assert_eq!(z, f.zeta_pow(1));
        assert_eq!(
            scalar(&Scalar::Text("3/6".into()), &f).unwrap(),
            f.from_rational(Rational::new(1.into(), 2.into()))
        );
    }

    #[test]
    fn non_faithful_action() {
        let caps = Caps::default();
        let k = parse_space(
            r#"{"vertices": 2, "group": {"degree": 4, "generators": [[1,2,3,0]]}, "action": [[1,0]]}"#,
            &caps,
        )
        .unwrap();
        assert_eq!(k.group().order(), 4);
        assert!(k.is_regular());
    }
}
