//! Resolving `builtin:NAME` references and JSON files.

use std::path::Path;

use deloc_core::corpus;
use deloc_core::grp::FiniteGroup;
use deloc_core::gspace::GComplex;
use deloc_core::{io, Caps};

use crate::Failure;

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
}

fn builtin(reference: &str) -> Option<&str> {
    reference.strip_prefix("builtin:")
}

pub fn group(reference: &str, caps: &Caps) -> Result<(String, FiniteGroup), Failure> {
    if let Some(name) = builtin(reference) {
        let g = corpus::groups().into_iter().find(|(n, _)| *n == name).map(|(_, g)| g);
        return g
            .map(|g| (name.to_string(), g))
            .ok_or_else(|| Failure::Input(format!("unknown built-in group {name}")));
    }
    Ok((reference.to_string(), io::parse_group(&read(reference)?, caps)?))
}

pub fn space(reference: &str, caps: &Caps) -> Result<(String, GComplex), Failure> {
    if let Some(name) = builtin(reference) {
        let all = corpus::spaces().into_iter().chain(corpus::gsets());
        let k = all.into_iter().find(|(n, _)| *n == name).map(|(_, k)| k);
        return k
            .map(|k| (name.to_string(), k))
            .ok_or_else(|| Failure::Input(format!("unknown built-in space {name}")));
    }
    Ok((reference.to_string(), io::parse_space(&read(reference)?, caps)?))
}

pub fn bundle(base: &GComplex, path: &str) -> Result<deloc_core::assembly::FlatEquivBundle, Failure> {
    Ok(io::parse_bundle(base, &read(path)?)?)
}

pub fn map_chain(path: &str, caps: &Caps) -> Result<corpus::MapChain, Failure> {
    let (source, middle, target, f, g) = io::parse_map_chain(&read(path)?, caps)?;
    Ok(corpus::MapChain { name: "input", source, middle, target, f, g })
}

pub fn require_builtin(corpus: &str) -> Result<(), Failure> {
    if corpus == "builtin" {
        Ok(())
    } else {
        Err(Failure::Input(format!("unknown corpus {corpus:?} (only \"builtin\" is available)")))
    }
}
