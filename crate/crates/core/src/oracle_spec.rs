//! Text names for oracles:
//! `id`, `succ`, `const:<v>`, `table:<path.json>`, `subset:<path.json>`,
//! `halting:fuel=<N>`, `jump:<spec>:fuel=<N>`, `graph:<spec>`, and
//! `renamed:<spec>` for `χ'(0) = 0`, `χ'(j + 1) = χ(j)`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde_json::Value;
use thiserror::Error;

use crate::oracle::{boolean_oracle_from_subset, Oracle};
use crate::permred::renamed_oracle;
use crate::reducibility::{graph_of, halting_oracle, jump, HaltingMode};
use crate::Nat;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("unknown oracle spec `{0}`")]
    Unknown(String),
    #[error("bad number `{0}` in oracle spec")]
    Number(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("bad JSON in {path}: {reason}")]
    Json { path: String, reason: String },
    #[error("fuel must be at least 1")]
    ZeroFuel,
}

pub fn parse_nat(s: &str) -> Result<Nat, SpecError> {
    s.trim().parse().map_err(|_| SpecError::Number(s.into()))
}

fn parse_fuel(s: &str) -> Result<u64, SpecError> {
    match s.trim().parse::<u64>() {
        Ok(0) => Err(SpecError::ZeroFuel),
        Ok(f) => Ok(f),
        Err(_) => Err(SpecError::Number(s.into())),
    }
}

fn json_nat(v: &Value, path: &str) -> Result<Nat, SpecError> {
    let bad = || SpecError::Json { path: path.into(), reason: format!("`{v}` is not a natural") };
    match v {
        Value::Number(n) => n.as_u64().map(Nat::from).ok_or_else(bad),
        Value::String(s) => s.parse().map_err(|_| bad()),
        _ => Err(bad()),
    }
}

fn read_json(path: &str) -> Result<Value, SpecError> {
    let text = std::fs::read_to_string(Path::new(path))
        .map_err(|source| SpecError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|e| SpecError::Json { path: path.into(), reason: e.to_string() })
}

pub fn parse_oracle(spec: &str) -> Result<Oracle, SpecError> {
    let spec = spec.trim();
    match spec {
        "id" => return Ok(Oracle::identity()),
        "succ" => return Ok(Oracle::successor()),
        _ => {}
    }
    if let Some(v) = spec.strip_prefix("const:") {
        return Ok(Oracle::constant(parse_nat(v)?));
    }
    if let Some(path) = spec.strip_prefix("table:") {
        let Value::Object(map) = read_json(path)? else {
            return Err(SpecError::Json { path: path.into(), reason: "expected an object".into() });
        };
        let mut table = BTreeMap::new();
        for (k, v) in &map {
            table.insert(parse_nat(k)?, json_nat(v, path)?);
        }
        return Ok(Oracle::table(format!("table:{path}"), table));
    }
    if let Some(path) = spec.strip_prefix("subset:") {
        let Value::Array(items) = read_json(path)? else {
            return Err(SpecError::Json { path: path.into(), reason: "expected an array".into() });
        };
        let members: BTreeSet<Nat> = items.iter().map(|v| json_nat(v, path)).collect::<Result<_, _>>()?;
        return Ok(boolean_oracle_from_subset(format!("subset:{path}"), move |x| members.contains(x)));
    }
    if let Some(f) = spec.strip_prefix("halting:fuel=") {
        return Ok(halting_oracle(HaltingMode::Fuel(parse_fuel(f)?)));
    }
    if let Some(rest) = spec.strip_prefix("jump:") {
        let (inner, f) = rest.rsplit_once(":fuel=").ok_or_else(|| SpecError::Unknown(spec.into()))?;
        return Ok(jump(&parse_oracle(inner)?, parse_fuel(f)?));
    }
    if let Some(inner) = spec.strip_prefix("graph:") {
        return Ok(graph_of(&parse_oracle(inner)?));
    }
    if let Some(inner) = spec.strip_prefix("renamed:") {
        return Ok(renamed_oracle(&parse_oracle(inner)?));
    }
    Err(SpecError::Unknown(spec.into()))
}
