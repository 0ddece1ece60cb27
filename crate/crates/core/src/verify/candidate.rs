use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use crate::exact::{parse_ratfunc, ExactError, RationalFunction, Symbol, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CandidateError {
    #[error("candidate JSON: {0}")]
    Json(String),
    #[error("unsupported candidate schema {0}")]
    Schema(u32),
    #[error("`{0}` is not a symbol of the problem")]
    UnknownSymbol(String),
    #[error("`{0}` is assigned twice")]
    Duplicate(String),
    #[error("value of `{name}`: {source}")]
    Value { name: String, source: ExactError },
}

#[derive(Deserialize)]
struct Row {
    symbol: String,
    value_text: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Candidate {
    #[serde(default)]
    schema: Option<u32>,
    #[serde(default)]
    values: BTreeMap<String, String>,
    #[serde(default)]
    assignments: Vec<Row>,
}

/// Parses a candidate solution: `{"values": {"a_2": "...", ..}}` or the
/// `assignments` list of a solve report. Unknown top-level keys of a solve
/// report are not accepted; pass only the values.
pub fn parse_candidate(
    text: &str,
    table: &SymbolTable,
) -> Result<BTreeMap<Symbol, RationalFunction>, CandidateError> {
    let c: Candidate = serde_json::from_str(text).map_err(|e| CandidateError::Json(e.to_string()))?;
    if let Some(v) = c.schema {
        if v != 1 {
            return Err(CandidateError::Schema(v));
        }
    }
    let rows = c
        .values
        .into_iter()
        .chain(c.assignments.into_iter().map(|r| (r.symbol, r.value_text)));
    let mut out = BTreeMap::new();
    for (name, value) in rows {
        let sym = table
            .lookup(&name)
            .ok_or_else(|| CandidateError::UnknownSymbol(name.clone()))?;
        let v = parse_ratfunc(&value, &mut |n| table.lookup(n)).map_err(|source| {
            CandidateError::Value {
                name: name.clone(),
                source,
            }
        })?;
        if out.insert(sym, v).is_some() {
            return Err(CandidateError::Duplicate(name));
        }
    }
    Ok(out)
}
