use std::collections::BTreeMap;
use std::fmt;

use pssm_core::exact::{parse_ratfunc, rational, Rational, RationalFunction, Symbol, SymbolTable};
use pssm_core::model::{builtin, parse_problem, ProblemSpec};
use pssm_core::solve::{RootSelection, SolvePolicy};

use crate::Common;

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Usage(String),
    /// A failure inside the pipeline, with the stage that raised it.
    Stage(&'static str, String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "{m}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Stage(s, m) => write!(f, "{s}: {m}"),
        }
    }
}

pub fn stage<E: fmt::Display>(name: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::Stage(name, e.to_string())
}

pub fn load_problem(c: &Common) -> Result<ProblemSpec, CliError> {
    let p = match (&c.problem, &c.file) {
        (Some(name), None) => builtin(name).map_err(stage("problem"))?,
        (None, Some(path)) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            parse_problem(&src).map_err(|e| CliError::Stage("parse", format!("{}:{e}", path.display())))?
        }
        _ => return Err(CliError::Usage("give exactly one of --problem and --file".into())),
    };
    Ok(match c.order {
        Some(n) => p.with_order(n),
        None => p,
    })
}

/// Splits every `--set` argument into ordered `(name, value)` pairs.
pub fn parse_set(args: &[String]) -> Result<Vec<(String, String)>, CliError> {
    let mut out: Vec<(String, String)> = Vec::new();
    for arg in args {
        for item in arg.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set item `{item}` is not name=value")))?;
            let k = k.trim().to_string();
            if out.iter().any(|(n, _)| *n == k) {
                return Err(CliError::Usage(format!("`{k}` is set twice")));
            }
            out.push((k, v.trim().to_string()));
        }
    }
    Ok(out)
}

fn lookup(table: &SymbolTable, name: &str) -> Result<Symbol, CliError> {
    table
        .lookup(name)
        .ok_or_else(|| CliError::Usage(format!("--set: `{name}` is not a parameter or coefficient")))
}

pub fn symbolic_bindings(
    pairs: &[(String, String)],
    table: &SymbolTable,
) -> Result<BTreeMap<Symbol, RationalFunction>, CliError> {
    pairs
        .iter()
        .map(|(k, v)| {
            let sym = lookup(table, k)?;
            let value = match rational::parse_decimal(v) {
                Some(q) => RationalFunction::constant(q),
                None => parse_ratfunc(v, &mut |n| table.lookup(n))
                    .map_err(|e| CliError::Usage(format!("--set {k}: {e}")))?,
            };
            Ok((sym, value))
        })
        .collect()
}

pub fn numeric_bindings(
    pairs: &[(String, String)],
    table: &SymbolTable,
) -> Result<BTreeMap<Symbol, Rational>, CliError> {
    pairs
        .iter()
        .map(|(k, v)| {
            let q = rational::parse_decimal(v)
                .ok_or_else(|| CliError::Usage(format!("--set {k}: `{v}` is not a number")))?;
            Ok((lookup(table, k)?, q))
        })
        .collect()
}

pub fn parse_policy(text: Option<&str>) -> Result<SolvePolicy, CliError> {
    let mut p = SolvePolicy::default();
    let Some(text) = text else { return Ok(p) };
    let on_off = |k: &str, v: &str| match v {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(CliError::Usage(format!("--policy {k} must be on or off"))),
    };
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--policy item `{item}` is not key=value")))?;
        match k {
            "quadratic" => p.allow_quadratic = on_off(k, v)?,
            "generic" => p.generic_seeds = on_off(k, v)?,
            "branches" => {
                p.max_branches = v
                    .parse()
                    .map_err(|_| CliError::Usage(format!("--policy branches `{v}` is not a count")))?
            }
            "roots" => {
                p.root_selection = match v {
                    "both" => RootSelection::Both,
                    "principal" => RootSelection::Principal,
                    _ => return Err(CliError::Usage("--policy roots must be both or principal".into())),
                }
            }
            _ => return Err(CliError::Usage(format!("unknown --policy key `{k}`"))),
        }
    }
    Ok(p)
}

/// `name=start:stop:step`, inclusive of `stop` when it lies on the grid.
pub fn parse_grid(arg: &str) -> Result<(String, Vec<Rational>), CliError> {
    let bad = || CliError::Usage(format!("--var `{arg}` is not name=start:stop:step"));
    let (name, range) = arg.split_once('=').ok_or_else(bad)?;
    let parts: Vec<&str> = range.split(':').collect();
    let nums: Vec<Rational> = parts
        .iter()
        .map(|s| rational::parse_decimal(s).ok_or_else(bad))
        .collect::<Result<_, _>>()?;
    let points = match nums.as_slice() {
        [x] => vec![x.clone()],
        [a, b, step] => {
            if *step <= Rational::from_integer(0.into()) || b < a {
                return Err(bad());
            }
            let n = ((b - a) / step).floor().to_integer();
            let n: usize = n
                .try_into()
                .ok()
                .filter(|n| *n < 1_000_000)
                .ok_or_else(|| CliError::Usage(format!("--var `{arg}` has too many points")))?;
            (0..=n).map(|i| a + step * Rational::from_integer(i.into())).collect()
        }
        _ => return Err(bad()),
    };
    Ok((name.trim().to_string(), points))
}
