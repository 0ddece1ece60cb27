use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use pssm_core::exact::{rational, Rational, RationalFunction, Symbol};
use pssm_core::expand::{classify, expand_pde, AlgSystem, Classification};
use pssm_core::model::{builtin, builtin_names};
use pssm_core::series::{coefficient_name, Exponents};
use pssm_core::solve::{
    solve_report, solve_system, specialize, verify_assignment, EquationRow, SolveResult,
    SCHEMA_VERSION,
};
use pssm_core::verify::{
    compare, eval_series, parse_candidate, residual as residual_report, residual_of, EvalGrid,
    OracleSpec, Precision, ResidualReport,
};

use crate::config::{
    load_problem, numeric_bindings, parse_grid, parse_policy, parse_set, stage, symbolic_bindings,
    CliError,
};
use crate::{Common, Format, OracleKind, Outcome, PrecisionArg};

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn expand(c: &Common) -> Result<AlgSystem, CliError> {
    expand_pde(&load_problem(c)?).map_err(stage("expand"))
}

/// Solves `sys` and applies the symbolic `--set` bindings.
fn solve_with(sys: &AlgSystem, c: &Common) -> Result<SolveResult, CliError> {
    let policy = parse_policy(c.policy.as_deref())?;
    let r = solve_system(sys, &policy).map_err(stage("solve"))?;
    let set = parse_set(&c.set)?;
    if set.is_empty() {
        return Ok(r);
    }
    let b = symbolic_bindings(&set, &sys.table)?;
    specialize(&r, &b, &sys.table).map_err(stage("specialize"))
}

pub fn solve(c: &Common) -> Result<Outcome, CliError> {
    let sys = expand(c)?;
    let r = solve_with(&sys, c)?;
    let rep = solve_report(&sys, &r);
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Json => json(&rep),
        Format::Csv => csv_text(
            &["symbol".into(), "value".into()],
            &rep.result
                .assignments
                .iter()
                .map(|a| vec![a.symbol.clone(), a.value_text.clone()])
                .collect::<Vec<_>>(),
        )?,
        Format::Text => {
            let mut s = String::new();
            for a in &rep.result.assignments {
                s += &format!("{} = {}\n", a.symbol, a.value_text);
            }
            for a in &rep.result.assumptions {
                s += &format!("assume {a} != 0\n");
            }
            for e in &rep.result.unresolved {
                s += &format!("unresolved {}: {} = 0\n", monomial_text(&e.monomial), e.poly);
            }
            s
        }
    };
    Ok(Outcome {
        text,
        partial: !r.is_resolved(),
    })
}

fn monomial_text(m: &[u32]) -> String {
    Exponents(m.to_vec()).to_string()
}

#[derive(Serialize)]
struct ResidualOutput<'a> {
    schema: u32,
    problem: &'a str,
    all_zero: bool,
    #[serde(flatten)]
    report: &'a ResidualReport,
}

fn render_residual(sys: &AlgSystem, rep: &ResidualReport, format: Format) -> Result<Outcome, CliError> {
    let text = match format {
        Format::Json => json(&ResidualOutput {
            schema: SCHEMA_VERSION,
            problem: &sys.problem.name,
            all_zero: rep.all_zero(),
            report: rep,
        }),
        Format::Csv => csv_text(
            &["equation".into(), "monomial".into(), "zero".into(), "residual".into()],
            &rep.entries
                .iter()
                .map(|e| {
                    vec![
                        e.equation.to_string(),
                        monomial_text(&e.monomial),
                        e.zero.to_string(),
                        e.residual.clone().unwrap_or_else(|| "0".into()),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Text => {
            let bad: Vec<_> = rep.nonzero().collect();
            if bad.is_empty() {
                format!(
                    "all {} residuals vanish through degree {}\n",
                    rep.entries.len(),
                    rep.max_degree
                )
            } else {
                bad.iter()
                    .map(|e| {
                        format!(
                            "equation {} at {}: {}\n",
                            e.equation,
                            monomial_text(&e.monomial),
                            e.residual.as_deref().unwrap_or("0")
                        )
                    })
                    .collect()
            }
        }
    };
    Ok(Outcome {
        text,
        partial: !rep.all_zero(),
    })
}

fn load_candidate(
    sys: &AlgSystem,
    c: &Common,
    path: &Path,
) -> Result<BTreeMap<Symbol, RationalFunction>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut cand = parse_candidate(&text, &sys.table)
        .map_err(|e| CliError::Stage("candidate", format!("{}: {e}", path.display())))?;
    for (s, v) in symbolic_bindings(&parse_set(&c.set)?, &sys.table)? {
        cand.insert(s, v);
    }
    Ok(cand)
}

pub fn verify(c: &Common, candidate: &Path, complete: bool) -> Result<Outcome, CliError> {
    let sys = expand(c)?;
    let mut cand = load_candidate(&sys, c, candidate)?;
    if complete {
        let policy = parse_policy(c.policy.as_deref())?;
        let r = solve_system(&sys, &policy).map_err(stage("solve"))?;
        for (s, v) in r.assignments {
            cand.entry(s).or_insert(v);
        }
    }
    verify_assignment(&sys, &cand).map_err(stage("verify"))?;
    let rep = residual_of(&sys, &cand).map_err(stage("verify"))?;
    render_residual(&sys, &rep, c.format.unwrap_or(Format::Json))
}

pub fn residual(c: &Common, candidate: Option<&Path>) -> Result<Outcome, CliError> {
    let sys = expand(c)?;
    let rep = match candidate {
        Some(path) => {
            let cand = load_candidate(&sys, c, path)?;
            residual_of(&sys, &cand)
        }
        None => residual_report(&sys, &solve_with(&sys, c)?),
    }
    .map_err(stage("residual"))?;
    render_residual(&sys, &rep, c.format.unwrap_or(Format::Json))
}

fn binding(bindings: &BTreeMap<Symbol, Rational>, sys: &AlgSystem, name: &str) -> Result<f64, CliError> {
    sys.lookup(name)
        .and_then(|s| bindings.get(&s))
        .map(rational::to_f64)
        .ok_or_else(|| CliError::Usage(format!("the oracle needs --set {name}=...")))
}

#[derive(Serialize)]
struct EvalRow {
    point: Vec<String>,
    series: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    abserr: Option<f64>,
}

pub fn eval(
    c: &Common,
    vars: &[String],
    function: Option<&str>,
    oracle: Option<OracleKind>,
    precision: PrecisionArg,
) -> Result<Outcome, CliError> {
    let sys = expand(c)?;
    let policy = parse_policy(c.policy.as_deref())?;
    let r = solve_system(&sys, &policy).map_err(stage("solve"))?;
    let bindings = numeric_bindings(&parse_set(&c.set)?, &sys.table)?;
    let func = match function {
        Some(f) => f.to_string(),
        None => sys.problem.unknowns[0].name.clone(),
    };
    let series_vars = sys.problem.series_vars();
    let mut axes: Vec<Option<Vec<Rational>>> = vec![None; series_vars.len()];
    for v in vars {
        let (name, pts) = parse_grid(v)?;
        let i = series_vars
            .iter()
            .position(|s| *s == name)
            .ok_or_else(|| CliError::Usage(format!("--var: `{name}` is not a series variable")))?;
        axes[i] = Some(pts);
    }
    let axes: Vec<Vec<Rational>> = axes
        .into_iter()
        .zip(&series_vars)
        .map(|(a, n)| a.ok_or_else(|| CliError::Usage(format!("missing --var {n}=start:stop:step"))))
        .collect::<Result<_, _>>()?;
    let mut points: Vec<Vec<Rational>> = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |x| {
                    let mut q = p.clone();
                    q.push(x.clone());
                    q
                })
            })
            .collect();
    }
    let grid = EvalGrid {
        bindings,
        points,
        precision: match precision {
            PrecisionArg::Exact => Precision::Exact,
            PrecisionArg::Float => Precision::Float,
        },
    };
    let values = eval_series(&sys, &r, &func, &grid).map_err(stage("eval"))?;
    let report = match oracle {
        None => None,
        Some(kind) => {
            if series_vars.len() != 1 {
                return Err(CliError::Usage("oracles need a single series variable".into()));
            }
            let spec = match kind {
                OracleKind::Tan => {
                    let prefix = &sys.problem.unknown(&func).expect("checked by eval").prefix;
                    let a1 = coefficient_name(prefix, &Exponents(vec![1]));
                    OracleSpec::BurgersTan {
                        a1: binding(&grid.bindings, &sys, &a1)?,
                        nu: binding(&grid.bindings, &sys, "nu")?,
                    }
                }
                OracleKind::Sech => OracleSpec::KdvSech {
                    c: binding(&grid.bindings, &sys, "c")?,
                    k: binding(&grid.bindings, &sys, "k")?,
                },
            };
            Some(compare(&sys, &r, &func, &spec, &grid).map_err(stage("oracle"))?)
        }
    };
    let rows: Vec<EvalRow> = grid
        .points
        .iter()
        .zip(&values)
        .enumerate()
        .map(|(i, (p, v))| EvalRow {
            point: p.iter().map(|x| rational::to_f64(x).to_string()).collect(),
            series: match v {
                pssm_core::verify::Value::Exact(q) => q.to_string(),
                pssm_core::verify::Value::Float(x) => x.to_string(),
            },
            oracle: report.as_ref().map(|r| r.rows[i].oracle),
            abserr: report.as_ref().map(|r| r.rows[i].abserr),
        })
        .collect();
    let text = match c.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut header: Vec<String> = series_vars.clone();
            header.push("series".into());
            if report.is_some() {
                header.push("oracle".into());
                header.push("abserr".into());
            }
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut v = r.point.clone();
                    v.push(r.series.clone());
                    if let (Some(o), Some(e)) = (r.oracle, r.abserr) {
                        v.push(o.to_string());
                        v.push(e.to_string());
                    }
                    v
                })
                .collect();
            csv_text(&header, &body)?
        }
        Format::Json => json(&serde_json::json!({
            "schema": SCHEMA_VERSION,
            "problem": sys.problem.name,
            "function": func,
            "vars": series_vars,
            "rows": rows,
            "max_abs_error": report.as_ref().map(|r| r.max_abs_error),
            "first_omitted_order": report.as_ref().map(|r| r.first_omitted_order),
        })),
        Format::Text => {
            let mut s: String = rows
                .iter()
                .map(|r| format!("{}({}) = {}\n", func, r.point.join(", "), r.series))
                .collect();
            if let Some(rep) = &report {
                s += &format!(
                    "max abs error {:e}; first omitted order {}\n",
                    rep.max_abs_error, rep.first_omitted_order
                );
            }
            s
        }
    };
    Ok(Outcome { text, partial: false })
}

#[derive(Serialize)]
struct SystemOutput {
    schema: u32,
    problem: String,
    params: Vec<String>,
    seeds: Vec<String>,
    unknowns: Vec<String>,
    match_set: Vec<Vec<u32>>,
    equations: Vec<EquationRow>,
    trivial: Vec<(usize, Vec<u32>)>,
    classification: Classification,
}

pub fn export_system(c: &Common) -> Result<Outcome, CliError> {
    let sys = expand(c)?;
    let names = |v: &[Symbol]| v.iter().map(|s| sys.name(*s).to_string()).collect::<Vec<_>>();
    let equations: Vec<EquationRow> = sys
        .equations
        .iter()
        .map(|e| EquationRow {
            equation: e.eq_index,
            monomial: e.monomial.0.clone(),
            poly: e.poly.to_text(&sys.table),
        })
        .collect();
    let text = match c.format.unwrap_or(Format::Json) {
        Format::Json => json(&SystemOutput {
            schema: SCHEMA_VERSION,
            problem: sys.problem.name.clone(),
            params: names(&sys.params),
            seeds: names(&sys.seeds),
            unknowns: names(&sys.unknowns),
            match_set: sys.match_set.iter().map(|m| m.0.clone()).collect(),
            trivial: sys.trivial.iter().map(|(i, m)| (*i, m.0.clone())).collect(),
            classification: classify(&sys),
            equations,
        }),
        Format::Csv => csv_text(
            &["equation".into(), "monomial".into(), "poly".into()],
            &equations
                .iter()
                .map(|e| vec![e.equation.to_string(), monomial_text(&e.monomial), e.poly.clone()])
                .collect::<Vec<_>>(),
        )?,
        Format::Text => equations
            .iter()
            .map(|e| format!("[{} {}] {} = 0\n", e.equation, monomial_text(&e.monomial), e.poly))
            .collect(),
    };
    Ok(Outcome { text, partial: false })
}

#[derive(Serialize)]
struct ListRow {
    name: &'static str,
    vars: Vec<String>,
    params: Vec<String>,
    unknowns: Vec<String>,
    equations: usize,
}

pub fn list(format: Format) -> Result<Outcome, CliError> {
    let rows: Vec<ListRow> = builtin_names()
        .map(|name| {
            let p = builtin(name).map_err(stage("problem"))?;
            Ok(ListRow {
                name,
                vars: p.vars.clone(),
                params: p.params.clone(),
                unknowns: p.unknowns.iter().map(|u| u.name.clone()).collect(),
                equations: p.equations.len(),
            })
        })
        .collect::<Result<_, CliError>>()?;
    let text = match format {
        Format::Json => json(&rows),
        Format::Csv => csv_text(
            &["name".into(), "vars".into(), "params".into(), "unknowns".into(), "equations".into()],
            &rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.to_string(),
                        r.vars.join(" "),
                        r.params.join(" "),
                        r.unknowns.join(" "),
                        r.equations.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        )?,
        Format::Text => rows
            .iter()
            .map(|r| {
                format!(
                    "{:<24} vars {:<6} unknowns {}\n",
                    r.name,
                    r.vars.join(","),
                    r.unknowns.join(",")
                )
            })
            .collect(),
    };
    Ok(Outcome { text, partial: false })
}
