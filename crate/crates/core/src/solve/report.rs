use std::collections::BTreeMap;

use serde::Serialize;

use super::SolveResult;
use crate::expand::AlgSystem;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssignmentRow {
    pub symbol: String,
    pub value_text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationRow {
    pub equation: usize,
    pub monomial: Vec<u32>,
    pub poly: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchReport {
    pub assignments: Vec<AssignmentRow>,
    /// Same content keyed by name, for lookups by consumers.
    pub values: BTreeMap<String, String>,
    pub assumptions: Vec<String>,
    pub unresolved: Vec<EquationRow>,
    pub branches: Vec<BranchReport>,
}

/// Serializable form of a `SolveResult`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolveReport {
    pub schema: u32,
    pub problem: String,
    pub params: Vec<String>,
    pub seeds: Vec<String>,
    pub resolved: bool,
    #[serde(flatten)]
    pub result: BranchReport,
}

fn branch(sys: &AlgSystem, r: &SolveResult) -> BranchReport {
    let assignments: Vec<AssignmentRow> = r
        .assignments
        .iter()
        .map(|(s, v)| AssignmentRow {
            symbol: sys.name(*s).to_string(),
            value_text: v.to_text(&sys.table),
        })
        .collect();
    BranchReport {
        values: assignments
            .iter()
            .map(|a| (a.symbol.clone(), a.value_text.clone()))
            .collect(),
        assignments,
        assumptions: r.assumptions.iter().map(|a| a.to_text(&sys.table)).collect(),
        unresolved: r
            .unresolved
            .iter()
            .map(|e| EquationRow {
                equation: e.eq_index,
                monomial: e.monomial.0.clone(),
                poly: e.poly.to_text(&sys.table),
            })
            .collect(),
        branches: r.branches.iter().map(|b| branch(sys, b)).collect(),
    }
}

pub fn solve_report(sys: &AlgSystem, r: &SolveResult) -> SolveReport {
    SolveReport {
        schema: SCHEMA_VERSION,
        problem: sys.problem.name.clone(),
        params: sys.params.iter().map(|s| sys.name(*s).to_string()).collect(),
        seeds: sys.seeds.iter().map(|s| sys.name(*s).to_string()).collect(),
        resolved: r.is_resolved(),
        result: branch(sys, r),
    }
}

impl SolveReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
