use super::{parse_problem, ModelError, ProblemSpec};

const SOURCES: &[(&str, &str)] = &[
    ("boundary-layer", include_str!("../../problems/boundary-layer.pde")),
    ("burgers-stationary", include_str!("../../problems/burgers-stationary.pde")),
    ("burgers-xt", include_str!("../../problems/burgers-xt.pde")),
    ("kdv", include_str!("../../problems/kdv.pde")),
    ("coupled-kdv", include_str!("../../problems/coupled-kdv.pde")),
    ("burgers-stationary-odd", include_str!("../../problems/burgers-stationary-odd.pde")),
    ("kdv-even", include_str!("../../problems/kdv-even.pde")),
    ("coupled-kdv-full", include_str!("../../problems/coupled-kdv-full.pde")),
    ("coupled-kdv-symmetric", include_str!("../../problems/coupled-kdv-symmetric.pde")),
];

/// Names of all built-in problems; the first five are the primary ones.
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

pub fn builtin_source(name: &str) -> Option<&'static str> {
    SOURCES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn builtin(name: &str) -> Result<ProblemSpec, ModelError> {
    let src = builtin_source(name).ok_or_else(|| ModelError::UnknownBuiltin(name.to_string()))?;
    parse_problem(src)
}
