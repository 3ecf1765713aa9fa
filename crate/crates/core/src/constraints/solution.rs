use thiserror::Error;

use crate::model::{Instance, Instantiation, Value};

use super::objective::{eval_objective, ObjectiveValue};
use super::CheckError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Useless variables may be left out.
    PartialAllowed,
    /// Every defined variable must appear, possibly as `*` when useless.
    TotalRequired,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Satisfied { cost: Option<ObjectiveValue> },
    /// Labels of the violated constraints.
    Violated(Vec<String>),
    /// Variables that must be assigned but are not.
    Incomplete(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolutionError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is undefined and cannot be assigned")]
    UndefinedVariable(String),
    #[error("value {value} is outside the domain of `{var}`")]
    ValueOutsideDomain { var: String, value: i64 },
    #[error("declared cost {declared} differs from the computed objective value {computed}")]
    CostMismatch { declared: i64, computed: ObjectiveValue },
    #[error("a cost is declared but the instance has no objective")]
    CostWithoutObjective,
    #[error("constraint {label}: {source}")]
    Check { label: String, source: CheckError },
}

/// Verifies `sol` against every constraint of `inst` and, when given, the
/// declared objective value.
pub fn check_solution(
    inst: &Instance,
    sol: &Instantiation,
    mode: CheckMode,
    declared_cost: Option<i64>,
) -> Result<Verdict, SolutionError> {
    for (var, val) in sol.iter() {
        let v = inst
            .variable(var)
            .ok_or_else(|| SolutionError::UnknownVariable(var.to_string()))?;
        let Some(dom) = &v.domain else {
            return Err(SolutionError::UndefinedVariable(var.to_string()));
        };
        if let Value::Int(x) = val {
            if !dom.contains(x) {
                return Err(SolutionError::ValueOutsideDomain {
                    var: var.to_string(),
                    value: x,
                });
            }
        }
    }

    let useful = inst.useful_variables();
    let missing: Vec<String> = inst
        .variables
        .iter()
        .filter(|v| v.is_defined())
        .filter(|v| match sol.get(&v.id) {
            Some(Value::Int(_)) => false,
            Some(Value::Star) => useful.contains(&v.id),
            None => useful.contains(&v.id) || mode == CheckMode::TotalRequired,
        })
        .map(|v| v.id.clone())
        .collect();
    if !missing.is_empty() {
        return Ok(Verdict::Incomplete(missing));
    }

    let mut violated = Vec::new();
    for (pos, c) in inst.constraints.iter().enumerate() {
        let label = inst.constraint_label(pos);
        match c.kind.check(sol) {
            Ok(true) => {}
            Ok(false) => violated.push(label),
            Err(e) if super::check::is_undefined_arithmetic(&e) => violated.push(label),
            Err(source) => return Err(SolutionError::Check { label, source }),
        }
    }
    if !violated.is_empty() {
        return Ok(Verdict::Violated(violated));
    }

    let cost = match &inst.objective {
        Some(obj) => Some(eval_objective(obj, sol).map_err(|source| SolutionError::Check {
            label: obj.id.clone().unwrap_or_else(|| "objective".into()),
            source,
        })?),
        None => None,
    };
    if let Some(declared) = declared_cost {
        match &cost {
            None => return Err(SolutionError::CostWithoutObjective),
            Some(c) if c.as_int() != Some(declared) => {
                return Err(SolutionError::CostMismatch {
                    declared,
                    computed: c.clone(),
                })
            }
            _ => {}
        }
    }
    Ok(Verdict::Satisfied { cost })
}
