use std::cmp::Ordering;
use std::fmt;

use indexmap::IndexSet;

use crate::expr::{EvalError, Expr};
use crate::model::Env;

use super::check::{n_values, weighted_sum};
use super::CheckError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    pub fn as_str(&self) -> &'static str {
        match self {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjKind {
    Sum,
    Minimum,
    Maximum,
    NValues,
    Lex,
}

impl ObjKind {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "sum" => ObjKind::Sum,
            "minimum" => ObjKind::Minimum,
            "maximum" => ObjKind::Maximum,
            "nValues" => ObjKind::NValues,
            "lex" => ObjKind::Lex,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ObjKind::Sum => "sum",
            ObjKind::Minimum => "minimum",
            ObjKind::Maximum => "maximum",
            ObjKind::NValues => "nValues",
            ObjKind::Lex => "lex",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveForm {
    Expression(Expr),
    Specialized {
        kind: ObjKind,
        list: Vec<Expr>,
        coeffs: Option<Vec<i64>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub id: Option<String>,
    pub sense: Sense,
    pub form: ObjectiveForm,
}

impl Objective {
    pub fn scope(&self) -> Vec<String> {
        let mut s = IndexSet::new();
        match &self.form {
            ObjectiveForm::Expression(e) => s.extend(e.free_vars()),
            ObjectiveForm::Specialized { list, .. } => {
                for e in list {
                    s.extend(e.free_vars());
                }
            }
        }
        s.into_iter().collect()
    }

    /// Short description such as `maximize sum` or `minimize expression`.
    pub fn describe(&self) -> String {
        let kind = match &self.form {
            ObjectiveForm::Expression(_) => "expression",
            ObjectiveForm::Specialized { kind, .. } => kind.as_str(),
        };
        format!("{} {}", self.sense.as_str(), kind)
    }

    /// True when `candidate` is strictly better than `incumbent`.
    pub fn improves(&self, candidate: &ObjectiveValue, incumbent: &ObjectiveValue) -> bool {
        let ord = candidate.cmp(incumbent);
        match self.sense {
            Sense::Minimize => ord == Ordering::Less,
            Sense::Maximize => ord == Ordering::Greater,
        }
    }
}

/// Objective value: an integer, or a tuple compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ObjectiveValue {
    Int(i64),
    Tuple(Vec<i64>),
}

impl ObjectiveValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            ObjectiveValue::Int(v) => Some(*v),
            ObjectiveValue::Tuple(_) => None,
        }
    }
}

impl fmt::Display for ObjectiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveValue::Int(v) => write!(f, "{v}"),
            ObjectiveValue::Tuple(vs) => {
                f.write_str("(")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Evaluates an objective under a total assignment of its operands.
pub fn eval_objective(obj: &Objective, env: &dyn Env) -> Result<ObjectiveValue, CheckError> {
    match &obj.form {
        ObjectiveForm::Expression(e) => Ok(ObjectiveValue::Int(e.eval(env)?)),
        ObjectiveForm::Specialized { kind, list, coeffs } => {
            let vals = list
                .iter()
                .map(|e| e.eval(env).map_err(CheckError::from))
                .collect::<Result<Vec<i64>, _>>()?;
            let cs = coeffs.clone().unwrap_or_else(|| vec![1; vals.len()]);
            let scaled = vals
                .iter()
                .zip(&cs)
                .map(|(v, c)| v.checked_mul(*c).ok_or(CheckError::Eval(EvalError::Overflow)))
                .collect::<Result<Vec<i64>, _>>()?;
            Ok(match kind {
                ObjKind::Sum => ObjectiveValue::Int(weighted_sum(&vals, &cs)?),
                ObjKind::Minimum => ObjectiveValue::Int(scaled.iter().copied().min().unwrap_or(0)),
                ObjKind::Maximum => ObjectiveValue::Int(scaled.iter().copied().max().unwrap_or(0)),
                ObjKind::NValues => ObjectiveValue::Int(n_values(&scaled, &[])),
                ObjKind::Lex => ObjectiveValue::Tuple(scaled),
            })
        }
    }
}
