//! Constraint kinds, their checkers, objectives and solution checking.

mod check;
mod objective;
mod partial;
mod solution;

use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::expr::{EvalError, Expr};
use crate::model::{CondOp, Condition, Domain, Env, Value};

pub use check::*;
pub use objective::{eval_objective, ObjKind, Objective, ObjectiveForm, ObjectiveValue, Sense};
pub use partial::check_partial;
pub use solution::{check_solution, CheckMode, SolutionError, Verdict};

/// An integer constant or a variable reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Int(i64),
    Var(String),
}

impl Term {
    pub fn var(&self) -> Option<&str> {
        match self {
            Term::Var(x) => Some(x),
            Term::Int(_) => None,
        }
    }

    pub fn resolve(&self, env: &dyn Env) -> Result<i64, CheckError> {
        match self {
            Term::Int(v) => Ok(*v),
            Term::Var(x) => value_of(env, x),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(v) => write!(f, "{v}"),
            Term::Var(x) => f.write_str(x),
        }
    }
}

/// Entry of a table tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    Val(i64),
    Star,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Val(v) => write!(f, "{v}"),
            Cell::Star => f.write_str("*"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Table {
    Tuples(Vec<Vec<Cell>>),
    /// Unary form: supports or conflicts written like a domain.
    Unary(Domain),
}

/// Right-hand side of an element constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementRhs {
    Value(Term),
    Cond(Condition),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Matrix {
    Vars(Vec<Vec<String>>),
    Values(Vec<Vec<i64>>),
}

/// One entry of the `occurs` list of a cardinality constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Occurs {
    Int(i64),
    Var(String),
    Interval(i64, i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub from: String,
    pub value: i64,
    pub to: String,
}

/// Semantics of every supported constraint.
#[derive(Debug, Clone, PartialEq)]
pub enum ConstraintKind {
    Intension(Expr),
    Extension {
        scope: Vec<String>,
        table: Table,
        positive: bool,
    },
    Regular {
        list: Vec<String>,
        transitions: Vec<Transition>,
        start: String,
        finals: Vec<String>,
    },
    Mdd {
        list: Vec<String>,
        transitions: Vec<Transition>,
    },
    AllDifferent {
        list: Vec<Expr>,
        except: Vec<i64>,
    },
    AllDifferentLists {
        lists: Vec<Vec<String>>,
        except: Vec<Vec<i64>>,
    },
    AllDifferentMatrix {
        matrix: Vec<Vec<String>>,
        except: Vec<i64>,
    },
    AllEqual {
        list: Vec<Expr>,
    },
    Ordered {
        list: Vec<String>,
        lengths: Option<Vec<Term>>,
        op: CondOp,
    },
    Lex {
        lists: Vec<Vec<String>>,
        op: CondOp,
    },
    Lex2 {
        matrix: Vec<Vec<String>>,
        op: CondOp,
    },
    Sum {
        list: Vec<Expr>,
        coeffs: Option<Vec<Term>>,
        cond: Condition,
    },
    Count {
        list: Vec<Expr>,
        values: Vec<Term>,
        cond: Condition,
    },
    NValues {
        list: Vec<Expr>,
        except: Vec<i64>,
        cond: Condition,
    },
    Cardinality {
        list: Vec<String>,
        values: Vec<Term>,
        closed: bool,
        occurs: Vec<Occurs>,
    },
    Minimum {
        list: Vec<Expr>,
        cond: Condition,
    },
    Maximum {
        list: Vec<Expr>,
        cond: Condition,
    },
    ElementVarList {
        list: Vec<String>,
        index: String,
        rhs: ElementRhs,
    },
    ElementValList {
        list: Vec<i64>,
        index: String,
        rhs: ElementRhs,
    },
    ElementMatrix {
        matrix: Matrix,
        row: String,
        col: String,
        rhs: ElementRhs,
    },
    ChannelOne {
        list: Vec<String>,
    },
    ChannelTwo {
        first: Vec<String>,
        second: Vec<String>,
    },
    ChannelValue {
        list: Vec<String>,
        value: String,
    },
    NoOverlap1 {
        origins: Vec<String>,
        lengths: Vec<Term>,
        zero_ignored: bool,
    },
    NoOverlapK {
        origins: Vec<Vec<String>>,
        lengths: Vec<Vec<Term>>,
        zero_ignored: bool,
    },
    Cumulative {
        origins: Vec<String>,
        lengths: Vec<Term>,
        heights: Vec<Term>,
        cond: Condition,
    },
    Circuit {
        list: Vec<String>,
        start_index: i64,
        size: Option<Term>,
    },
    Instantiation {
        list: Vec<String>,
        values: Vec<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("variable `{0}` is assigned `*`")]
    StarInScope(String),
    #[error("variable `{0}` is not assigned")]
    UnboundVariable(String),
    #[error("{0}")]
    Eval(EvalError),
}

impl From<EvalError> for CheckError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::UnboundVariable(x) => CheckError::UnboundVariable(x),
            EvalError::StarValue(x) => CheckError::StarInScope(x),
            other => CheckError::Eval(other),
        }
    }
}

/// Value of `var`, failing on `*` or absence.
pub fn value_of(env: &dyn Env, var: &str) -> Result<i64, CheckError> {
    match env.lookup(var) {
        Some(Value::Int(v)) => Ok(v),
        Some(Value::Star) => Err(CheckError::StarInScope(var.to_string())),
        None => Err(CheckError::UnboundVariable(var.to_string())),
    }
}

fn push_cond(out: &mut IndexSet<String>, cond: &Condition) {
    if let Some(x) = cond.var() {
        out.insert(x.to_string());
    }
}

fn push_terms<'a>(out: &mut IndexSet<String>, terms: impl IntoIterator<Item = &'a Term>) {
    for t in terms {
        if let Term::Var(x) = t {
            out.insert(x.clone());
        }
    }
}

fn push_vars<'a>(out: &mut IndexSet<String>, vars: impl IntoIterator<Item = &'a String>) {
    for x in vars {
        out.insert(x.clone());
    }
}

fn push_exprs<'a>(out: &mut IndexSet<String>, exprs: impl IntoIterator<Item = &'a Expr>) {
    for e in exprs {
        out.extend(e.free_vars());
    }
}

fn push_rhs(out: &mut IndexSet<String>, rhs: &ElementRhs) {
    match rhs {
        ElementRhs::Value(t) => push_terms(out, [t]),
        ElementRhs::Cond(c) => push_cond(out, c),
    }
}

impl ConstraintKind {
    /// Element name used in XML and reports.
    pub fn name(&self) -> &'static str {
        use ConstraintKind::*;
        match self {
            Intension(_) => "intension",
            Extension { .. } => "extension",
            Regular { .. } => "regular",
            Mdd { .. } => "mdd",
            AllDifferent { .. } | AllDifferentLists { .. } | AllDifferentMatrix { .. } => {
                "allDifferent"
            }
            AllEqual { .. } => "allEqual",
            Ordered { .. } => "ordered",
            Lex { .. } | Lex2 { .. } => "lex",
            Sum { .. } => "sum",
            Count { .. } => "count",
            NValues { .. } => "nValues",
            Cardinality { .. } => "cardinality",
            Minimum { .. } => "minimum",
            Maximum { .. } => "maximum",
            ElementVarList { .. } | ElementValList { .. } | ElementMatrix { .. } => "element",
            ChannelOne { .. } | ChannelTwo { .. } | ChannelValue { .. } => "channel",
            NoOverlap1 { .. } | NoOverlapK { .. } => "noOverlap",
            Cumulative { .. } => "cumulative",
            Circuit { .. } => "circuit",
            Instantiation { .. } => "instantiation",
        }
    }

    /// Distinct variables involved, in first-occurrence order.
    pub fn scope(&self) -> Vec<String> {
        use ConstraintKind::*;
        let mut s = IndexSet::new();
        match self {
            Intension(e) => push_exprs(&mut s, [e]),
            Extension { scope, .. } => push_vars(&mut s, scope),
            Regular { list, .. } | Mdd { list, .. } => push_vars(&mut s, list),
            AllDifferent { list, .. } | AllEqual { list } => push_exprs(&mut s, list),
            AllDifferentLists { lists, .. } | Lex { lists, .. } => {
                push_vars(&mut s, lists.iter().flatten())
            }
            AllDifferentMatrix { matrix, .. } | Lex2 { matrix, .. } => {
                push_vars(&mut s, matrix.iter().flatten())
            }
            Ordered { list, lengths, .. } => {
                push_vars(&mut s, list);
                push_terms(&mut s, lengths.iter().flatten());
            }
            Sum { list, coeffs, cond } => {
                push_exprs(&mut s, list);
                push_terms(&mut s, coeffs.iter().flatten());
                push_cond(&mut s, cond);
            }
            Count { list, values, cond } => {
                push_exprs(&mut s, list);
                push_terms(&mut s, values);
                push_cond(&mut s, cond);
            }
            NValues { list, cond, .. } | Minimum { list, cond } | Maximum { list, cond } => {
                push_exprs(&mut s, list);
                push_cond(&mut s, cond);
            }
            Cardinality {
                list,
                values,
                occurs,
                ..
            } => {
                push_vars(&mut s, list);
                push_terms(&mut s, values);
                for o in occurs {
                    if let Occurs::Var(x) = o {
                        s.insert(x.clone());
                    }
                }
            }
            ElementVarList { list, index, rhs } => {
                push_vars(&mut s, list);
                s.insert(index.clone());
                push_rhs(&mut s, rhs);
            }
            ElementValList { index, rhs, .. } => {
                s.insert(index.clone());
                push_rhs(&mut s, rhs);
            }
            ElementMatrix {
                matrix,
                row,
                col,
                rhs,
            } => {
                if let Matrix::Vars(m) = matrix {
                    push_vars(&mut s, m.iter().flatten());
                }
                s.insert(row.clone());
                s.insert(col.clone());
                push_rhs(&mut s, rhs);
            }
            ChannelOne { list } => push_vars(&mut s, list),
            ChannelTwo { first, second } => {
                push_vars(&mut s, first);
                push_vars(&mut s, second);
            }
            ChannelValue { list, value } => {
                push_vars(&mut s, list);
                s.insert(value.clone());
            }
            NoOverlap1 {
                origins, lengths, ..
            } => {
                push_vars(&mut s, origins);
                push_terms(&mut s, lengths);
            }
            NoOverlapK {
                origins, lengths, ..
            } => {
                push_vars(&mut s, origins.iter().flatten());
                push_terms(&mut s, lengths.iter().flatten());
            }
            Cumulative {
                origins,
                lengths,
                heights,
                cond,
            } => {
                push_vars(&mut s, origins);
                push_terms(&mut s, lengths);
                push_terms(&mut s, heights);
                push_cond(&mut s, cond);
            }
            Circuit { list, size, .. } => {
                push_vars(&mut s, list);
                push_terms(&mut s, size.iter());
            }
            Instantiation { list, .. } => push_vars(&mut s, list),
        }
        s.into_iter().collect()
    }

    /// Checks the constraint against an assignment covering its scope.
    pub fn check(&self, env: &dyn Env) -> Result<bool, CheckError> {
        check::check(self, env)
    }
}
