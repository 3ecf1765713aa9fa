//! Early violation detection on partial assignments.

use crate::expr::Expr;
use crate::model::{CondOp, Env, Value};

use super::check::{lex_chain, tuple_matches};
use super::{Cell, ConstraintKind, Table, Term};

fn known(env: &dyn Env, x: &str) -> Option<i64> {
    match env.lookup(x) {
        Some(Value::Int(v)) => Some(v),
        _ => None,
    }
}

fn known_expr(env: &dyn Env, e: &Expr) -> Option<i64> {
    match e {
        Expr::Var(x) => known(env, x),
        Expr::Int(v) => Some(*v),
        _ => e.eval(env).ok(),
    }
}

fn known_term(env: &dyn Env, t: &Term) -> Option<i64> {
    match t {
        Term::Int(v) => Some(*v),
        Term::Var(x) => known(env, x),
    }
}

fn lex_violated(env: &dyn Env, lists: &[Vec<String>], op: CondOp) -> bool {
    lists.windows(2).any(|w| {
        let a: Option<Vec<i64>> = w[0].iter().map(|x| known(env, x)).collect();
        let b: Option<Vec<i64>> = w[1].iter().map(|x| known(env, x)).collect();
        match (a, b) {
            (Some(a), Some(b)) => !lex_chain(&[a, b], op),
            _ => false,
        }
    })
}

/// Returns false when the constraint is certainly violated by every
/// completion of the assigned variables. Only constraints whose violation
/// is monotone are inspected; everything else reports true.
pub fn check_partial(kind: &ConstraintKind, env: &dyn Env) -> bool {
    use ConstraintKind::*;
    match kind {
        AllDifferent { list, except } => {
            let mut seen = Vec::with_capacity(list.len());
            for e in list {
                if let Some(v) = known_expr(env, e) {
                    if !except.contains(&v) {
                        if seen.contains(&v) {
                            return false;
                        }
                        seen.push(v);
                    }
                }
            }
            true
        }
        AllDifferentMatrix { matrix, except } => {
            let rows = matrix.iter().cloned();
            let cols = super::check::transpose(matrix).into_iter();
            rows.chain(cols).all(|line| {
                let kind = AllDifferent {
                    list: line.into_iter().map(Expr::Var).collect(),
                    except: except.clone(),
                };
                check_partial(&kind, env)
            })
        }
        AllEqual { list } => {
            let mut first = None;
            for e in list {
                if let Some(v) = known_expr(env, e) {
                    match first {
                        None => first = Some(v),
                        Some(f) if f != v => return false,
                        _ => {}
                    }
                }
            }
            true
        }
        Ordered { list, lengths, op } => (0..list.len().saturating_sub(1)).all(|i| {
            let l = match lengths {
                Some(ls) => known_term(env, &ls[i]),
                None => Some(0),
            };
            match (known(env, &list[i]), known(env, &list[i + 1]), l) {
                (Some(a), Some(b), Some(l)) => a.checked_add(l).is_none_or(|s| op.compare(s, b)),
                _ => true,
            }
        }),
        Lex { lists, op } => !lex_violated(env, lists, *op),
        Lex2 { matrix, op } => {
            !lex_violated(env, matrix, *op)
                && !lex_violated(env, &super::check::transpose(matrix), *op)
        }
        Instantiation { list, values } => list
            .iter()
            .zip(values)
            .all(|(x, v)| known(env, x).is_none_or(|a| a == *v)),
        Extension {
            scope,
            table: Table::Tuples(rows),
            positive: true,
        } => {
            let partial: Vec<Option<i64>> = scope.iter().map(|x| known(env, x)).collect();
            if partial.iter().all(Option::is_some) {
                let full: Vec<i64> = partial.iter().flatten().copied().collect();
                return rows.iter().any(|r| tuple_matches(&full, r));
            }
            rows.iter().any(|r| {
                r.iter().zip(&partial).all(|(c, v)| match (c, v) {
                    (Cell::Val(a), Some(b)) => a == b,
                    _ => true,
                })
            })
        }
        Extension {
            scope,
            table: Table::Tuples(rows),
            positive: false,
        } => {
            let partial: Vec<Option<i64>> = scope.iter().map(|x| known(env, x)).collect();
            !rows.iter().any(|r| {
                r.iter().zip(&partial).all(|(c, v)| match (c, v) {
                    (Cell::Star, _) => true,
                    (Cell::Val(a), Some(b)) => a == b,
                    (Cell::Val(_), None) => false,
                })
            })
        }
        _ => true,
    }
}
