//! Satisfaction tests for every constraint kind.
//!
//! The `*_values` style helpers work on already resolved integers; [`check`]
//! resolves a constraint's operands from an environment and dispatches.

use std::collections::HashSet;

use crate::expr::{EvalError, Expr};
use crate::model::{CondOp, Condition, Operand};

use super::{
    value_of, Cell, CheckError, ConstraintKind, ElementRhs, Matrix, Occurs, Table, Term,
    Transition,
};
use crate::model::Env;

/// Tests `lhs op operand`, resolving a variable operand through `env`.
pub fn cond_holds(lhs: i64, cond: &Condition, env: &dyn Env) -> Result<bool, CheckError> {
    Ok(match cond.operand() {
        Operand::Value(k) => cond.op().compare(lhs, *k),
        Operand::Var(x) => cond.op().compare(lhs, value_of(env, x)?),
        Operand::Interval(lo, hi) => (*lo <= lhs && lhs <= *hi) == (cond.op() == CondOp::In),
        Operand::Set(vals) => vals.contains(&lhs) == (cond.op() == CondOp::In),
    })
}

fn vars(env: &dyn Env, list: &[String]) -> Result<Vec<i64>, CheckError> {
    list.iter().map(|x| value_of(env, x)).collect()
}

fn exprs(env: &dyn Env, list: &[Expr]) -> Result<Vec<i64>, CheckError> {
    list.iter().map(|e| e.eval(env).map_err(CheckError::from)).collect()
}

fn terms(env: &dyn Env, list: &[Term]) -> Result<Vec<i64>, CheckError> {
    list.iter().map(|t| t.resolve(env)).collect()
}

fn overflow() -> CheckError {
    CheckError::Eval(EvalError::Overflow)
}

/// Tuple membership for ordinary and short tables.
pub fn tuple_matches(tuple: &[i64], row: &[Cell]) -> bool {
    tuple.len() == row.len()
        && tuple.iter().zip(row).all(|(v, c)| match c {
            Cell::Star => true,
            Cell::Val(w) => v == w,
        })
}

pub fn check_extension_values(tuple: &[i64], table: &Table, positive: bool) -> bool {
    let listed = match table {
        Table::Tuples(rows) => rows.iter().any(|r| tuple_matches(tuple, r)),
        Table::Unary(d) => tuple.len() == 1 && d.contains(tuple[0]),
    };
    listed == positive
}

/// Non-deterministic automaton acceptance.
pub fn regular_accepts(word: &[i64], transitions: &[Transition], start: &str, finals: &[String]) -> bool {
    let mut current: HashSet<&str> = HashSet::from([start]);
    for v in word {
        current = transitions
            .iter()
            .filter(|t| t.value == *v && current.contains(t.from.as_str()))
            .map(|t| t.to.as_str())
            .collect();
        if current.is_empty() {
            return false;
        }
    }
    current.iter().any(|s| finals.iter().any(|f| f == s))
}

/// Root (no incoming arc) and terminal nodes (no outgoing arc) of an MDD.
pub fn mdd_root_and_terminals(transitions: &[Transition]) -> (Vec<&str>, Vec<&str>) {
    let targets: HashSet<&str> = transitions.iter().map(|t| t.to.as_str()).collect();
    let sources: HashSet<&str> = transitions.iter().map(|t| t.from.as_str()).collect();
    let mut roots = Vec::new();
    let mut terminals = Vec::new();
    for t in transitions {
        if !targets.contains(t.from.as_str()) && !roots.contains(&t.from.as_str()) {
            roots.push(t.from.as_str());
        }
        if !sources.contains(t.to.as_str()) && !terminals.contains(&t.to.as_str()) {
            terminals.push(t.to.as_str());
        }
    }
    (roots, terminals)
}

pub fn mdd_accepts(word: &[i64], transitions: &[Transition]) -> bool {
    let (roots, terminals) = mdd_root_and_terminals(transitions);
    let Some(root) = roots.first() else {
        return false;
    };
    let finals: Vec<String> = terminals.iter().map(|s| s.to_string()).collect();
    regular_accepts(word, transitions, root, &finals)
}

pub fn all_different(vals: &[i64], except: &[i64]) -> bool {
    let mut seen = HashSet::with_capacity(vals.len());
    vals.iter()
        .filter(|v| !except.contains(v))
        .all(|v| seen.insert(*v))
}

pub fn all_different_lists(lists: &[Vec<i64>], except: &[Vec<i64>]) -> bool {
    let mut seen = HashSet::with_capacity(lists.len());
    lists
        .iter()
        .filter(|l| !except.contains(l))
        .all(|l| seen.insert(l.clone()))
}

pub fn all_different_matrix(m: &[Vec<i64>], except: &[i64]) -> bool {
    m.iter().all(|row| all_different(row, except))
        && transpose(m).iter().all(|col| all_different(col, except))
}

pub fn all_equal(vals: &[i64]) -> bool {
    vals.windows(2).all(|w| w[0] == w[1])
}

pub fn ordered(vals: &[i64], lengths: &[i64], op: CondOp) -> Result<bool, CheckError> {
    for i in 0..vals.len().saturating_sub(1) {
        let l = lengths.get(i).copied().unwrap_or(0);
        let lhs = vals[i].checked_add(l).ok_or_else(overflow)?;
        if !op.compare(lhs, vals[i + 1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn lex_pair(a: &[i64], b: &[i64], op: CondOp) -> bool {
    let ord = a.cmp(b);
    match op {
        CondOp::Lt => ord.is_lt(),
        CondOp::Le => ord.is_le(),
        CondOp::Gt => ord.is_gt(),
        CondOp::Ge => ord.is_ge(),
        _ => false,
    }
}

pub fn lex_chain(lists: &[Vec<i64>], op: CondOp) -> bool {
    lists.windows(2).all(|w| lex_pair(&w[0], &w[1], op))
}

pub fn lex_matrix(m: &[Vec<i64>], op: CondOp) -> bool {
    lex_chain(m, op) && lex_chain(&transpose(m), op)
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn weighted_sum(vals: &[i64], coeffs: &[i64]) -> Result<i64, CheckError> {
    vals.iter().zip(coeffs).try_fold(0i64, |acc, (v, c)| {
        v.checked_mul(*c)
            .and_then(|p| acc.checked_add(p))
            .ok_or_else(overflow)
    })
}

pub fn count_in(vals: &[i64], values: &[i64]) -> i64 {
    vals.iter().filter(|v| values.contains(v)).count() as i64
}

pub fn n_values(vals: &[i64], except: &[i64]) -> i64 {
    vals.iter()
        .filter(|v| !except.contains(v))
        .collect::<HashSet<_>>()
        .len() as i64
}

/// Resolved `occurs` entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OccursBound {
    Exactly(i64),
    Between(i64, i64),
}

pub fn cardinality(vals: &[i64], values: &[i64], closed: bool, occurs: &[OccursBound]) -> bool {
    if closed && vals.iter().any(|v| !values.contains(v)) {
        return false;
    }
    values.iter().zip(occurs).all(|(v, o)| {
        let n = vals.iter().filter(|x| *x == v).count() as i64;
        match *o {
            OccursBound::Exactly(k) => n == k,
            OccursBound::Between(lo, hi) => lo <= n && n <= hi,
        }
    })
}

/// `x[v] = i` style one-list channel.
pub fn channel_one(vals: &[i64]) -> bool {
    let n = vals.len() as i64;
    vals.iter().enumerate().all(|(i, &j)| {
        (0..n).contains(&j) && vals[j as usize] == i as i64
    })
}

pub fn channel_two(xs: &[i64], ys: &[i64]) -> bool {
    let forward = xs.iter().enumerate().all(|(i, &j)| {
        (0..ys.len() as i64).contains(&j) && ys[j as usize] == i as i64
    });
    if xs.len() < ys.len() {
        return forward;
    }
    forward
        && ys.iter().enumerate().all(|(j, &i)| {
            (0..xs.len() as i64).contains(&i) && xs[i as usize] == j as i64
        })
}

pub fn channel_value(xs: &[i64], v: i64) -> bool {
    xs.iter().any(|x| *x == 1)
        && xs
            .iter()
            .enumerate()
            .all(|(i, x)| (*x == 1) == (v == i as i64))
}

fn disjoint(a: i64, la: i64, b: i64, lb: i64) -> Result<bool, CheckError> {
    let ea = a.checked_add(la).ok_or_else(overflow)?;
    let eb = b.checked_add(lb).ok_or_else(overflow)?;
    Ok(ea <= b || eb <= a)
}

pub fn no_overlap_1(origins: &[i64], lengths: &[i64], zero_ignored: bool) -> Result<bool, CheckError> {
    let n = origins.len();
    for i in 0..n {
        for j in i + 1..n {
            if zero_ignored && (lengths[i] == 0 || lengths[j] == 0) {
                continue;
            }
            if !disjoint(origins[i], lengths[i], origins[j], lengths[j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn no_overlap_k(
    origins: &[Vec<i64>],
    lengths: &[Vec<i64>],
    zero_ignored: bool,
) -> Result<bool, CheckError> {
    let n = origins.len();
    let ignored = |i: usize| zero_ignored && lengths[i].contains(&0);
    for i in 0..n {
        for j in i + 1..n {
            if ignored(i) || ignored(j) {
                continue;
            }
            let mut separated = false;
            for k in 0..origins[i].len() {
                if disjoint(origins[i][k], lengths[i][k], origins[j][k], lengths[j][k])? {
                    separated = true;
                    break;
                }
            }
            if !separated {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Load at every time point covered by some task must satisfy `test`.
pub fn cumulative<F>(origins: &[i64], lengths: &[i64], heights: &[i64], mut test: F) -> Result<bool, CheckError>
where
    F: FnMut(i64) -> Result<bool, CheckError>,
{
    let mut ends = Vec::with_capacity(origins.len());
    for (o, l) in origins.iter().zip(lengths) {
        ends.push(o.checked_add(*l).ok_or_else(overflow)?);
    }
    // load is constant between consecutive event points
    let mut points: Vec<i64> = origins.iter().chain(ends.iter()).copied().collect();
    points.sort_unstable();
    points.dedup();
    for t in points {
        let mut covered = false;
        let mut load = 0i64;
        for i in 0..origins.len() {
            if origins[i] <= t && t < ends[i] {
                covered = true;
                load = load.checked_add(heights[i]).ok_or_else(overflow)?;
            }
        }
        if covered && !test(load)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Successor-list circuit test. Nodes are numbered from `start`; nodes off
/// the circuit must point to themselves.
pub fn circuit(succ: &[i64], start: i64, size: Option<i64>) -> bool {
    let n = succ.len();
    let mut next = Vec::with_capacity(n);
    for &s in succ {
        let idx = s - start;
        if idx < 0 || idx >= n as i64 {
            return false;
        }
        next.push(idx as usize);
    }
    let on: Vec<usize> = (0..n).filter(|&i| next[i] != i).collect();
    if on.len() < 2 {
        return false;
    }
    let mut visited = vec![false; n];
    let mut cur = on[0];
    for _ in 0..on.len() {
        if visited[cur] || next[cur] == cur {
            return false;
        }
        visited[cur] = true;
        cur = next[cur];
    }
    if cur != on[0] || on.iter().any(|&i| !visited[i]) {
        return false;
    }
    size.is_none_or(|z| z == on.len() as i64)
}

fn occurs_bounds(env: &dyn Env, occurs: &[Occurs]) -> Result<Vec<OccursBound>, CheckError> {
    occurs
        .iter()
        .map(|o| {
            Ok(match o {
                Occurs::Int(k) => OccursBound::Exactly(*k),
                Occurs::Var(x) => OccursBound::Exactly(value_of(env, x)?),
                Occurs::Interval(lo, hi) => OccursBound::Between(*lo, *hi),
            })
        })
        .collect()
}

fn element_rhs(picked: Option<i64>, rhs: &ElementRhs, env: &dyn Env) -> Result<bool, CheckError> {
    // resolve the right side first so that unbound variables are reported
    match rhs {
        ElementRhs::Value(t) => {
            let v = t.resolve(env)?;
            Ok(picked == Some(v))
        }
        ElementRhs::Cond(c) => {
            if let Some(x) = c.var() {
                value_of(env, x)?;
            }
            match picked {
                Some(p) => cond_holds(p, c, env),
                None => Ok(false),
            }
        }
    }
}

fn pick<T: Copy>(list: &[T], i: i64) -> Option<T> {
    usize::try_from(i).ok().and_then(|i| list.get(i).copied())
}

/// Arithmetic errors that make an expression undefined rather than
/// signalling a bug in the instance or the assignment.
pub fn is_undefined_arithmetic(e: &CheckError) -> bool {
    matches!(
        e,
        CheckError::Eval(EvalError::DivisionByZero | EvalError::NegativeExponent)
    )
}

/// Checks `kind` against `env`, which must assign every scope variable.
pub fn check(kind: &ConstraintKind, env: &dyn Env) -> Result<bool, CheckError> {
    use ConstraintKind::*;
    match kind {
        Intension(e) => Ok(e.eval(env)? != 0),
        Extension {
            scope,
            table,
            positive,
        } => Ok(check_extension_values(&vars(env, scope)?, table, *positive)),
        Regular {
            list,
            transitions,
            start,
            finals,
        } => Ok(regular_accepts(&vars(env, list)?, transitions, start, finals)),
        Mdd { list, transitions } => Ok(mdd_accepts(&vars(env, list)?, transitions)),
        AllDifferent { list, except } => Ok(all_different(&exprs(env, list)?, except)),
        AllDifferentLists { lists, except } => {
            let vals = lists
                .iter()
                .map(|l| vars(env, l))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(all_different_lists(&vals, except))
        }
        AllDifferentMatrix { matrix, except } => {
            let vals = matrix
                .iter()
                .map(|l| vars(env, l))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(all_different_matrix(&vals, except))
        }
        AllEqual { list } => Ok(all_equal(&exprs(env, list)?)),
        Ordered { list, lengths, op } => {
            let vals = vars(env, list)?;
            let lens = match lengths {
                Some(ls) => terms(env, ls)?,
                None => Vec::new(),
            };
            ordered(&vals, &lens, *op)
        }
        Lex { lists, op } => {
            let vals = lists
                .iter()
                .map(|l| vars(env, l))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(lex_chain(&vals, *op))
        }
        Lex2 { matrix, op } => {
            let vals = matrix
                .iter()
                .map(|l| vars(env, l))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(lex_matrix(&vals, *op))
        }
        Sum { list, coeffs, cond } => {
            let vals = exprs(env, list)?;
            let cs = match coeffs {
                Some(cs) => terms(env, cs)?,
                None => vec![1; vals.len()],
            };
            cond_holds(weighted_sum(&vals, &cs)?, cond, env)
        }
        Count { list, values, cond } => {
            let vals = exprs(env, list)?;
            let vs = terms(env, values)?;
            cond_holds(count_in(&vals, &vs), cond, env)
        }
        NValues { list, except, cond } => cond_holds(n_values(&exprs(env, list)?, except), cond, env),
        Cardinality {
            list,
            values,
            closed,
            occurs,
        } => {
            let vals = vars(env, list)?;
            let vs = terms(env, values)?;
            let os = occurs_bounds(env, occurs)?;
            Ok(cardinality(&vals, &vs, *closed, &os))
        }
        Minimum { list, cond } => {
            let vals = exprs(env, list)?;
            match vals.iter().min() {
                Some(m) => cond_holds(*m, cond, env),
                None => Ok(false),
            }
        }
        Maximum { list, cond } => {
            let vals = exprs(env, list)?;
            match vals.iter().max() {
                Some(m) => cond_holds(*m, cond, env),
                None => Ok(false),
            }
        }
        ElementVarList { list, index, rhs } => {
            let vals = vars(env, list)?;
            let i = value_of(env, index)?;
            element_rhs(pick(&vals, i), rhs, env)
        }
        ElementValList { list, index, rhs } => {
            let i = value_of(env, index)?;
            element_rhs(pick(list, i), rhs, env)
        }
        ElementMatrix {
            matrix,
            row,
            col,
            rhs,
        } => {
            let i = value_of(env, row)?;
            let j = value_of(env, col)?;
            let picked = match matrix {
                Matrix::Vars(m) => {
                    let vals = m
                        .iter()
                        .map(|l| vars(env, l))
                        .collect::<Result<Vec<_>, _>>()?;
                    pick(&(0..vals.len()).collect::<Vec<_>>(), i).and_then(|r| pick(&vals[r], j))
                }
                Matrix::Values(m) => {
                    pick(&(0..m.len()).collect::<Vec<_>>(), i).and_then(|r| pick(&m[r], j))
                }
            };
            element_rhs(picked, rhs, env)
        }
        ChannelOne { list } => Ok(channel_one(&vars(env, list)?)),
        ChannelTwo { first, second } => Ok(channel_two(&vars(env, first)?, &vars(env, second)?)),
        ChannelValue { list, value } => {
            Ok(channel_value(&vars(env, list)?, value_of(env, value)?))
        }
        NoOverlap1 {
            origins,
            lengths,
            zero_ignored,
        } => no_overlap_1(&vars(env, origins)?, &terms(env, lengths)?, *zero_ignored),
        NoOverlapK {
            origins,
            lengths,
            zero_ignored,
        } => {
            let os = origins
                .iter()
                .map(|l| vars(env, l))
                .collect::<Result<Vec<_>, _>>()?;
            let ls = lengths
                .iter()
                .map(|l| terms(env, l))
                .collect::<Result<Vec<_>, _>>()?;
            no_overlap_k(&os, &ls, *zero_ignored)
        }
        Cumulative {
            origins,
            lengths,
            heights,
            cond,
        } => {
            let os = vars(env, origins)?;
            let ls = terms(env, lengths)?;
            let hs = terms(env, heights)?;
            if let Some(x) = cond.var() {
                value_of(env, x)?;
            }
            cumulative(&os, &ls, &hs, |load| cond_holds(load, cond, env))
        }
        Circuit {
            list,
            start_index,
            size,
        } => {
            let vals = vars(env, list)?;
            let z = match size {
                Some(t) => Some(t.resolve(env)?),
                None => None,
            };
            Ok(circuit(&vals, *start_index, z))
        }
        Instantiation { list, values } => {
            let vals = vars(env, list)?;
            Ok(vals == *values)
        }
    }
}
