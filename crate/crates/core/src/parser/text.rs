//! Lexical helpers for element contents.

use crate::expr::{parse_expr, Expr, ParseError};
use crate::model::{
    expand_vxk, is_identifier, is_variable_id, parse_domain, parse_int, parse_interval, CondOp,
    Condition, Domain, Operand,
};

use super::raw::RawElement;
use super::{Diagnostic, Rule};

pub(crate) fn tokens(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

pub(crate) fn int(elt: &RawElement, tok: &str) -> Result<i64, Diagnostic> {
    parse_int(tok).map_err(|e| Diagnostic::from_model(&elt.path, e))
}

pub(crate) fn is_int(tok: &str) -> bool {
    parse_int(tok).is_ok()
}

/// Integers, with `vxk` repetitions allowed.
pub(crate) fn ints_vxk(elt: &RawElement) -> Result<Vec<i64>, Diagnostic> {
    expand_vxk(&tokens(&elt.text)).map_err(|e| Diagnostic::from_model(&elt.path, e))
}

pub(crate) fn ints(elt: &RawElement) -> Result<Vec<i64>, Diagnostic> {
    tokens(&elt.text).iter().map(|t| int(elt, t)).collect()
}

pub(crate) fn domain(elt: &RawElement) -> Result<Domain, Diagnostic> {
    parse_domain(&elt.text).map_err(|e| Diagnostic::from_model(&elt.path, e))
}

pub(crate) fn boolean(elt: &RawElement, name: &str, default: bool) -> Result<bool, Diagnostic> {
    match elt.attr(name) {
        None => Ok(default),
        Some("true") => Ok(true),
        Some("false") => Ok(false),
        Some(v) => Err(elt.err(
            Rule::AttributeValue,
            format!("attribute `{name}` must be `true` or `false`, found `{v}`"),
        )),
    }
}

pub(crate) fn positive_attr(elt: &RawElement, name: &str) -> Result<usize, Diagnostic> {
    match elt.attr(name) {
        None => Ok(1),
        Some(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 && v.bytes().all(|b| b.is_ascii_digit()) => Ok(n),
            _ => Err(elt.err(
                Rule::AttributeValue,
                format!("attribute `{name}` must be a positive integer, found `{v}`"),
            )),
        },
    }
}

pub(crate) fn expr(elt: &RawElement, text: &str) -> Result<Expr, Diagnostic> {
    parse_expr(text).map_err(|e| match e {
        ParseError::Whitespace { .. } => elt.err(
            Rule::ExpressionWhitespace,
            format!("functional expression `{text}` contains whitespace"),
        ),
        other => elt.err(Rule::Expression, format!("in `{text}`: {other}")),
    })
}

/// Splits `(a,b)(c,d)` into component lists. Whitespace is tolerated
/// between tuples, never inside.
pub(crate) fn tuples(elt: &RawElement) -> Result<Vec<Vec<String>>, Diagnostic> {
    let text = elt.text.as_str();
    let mut out = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(elt.err(
                Rule::Tuple,
                format!("expected `(` at `{}`", excerpt(rest)),
            ));
        }
        let close = rest.find(')').ok_or_else(|| {
            elt.err(Rule::Tuple, format!("unterminated tuple `{}`", excerpt(rest)))
        })?;
        let inner = &rest[1..close];
        if inner.contains(char::is_whitespace) {
            return Err(elt.err(
                Rule::TupleWhitespace,
                format!("whitespace inside tuple `{}`", &rest[..=close]),
            ));
        }
        if inner.contains('(') || inner.is_empty() {
            return Err(elt.err(
                Rule::Tuple,
                format!("malformed tuple `{}`", &rest[..=close]),
            ));
        }
        out.push(inner.split(',').map(str::to_string).collect());
        rest = rest[close + 1..].trim_start();
    }
    Ok(out)
}

fn excerpt(s: &str) -> &str {
    let end = s.char_indices().nth(20).map(|(i, _)| i).unwrap_or(s.len());
    &s[..end]
}

/// Parses `(op,operand)`.
pub(crate) fn condition(elt: &RawElement) -> Result<Condition, Diagnostic> {
    let text = elt.trimmed();
    if text.contains(char::is_whitespace) {
        return Err(elt.err(
            Rule::ConditionWhitespace,
            format!("condition `{text}` contains whitespace"),
        ));
    }
    let bad = || {
        elt.err(
            Rule::Condition,
            format!("malformed condition `{text}`, expected `(operator,operand)`"),
        )
    };
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (op, operand) = inner.split_once(',').ok_or_else(bad)?;
    let op = CondOp::parse(op)
        .ok_or_else(|| elt.err(Rule::Condition, format!("unknown operator `{op}`")))?;
    let operand = parse_operand(operand).ok_or_else(bad)?;
    Condition::new(op, operand).map_err(|e| Diagnostic::from_model(&elt.path, e))
}

fn parse_operand(s: &str) -> Option<Operand> {
    if let Ok(v) = parse_int(s) {
        return Some(Operand::Value(v));
    }
    if s.contains("..") {
        return parse_interval(s).ok().map(|(lo, hi)| Operand::Interval(lo, hi));
    }
    let set_body = s
        .strip_prefix("set(")
        .and_then(|t| t.strip_suffix(')'))
        .or_else(|| s.strip_prefix('{').and_then(|t| t.strip_suffix('}')));
    if let Some(body) = set_body {
        if body.is_empty() {
            return Some(Operand::Set(Vec::new()));
        }
        let vals: Option<Vec<i64>> = body.split(',').map(|t| parse_int(t).ok()).collect();
        return vals.map(Operand::Set);
    }
    if is_variable_id(s) {
        return Some(Operand::Var(s.to_string()));
    }
    None
}

pub(crate) fn operator(elt: &RawElement) -> Result<CondOp, Diagnostic> {
    match CondOp::parse(elt.trimmed()) {
        Some(op @ (CondOp::Lt | CondOp::Le | CondOp::Ge | CondOp::Gt)) => Ok(op),
        _ => Err(elt.err(
            Rule::AttributeValue,
            format!("operator must be lt, le, ge or gt, found `{}`", elt.trimmed()),
        )),
    }
}

pub(crate) fn state(elt: &RawElement, s: &str) -> Result<String, Diagnostic> {
    if is_identifier(s) {
        Ok(s.to_string())
    } else {
        Err(elt.err(Rule::Identifier, format!("`{s}` is not a valid state")))
    }
}
