//! Builds constraint kinds from constraint elements.

use std::collections::HashMap;

use crate::constraints::{
    Cell, ConstraintKind, ElementRhs, Matrix, Occurs, Table, Term, Transition,
};
use crate::expr::Expr;
use crate::model::{
    expand_compact_variable_list, parse_int, parse_interval, split_reference, Expanded,
    ListContext, VarArray, Variable,
};

use super::raw::RawElement;
use super::text::{self, tokens};
use super::{Diagnostic, Rule};

pub(crate) const CORE_CONSTRAINTS: &[&str] = &[
    "intension",
    "extension",
    "regular",
    "mdd",
    "allDifferent",
    "allEqual",
    "ordered",
    "lex",
    "sum",
    "count",
    "nValues",
    "cardinality",
    "minimum",
    "maximum",
    "element",
    "channel",
    "noOverlap",
    "cumulative",
    "circuit",
    "instantiation",
];

/// Attributes whose semantics fall outside the core.
pub(crate) const UNSUPPORTED_ATTRS: &[&str] = &[
    "reifiedBy",
    "hreifiedFrom",
    "hreifiedTo",
    "type",
    "violationCost",
    "defaultCost",
    "violationMeasure",
    "restriction",
];

/// Name resolution against the declared variables.
pub(crate) struct Scope<'a> {
    pub variables: &'a [Variable],
    pub arrays: &'a [VarArray],
    index: HashMap<&'a str, usize>,
}

impl<'a> Scope<'a> {
    pub fn new(variables: &'a [Variable], arrays: &'a [VarArray]) -> Self {
        let index = variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect();
        Scope {
            variables,
            arrays,
            index,
        }
    }

    pub fn variable(&self, id: &str) -> Option<&Variable> {
        self.index.get(id).map(|&i| &self.variables[i])
    }

    /// Expands one list token: a variable id or a compact array reference.
    /// Undefined cells are left out of compact expansions.
    pub fn vars_of_token(&self, elt: &RawElement, tok: &str) -> Result<Vec<String>, Diagnostic> {
        if self.index.contains_key(tok) {
            return Ok(vec![tok.to_string()]);
        }
        let unknown = || elt.err(Rule::UnknownVariable, format!("unknown variable `{tok}`"));
        let (base, slots) = split_reference(tok).ok_or_else(unknown)?;
        if slots.is_empty() || !self.arrays.iter().any(|a| a.id == base) {
            return Err(unknown());
        }
        let expanded = expand_compact_variable_list(tok, self.arrays, ListContext::List)
            .map_err(|e| Diagnostic::from_model(&elt.path, e))?;
        let Expanded::List(ids) = expanded else {
            unreachable!("list context yields a list")
        };
        Ok(ids
            .into_iter()
            .filter(|id| self.variable(id).is_some_and(Variable::is_defined))
            .collect())
    }

    pub fn var_tokens(&self, elt: &RawElement, toks: &[&str]) -> Result<Vec<String>, Diagnostic> {
        let mut out = Vec::new();
        for t in toks {
            out.extend(self.vars_of_token(elt, t)?);
        }
        Ok(out)
    }

    pub fn var_list(&self, elt: &RawElement) -> Result<Vec<String>, Diagnostic> {
        self.var_tokens(elt, &tokens(&elt.text))
    }

    pub fn single_var(&self, elt: &RawElement) -> Result<String, Diagnostic> {
        let vs = self.var_list(elt)?;
        match <[String; 1]>::try_from(vs) {
            Ok([v]) => Ok(v),
            Err(_) => Err(elt.err(Rule::Syntax, "exactly one variable expected")),
        }
    }

    /// Variables, integers and functional expressions.
    pub fn expr_list(&self, elt: &RawElement) -> Result<Vec<Expr>, Diagnostic> {
        let mut out = Vec::new();
        for tok in tokens(&elt.text) {
            if tok.contains('(') {
                out.push(text::expr(elt, tok)?);
            } else if let Ok(v) = parse_int(tok) {
                out.push(Expr::Int(v));
            } else {
                out.extend(self.vars_of_token(elt, tok)?.into_iter().map(Expr::Var));
            }
        }
        Ok(out)
    }

    fn term_of(&self, elt: &RawElement, tok: &str) -> Result<Vec<Term>, Diagnostic> {
        if tok.contains('x') && tok.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+') {
            let vals = crate::model::expand_vxk(&[tok])
                .map_err(|e| Diagnostic::from_model(&elt.path, e))?;
            return Ok(vals.into_iter().map(Term::Int).collect());
        }
        if let Ok(v) = parse_int(tok) {
            return Ok(vec![Term::Int(v)]);
        }
        Ok(self
            .vars_of_token(elt, tok)?
            .into_iter()
            .map(Term::Var)
            .collect())
    }

    /// Integers (with `vxk`) or variables.
    pub fn term_list(&self, elt: &RawElement) -> Result<Vec<Term>, Diagnostic> {
        let mut out = Vec::new();
        for tok in tokens(&elt.text) {
            out.extend(self.term_of(elt, tok)?);
        }
        Ok(out)
    }

    pub fn term(&self, elt: &RawElement) -> Result<Term, Diagnostic> {
        let ts = self.term_list(elt)?;
        match <[Term; 1]>::try_from(ts) {
            Ok([t]) => Ok(t),
            Err(_) => Err(elt.err(Rule::Syntax, "exactly one value or variable expected")),
        }
    }

    /// Rows of a matrix written as tuples or as a compact `x[][]` reference.
    pub fn raw_matrix(&self, elt: &RawElement) -> Result<Vec<Vec<String>>, Diagnostic> {
        let t = elt.trimmed();
        if t.starts_with('(') {
            let rows = text::tuples(elt)?;
            return Ok(rows);
        }
        let toks = tokens(t);
        if toks.len() != 1 {
            return Err(elt.err(
                Rule::Syntax,
                "a matrix is a sequence of tuples or a single compact reference",
            ));
        }
        match expand_compact_variable_list(toks[0], self.arrays, ListContext::Matrix)
            .map_err(|e| Diagnostic::from_model(&elt.path, e))?
        {
            Expanded::Rows(rows) => Ok(rows),
            Expanded::List(_) => unreachable!("matrix context yields rows"),
        }
    }

    pub fn var_matrix(&self, elt: &RawElement) -> Result<Vec<Vec<String>>, Diagnostic> {
        let rows = self.raw_matrix(elt)?;
        for row in &rows {
            for v in row {
                if self.variable(v).is_none() {
                    return Err(elt.err(Rule::UnknownVariable, format!("unknown variable `{v}`")));
                }
            }
        }
        check_rectangular(elt, &rows)?;
        Ok(rows)
    }
}

fn check_rectangular<T>(elt: &RawElement, rows: &[Vec<T>]) -> Result<(), Diagnostic> {
    if rows.len() < 2 || rows.iter().any(|r| r.len() != rows[0].len() || r.len() < 2) {
        return Err(elt.err(
            Rule::LengthMismatch,
            "a matrix needs at least two rows of equal length, each with at least two entries",
        ));
    }
    Ok(())
}

/// Rejects child elements other than `allowed`.
fn only(elt: &RawElement, allowed: &[&str]) -> Result<(), Diagnostic> {
    for c in &elt.children {
        if !allowed.contains(&c.tag.as_str()) {
            return Err(c.err(
                Rule::UnexpectedElement,
                format!("`{}` is not allowed inside `{}`", c.tag, elt.tag),
            ));
        }
    }
    Ok(())
}

fn need<'e>(elt: &'e RawElement, tag: &str) -> Result<&'e RawElement, Diagnostic> {
    let mut it = elt.children.iter().filter(|c| c.tag == tag);
    let first = it.next().ok_or_else(|| {
        elt.err(
            Rule::MissingElement,
            format!("`{}` requires a `{tag}` element", elt.tag),
        )
    })?;
    if let Some(dup) = it.next() {
        return Err(dup.err(Rule::UnexpectedElement, format!("duplicate `{tag}` element")));
    }
    Ok(first)
}

fn opt<'e>(elt: &'e RawElement, tag: &str) -> Result<Option<&'e RawElement>, Diagnostic> {
    if elt.child(tag).is_some() {
        need(elt, tag).map(Some)
    } else {
        Ok(None)
    }
}

fn no_start_index(elt: &RawElement) -> Result<(), Diagnostic> {
    for attr in ["startIndex", "startRowIndex", "startColIndex"] {
        if let Some(v) = elt.attr(attr) {
            if v != "0" {
                return Err(elt.err(
                    Rule::StartIndex,
                    format!("attribute `{attr}` must be 0, found `{v}`"),
                ));
            }
        }
    }
    Ok(())
}

fn same_len(elt: &RawElement, what: &str, a: usize, b: usize) -> Result<(), Diagnostic> {
    if a != b {
        return Err(elt.err(
            Rule::LengthMismatch,
            format!("{what}: expected {a} entries, found {b}"),
        ));
    }
    Ok(())
}

fn at_least(elt: &RawElement, what: &str, n: usize, min: usize) -> Result<(), Diagnostic> {
    if n < min {
        return Err(elt.err(
            Rule::LengthMismatch,
            format!("{what} needs at least {min} entries, found {n}"),
        ));
    }
    Ok(())
}

/// `list` child or, when there are no children, the element's own text.
fn main_list<'e>(elt: &'e RawElement) -> Result<&'e RawElement, Diagnostic> {
    if elt.children.is_empty() {
        Ok(elt)
    } else {
        need(elt, "list")
    }
}

fn cell(elt: &RawElement, tok: &str) -> Result<Cell, Diagnostic> {
    if tok == "*" {
        Ok(Cell::Star)
    } else {
        text::int(elt, tok).map(Cell::Val)
    }
}

fn transitions(elt: &RawElement) -> Result<Vec<Transition>, Diagnostic> {
    text::tuples(elt)?
        .into_iter()
        .map(|t| {
            if t.len() != 3 {
                return Err(elt.err(Rule::Tuple, "a transition is `(state,value,state)`"));
            }
            Ok(Transition {
                from: text::state(elt, &t[0])?,
                value: text::int(elt, &t[1])?,
                to: text::state(elt, &t[2])?,
            })
        })
        .collect()
}

fn element_rhs(scope: &Scope<'_>, elt: &RawElement) -> Result<ElementRhs, Diagnostic> {
    match (elt.child("value"), elt.child("condition")) {
        (Some(v), None) => Ok(ElementRhs::Value(scope.term(v)?)),
        (None, Some(c)) => Ok(ElementRhs::Cond(text::condition(c)?)),
        _ => Err(elt.err(
            Rule::MissingElement,
            "`element` requires exactly one of `value` or `condition`",
        )),
    }
}

/// Builds the constraint described by `elt`.
pub(crate) fn build(scope: &Scope<'_>, elt: &RawElement) -> Result<ConstraintKind, Diagnostic> {
    use ConstraintKind as K;
    let kind = match elt.tag.as_str() {
        "intension" => {
            only(elt, &["function"])?;
            let src = match elt.child("function") {
                Some(f) => {
                    if !elt.trimmed().is_empty() {
                        return Err(elt.err(Rule::Syntax, "text outside `function`"));
                    }
                    need(elt, "function")?;
                    f
                }
                None => elt,
            };
            K::Intension(text::expr(src, src.trimmed())?)
        }
        "extension" => {
            only(elt, &["list", "supports", "conflicts"])?;
            let scope_vars = scope.var_list(need(elt, "list")?)?;
            let (table_elt, positive) = match (elt.child("supports"), elt.child("conflicts")) {
                (Some(s), None) => (need(elt, "supports").map(|_| s)?, true),
                (None, Some(c)) => (need(elt, "conflicts").map(|_| c)?, false),
                _ => {
                    return Err(elt.err(
                        Rule::MissingElement,
                        "`extension` requires exactly one of `supports` or `conflicts`",
                    ))
                }
            };
            let table = if scope_vars.len() == 1 {
                Table::Unary(text::domain(table_elt)?)
            } else {
                let rows = text::tuples(table_elt)?
                    .into_iter()
                    .map(|t| {
                        if t.len() != scope_vars.len() {
                            return Err(table_elt.err(
                                Rule::ArityMismatch,
                                format!(
                                    "tuple of arity {} for a scope of {} variables",
                                    t.len(),
                                    scope_vars.len()
                                ),
                            ));
                        }
                        t.iter().map(|c| cell(table_elt, c)).collect()
                    })
                    .collect::<Result<Vec<Vec<Cell>>, _>>()?;
                let ordinary: Vec<&Vec<Cell>> =
                    rows.iter().filter(|r| !r.contains(&Cell::Star)).collect();
                if ordinary.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(table_elt.err(
                        Rule::TableOrder,
                        "ordinary tuples must be listed in strictly increasing lexicographic order",
                    ));
                }
                Table::Tuples(rows)
            };
            if scope_vars.is_empty() {
                return Err(elt.err(Rule::LengthMismatch, "empty scope"));
            }
            K::Extension {
                scope: scope_vars,
                table,
                positive,
            }
        }
        "regular" => {
            only(elt, &["list", "transitions", "start", "final"])?;
            let list = scope.var_list(need(elt, "list")?)?;
            let start_elt = need(elt, "start")?;
            let finals_elt = need(elt, "final")?;
            K::Regular {
                list,
                transitions: transitions(need(elt, "transitions")?)?,
                start: text::state(start_elt, start_elt.trimmed())?,
                finals: tokens(&finals_elt.text)
                    .into_iter()
                    .map(|s| text::state(finals_elt, s))
                    .collect::<Result<_, _>>()?,
            }
        }
        "mdd" => {
            only(elt, &["list", "transitions"])?;
            K::Mdd {
                list: scope.var_list(need(elt, "list")?)?,
                transitions: transitions(need(elt, "transitions")?)?,
            }
        }
        "allDifferent" => {
            only(elt, &["list", "matrix", "except"])?;
            let lists: Vec<&RawElement> = elt.children_named("list").collect();
            if let Some(m) = elt.child("matrix") {
                if !lists.is_empty() {
                    return Err(elt.err(Rule::Syntax, "`matrix` cannot be combined with `list`"));
                }
                let except = match opt(elt, "except")? {
                    Some(e) => text::ints(e)?,
                    None => Vec::new(),
                };
                K::AllDifferentMatrix {
                    matrix: scope.var_matrix(m)?,
                    except,
                }
            } else if lists.len() >= 2 {
                let lists = lists
                    .iter()
                    .map(|l| scope.var_list(l))
                    .collect::<Result<Vec<_>, _>>()?;
                for l in &lists[1..] {
                    same_len(elt, "lists", lists[0].len(), l.len())?;
                }
                let except = match opt(elt, "except")? {
                    Some(e) => text::tuples(e)?
                        .into_iter()
                        .map(|t| {
                            same_len(e, "except tuple", lists[0].len(), t.len())?;
                            t.iter().map(|v| text::int(e, v)).collect()
                        })
                        .collect::<Result<_, _>>()?,
                    None => Vec::new(),
                };
                K::AllDifferentLists { lists, except }
            } else {
                let list = scope.expr_list(main_list(elt)?)?;
                let except = match opt(elt, "except")? {
                    Some(e) => text::ints(e)?,
                    None => Vec::new(),
                };
                K::AllDifferent { list, except }
            }
        }
        "allEqual" => {
            only(elt, &["list"])?;
            K::AllEqual {
                list: scope.expr_list(main_list(elt)?)?,
            }
        }
        "ordered" => {
            only(elt, &["list", "lengths", "operator"])?;
            let list = scope.var_list(need(elt, "list")?)?;
            let lengths = match opt(elt, "lengths")? {
                Some(l) => {
                    let ls = scope.term_list(l)?;
                    same_len(l, "lengths", list.len().saturating_sub(1), ls.len())?;
                    Some(ls)
                }
                None => None,
            };
            K::Ordered {
                list,
                lengths,
                op: text::operator(need(elt, "operator")?)?,
            }
        }
        "lex" => {
            only(elt, &["list", "matrix", "operator"])?;
            let op = text::operator(need(elt, "operator")?)?;
            if let Some(m) = opt(elt, "matrix")? {
                if elt.child("list").is_some() {
                    return Err(elt.err(Rule::Syntax, "`matrix` cannot be combined with `list`"));
                }
                K::Lex2 {
                    matrix: scope.var_matrix(m)?,
                    op,
                }
            } else {
                let lists = elt
                    .children_named("list")
                    .map(|l| scope.var_list(l))
                    .collect::<Result<Vec<_>, _>>()?;
                at_least(elt, "`lex`", lists.len(), 2)?;
                for l in &lists[1..] {
                    same_len(elt, "lists", lists[0].len(), l.len())?;
                }
                K::Lex { lists, op }
            }
        }
        "sum" => {
            only(elt, &["list", "coeffs", "condition"])?;
            let list = scope.expr_list(need(elt, "list")?)?;
            let coeffs = match opt(elt, "coeffs")? {
                Some(c) => {
                    let cs = scope.term_list(c)?;
                    same_len(c, "coeffs", list.len(), cs.len())?;
                    Some(cs)
                }
                None => None,
            };
            K::Sum {
                list,
                coeffs,
                cond: text::condition(need(elt, "condition")?)?,
            }
        }
        "count" => {
            only(elt, &["list", "values", "condition"])?;
            K::Count {
                list: scope.expr_list(need(elt, "list")?)?,
                values: scope.term_list(need(elt, "values")?)?,
                cond: text::condition(need(elt, "condition")?)?,
            }
        }
        "nValues" => {
            only(elt, &["list", "except", "condition"])?;
            let except = match opt(elt, "except")? {
                Some(e) => text::ints(e)?,
                None => Vec::new(),
            };
            K::NValues {
                list: scope.expr_list(need(elt, "list")?)?,
                except,
                cond: text::condition(need(elt, "condition")?)?,
            }
        }
        "cardinality" => {
            only(elt, &["list", "values", "occurs"])?;
            let values_elt = need(elt, "values")?;
            let values = scope.term_list(values_elt)?;
            let occurs_elt = need(elt, "occurs")?;
            let occurs = tokens(&occurs_elt.text)
                .into_iter()
                .map(|tok| {
                    if tok.contains("..") {
                        parse_interval(tok)
                            .map(|(lo, hi)| Occurs::Interval(lo, hi))
                            .map_err(|e| Diagnostic::from_model(&occurs_elt.path, e))
                    } else if let Ok(v) = parse_int(tok) {
                        Ok(Occurs::Int(v))
                    } else {
                        scope.single_var_token(occurs_elt, tok).map(Occurs::Var)
                    }
                })
                .collect::<Result<Vec<_>, _>>()?;
            same_len(occurs_elt, "occurs", values.len(), occurs.len())?;
            K::Cardinality {
                list: scope.var_list(need(elt, "list")?)?,
                values,
                closed: text::boolean(values_elt, "closed", false)?,
                occurs,
            }
        }
        "minimum" | "maximum" => {
            only(elt, &["list", "condition"])?;
            let list_elt = need(elt, "list")?;
            no_start_index(list_elt)?;
            let list = scope.expr_list(list_elt)?;
            let cond = text::condition(need(elt, "condition")?)?;
            if elt.tag == "minimum" {
                K::Minimum { list, cond }
            } else {
                K::Maximum { list, cond }
            }
        }
        "element" => {
            only(elt, &["list", "matrix", "index", "value", "condition"])?;
            let index_elt = need(elt, "index")?;
            if index_elt.attr("rank").is_some() {
                return Err(index_elt.err(Rule::Unsupported, "attribute `rank` is not supported"));
            }
            let rhs = element_rhs(scope, elt)?;
            if let Some(m) = opt(elt, "matrix")? {
                if elt.child("list").is_some() {
                    return Err(elt.err(Rule::Syntax, "`matrix` cannot be combined with `list`"));
                }
                no_start_index(m)?;
                let rows = scope.raw_matrix(m)?;
                check_rectangular(m, &rows)?;
                let matrix = if rows.iter().flatten().all(|t| text::is_int(t)) {
                    Matrix::Values(
                        rows.iter()
                            .map(|r| r.iter().map(|t| text::int(m, t)).collect())
                            .collect::<Result<_, _>>()?,
                    )
                } else {
                    scope.var_matrix(m).map(Matrix::Vars)?
                };
                let idx = scope.var_list(index_elt)?;
                let [row, col] = <[String; 2]>::try_from(idx).map_err(|_| {
                    index_elt.err(Rule::Syntax, "matrix `element` needs two index variables")
                })?;
                K::ElementMatrix {
                    matrix,
                    row,
                    col,
                    rhs,
                }
            } else {
                let list_elt = need(elt, "list")?;
                no_start_index(list_elt)?;
                let toks = tokens(&list_elt.text);
                let index = scope.single_var(index_elt)?;
                if !toks.is_empty() && toks.iter().all(|t| text::is_int(t)) {
                    if matches!(rhs, ElementRhs::Value(Term::Int(_))) {
                        return Err(elt.err(
                            Rule::Syntax,
                            "an `element` over integer values needs a variable as value",
                        ));
                    }
                    K::ElementValList {
                        list: text::ints(list_elt)?,
                        index,
                        rhs,
                    }
                } else {
                    K::ElementVarList {
                        list: scope.var_list(list_elt)?,
                        index,
                        rhs,
                    }
                }
            }
        }
        "channel" => {
            only(elt, &["list", "value"])?;
            let lists: Vec<&RawElement> = elt.children_named("list").collect();
            for l in &lists {
                no_start_index(l)?;
            }
            match (lists.len(), elt.child("value")) {
                (0, None) => K::ChannelOne {
                    list: scope.var_list(elt)?,
                },
                (1, None) => K::ChannelOne {
                    list: scope.var_list(lists[0])?,
                },
                (1, Some(v)) => K::ChannelValue {
                    list: scope.var_list(lists[0])?,
                    value: scope.single_var(v)?,
                },
                (2, None) => {
                    let first = scope.var_list(lists[0])?;
                    let second = scope.var_list(lists[1])?;
                    if first.len() > second.len() {
                        return Err(elt.err(
                            Rule::LengthMismatch,
                            "the first list of `channel` cannot be longer than the second",
                        ));
                    }
                    K::ChannelTwo { first, second }
                }
                _ => return Err(elt.err(Rule::Syntax, "malformed `channel`")),
            }
        }
        "noOverlap" => {
            only(elt, &["origins", "lengths"])?;
            let zero_ignored = text::boolean(elt, "zeroIgnored", true)?;
            let origins_elt = need(elt, "origins")?;
            let lengths_elt = need(elt, "lengths")?;
            if origins_elt.trimmed().starts_with('(') {
                let origins = text::tuples(origins_elt)?
                    .into_iter()
                    .map(|t| scope.var_tokens(origins_elt, &t.iter().map(String::as_str).collect::<Vec<_>>()))
                    .collect::<Result<Vec<_>, _>>()?;
                let lengths = text::tuples(lengths_elt)?
                    .into_iter()
                    .map(|t| {
                        t.iter()
                            .map(|tok| scope.single_term_token(lengths_elt, tok))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                same_len(lengths_elt, "lengths", origins.len(), lengths.len())?;
                let k = origins.first().map_or(0, Vec::len);
                if origins.iter().any(|o| o.len() != k) || lengths.iter().any(|l| l.len() != k) {
                    return Err(elt.err(Rule::ArityMismatch, "all boxes must have the same dimension"));
                }
                K::NoOverlapK {
                    origins,
                    lengths,
                    zero_ignored,
                }
            } else {
                let origins = scope.var_list(origins_elt)?;
                let lengths = scope.term_list(lengths_elt)?;
                same_len(lengths_elt, "lengths", origins.len(), lengths.len())?;
                K::NoOverlap1 {
                    origins,
                    lengths,
                    zero_ignored,
                }
            }
        }
        "cumulative" => {
            only(elt, &["origins", "lengths", "heights", "condition"])?;
            let origins = scope.var_list(need(elt, "origins")?)?;
            let lengths_elt = need(elt, "lengths")?;
            let lengths = scope.term_list(lengths_elt)?;
            same_len(lengths_elt, "lengths", origins.len(), lengths.len())?;
            let heights_elt = need(elt, "heights")?;
            let heights = scope.term_list(heights_elt)?;
            same_len(heights_elt, "heights", origins.len(), heights.len())?;
            K::Cumulative {
                origins,
                lengths,
                heights,
                cond: text::condition(need(elt, "condition")?)?,
            }
        }
        "circuit" => {
            only(elt, &["list", "size"])?;
            let list_elt = main_list(elt)?;
            let start_index = match list_elt.attr("startIndex") {
                Some(v) => text::int(list_elt, v)?,
                None => 0,
            };
            K::Circuit {
                list: scope.var_list(list_elt)?,
                start_index,
                size: opt(elt, "size")?.map(|s| scope.term(s)).transpose()?,
            }
        }
        "instantiation" => {
            only(elt, &["list", "values"])?;
            let list = scope.var_list(need(elt, "list")?)?;
            let values = text::ints_vxk(need(elt, "values")?)?;
            same_len(elt, "values", list.len(), values.len())?;
            K::Instantiation { list, values }
        }
        other => {
            return Err(elt.err(
                Rule::UnknownElement,
                format!("`{other}` is not an XCSP3-core constraint"),
            ))
        }
    };
    Ok(kind)
}

impl Scope<'_> {
    fn single_var_token(&self, elt: &RawElement, tok: &str) -> Result<String, Diagnostic> {
        let vs = self.vars_of_token(elt, tok)?;
        match <[String; 1]>::try_from(vs) {
            Ok([v]) => Ok(v),
            Err(_) => Err(elt.err(Rule::Syntax, format!("`{tok}` must name one variable"))),
        }
    }

    fn single_term_token(&self, elt: &RawElement, tok: &str) -> Result<Term, Diagnostic> {
        match parse_int(tok) {
            Ok(v) => Ok(Term::Int(v)),
            Err(_) => self.single_var_token(elt, tok).map(Term::Var),
        }
    }
}
