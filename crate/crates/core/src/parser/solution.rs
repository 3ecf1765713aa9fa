//! Reading `<instantiation>` solution documents.

use crate::model::{expand_vxk, Instance, Instantiation, Value};

use super::ctr::Scope;
use super::raw::{self, RawElement};
use super::text::tokens;
use super::{Diagnostic, Rule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    Solution,
    Optimum,
}

impl SolutionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolutionKind::Solution => "solution",
            SolutionKind::Optimum => "optimum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionDoc {
    pub kind: SolutionKind,
    pub cost: Option<i64>,
    pub assignment: Instantiation,
}

/// Parses an `instantiation` element against the variables of `inst`.
pub fn parse_solution(text: &str, inst: &Instance) -> Result<SolutionDoc, Diagnostic> {
    let root = raw::read_document(text)?;
    if root.tag != "instantiation" {
        return Err(root.err(Rule::Solution, "the root element must be `instantiation`"));
    }
    let kind = match root.attr("type") {
        Some("solution") => SolutionKind::Solution,
        Some("optimum") => SolutionKind::Optimum,
        other => {
            return Err(root.err(
                Rule::Solution,
                format!("attribute `type` must be `solution` or `optimum`, found {other:?}"),
            ))
        }
    };
    let cost = root
        .attr("cost")
        .map(|c| super::text::int(&root, c))
        .transpose()?;
    for c in &root.children {
        if c.tag != "list" && c.tag != "values" {
            return Err(c.err(Rule::UnexpectedElement, format!("`{}` is not allowed here", c.tag)));
        }
    }
    let list = root
        .child("list")
        .ok_or_else(|| root.err(Rule::MissingElement, "element `list` is required"))?;
    let values = root
        .child("values")
        .ok_or_else(|| root.err(Rule::MissingElement, "element `values` is required"))?;
    let assignment = assign(inst, list, &tokens(&list.text), values, &tokens(&values.text))?;
    Ok(SolutionDoc {
        kind,
        cost,
        assignment,
    })
}

/// Pairs a whitespace-separated value list with a variable list.
pub fn parse_value_list(values: &str, vars: &str, inst: &Instance) -> Result<Instantiation, Diagnostic> {
    let at = RawElement {
        tag: "values".into(),
        attrs: Vec::new(),
        children: Vec::new(),
        text: values.to_string(),
        path: "/values".into(),
    };
    assign(inst, &at, &tokens(vars), &at, &tokens(values))
}

fn assign(
    inst: &Instance,
    list_elt: &RawElement,
    list: &[&str],
    values_elt: &RawElement,
    values: &[&str],
) -> Result<Instantiation, Diagnostic> {
    let scope = Scope::new(&inst.variables, &inst.arrays);
    let vars = scope.var_tokens(list_elt, list)?;
    let mut vals = Vec::with_capacity(values.len());
    for tok in values {
        if *tok == "*" {
            vals.push(Value::Star);
        } else {
            let expanded =
                expand_vxk(&[tok]).map_err(|e| Diagnostic::from_model(&values_elt.path, e))?;
            vals.extend(expanded.into_iter().map(Value::Int));
        }
    }
    if vars.len() != vals.len() {
        return Err(values_elt.err(
            Rule::LengthMismatch,
            format!("{} variables but {} values", vars.len(), vals.len()),
        ));
    }
    let mut out = Instantiation::new();
    for (x, v) in vars.into_iter().zip(vals) {
        out.assign(x, v)
            .map_err(|e| Diagnostic::from_model(&list_elt.path, e))?;
    }
    Ok(out)
}
