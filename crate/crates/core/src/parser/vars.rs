//! The `variables` section: stand-alone variables, arrays, mixed domains
//! and aliases.

use std::collections::{HashMap, HashSet};

use crate::model::{
    expand_compact_variable_list, is_identifier, split_reference, Domain, Expanded, ListContext,
    VarArray, Variable,
};

use super::raw::RawElement;
use super::text;
use super::{Diagnostic, Rule, Warnings};

pub(crate) struct Declared {
    pub variables: Vec<Variable>,
    pub arrays: Vec<VarArray>,
}

pub(crate) fn read_variables(
    section: &RawElement,
    all_ids: &HashSet<String>,
    warn: &mut Warnings,
) -> Result<Declared, Diagnostic> {
    let mut out = Declared {
        variables: Vec::new(),
        arrays: Vec::new(),
    };
    let mut seen: HashMap<String, &RawElement> = HashMap::new();
    for elt in &section.children {
        if elt.tag != "var" && elt.tag != "array" {
            warn.unknown(elt, "only `var` and `array` may appear in `variables`")?;
            continue;
        }
        let id = elt
            .attr("id")
            .ok_or_else(|| elt.err(Rule::MissingElement, "attribute `id` is required"))?;
        if !is_identifier(id) {
            return Err(elt.err(Rule::Identifier, format!("`{id}` is not a valid identifier")));
        }
        if let Some(t) = elt.attr("type") {
            if t != "integer" {
                warn.unsupported(elt, format!("variables of type `{t}` are not supported"))?;
                continue;
            }
        }
        let resolved = match elt.attr("as") {
            Some(target) => resolve_alias(elt, target, &seen, all_ids)?,
            None => elt.clone(),
        };
        seen.insert(id.to_string(), elt);
        let note = elt.attr("note").map(str::to_string);
        if elt.tag == "var" {
            if !resolved.children.is_empty() {
                return Err(elt.err(Rule::UnexpectedElement, "`var` has no child elements"));
            }
            out.variables.push(Variable {
                id: id.to_string(),
                domain: Some(text::domain(&resolved)?),
                note,
            });
        } else {
            build_array(&resolved, id, note, &mut out)?;
        }
    }
    if out.variables.is_empty() {
        return Err(section.err(Rule::MissingVariables, "at least one variable must be declared"));
    }
    Ok(out)
}

/// Replaces the content of an aliasing element by a copy of its target.
pub(crate) fn resolve_alias(
    elt: &RawElement,
    target: &str,
    seen: &HashMap<String, &RawElement>,
    all_ids: &HashSet<String>,
) -> Result<RawElement, Diagnostic> {
    if !elt.is_empty() {
        return Err(elt.err(
            Rule::AliasNotEmpty,
            "an element with attribute `as` must have no content",
        ));
    }
    let Some(src) = seen.get(target) else {
        return Err(if all_ids.contains(target) {
            elt.err(
                Rule::ForwardAlias,
                format!("alias target `{target}` must precede the aliasing element"),
            )
        } else {
            elt.err(Rule::UnknownAliasTarget, format!("no element with id `{target}`"))
        });
    };
    if src.attr("as").is_some() {
        return Err(elt.err(
            Rule::TransitiveAlias,
            format!("alias target `{target}` is itself an alias"),
        ));
    }
    if src.tag != elt.tag {
        return Err(elt.err(
            Rule::UnknownAliasTarget,
            format!("`{target}` is a `{}`, not a `{}`", src.tag, elt.tag),
        ));
    }
    let mut copy = elt.clone();
    copy.text = src.text.clone();
    copy.children = src.children.clone();
    if let Some(own) = elt.attr("size") {
        if Some(own) != src.attr("size") && !src.children.is_empty() {
            return Err(elt.err(
                Rule::BadSize,
                "an aliased array with mixed domains must keep the target's size",
            ));
        }
    } else if let Some(size) = src.attr("size") {
        copy.attrs.push(("size".into(), size.into()));
    }
    // domain `for` lists name the target array; rename them
    let own_id = elt.attr("id").unwrap_or_default().to_string();
    for d in &mut copy.children {
        for (k, v) in &mut d.attrs {
            if k == "for" && v != "others" {
                *v = v
                    .split_whitespace()
                    .map(|tok| match tok.strip_prefix(target) {
                        Some(rest) if rest.starts_with('[') => format!("{own_id}{rest}"),
                        _ => tok.to_string(),
                    })
                    .collect::<Vec<_>>()
                    .join(" ");
            }
        }
    }
    Ok(copy)
}

pub(crate) fn parse_size(elt: &RawElement) -> Result<Vec<usize>, Diagnostic> {
    let size = elt
        .attr("size")
        .ok_or_else(|| elt.err(Rule::BadSize, "attribute `size` is required"))?;
    let bad = || {
        elt.err(
            Rule::BadSize,
            format!("malformed size `{size}`, expected `[n]` or `[n1][n2]...` with n >= 1"),
        )
    };
    let dim = |s: &str| -> Result<usize, Diagnostic> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(bad()),
        }
    };
    if !size.starts_with('[') {
        return Ok(vec![dim(size)?]);
    }
    let mut dims = Vec::new();
    let mut rest = size;
    while !rest.is_empty() {
        let inner = rest.strip_prefix('[').ok_or_else(bad)?;
        let close = inner.find(']').ok_or_else(bad)?;
        dims.push(dim(&inner[..close])?);
        rest = &inner[close + 1..];
    }
    Ok(dims)
}

fn check_start_index(elt: &RawElement, attr: &str) -> Result<(), Diagnostic> {
    match elt.attr(attr) {
        None | Some("0") => Ok(()),
        Some(v) => Err(elt.err(
            Rule::StartIndex,
            format!("attribute `{attr}` must be 0, found `{v}`"),
        )),
    }
}

fn build_array(
    elt: &RawElement,
    id: &str,
    note: Option<String>,
    out: &mut Declared,
) -> Result<(), Diagnostic> {
    let dims = parse_size(elt)?;
    check_start_index(elt, "startIndex")?;
    let first = out.variables.len();
    let array = VarArray {
        id: id.to_string(),
        dims,
        first,
        note,
    };
    let cells = array.indices();
    let mut domains: Vec<Option<Domain>> = vec![None; cells.len()];
    if elt.children.is_empty() {
        let d = text::domain(elt)?;
        domains.iter_mut().for_each(|slot| *slot = Some(d.clone()));
    } else {
        if !elt.trimmed().is_empty() {
            return Err(elt.err(
                Rule::Domain,
                "an array cannot mix a textual domain with `domain` elements",
            ));
        }
        let mut explicit = vec![false; cells.len()];
        let n = elt.children.len();
        for (k, d) in elt.children.iter().enumerate() {
            if d.tag != "domain" {
                return Err(d.err(Rule::UnexpectedElement, "only `domain` elements may appear here"));
            }
            let dom = text::domain(d)?;
            let values = d
                .attr("for")
                .ok_or_else(|| d.err(Rule::MissingElement, "attribute `for` is required"))?;
            if values == "others" {
                if k + 1 != n {
                    return Err(d.err(
                        Rule::MisplacedOthers,
                        "`for=\"others\"` may appear once, on the last `domain`",
                    ));
                }
                for (slot, set) in domains.iter_mut().zip(&explicit) {
                    if !set {
                        *slot = Some(dom.clone());
                    }
                }
                continue;
            }
            for tok in values.split_whitespace() {
                if tok == "others" {
                    return Err(d.err(
                        Rule::MisplacedOthers,
                        "`others` cannot be combined with other references",
                    ));
                }
                match split_reference(tok) {
                    Some((base, _)) if base == id => {}
                    _ => {
                        return Err(d.err(
                            Rule::Reference,
                            format!("`{tok}` does not refer to array `{id}`"),
                        ))
                    }
                }
                let names = match expand_compact_variable_list(
                    tok,
                    std::slice::from_ref(&array),
                    ListContext::List,
                )
                .map_err(|e| Diagnostic::from_model(&d.path, e))?
                {
                    Expanded::List(v) => v,
                    Expanded::Rows(r) => r.concat(),
                };
                for name in names {
                    let pos = cell_offset(&array, &name);
                    if explicit[pos] {
                        return Err(d.err(
                            Rule::OverlappingFor,
                            format!("`{name}` is matched by two `domain` elements"),
                        ));
                    }
                    explicit[pos] = true;
                    domains[pos] = Some(dom.clone());
                }
            }
        }
    }
    for (ix, domain) in cells.iter().zip(domains) {
        out.variables.push(Variable {
            id: array.cell_id(ix),
            domain,
            note: None,
        });
    }
    out.arrays.push(array);
    Ok(())
}

fn cell_offset(array: &VarArray, name: &str) -> usize {
    let (_, slots) = split_reference(name).expect("expanded cell id");
    let ix: Vec<usize> = slots
        .iter()
        .map(|s| s.parse().expect("expanded cell index"))
        .collect();
    array.offset(&ix).expect("expanded cell belongs to the array")
}
