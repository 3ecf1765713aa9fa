//! Canonical flat XML: one element per constraint, no groups, blocks,
//! aliases or compact lists.

use std::collections::HashMap;
use std::fmt::{Display, Write};

use crate::constraints::{
    ConstraintKind, ElementRhs, Matrix, Objective, ObjectiveForm, ObjectiveValue, Occurs, Table,
    Transition,
};
use crate::model::{Constraint, Domain, Instance, Instantiation, Value, VarArray};

use super::SolutionKind;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn join<T: Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn tuples<T: Display>(rows: &[Vec<T>]) -> String {
    rows.iter()
        .map(|r| {
            let inner: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            format!("({})", inner.join(","))
        })
        .collect()
}

fn transitions(ts: &[Transition]) -> String {
    ts.iter()
        .map(|t| format!("({},{},{})", t.from, t.value, t.to))
        .collect()
}

/// Element builder producing indented lines.
struct Out {
    buf: String,
}

impl Out {
    fn line(&mut self, depth: usize, s: &str) {
        for _ in 0..depth {
            self.buf.push_str("  ");
        }
        self.buf.push_str(s);
        self.buf.push('\n');
    }

    fn leaf(&mut self, depth: usize, tag: &str, attrs: &str, body: &str) {
        self.line(depth, &format!("<{tag}{attrs}> {body} </{tag}>"));
    }
}

fn attrs(pairs: &[(&str, Option<String>)]) -> String {
    let mut s = String::new();
    for (k, v) in pairs {
        if let Some(v) = v {
            let _ = write!(s, " {k}=\"{}\"", escape(v));
        }
    }
    s
}

/// Serializes a normalized instance.
pub fn write_canonical(inst: &Instance) -> String {
    let mut o = Out { buf: String::new() };
    o.line(
        0,
        &format!("<instance format=\"XCSP3\" type=\"{}\">", inst.framework.as_str()),
    );
    o.line(1, "<variables>");
    let by_first: HashMap<usize, &VarArray> = inst.arrays.iter().map(|a| (a.first, a)).collect();
    let mut i = 0;
    while i < inst.variables.len() {
        if let Some(a) = by_first.get(&i) {
            write_array(&mut o, inst, a);
            i += a.len();
        } else {
            let v = &inst.variables[i];
            let at = attrs(&[("id", Some(v.id.clone())), ("note", v.note.clone())]);
            let dom = v.domain.as_ref().map(Domain::to_string).unwrap_or_default();
            o.leaf(2, "var", &at, &dom);
            i += 1;
        }
    }
    o.line(1, "</variables>");
    o.line(1, "<constraints>");
    for c in &inst.constraints {
        write_constraint(&mut o, 2, c);
    }
    o.line(1, "</constraints>");
    if let Some(obj) = &inst.objective {
        o.line(1, "<objectives>");
        write_objective(&mut o, 2, obj);
        o.line(1, "</objectives>");
    }
    if let Some(d) = &inst.decision {
        o.line(1, "<annotations>");
        o.leaf(2, "decision", "", &join(d));
        o.line(1, "</annotations>");
    }
    o.line(0, "</instance>");
    o.buf
}

fn write_array(o: &mut Out, inst: &Instance, a: &VarArray) {
    let size: String = a.dims.iter().map(|d| format!("[{d}]")).collect();
    let at = attrs(&[
        ("id", Some(a.id.clone())),
        ("size", Some(size)),
        ("note", a.note.clone()),
    ]);
    let cells = &inst.variables[a.first..a.first + a.len()];
    let first = &cells[0].domain;
    if first.is_some() && cells.iter().all(|c| &c.domain == first) {
        o.leaf(2, "array", &at, &first.as_ref().map(Domain::to_string).unwrap_or_default());
        return;
    }
    o.line(2, &format!("<array{at}>"));
    let mut groups: Vec<(&Domain, Vec<&str>)> = Vec::new();
    for c in cells {
        if let Some(d) = &c.domain {
            match groups.iter_mut().find(|(g, _)| *g == d) {
                Some((_, ids)) => ids.push(&c.id),
                None => groups.push((d, vec![c.id.as_str()])),
            }
        }
    }
    for (d, ids) in groups {
        o.leaf(3, "domain", &attrs(&[("for", Some(ids.join(" ")))]), &d.to_string());
    }
    o.line(2, "</array>");
}

fn write_constraint(o: &mut Out, depth: usize, c: &Constraint) {
    use ConstraintKind as K;
    let classes = (!c.classes.is_empty()).then(|| c.classes.join(" "));
    let mut at_pairs = vec![
        ("id", c.id.clone()),
        ("class", classes),
        ("note", c.note.clone()),
    ];
    let zero_ignored = match &c.kind {
        K::NoOverlap1 { zero_ignored, .. } | K::NoOverlapK { zero_ignored, .. } => *zero_ignored,
        _ => true,
    };
    if !zero_ignored {
        at_pairs.push(("zeroIgnored", Some("false".into())));
    }
    let at = attrs(&at_pairs);
    let tag = c.kind.name();
    if let K::Intension(e) = &c.kind {
        o.leaf(depth, tag, &at, &e.to_string());
        return;
    }
    o.line(depth, &format!("<{tag}{at}>"));
    let d = depth + 1;
    let cond = |o: &mut Out, c: &crate::model::Condition| o.leaf(d, "condition", "", &c.to_string());
    match &c.kind {
        K::Intension(_) => unreachable!("handled above"),
        K::Extension {
            scope,
            table,
            positive,
        } => {
            o.leaf(d, "list", "", &join(scope));
            let body = match table {
                Table::Tuples(rows) => tuples(rows),
                Table::Unary(dom) => dom.to_string(),
            };
            o.leaf(d, if *positive { "supports" } else { "conflicts" }, "", &body);
        }
        K::Regular {
            list,
            transitions: ts,
            start,
            finals,
        } => {
            o.leaf(d, "list", "", &join(list));
            o.leaf(d, "transitions", "", &transitions(ts));
            o.leaf(d, "start", "", start);
            o.leaf(d, "final", "", &join(finals));
        }
        K::Mdd {
            list,
            transitions: ts,
        } => {
            o.leaf(d, "list", "", &join(list));
            o.leaf(d, "transitions", "", &transitions(ts));
        }
        K::AllDifferent { list, except } => {
            o.leaf(d, "list", "", &join(list));
            if !except.is_empty() {
                o.leaf(d, "except", "", &join(except));
            }
        }
        K::AllDifferentLists { lists, except } => {
            for l in lists {
                o.leaf(d, "list", "", &join(l));
            }
            if !except.is_empty() {
                o.leaf(d, "except", "", &tuples(except));
            }
        }
        K::AllDifferentMatrix { matrix, except } => {
            o.leaf(d, "matrix", "", &tuples(matrix));
            if !except.is_empty() {
                o.leaf(d, "except", "", &join(except));
            }
        }
        K::AllEqual { list } => o.leaf(d, "list", "", &join(list)),
        K::Ordered { list, lengths, op } => {
            o.leaf(d, "list", "", &join(list));
            if let Some(ls) = lengths {
                o.leaf(d, "lengths", "", &join(ls));
            }
            o.leaf(d, "operator", "", op.as_str());
        }
        K::Lex { lists, op } => {
            for l in lists {
                o.leaf(d, "list", "", &join(l));
            }
            o.leaf(d, "operator", "", op.as_str());
        }
        K::Lex2 { matrix, op } => {
            o.leaf(d, "matrix", "", &tuples(matrix));
            o.leaf(d, "operator", "", op.as_str());
        }
        K::Sum {
            list,
            coeffs,
            cond: c,
        } => {
            o.leaf(d, "list", "", &join(list));
            if let Some(cs) = coeffs {
                o.leaf(d, "coeffs", "", &join(cs));
            }
            cond(o, c);
        }
        K::Count {
            list,
            values,
            cond: c,
        } => {
            o.leaf(d, "list", "", &join(list));
            o.leaf(d, "values", "", &join(values));
            cond(o, c);
        }
        K::NValues {
            list,
            except,
            cond: c,
        } => {
            o.leaf(d, "list", "", &join(list));
            if !except.is_empty() {
                o.leaf(d, "except", "", &join(except));
            }
            cond(o, c);
        }
        K::Cardinality {
            list,
            values,
            closed,
            occurs,
        } => {
            o.leaf(d, "list", "", &join(list));
            let at = if *closed { " closed=\"true\"" } else { "" };
            o.leaf(d, "values", at, &join(values));
            let occ: Vec<String> = occurs
                .iter()
                .map(|x| match x {
                    Occurs::Int(v) => v.to_string(),
                    Occurs::Var(v) => v.clone(),
                    Occurs::Interval(lo, hi) => format!("{lo}..{hi}"),
                })
                .collect();
            o.leaf(d, "occurs", "", &occ.join(" "));
        }
        K::Minimum { list, cond: c } | K::Maximum { list, cond: c } => {
            o.leaf(d, "list", "", &join(list));
            cond(o, c);
        }
        K::ElementVarList { list, index, rhs } => {
            o.leaf(d, "list", "", &join(list));
            o.leaf(d, "index", "", index);
            write_rhs(o, d, rhs);
        }
        K::ElementValList { list, index, rhs } => {
            o.leaf(d, "list", "", &join(list));
            o.leaf(d, "index", "", index);
            write_rhs(o, d, rhs);
        }
        K::ElementMatrix {
            matrix,
            row,
            col,
            rhs,
        } => {
            let body = match matrix {
                Matrix::Vars(m) => tuples(m),
                Matrix::Values(m) => tuples(m),
            };
            o.leaf(d, "matrix", "", &body);
            o.leaf(d, "index", "", &format!("{row} {col}"));
            write_rhs(o, d, rhs);
        }
        K::ChannelOne { list } => o.leaf(d, "list", "", &join(list)),
        K::ChannelTwo { first, second } => {
            o.leaf(d, "list", "", &join(first));
            o.leaf(d, "list", "", &join(second));
        }
        K::ChannelValue { list, value } => {
            o.leaf(d, "list", "", &join(list));
            o.leaf(d, "value", "", value);
        }
        K::NoOverlap1 {
            origins, lengths, ..
        } => {
            o.leaf(d, "origins", "", &join(origins));
            o.leaf(d, "lengths", "", &join(lengths));
        }
        K::NoOverlapK {
            origins, lengths, ..
        } => {
            o.leaf(d, "origins", "", &tuples(origins));
            o.leaf(d, "lengths", "", &tuples(lengths));
        }
        K::Cumulative {
            origins,
            lengths,
            heights,
            cond: c,
        } => {
            o.leaf(d, "origins", "", &join(origins));
            o.leaf(d, "lengths", "", &join(lengths));
            o.leaf(d, "heights", "", &join(heights));
            cond(o, c);
        }
        K::Circuit {
            list,
            start_index,
            size,
        } => {
            let at = if *start_index != 0 {
                format!(" startIndex=\"{start_index}\"")
            } else {
                String::new()
            };
            o.leaf(d, "list", &at, &join(list));
            if let Some(s) = size {
                o.leaf(d, "size", "", &s.to_string());
            }
        }
        K::Instantiation { list, values } => {
            o.leaf(d, "list", "", &join(list));
            o.leaf(d, "values", "", &join(values));
        }
    }
    o.line(depth, &format!("</{tag}>"));
}

fn write_rhs(o: &mut Out, d: usize, rhs: &ElementRhs) {
    match rhs {
        ElementRhs::Value(t) => o.leaf(d, "value", "", &t.to_string()),
        ElementRhs::Cond(c) => o.leaf(d, "condition", "", &c.to_string()),
    }
}

fn write_objective(o: &mut Out, depth: usize, obj: &Objective) {
    let tag = obj.sense.as_str();
    match &obj.form {
        ObjectiveForm::Expression(e) => {
            o.leaf(depth, tag, &attrs(&[("id", obj.id.clone())]), &e.to_string());
        }
        ObjectiveForm::Specialized { kind, list, coeffs } => {
            let at = attrs(&[("id", obj.id.clone()), ("type", Some(kind.as_str().into()))]);
            o.line(depth, &format!("<{tag}{at}>"));
            o.leaf(depth + 1, "list", "", &join(list));
            if let Some(cs) = coeffs {
                o.leaf(depth + 1, "coeffs", "", &join(cs));
            }
            o.line(depth, &format!("</{tag}>"));
        }
    }
}

/// Renders a solution as an `instantiation` element.
pub fn write_instantiation(
    sol: &Instantiation,
    kind: SolutionKind,
    cost: Option<&ObjectiveValue>,
) -> String {
    let mut s = format!("<instantiation type=\"{}\"", kind.as_str());
    if let Some(c) = cost {
        let _ = write!(s, " cost=\"{c}\"");
    }
    s.push_str(">\n");
    let (vars, vals): (Vec<&str>, Vec<String>) = sol
        .iter()
        .map(|(x, v)| {
            let v = match v {
                Value::Int(i) => i.to_string(),
                Value::Star => "*".into(),
            };
            (x, v)
        })
        .unzip();
    let _ = writeln!(s, "  <list> {} </list>", vars.join(" "));
    let _ = writeln!(s, "  <values> {} </values>", vals.join(" "));
    s.push_str("</instantiation>\n");
    s
}
