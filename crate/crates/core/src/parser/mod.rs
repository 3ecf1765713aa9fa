//! Reads XCSP3-core documents into normalized [`Instance`]s.
//!
//! Aliases are resolved, arrays materialized, compact lists expanded,
//! groups and slides unrolled and blocks flattened. Every failure is a
//! [`Diagnostic`] carrying a rule tag and the path of the offending element.

mod ctr;
mod diag;
mod raw;
mod solution;
mod templates;
mod text;
mod vars;
mod writer;

use std::collections::HashSet;

use crate::constraints::{ObjKind, Objective, ObjectiveForm, Sense};
use crate::model::{Constraint, Domain, Framework, Instance};

pub use diag::{Diagnostic, Rule};
pub use solution::{parse_solution, parse_value_list, SolutionDoc, SolutionKind};
pub use writer::{write_canonical, write_instantiation};

use ctr::{Scope, CORE_CONSTRAINTS, UNSUPPORTED_ATTRS};
use raw::RawElement;
use templates::SlideList;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParseOptions {
    /// When false, unknown or unsupported elements are skipped with a
    /// warning instead of failing the parse.
    pub strict: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions { strict: true }
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub instance: Instance,
    pub warnings: Vec<Diagnostic>,
}

pub(crate) struct Warnings {
    strict: bool,
    list: Vec<Diagnostic>,
}

impl Warnings {
    fn report(&mut self, d: Diagnostic) -> Result<(), Diagnostic> {
        if self.strict {
            Err(d)
        } else {
            self.list.push(d);
            Ok(())
        }
    }

    pub fn unknown(&mut self, elt: &RawElement, msg: impl Into<String>) -> Result<(), Diagnostic> {
        let msg = format!("`{}` is not supported: {}", elt.tag, msg.into());
        self.report(elt.err(Rule::UnknownElement, msg))
    }

    pub fn unsupported(&mut self, elt: &RawElement, msg: impl Into<String>) -> Result<(), Diagnostic> {
        self.report(elt.err(Rule::Unsupported, msg))
    }
}

/// Parses a document with default (strict) options.
pub fn parse_instance(text: &str) -> Result<Instance, Diagnostic> {
    parse_instance_with(text, ParseOptions::default()).map(|p| p.instance)
}

/// Parses a domain given as text, e.g. `-6..-2 0 1..3`.
pub fn parse_domain_text(text: &str) -> Result<Domain, Diagnostic> {
    crate::model::parse_domain(text).map_err(|e| Diagnostic::from_model("domain", e))
}

pub fn parse_instance_with(text: &str, opts: ParseOptions) -> Result<Parsed, Diagnostic> {
    let root = raw::read_document(text)?;
    let mut warn = Warnings {
        strict: opts.strict,
        list: Vec::new(),
    };
    if root.tag != "instance" {
        return Err(root.err(Rule::Format, "the root element must be `instance`"));
    }
    match root.attr("format") {
        Some("XCSP3") => {}
        other => {
            return Err(root.err(
                Rule::Format,
                format!("attribute `format` must be `XCSP3`, found {other:?}"),
            ))
        }
    }
    let framework = match root.attr("type") {
        Some("CSP") => Framework::Csp,
        Some("COP") => Framework::Cop,
        other => {
            return Err(root.err(
                Rule::BadFramework,
                format!("framework must be CSP or COP, found {other:?}"),
            ))
        }
    };
    let all_ids = check_ids(&root)?;

    let mut sections: Vec<&RawElement> = Vec::new();
    for c in &root.children {
        match c.tag.as_str() {
            "variables" | "constraints" | "objectives" | "annotations" => {
                if sections.iter().any(|s| s.tag == c.tag) {
                    return Err(c.err(Rule::UnexpectedElement, format!("duplicate `{}`", c.tag)));
                }
                sections.push(c);
            }
            _ => warn.unknown(c, "not an XCSP3-core section")?,
        }
    }
    let section = |tag: &str| sections.iter().copied().find(|s| s.tag == tag);

    let var_section = section("variables")
        .ok_or_else(|| root.err(Rule::MissingVariables, "element `variables` is required"))?;
    let declared = vars::read_variables(var_section, &all_ids, &mut warn)?;
    let scope = Scope::new(&declared.variables, &declared.arrays);
    let mut b = Builder {
        scope: &scope,
        warn: &mut warn,
    };

    let mut constraints = Vec::new();
    if let Some(cs) = section("constraints") {
        b.flatten(cs, &[], &mut constraints)?;
    }

    let objective = match section("objectives") {
        Some(o) => b.objectives(o)?,
        None => None,
    };
    match (framework, &objective) {
        (Framework::Cop, None) => {
            return Err(root.err(
                Rule::ObjectiveCount,
                "a COP instance needs exactly one objective",
            ))
        }
        (Framework::Csp, Some(_)) => {
            return Err(root.err(Rule::ObjectiveCount, "a CSP instance has no objective"))
        }
        _ => {}
    }

    let decision = match section("annotations") {
        Some(a) => b.annotations(a)?,
        None => None,
    };

    let instance = Instance::new(
        framework,
        declared.variables.clone(),
        declared.arrays.clone(),
        constraints,
        objective,
        decision,
    );
    Ok(Parsed {
        instance,
        warnings: warn.list,
    })
}

/// Document-wide id uniqueness and the restriction of `as` to variables.
fn check_ids(root: &RawElement) -> Result<HashSet<String>, Diagnostic> {
    let mut ids = HashSet::new();
    let mut err = None;
    root.walk(&mut |e| {
        if err.is_some() {
            return;
        }
        if let Some(id) = e.attr("id") {
            if !ids.insert(id.to_string()) {
                err = Some(e.err(Rule::DuplicateId, format!("id `{id}` is already used")));
                return;
            }
        }
        if e.attr("as").is_some() && e.tag != "var" && e.tag != "array" {
            err = Some(e.err(
                Rule::AliasOnForbiddenElement,
                format!("attribute `as` is only allowed on `var` and `array`, not `{}`", e.tag),
            ));
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(ids),
    }
}

fn class_tokens(elt: &RawElement) -> Vec<String> {
    elt.attr("class")
        .map(|c| c.split_whitespace().map(str::to_string).collect())
        .unwrap_or_default()
}

fn with_classes(inherited: &[String], elt: &RawElement) -> Vec<String> {
    let mut v = inherited.to_vec();
    v.extend(class_tokens(elt));
    v
}

struct Builder<'s, 'w> {
    scope: &'s Scope<'s>,
    warn: &'w mut Warnings,
}

impl Builder<'_, '_> {
    fn flatten(
        &mut self,
        container: &RawElement,
        classes: &[String],
        out: &mut Vec<Constraint>,
    ) -> Result<(), Diagnostic> {
        if !container.trimmed().is_empty() {
            return Err(container.err(Rule::Syntax, "unexpected text"));
        }
        for elt in &container.children {
            match elt.tag.as_str() {
                "block" => self.flatten(elt, &with_classes(classes, elt), out)?,
                "group" => self.group(elt, classes, out)?,
                "slide" => self.slide(elt, classes, out)?,
                tag if CORE_CONSTRAINTS.contains(&tag) => {
                    if !self.supported_attrs(elt)? {
                        continue;
                    }
                    if templates::has_params(elt) {
                        return Err(elt.err(
                            Rule::ParamOutsideTemplate,
                            "parameters `%` may only appear in templates of `group` or `slide`",
                        ));
                    }
                    let kind = ctr::build(self.scope, elt)?;
                    out.push(self.finish(
                        elt,
                        kind,
                        elt.attr("id").map(str::to_string),
                        with_classes(classes, elt),
                        elt.attr("note"),
                    )?);
                }
                _ => self.warn.unknown(elt, "not an XCSP3-core constraint")?,
            }
        }
        Ok(())
    }

    /// Returns false when the element must be skipped.
    fn supported_attrs(&mut self, elt: &RawElement) -> Result<bool, Diagnostic> {
        for (k, _) in &elt.attrs {
            if UNSUPPORTED_ATTRS.contains(&k.as_str()) {
                self.warn
                    .unsupported(elt, format!("attribute `{k}` is not part of XCSP3-core"))?;
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn finish(
        &self,
        at: &RawElement,
        kind: crate::constraints::ConstraintKind,
        id: Option<String>,
        classes: Vec<String>,
        note: Option<&str>,
    ) -> Result<Constraint, Diagnostic> {
        for v in kind.scope() {
            self.check_usable(at, &v)?;
        }
        Ok(Constraint {
            id,
            classes,
            note: note.map(str::to_string),
            kind,
        })
    }

    fn check_usable(&self, at: &RawElement, v: &str) -> Result<(), Diagnostic> {
        match self.scope.variable(v) {
            None => Err(at.err(Rule::UnknownVariable, format!("unknown variable `{v}`"))),
            Some(var) if !var.is_defined() => Err(at.err(
                Rule::UndefinedVariable,
                format!("variable `{v}` has no domain and cannot be used"),
            )),
            Some(_) => Ok(()),
        }
    }

    fn template<'e>(&mut self, owner: &'e RawElement) -> Result<Option<&'e RawElement>, Diagnostic> {
        let Some(t) = owner.children.iter().find(|c| c.tag != "list" && c.tag != "args") else {
            return Err(owner.err(Rule::MissingElement, "a constraint template is required"));
        };
        match t.tag.as_str() {
            "group" | "slide" | "block" => Err(t.err(
                Rule::NestedTemplate,
                format!("`{}` cannot appear inside `{}`", t.tag, owner.tag),
            )),
            tag if CORE_CONSTRAINTS.contains(&tag) => {
                if self.supported_attrs(t)? {
                    Ok(Some(t))
                } else {
                    Ok(None)
                }
            }
            _ => {
                self.warn.unknown(t, "not an XCSP3-core constraint")?;
                Ok(None)
            }
        }
    }

    fn group(
        &mut self,
        g: &RawElement,
        classes: &[String],
        out: &mut Vec<Constraint>,
    ) -> Result<(), Diagnostic> {
        let Some(template) = self.template(g)? else {
            return Ok(());
        };
        if !std::ptr::eq(template, &g.children[0]) {
            return Err(g.err(Rule::Syntax, "the template must be the first child of `group`"));
        }
        let args: Vec<&RawElement> = g.children[1..].iter().collect();
        if let Some(bad) = args.iter().find(|a| a.tag != "args") {
            return Err(bad.err(Rule::UnexpectedElement, "only `args` may follow the template"));
        }
        if args.len() < 2 {
            return Err(g.err(Rule::MissingElement, "a group needs at least two `args`"));
        }
        let p = templates::params(template)?;
        if p.count == 0 && !p.rest {
            return Err(template.err(Rule::ArityMismatch, "the template has no parameters"));
        }
        if p.rest && template.tag == "intension" {
            return Err(template.err(
                Rule::RestInExpression,
                "`%...` cannot occur inside a functional expression",
            ));
        }
        let mut member_classes = with_classes(classes, g);
        member_classes.extend(class_tokens(template));
        let note = template.attr("note").or(g.attr("note"));
        for (i, a) in args.iter().enumerate() {
            let vals = self.args(a)?;
            templates::check_arity(a, p, vals.len())?;
            let inst = templates::substitute(template, p, &vals);
            let kind = ctr::build(self.scope, &inst).map_err(|d| Diagnostic { path: a.path.clone(), ..d })?;
            let id = g.attr("id").map(|id| format!("{id}[{i}]"));
            out.push(self.finish(a, kind, id, member_classes.clone(), note)?);
        }
        Ok(())
    }

    /// Argument tokens of an `args` element, compact lists expanded.
    fn args(&self, a: &RawElement) -> Result<Vec<String>, Diagnostic> {
        let mut out = Vec::new();
        for tok in text::tokens(&a.text) {
            if tok.contains('(') || text::is_int(tok) {
                out.push(tok.to_string());
            } else {
                out.extend(self.scope.vars_of_token(a, tok)?);
            }
        }
        Ok(out)
    }

    fn slide(
        &mut self,
        s: &RawElement,
        classes: &[String],
        out: &mut Vec<Constraint>,
    ) -> Result<(), Diagnostic> {
        let circular = text::boolean(s, "circular", false)?;
        let Some(template) = self.template(s)? else {
            return Ok(());
        };
        if template.tag != "intension" && template.tag != "extension" {
            return Err(template.err(
                Rule::TemplateNotCore,
                "a slide template must be `intension` or `extension`",
            ));
        }
        let n = s.children.len();
        if !std::ptr::eq(template, &s.children[n - 1]) {
            return Err(s.err(Rule::Syntax, "the template must be the last child of `slide`"));
        }
        let list_elts = &s.children[..n - 1];
        if list_elts.is_empty() {
            return Err(s.err(Rule::MissingElement, "a slide needs at least one `list`"));
        }
        let mut lists = Vec::new();
        for l in list_elts {
            if l.tag != "list" {
                return Err(l.err(Rule::UnexpectedElement, "only `list` may precede the template"));
            }
            lists.push(SlideList {
                vars: self.scope.var_list(l)?,
                offset: text::positive_attr(l, "offset")?,
                collect: text::positive_attr(l, "collect")?,
            });
        }
        let p = templates::params(template)?;
        if p.rest {
            return Err(template.err(Rule::RestInSlide, "`%...` cannot be used inside `slide`"));
        }
        if p.count == 0 {
            return Err(template.err(Rule::ArityMismatch, "the template has no parameters"));
        }
        let collect_mode = lists.len() > 1 || list_elts[0].attr("collect").is_some();
        let windows = templates::slide_windows(s, &lists, p.count, circular, collect_mode)?;
        let mut member_classes = with_classes(classes, s);
        member_classes.extend(class_tokens(template));
        let note = template.attr("note").or(s.attr("note"));
        for (i, w) in windows.iter().enumerate() {
            let inst = templates::substitute(template, p, w);
            let kind = ctr::build(self.scope, &inst)?;
            let id = s.attr("id").map(|id| format!("{id}[{i}]"));
            out.push(self.finish(s, kind, id, member_classes.clone(), note)?);
        }
        Ok(())
    }

    fn objectives(&mut self, o: &RawElement) -> Result<Option<Objective>, Diagnostic> {
        if o.attr("combination").is_some() {
            self.warn
                .unsupported(o, "multi-objective `combination` is not part of XCSP3-core")?;
        }
        let mut found = Vec::new();
        for c in &o.children {
            match c.tag.as_str() {
                "minimize" | "maximize" => found.push(c),
                _ => self.warn.unknown(c, "only `minimize` and `maximize` are allowed")?,
            }
        }
        if found.len() > 1 {
            return Err(o.err(
                Rule::ObjectiveCount,
                format!("XCSP3-core allows one objective, found {}", found.len()),
            ));
        }
        let Some(elt) = found.first() else {
            return Ok(None);
        };
        let sense = if elt.tag == "minimize" {
            Sense::Minimize
        } else {
            Sense::Maximize
        };
        let form = match elt.attr("type") {
            None | Some("expression") => {
                if !elt.children.is_empty() {
                    return Err(elt.err(Rule::UnexpectedElement, "an expression objective has no child elements"));
                }
                ObjectiveForm::Expression(text::expr(elt, elt.trimmed())?)
            }
            Some(t) => {
                let Some(kind) = ObjKind::parse(t) else {
                    self.warn
                        .unsupported(elt, format!("objective type `{t}` is not part of XCSP3-core"))?;
                    return Ok(None);
                };
                let (list_elt, coeffs_elt) = if elt.children.is_empty() {
                    (&**elt, None)
                } else {
                    for c in &elt.children {
                        if c.tag != "list" && c.tag != "coeffs" {
                            return Err(c.err(Rule::UnexpectedElement, format!("`{}` is not allowed here", c.tag)));
                        }
                    }
                    let list = elt
                        .child("list")
                        .ok_or_else(|| elt.err(Rule::MissingElement, "element `list` is required"))?;
                    (list, elt.child("coeffs"))
                };
                let list = self.scope.expr_list(list_elt)?;
                let coeffs = match coeffs_elt {
                    Some(c) => {
                        let cs = text::ints_vxk(c)?;
                        if cs.len() != list.len() {
                            return Err(c.err(
                                Rule::LengthMismatch,
                                format!("coeffs: expected {} entries, found {}", list.len(), cs.len()),
                            ));
                        }
                        Some(cs)
                    }
                    None => None,
                };
                ObjectiveForm::Specialized { kind, list, coeffs }
            }
        };
        let obj = Objective {
            id: elt.attr("id").map(str::to_string),
            sense,
            form,
        };
        for v in obj.scope() {
            self.check_usable(elt, &v)?;
        }
        Ok(Some(obj))
    }

    fn annotations(&mut self, a: &RawElement) -> Result<Option<Vec<String>>, Diagnostic> {
        let mut decision = None;
        for c in &a.children {
            if c.tag == "decision" {
                if decision.is_some() {
                    return Err(c.err(Rule::UnexpectedElement, "duplicate `decision`"));
                }
                let vs = self.scope.var_list(c)?;
                for v in &vs {
                    self.check_usable(c, v)?;
                }
                decision = Some(vs);
            } else {
                self.warn.unknown(c, "only `decision` annotations are supported")?;
            }
        }
        Ok(decision)
    }
}
