//! Owned XML tree with element paths, checked for attribute whitespace.

use super::{Diagnostic, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct RawElement {
    pub tag: String,
    pub attrs: Vec<(String, String)>,
    pub children: Vec<RawElement>,
    /// Concatenated direct text content, untrimmed.
    pub text: String,
    pub path: String,
}

impl RawElement {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    pub fn child(&self, tag: &str) -> Option<&RawElement> {
        self.children.iter().find(|c| c.tag == tag)
    }

    pub fn children_named<'a>(&'a self, tag: &'a str) -> impl Iterator<Item = &'a RawElement> + 'a {
        self.children.iter().filter(move |c| c.tag == tag)
    }

    pub fn trimmed(&self) -> &str {
        self.text.trim()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty() && self.trimmed().is_empty()
    }

    pub fn err(&self, rule: Rule, msg: impl Into<String>) -> Diagnostic {
        Diagnostic::new(rule, &self.path, msg)
    }

    /// Calls `f` on this element and every descendant, in document order.
    pub fn walk<'a>(&'a self, f: &mut dyn FnMut(&'a RawElement)) {
        f(self);
        for c in &self.children {
            c.walk(f);
        }
    }

    /// Text of this element and all descendants.
    pub fn all_text(&self) -> String {
        let mut out = String::new();
        self.walk(&mut |e| {
            out.push_str(&e.text);
            out.push(' ');
        });
        out
    }

    /// Copy with `f` applied to every text node.
    pub fn map_text(&self, f: &dyn Fn(&str) -> String) -> RawElement {
        RawElement {
            tag: self.tag.clone(),
            attrs: self.attrs.clone(),
            children: self.children.iter().map(|c| c.map_text(f)).collect(),
            text: f(&self.text),
            path: self.path.clone(),
        }
    }
}

pub(crate) fn read_document(text: &str) -> Result<RawElement, Diagnostic> {
    let doc = roxmltree::Document::parse(text)
        .map_err(|e| Diagnostic::new(Rule::Xml, "/", e.to_string()))?;
    convert(doc.root_element(), "")
}

fn convert(node: roxmltree::Node<'_, '_>, parent: &str) -> Result<RawElement, Diagnostic> {
    let tag = node.tag_name().name().to_string();
    let mut path = format!("{parent}/{tag}");
    if let Some(id) = node.attribute("id") {
        path.push_str(&format!("[@id='{id}']"));
    } else if let Some(parent_node) = node.parent_element() {
        let same: Vec<_> = parent_node
            .children()
            .filter(|c| c.is_element() && c.tag_name().name() == tag)
            .collect();
        if same.len() > 1 {
            let k = same.iter().position(|c| *c == node).unwrap_or(0) + 1;
            path.push_str(&format!("[{k}]"));
        }
    }
    let mut attrs = Vec::new();
    for a in node.attributes() {
        let v = a.value();
        if v.trim() != v {
            return Err(Diagnostic::new(
                Rule::AttributeWhitespace,
                &path,
                format!(
                    "value of attribute `{}` has leading or trailing whitespace",
                    a.name()
                ),
            ));
        }
        attrs.push((a.name().to_string(), v.to_string()));
    }
    let mut children = Vec::new();
    let mut text = String::new();
    for c in node.children() {
        if c.is_element() {
            children.push(convert(c, &path)?);
        } else if c.is_text() {
            text.push_str(c.text().unwrap_or(""));
        }
    }
    Ok(RawElement {
        tag,
        attrs,
        children,
        text,
        path,
    })
}
