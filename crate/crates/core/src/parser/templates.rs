//! Constraint templates: parameter scanning, substitution and slide windows.

use super::raw::RawElement;
use super::{Diagnostic, Rule};

/// Parameters used by a template: `%k` indices and whether `%...` occurs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub(crate) struct Params {
    /// Highest `%k` index plus one.
    pub count: usize,
    pub rest: bool,
}

enum Piece<'a> {
    Text(&'a str),
    Param(usize),
    Rest,
}

fn pieces(s: &str) -> Result<Vec<Piece<'_>>, String> {
    let mut out = Vec::new();
    let mut rest = s;
    while let Some(i) = rest.find('%') {
        out.push(Piece::Text(&rest[..i]));
        let after = &rest[i + 1..];
        if let Some(tail) = after.strip_prefix("...") {
            out.push(Piece::Rest);
            rest = tail;
        } else {
            let n = after.bytes().take_while(u8::is_ascii_digit).count();
            if n == 0 {
                return Err(format!("malformed parameter near `%{}`", &after[..after.len().min(8)]));
            }
            let k = after[..n].parse().map_err(|_| "parameter index too large".to_string())?;
            out.push(Piece::Param(k));
            rest = &after[n..];
        }
    }
    out.push(Piece::Text(rest));
    Ok(out)
}

pub(crate) fn params(elt: &RawElement) -> Result<Params, Diagnostic> {
    let mut p = Params::default();
    let mut err = None;
    elt.walk(&mut |e| match pieces(&e.text) {
        Ok(ps) => {
            for piece in ps {
                match piece {
                    Piece::Param(k) => p.count = p.count.max(k + 1),
                    Piece::Rest => p.rest = true,
                    Piece::Text(_) => {}
                }
            }
        }
        Err(msg) => {
            err.get_or_insert_with(|| e.err(Rule::Syntax, msg));
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(p),
    }
}

pub(crate) fn has_params(elt: &RawElement) -> bool {
    elt.all_text().contains('%')
}

/// Checks the number of arguments against the template's parameters.
pub(crate) fn check_arity(
    at: &RawElement,
    p: Params,
    nargs: usize,
) -> Result<(), Diagnostic> {
    let ok = if p.rest { nargs >= p.count } else { nargs == p.count };
    if ok {
        return Ok(());
    }
    let expected = if p.rest {
        format!("at least {}", p.count)
    } else {
        p.count.to_string()
    };
    Err(at.err(
        Rule::ArityMismatch,
        format!("template expects {expected} arguments, found {nargs}"),
    ))
}

/// Replaces `%k` by `args[k]` and `%...` by the arguments after the
/// highest indexed parameter, in every text node of the template.
pub(crate) fn substitute(template: &RawElement, p: Params, args: &[String]) -> RawElement {
    let tail = args[p.count.min(args.len())..].join(" ");
    template.map_text(&|s| {
        let Ok(ps) = pieces(s) else {
            return s.to_string();
        };
        let mut out = String::with_capacity(s.len());
        for piece in ps {
            match piece {
                Piece::Text(t) => out.push_str(t),
                Piece::Param(k) => out.push_str(&args[k]),
                Piece::Rest => out.push_str(&tail),
            }
        }
        out
    })
}

/// One list of a slide with its offset and collect count.
pub(crate) struct SlideList {
    pub vars: Vec<String>,
    pub offset: usize,
    pub collect: usize,
}

/// Argument tuples produced by sliding over `lists`.
pub(crate) fn slide_windows(
    at: &RawElement,
    lists: &[SlideList],
    arity: usize,
    circular: bool,
    collect_mode: bool,
) -> Result<Vec<Vec<String>>, Diagnostic> {
    if !collect_mode {
        let l = &lists[0];
        let n = l.vars.len();
        if arity > n {
            return Err(at.err(
                Rule::LengthMismatch,
                format!("a template of arity {arity} cannot slide over {n} variables"),
            ));
        }
        let mut out = Vec::new();
        let mut i = 0;
        if circular {
            while i < n {
                out.push((0..arity).map(|k| l.vars[(i + k) % n].clone()).collect());
                i += l.offset;
            }
        } else {
            while i + arity <= n {
                out.push(l.vars[i..i + arity].to_vec());
                i += l.offset;
            }
        }
        return Ok(out);
    }
    if circular {
        return Err(at.err(
            Rule::Unsupported,
            "circular sliding is only supported over a single list",
        ));
    }
    let total: usize = lists.iter().map(|l| l.collect).sum();
    if total != arity {
        return Err(at.err(
            Rule::ArityMismatch,
            format!("lists collect {total} variables per step but the template has arity {arity}"),
        ));
    }
    let mut steps = None;
    for l in lists {
        let n = l.vars.len();
        if n < l.collect || (n - l.collect) % l.offset != 0 {
            return Err(at.err(
                Rule::LengthMismatch,
                format!(
                    "a list of {n} variables is not exhausted evenly with offset {} and collect {}",
                    l.offset, l.collect
                ),
            ));
        }
        let s = (n - l.collect) / l.offset + 1;
        match steps {
            None => steps = Some(s),
            Some(prev) if prev != s => {
                return Err(at.err(
                    Rule::LengthMismatch,
                    format!("lists yield different numbers of steps ({prev} and {s})"),
                ))
            }
            _ => {}
        }
    }
    let steps = steps.unwrap_or(0);
    Ok((0..steps)
        .map(|w| {
            lists
                .iter()
                .flat_map(|l| l.vars[w * l.offset..w * l.offset + l.collect].iter().cloned())
                .collect()
        })
        .collect())
}
