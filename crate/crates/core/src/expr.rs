//! Functional expressions: parsing, printing, evaluation and template
//! parameter substitution.

use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::model::{Env, Value};

/// Operators of the core expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Neg,
    Abs,
    Sqr,
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Pow,
    Min,
    Max,
    Dist,
    If,
    Lt,
    Le,
    Ge,
    Gt,
    Ne,
    Eq,
    In,
    Not,
    And,
    Or,
    Xor,
    Iff,
    Imp,
}

/// Number of operands an operator accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn accepts(&self, n: usize) -> bool {
        match *self {
            Arity::Exactly(k) => n == k,
            Arity::AtLeast(k) => n >= k,
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exactly(k) => write!(f, "exactly {k}"),
            Arity::AtLeast(k) => write!(f, "at least {k}"),
        }
    }
}

const OPS: [Op; 26] = [
    Op::Neg,
    Op::Abs,
    Op::Sqr,
    Op::Add,
    Op::Sub,
    Op::Mul,
    Op::Div,
    Op::Mod,
    Op::Pow,
    Op::Min,
    Op::Max,
    Op::Dist,
    Op::If,
    Op::Lt,
    Op::Le,
    Op::Ge,
    Op::Gt,
    Op::Ne,
    Op::Eq,
    Op::In,
    Op::Not,
    Op::And,
    Op::Or,
    Op::Xor,
    Op::Iff,
    Op::Imp,
];

impl Op {
    pub fn all() -> &'static [Op] {
        &OPS
    }

    pub fn name(&self) -> &'static str {
        match self {
            Op::Neg => "neg",
            Op::Abs => "abs",
            Op::Sqr => "sqr",
            Op::Add => "add",
            Op::Sub => "sub",
            Op::Mul => "mul",
            Op::Div => "div",
            Op::Mod => "mod",
            Op::Pow => "pow",
            Op::Min => "min",
            Op::Max => "max",
            Op::Dist => "dist",
            Op::If => "if",
            Op::Lt => "lt",
            Op::Le => "le",
            Op::Ge => "ge",
            Op::Gt => "gt",
            Op::Ne => "ne",
            Op::Eq => "eq",
            Op::In => "in",
            Op::Not => "not",
            Op::And => "and",
            Op::Or => "or",
            Op::Xor => "xor",
            Op::Iff => "iff",
            Op::Imp => "imp",
        }
    }

    pub fn from_name(name: &str) -> Option<Op> {
        OPS.iter().copied().find(|op| op.name() == name)
    }

    pub fn arity(&self) -> Arity {
        match self {
            Op::Neg | Op::Abs | Op::Sqr | Op::Not => Arity::Exactly(1),
            Op::Sub
            | Op::Div
            | Op::Mod
            | Op::Pow
            | Op::Dist
            | Op::Lt
            | Op::Le
            | Op::Ge
            | Op::Gt
            | Op::Ne
            | Op::In
            | Op::Imp => Arity::Exactly(2),
            Op::If => Arity::Exactly(3),
            Op::Add | Op::Mul | Op::Min | Op::Max | Op::Eq | Op::And | Op::Or | Op::Xor | Op::Iff => {
                Arity::AtLeast(2)
            }
        }
    }

    /// True for operators whose result is always 0 or 1.
    pub fn is_boolean(&self) -> bool {
        matches!(
            self,
            Op::Lt
                | Op::Le
                | Op::Ge
                | Op::Gt
                | Op::Ne
                | Op::Eq
                | Op::In
                | Op::Not
                | Op::And
                | Op::Or
                | Op::Xor
                | Op::Iff
                | Op::Imp
        )
    }
}

/// An expression tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(i64),
    Var(String),
    /// `%k`
    Param(usize),
    /// `%...`
    ParamRest,
    /// `set(...)`; only legal as the second operand of `in`.
    Set(Vec<i64>),
    Call(Op, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("whitespace at offset {offset} is not allowed inside a functional expression")]
    Whitespace { offset: usize },
    #[error("syntax error at offset {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("operator `{op}` expects {expected} operands, got {found}")]
    Arity {
        op: &'static str,
        expected: Arity,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable `{0}` is not assigned")]
    UnboundVariable(String),
    #[error("variable `{0}` is assigned `*`")]
    StarValue(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative exponent")]
    NegativeExponent,
    #[error("integer overflow")]
    Overflow,
    #[error("template parameter left unsubstituted")]
    UnresolvedParam,
    #[error("set literal used outside `in`")]
    MisplacedSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstError {
    #[error("parameter %{0} has no matching argument")]
    MissingArgument(usize),
    #[error("`%...` cannot occur inside a functional expression")]
    RestInsideExpression,
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, b: u8) -> Result<(), ParseError> {
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", b as char)))
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(self.err("expected digits"));
        }
        self.src[start..self.pos].parse().map_err(|_| ParseError::Syntax {
            offset: start,
            msg: "integer out of range".into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => Err(self.err("unexpected end of expression")),
            Some(b'%') => {
                self.pos += 1;
                if self.src[self.pos..].starts_with("...") {
                    self.pos += 3;
                    return Ok(Expr::ParamRest);
                }
                let start = self.pos;
                while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.err("expected parameter index after `%`"));
                }
                self.src[start..self.pos]
                    .parse()
                    .map(Expr::Param)
                    .map_err(|_| self.err("parameter index out of range"))
            }
            Some(b'+' | b'-' | b'0'..=b'9') => self.integer().map(Expr::Int),
            Some(b) if b.is_ascii_alphabetic() => {
                let start = self.pos;
                while self
                    .peek()
                    .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
                {
                    self.pos += 1;
                }
                let name = &self.src[start..self.pos];
                if self.peek() == Some(b'(') {
                    return self.call(name, start);
                }
                while self.peek() == Some(b'[') {
                    self.pos += 1;
                    let d = self.pos;
                    while self.peek().is_some_and(|b| b.is_ascii_digit()) {
                        self.pos += 1;
                    }
                    if d == self.pos {
                        return Err(self.err("expected index"));
                    }
                    self.expect(b']')?;
                }
                Ok(Expr::Var(self.src[start..self.pos].to_string()))
            }
            Some(b) => Err(self.err(format!("unexpected character `{}`", b as char))),
        }
    }

    fn set_literal(&mut self) -> Result<Expr, ParseError> {
        if !self.src[self.pos..].starts_with("set(") {
            return Err(self.err("`in` expects a `set(...)` literal as second operand"));
        }
        self.pos += 4;
        let mut vals = Vec::new();
        if self.peek() == Some(b')') {
            self.pos += 1;
            return Ok(Expr::Set(vals));
        }
        loop {
            vals.push(self.integer()?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    return Ok(Expr::Set(vals));
                }
                _ => return Err(self.err("expected `,` or `)` in set literal")),
            }
        }
    }

    fn call(&mut self, name: &str, start: usize) -> Result<Expr, ParseError> {
        let op = Op::from_name(name).ok_or(ParseError::Syntax {
            offset: start,
            msg: format!("unknown operator `{name}`"),
        })?;
        self.expect(b'(')?;
        let mut args = Vec::new();
        loop {
            if op == Op::In && args.len() == 1 {
                args.push(self.set_literal()?);
            } else {
                args.push(self.expr()?);
            }
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected `,` or `)`")),
            }
        }
        if !op.arity().accepts(args.len()) {
            return Err(ParseError::Arity {
                op: op.name(),
                expected: op.arity(),
                found: args.len(),
            });
        }
        Ok(Expr::Call(op, args))
    }
}

/// Parses a functional expression. Whitespace anywhere inside the text is
/// rejected; callers trim element content beforehand.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    if let Some(offset) = text.find(|c: char| c.is_whitespace()) {
        return Err(ParseError::Whitespace { offset });
    }
    let mut p = Parser {
        src: text,
        bytes: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    if p.pos != text.len() {
        return Err(p.err("trailing characters"));
    }
    Ok(e)
}

fn truth(b: bool) -> i64 {
    b as i64
}

fn checked_pow(base: i64, exp: i64) -> Result<i64, EvalError> {
    if exp < 0 {
        return Err(EvalError::NegativeExponent);
    }
    match base {
        0 => Ok(if exp == 0 { 1 } else { 0 }),
        1 => Ok(1),
        -1 => Ok(if exp % 2 == 0 { 1 } else { -1 }),
        _ => {
            let exp = u32::try_from(exp).map_err(|_| EvalError::Overflow)?;
            base.checked_pow(exp).ok_or(EvalError::Overflow)
        }
    }
}

impl Expr {
    pub fn var(id: impl Into<String>) -> Expr {
        Expr::Var(id.into())
    }

    pub fn call(op: Op, args: Vec<Expr>) -> Expr {
        Expr::Call(op, args)
    }

    /// Evaluates the expression; booleans are 0 and 1.
    pub fn eval(&self, env: &dyn Env) -> Result<i64, EvalError> {
        match self {
            Expr::Int(v) => Ok(*v),
            Expr::Var(id) => match env.lookup(id) {
                Some(Value::Int(v)) => Ok(v),
                Some(Value::Star) => Err(EvalError::StarValue(id.clone())),
                None => Err(EvalError::UnboundVariable(id.clone())),
            },
            Expr::Param(_) | Expr::ParamRest => Err(EvalError::UnresolvedParam),
            Expr::Set(_) => Err(EvalError::MisplacedSet),
            Expr::Call(op, args) => eval_call(*op, args, env),
        }
    }

    /// Ids of referenced variables in first-occurrence order.
    pub fn free_vars(&self) -> Vec<String> {
        let mut set = IndexSet::new();
        self.collect_vars(&mut set);
        set.into_iter().collect()
    }

    fn collect_vars(&self, out: &mut IndexSet<String>) {
        match self {
            Expr::Var(id) => {
                out.insert(id.clone());
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
            _ => {}
        }
    }

    /// Highest `%k` index plus one, or 0 when the expression has no `%k`.
    pub fn param_count(&self) -> usize {
        match self {
            Expr::Param(k) => k + 1,
            Expr::Call(_, args) => args.iter().map(Expr::param_count).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn has_params(&self) -> bool {
        match self {
            Expr::Param(_) | Expr::ParamRest => true,
            Expr::Call(_, args) => args.iter().any(Expr::has_params),
            _ => false,
        }
    }

    pub fn has_rest(&self) -> bool {
        match self {
            Expr::ParamRest => true,
            Expr::Call(_, args) => args.iter().any(Expr::has_rest),
            _ => false,
        }
    }

    /// Rewrites each variable for which `map` returns a replacement.
    pub fn rename(&self, map: &dyn Fn(&str) -> Option<Expr>) -> Expr {
        match self {
            Expr::Var(id) => map(id).unwrap_or_else(|| self.clone()),
            Expr::Call(op, args) => Expr::Call(*op, args.iter().map(|a| a.rename(map)).collect()),
            _ => self.clone(),
        }
    }
}

fn eval_call(op: Op, args: &[Expr], env: &dyn Env) -> Result<i64, EvalError> {
    // lazy branches first
    if op == Op::If {
        let c = args[0].eval(env)?;
        return if c != 0 { args[1].eval(env) } else { args[2].eval(env) };
    }
    if op == Op::In {
        let v = args[0].eval(env)?;
        return match &args[1] {
            Expr::Set(vals) => Ok(truth(vals.contains(&v))),
            _ => Err(EvalError::MisplacedSet),
        };
    }
    let vals = args
        .iter()
        .map(|a| a.eval(env))
        .collect::<Result<Vec<i64>, _>>()?;
    let ovf = EvalError::Overflow;
    Ok(match op {
        Op::Neg => vals[0].checked_neg().ok_or(ovf)?,
        Op::Abs => vals[0].checked_abs().ok_or(ovf)?,
        Op::Sqr => vals[0].checked_mul(vals[0]).ok_or(ovf)?,
        Op::Add => vals
            .iter()
            .try_fold(0i64, |acc, v| acc.checked_add(*v))
            .ok_or(ovf)?,
        Op::Mul => vals
            .iter()
            .try_fold(1i64, |acc, v| acc.checked_mul(*v))
            .ok_or(ovf)?,
        Op::Sub => vals[0].checked_sub(vals[1]).ok_or(ovf)?,
        Op::Div => {
            if vals[1] == 0 {
                return Err(EvalError::DivisionByZero);
            }
            vals[0].checked_div(vals[1]).ok_or(ovf)?
        }
        Op::Mod => {
            if vals[1] == 0 {
                return Err(EvalError::DivisionByZero);
            }
            vals[0].checked_rem(vals[1]).ok_or(ovf)?
        }
        Op::Pow => checked_pow(vals[0], vals[1])?,
        Op::Min => *vals.iter().min().expect("arity checked"),
        Op::Max => *vals.iter().max().expect("arity checked"),
        Op::Dist => {
            let d = vals[0] as i128 - vals[1] as i128;
            i64::try_from(d.abs()).map_err(|_| ovf)?
        }
        Op::Lt => truth(vals[0] < vals[1]),
        Op::Le => truth(vals[0] <= vals[1]),
        Op::Ge => truth(vals[0] >= vals[1]),
        Op::Gt => truth(vals[0] > vals[1]),
        Op::Ne => truth(vals[0] != vals[1]),
        Op::Eq => truth(vals.windows(2).all(|w| w[0] == w[1])),
        Op::Not => truth(vals[0] == 0),
        Op::And => truth(vals.iter().all(|v| *v != 0)),
        Op::Or => truth(vals.iter().any(|v| *v != 0)),
        Op::Xor => truth(vals.iter().filter(|v| **v != 0).count() % 2 == 1),
        Op::Iff => truth(vals.windows(2).all(|w| (w[0] != 0) == (w[1] != 0))),
        Op::Imp => truth(vals[0] == 0 || vals[1] != 0),
        Op::If | Op::In => unreachable!("handled above"),
    })
}

/// Evaluates `e` under `env`.
pub fn eval_expr(e: &Expr, env: &dyn Env) -> Result<i64, EvalError> {
    e.eval(env)
}

/// Replaces each `%k` by `args[k]`.
pub fn substitute_params(template: &Expr, args: &[Expr]) -> Result<Expr, SubstError> {
    match template {
        Expr::Param(k) => args.get(*k).cloned().ok_or(SubstError::MissingArgument(*k)),
        Expr::ParamRest => Err(SubstError::RestInsideExpression),
        Expr::Call(op, children) => Ok(Expr::Call(
            *op,
            children
                .iter()
                .map(|c| substitute_params(c, args))
                .collect::<Result<_, _>>()?,
        )),
        other => Ok(other.clone()),
    }
}

/// Variables of `e` in first-occurrence order.
pub fn free_vars(e: &Expr) -> Vec<String> {
    e.free_vars()
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Var(id) => f.write_str(id),
            Expr::Param(k) => write!(f, "%{k}"),
            Expr::ParamRest => f.write_str("%..."),
            Expr::Set(vals) => {
                f.write_str("set(")?;
                for (i, v) in vals.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
            Expr::Call(op, args) => {
                write!(f, "{}(", op.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Instantiation;

    fn env(pairs: &[(&str, i64)]) -> Instantiation {
        Instantiation::from_pairs(pairs.iter().map(|(k, v)| (*k, Value::Int(*v)))).unwrap()
    }

    fn v(id: &str) -> Expr {
        Expr::var(id)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse_expr("eq(add(x,y),z)").unwrap(),
            Expr::call(Op::Eq, vec![Expr::call(Op::Add, vec![v("x"), v("y")]), v("z")])
        );
        let cake = parse_expr("le(add(mul(250,b),mul(200,c)),4000)").unwrap();
        assert_eq!(cake.free_vars(), vec!["b", "c"]);
        assert_eq!(
            parse_expr("add(x,y )"),
            Err(ParseError::Whitespace { offset: 7 })
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_expr("sub(x)"), Err(ParseError::Arity { op: "sub", .. })));
        assert!(matches!(parse_expr("add(x)"), Err(ParseError::Arity { .. })));
        assert!(matches!(parse_expr("foo(x,y)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("add(x,y"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("add(x,y))"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("in(x,y)"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr(""), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse_expr("x[]"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn parse_indexed_and_params() {
        assert_eq!(
            parse_expr("eq(x[1][2],%0)").unwrap(),
            Expr::call(Op::Eq, vec![v("x[1][2]"), Expr::Param(0)])
        );
        assert_eq!(
            parse_expr("in(x,set(1,-3))").unwrap(),
            Expr::call(Op::In, vec![v("x"), Expr::Set(vec![1, -3])])
        );
        assert_eq!(parse_expr("%...").unwrap(), Expr::ParamRest);
    }

    #[test]
    fn eval_examples() {
        let e = parse_expr("eq(add(x,y),z)").unwrap();
        assert_eq!(e.eval(&env(&[("x", 1), ("y", 2), ("z", 3)])), Ok(1));
        let obj = parse_expr("add(mul(b,400),mul(c,450))").unwrap();
        assert_eq!(obj.eval(&env(&[("b", 2), ("c", 2)])), Ok(1700));
        let d = parse_expr("dist(x,y)").unwrap();
        assert_eq!(d.eval(&env(&[("x", 3), ("y", 7)])), Ok(4));
    }

    #[test]
    fn eval_conventions() {
        let e = Instantiation::new();
        let ev = |s: &str| parse_expr(s).unwrap().eval(&e);
        assert_eq!(ev("div(-7,2)"), Ok(-3));
        assert_eq!(ev("mod(-7,2)"), Ok(-1));
        assert_eq!(ev("mod(7,-2)"), Ok(1));
        assert_eq!(ev("pow(0,0)"), Ok(1));
        assert_eq!(ev("pow(-2,3)"), Ok(-8));
        assert_eq!(ev("pow(2,-1)"), Err(EvalError::NegativeExponent));
        assert_eq!(ev("div(1,0)"), Err(EvalError::DivisionByZero));
        assert_eq!(ev("mod(1,0)"), Err(EvalError::DivisionByZero));
        assert_eq!(ev("pow(2,64)"), Err(EvalError::Overflow));
        assert_eq!(ev("mul(9223372036854775807,2)"), Err(EvalError::Overflow));
        assert_eq!(ev("neg(-9223372036854775808)"), Err(EvalError::Overflow));
        assert_eq!(ev("eq(1,1,1)"), Ok(1));
        assert_eq!(ev("eq(1,1,2)"), Ok(0));
        assert_eq!(ev("xor(1,1,1)"), Ok(1));
        assert_eq!(ev("iff(0,0,0)"), Ok(1));
        assert_eq!(ev("imp(0,0)"), Ok(1));
        assert_eq!(ev("if(0,div(1,0),5)"), Ok(5));
        assert_eq!(ev("in(3,set(1,3))"), Ok(1));
        assert_eq!(ev("min(4,-2,9)"), Ok(-2));
    }

    #[test]
    fn eval_unbound_and_star() {
        let e = parse_expr("add(x,1)").unwrap();
        assert_eq!(
            e.eval(&Instantiation::new()),
            Err(EvalError::UnboundVariable("x".into()))
        );
        let star = Instantiation::from_pairs([("x", Value::Star)]).unwrap();
        assert_eq!(e.eval(&star), Err(EvalError::StarValue("x".into())));
    }

    #[test]
    fn substitution_examples() {
        let t = parse_expr("eq(add(%0,%1),%2)").unwrap();
        let got = substitute_params(&t, &[v("x0"), v("x1"), v("x2")]).unwrap();
        assert_eq!(got, parse_expr("eq(add(x0,x1),x2)").unwrap());
        assert_eq!(
            substitute_params(&Expr::Param(0), &[Expr::Int(5)]).unwrap(),
            Expr::Int(5)
        );
        let t = parse_expr("le(add(mul(%0,%1),mul(%2,%3)),%4)").unwrap();
        let args = [Expr::Int(250), v("b"), Expr::Int(200), v("c"), Expr::Int(4000)];
        assert_eq!(
            substitute_params(&t, &args).unwrap(),
            parse_expr("le(add(mul(250,b),mul(200,c)),4000)").unwrap()
        );
        assert_eq!(
            substitute_params(&t, &args[..3]),
            Err(SubstError::MissingArgument(3))
        );
        assert_eq!(
            substitute_params(&parse_expr("add(%...,1)").unwrap(), &args),
            Err(SubstError::RestInsideExpression)
        );
    }

    #[test]
    fn free_var_examples() {
        assert_eq!(free_vars(&parse_expr("eq(add(x,y),z)").unwrap()), vec!["x", "y", "z"]);
        assert!(free_vars(&Expr::Int(4)).is_empty());
        assert_eq!(free_vars(&parse_expr("ge(w,z)").unwrap()), vec!["w", "z"]);
        assert_eq!(free_vars(&parse_expr("add(y,x,y)").unwrap()), vec!["y", "x"]);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        pub(super) fn arb_expr() -> impl Strategy<Value = Expr> {
            let leaf = prop_oneof![
                (-20i64..20).prop_map(Expr::Int),
                prop::sample::select(vec!["a", "b", "c", "x[0]"]).prop_map(Expr::var),
            ];
            leaf.prop_recursive(4, 32, 4, |inner| {
                (
                    prop::sample::select(Op::all().to_vec()),
                    prop::collection::vec(inner.clone(), 3),
                    prop::collection::vec(-5i64..5, 0..4),
                )
                    .prop_map(|(op, mut kids, set)| {
                        let n = match op.arity() {
                            Arity::Exactly(k) => k,
                            Arity::AtLeast(k) => k + (kids.len() - k).min(1),
                        };
                        kids.truncate(n);
                        if op == Op::In {
                            kids[1] = Expr::Set(set);
                        }
                        Expr::Call(op, kids)
                    })
            })
        }

        fn bool_env() -> impl Strategy<Value = Instantiation> {
            (-6i64..6, -6i64..6, -6i64..6, -6i64..6).prop_map(|(a, b, c, x)| {
                env(&[("a", a), ("b", b), ("c", c), ("x[0]", x)])
            })
        }

        proptest! {
            #[test]
            fn print_parse_round_trip(e in arb_expr()) {
                prop_assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
            }

            #[test]
            fn boolean_closure(e in arb_expr(), en in bool_env()) {
                if let Expr::Call(op, _) = &e {
                    if op.is_boolean() {
                        if let Ok(v) = e.eval(&en) {
                            prop_assert!(v == 0 || v == 1);
                        }
                    }
                }
            }

            #[test]
            fn substitution_matches_hand_expansion(e in arb_expr(), k0 in -9i64..9, k1 in -9i64..9, en in bool_env()) {
                // abstract a and b into parameters, then substitute constants back
                let template = e.rename(&|id| match id {
                    "a" => Some(Expr::Param(0)),
                    "b" => Some(Expr::Param(1)),
                    _ => None,
                });
                let hand = e.rename(&|id| match id {
                    "a" => Some(Expr::Int(k0)),
                    "b" => Some(Expr::Int(k1)),
                    _ => None,
                });
                let sub = substitute_params(&template, &[Expr::Int(k0), Expr::Int(k1)]).unwrap();
                prop_assert_eq!(&sub, &hand);
                prop_assert_eq!(sub.eval(&en), hand.eval(&en));
            }

            #[test]
            fn de_morgan(a in 0i64..2, b in 0i64..2) {
                let en = env(&[("a", a), ("b", b)]);
                let lhs = parse_expr("not(and(a,b))").unwrap().eval(&en).unwrap();
                let rhs = parse_expr("or(not(a),not(b))").unwrap().eval(&en).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
