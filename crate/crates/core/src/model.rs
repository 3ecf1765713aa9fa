//! Shared domain types: domains, variables, arrays, conditions and
//! instantiations, plus the small operations every other module leans on.

use std::fmt;

use indexmap::IndexMap;
use thiserror::Error;

use crate::constraints::{ConstraintKind, Objective};

/// Errors raised by the primitive model operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("domain values out of order near `{0}`: values and intervals must be strictly increasing without repetition")]
    OutOfOrder(String),
    #[error("malformed interval `{0}`: intervals are written `lo..hi` with no whitespace and lo <= hi")]
    MalformedInterval(String),
    #[error("malformed integer `{0}`")]
    MalformedInteger(String),
    #[error("malformed compact integer token `{0}`: expected `v` or `vxk` with k > 0")]
    MalformedCompactToken(String),
    #[error("condition operand `{0}` is unassigned or `*`")]
    UnresolvedOperand(String),
    #[error("operator `{op}` cannot be paired with operand `{operand}`")]
    BadConditionOperand { op: CondOp, operand: String },
    #[error("unknown array `{0}`")]
    UnknownArray(String),
    #[error("index out of bounds in `{0}`")]
    IndexOutOfBounds(String),
    #[error("`{0}` is not a two-dimensional compact list and cannot be used as a matrix")]
    NotAMatrix(String),
    #[error("malformed variable reference `{0}`")]
    MalformedReference(String),
    #[error("variable `{0}` appears twice in an instantiation")]
    DuplicateAssignment(String),
}

/// One item of a domain: a single value or a closed interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainItem {
    Value(i64),
    Interval(i64, i64),
}

impl DomainItem {
    pub fn min(&self) -> i64 {
        match *self {
            DomainItem::Value(v) => v,
            DomainItem::Interval(lo, _) => lo,
        }
    }

    pub fn max(&self) -> i64 {
        match *self {
            DomainItem::Value(v) => v,
            DomainItem::Interval(_, hi) => hi,
        }
    }
}

impl fmt::Display for DomainItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DomainItem::Value(v) => write!(f, "{v}"),
            DomainItem::Interval(lo, hi) => write!(f, "{lo}..{hi}"),
        }
    }
}

/// An ordered union of integer values and closed intervals.
///
/// Items are strictly increasing and never overlap; the constructor rejects
/// anything else. Adjacent items such as `1..3 4` are kept as written so
/// that rendering a domain reproduces its source form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Domain {
    items: Vec<DomainItem>,
}

impl Domain {
    pub fn new(items: Vec<DomainItem>) -> Result<Self, ModelError> {
        for item in &items {
            if let DomainItem::Interval(lo, hi) = *item {
                if lo > hi {
                    return Err(ModelError::MalformedInterval(item.to_string()));
                }
            }
        }
        for pair in items.windows(2) {
            if pair[0].max() >= pair[1].min() {
                return Err(ModelError::OutOfOrder(format!("{} {}", pair[0], pair[1])));
            }
        }
        Ok(Domain { items })
    }

    pub fn interval(lo: i64, hi: i64) -> Result<Self, ModelError> {
        Domain::new(vec![DomainItem::Interval(lo, hi)])
    }

    /// Builds a domain from arbitrary values; duplicates are removed.
    pub fn from_values<I: IntoIterator<Item = i64>>(values: I) -> Self {
        let mut vals: Vec<i64> = values.into_iter().collect();
        vals.sort_unstable();
        vals.dedup();
        Domain {
            items: vals.into_iter().map(DomainItem::Value).collect(),
        }
    }

    pub fn items(&self) -> &[DomainItem] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, v: i64) -> bool {
        // items are sorted, so a binary search on the upper bound suffices
        let idx = self.items.partition_point(|it| it.max() < v);
        self.items.get(idx).is_some_and(|it| it.min() <= v)
    }

    pub fn min(&self) -> Option<i64> {
        self.items.first().map(DomainItem::min)
    }

    pub fn max(&self) -> Option<i64> {
        self.items.last().map(DomainItem::max)
    }

    /// Number of values, saturating at `u64::MAX`.
    pub fn size(&self) -> u64 {
        self.items
            .iter()
            .map(|it| match *it {
                DomainItem::Value(_) => 1u64,
                DomainItem::Interval(lo, hi) => (hi as i128 - lo as i128 + 1) as u64,
            })
            .fold(0u64, u64::saturating_add)
    }

    /// Values in ascending order.
    pub fn values(&self) -> impl Iterator<Item = i64> + '_ {
        self.items.iter().flat_map(|it| match *it {
            DomainItem::Value(v) => v..=v,
            DomainItem::Interval(lo, hi) => lo..=hi,
        })
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for item in &self.items {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

/// Membership test for a domain.
pub fn domain_contains(d: &Domain, v: i64) -> bool {
    d.contains(v)
}

/// Parses a plain integer with an optional sign (`integer` in the grammar).
pub fn parse_int(token: &str) -> Result<i64, ModelError> {
    let digits = token.strip_prefix(['+', '-']).unwrap_or(token);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(ModelError::MalformedInteger(token.to_string()));
    }
    token
        .parse::<i64>()
        .map_err(|_| ModelError::MalformedInteger(token.to_string()))
}

/// Parses `lo..hi` (no whitespace allowed).
pub fn parse_interval(token: &str) -> Result<(i64, i64), ModelError> {
    let (lo, hi) = token
        .split_once("..")
        .ok_or_else(|| ModelError::MalformedInterval(token.to_string()))?;
    let lo = parse_int(lo).map_err(|_| ModelError::MalformedInterval(token.to_string()))?;
    let hi = parse_int(hi).map_err(|_| ModelError::MalformedInterval(token.to_string()))?;
    if lo > hi {
        return Err(ModelError::MalformedInterval(token.to_string()));
    }
    Ok((lo, hi))
}

/// Parses the textual form of a domain: values and `lo..hi` intervals in
/// strictly increasing order, separated by whitespace.
pub fn parse_domain(text: &str) -> Result<Domain, ModelError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let mut items = Vec::with_capacity(tokens.len());
    for (i, tok) in tokens.iter().enumerate() {
        // `1 .. 10` and `1.. 10` leave a dangling `..` on some token
        if *tok == ".." || tok.starts_with("..") || tok.ends_with("..") {
            let ctx = tokens[i.saturating_sub(1)..(i + 2).min(tokens.len())].join(" ");
            return Err(ModelError::MalformedInterval(ctx));
        }
        if tok.contains("..") {
            let (lo, hi) = parse_interval(tok)?;
            items.push(DomainItem::Interval(lo, hi));
        } else {
            items.push(DomainItem::Value(parse_int(tok)?));
        }
    }
    Domain::new(items)
}

/// Expands `vxk` compact integer sequences.
pub fn expand_vxk<S: AsRef<str>>(tokens: &[S]) -> Result<Vec<i64>, ModelError> {
    let mut out = Vec::with_capacity(tokens.len());
    for tok in tokens {
        let tok = tok.as_ref();
        match tok.split_once('x') {
            None => out.push(parse_int(tok)?),
            Some((v, k)) => {
                let bad = || ModelError::MalformedCompactToken(tok.to_string());
                let v = parse_int(v).map_err(|_| bad())?;
                if k.starts_with(['+', '-']) {
                    return Err(bad());
                }
                let k = parse_int(k).map_err(|_| bad())?;
                if k <= 0 {
                    return Err(bad());
                }
                out.extend(std::iter::repeat_n(v, k as usize));
            }
        }
    }
    Ok(out)
}

/// Relational or set operator of a condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CondOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
    In,
    NotIn,
}

impl CondOp {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "lt" => CondOp::Lt,
            "le" => CondOp::Le,
            "gt" => CondOp::Gt,
            "ge" => CondOp::Ge,
            "eq" => CondOp::Eq,
            "ne" => CondOp::Ne,
            "in" => CondOp::In,
            "notin" => CondOp::NotIn,
            _ => return None,
        })
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CondOp::Lt => "lt",
            CondOp::Le => "le",
            CondOp::Gt => "gt",
            CondOp::Ge => "ge",
            CondOp::Eq => "eq",
            CondOp::Ne => "ne",
            CondOp::In => "in",
            CondOp::NotIn => "notin",
        }
    }

    pub fn is_set_op(&self) -> bool {
        matches!(self, CondOp::In | CondOp::NotIn)
    }

    /// Applies a relational operator to two integers. Set operators are not
    /// meaningful here and always return false.
    pub fn compare(&self, lhs: i64, rhs: i64) -> bool {
        match self {
            CondOp::Lt => lhs < rhs,
            CondOp::Le => lhs <= rhs,
            CondOp::Gt => lhs > rhs,
            CondOp::Ge => lhs >= rhs,
            CondOp::Eq => lhs == rhs,
            CondOp::Ne => lhs != rhs,
            CondOp::In | CondOp::NotIn => false,
        }
    }
}

impl fmt::Display for CondOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Right operand of a condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Operand {
    Value(i64),
    Var(String),
    Interval(i64, i64),
    Set(Vec<i64>),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Value(v) => write!(f, "{v}"),
            Operand::Var(x) => f.write_str(x),
            Operand::Interval(lo, hi) => write!(f, "{lo}..{hi}"),
            Operand::Set(vals) => {
                f.write_str("set(")?;
                for (i, v) in vals.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A numerical condition `(op,operand)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Condition {
    op: CondOp,
    operand: Operand,
}

impl Condition {
    pub fn new(op: CondOp, operand: Operand) -> Result<Self, ModelError> {
        let ok = match operand {
            Operand::Value(_) | Operand::Var(_) => !op.is_set_op(),
            Operand::Interval(..) | Operand::Set(_) => op.is_set_op(),
        };
        if !ok {
            return Err(ModelError::BadConditionOperand {
                op,
                operand: operand.to_string(),
            });
        }
        Ok(Condition { op, operand })
    }

    pub fn op(&self) -> CondOp {
        self.op
    }

    pub fn operand(&self) -> &Operand {
        &self.operand
    }

    /// Variable referenced by the operand, if any.
    pub fn var(&self) -> Option<&str> {
        match &self.operand {
            Operand::Var(x) => Some(x),
            _ => None,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.op, self.operand)
    }
}

/// Value assigned to a variable in an instantiation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Value {
    Int(i64),
    Star,
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Star => f.write_str("*"),
        }
    }
}

/// Read access to (possibly partial) variable assignments.
pub trait Env {
    fn lookup(&self, var: &str) -> Option<Value>;
}

/// Variable id → value mapping, in insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Instantiation {
    assignments: IndexMap<String, Value>,
}

impl Instantiation {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an instantiation from parallel lists; a repeated variable is an error.
    pub fn from_pairs<I, S>(pairs: I) -> Result<Self, ModelError>
    where
        I: IntoIterator<Item = (S, Value)>,
        S: Into<String>,
    {
        let mut inst = Instantiation::new();
        for (var, val) in pairs {
            inst.assign(var, val)?;
        }
        Ok(inst)
    }

    pub fn assign(&mut self, var: impl Into<String>, val: Value) -> Result<(), ModelError> {
        let var = var.into();
        if self.assignments.contains_key(&var) {
            return Err(ModelError::DuplicateAssignment(var));
        }
        self.assignments.insert(var, val);
        Ok(())
    }

    pub fn get(&self, var: &str) -> Option<Value> {
        self.assignments.get(var).copied()
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Value)> {
        self.assignments.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl Env for Instantiation {
    fn lookup(&self, var: &str) -> Option<Value> {
        self.get(var)
    }
}

/// Resolves a condition operand and tests `lhs op operand`.
pub fn eval_condition(lhs: i64, cond: &Condition, env: &dyn Env) -> Result<bool, ModelError> {
    Ok(match &cond.operand {
        Operand::Value(k) => cond.op.compare(lhs, *k),
        Operand::Var(x) => match env.lookup(x) {
            Some(Value::Int(k)) => cond.op.compare(lhs, k),
            _ => return Err(ModelError::UnresolvedOperand(x.clone())),
        },
        Operand::Interval(lo, hi) => {
            let inside = *lo <= lhs && lhs <= *hi;
            if cond.op == CondOp::In {
                inside
            } else {
                !inside
            }
        }
        Operand::Set(vals) => {
            let inside = vals.contains(&lhs);
            if cond.op == CondOp::In {
                inside
            } else {
                !inside
            }
        }
    })
}

/// A stand-alone variable or an array cell. `domain` is `None` for cells
/// left undefined by mixed-domain arrays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub id: String,
    pub domain: Option<Domain>,
    pub note: Option<String>,
}

impl Variable {
    pub fn is_defined(&self) -> bool {
        self.domain.is_some()
    }
}

/// A k-dimensional array. Its cells are stored contiguously, in row-major
/// order, in [`Instance::variables`] starting at `first`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarArray {
    pub id: String,
    pub dims: Vec<usize>,
    pub first: usize,
    pub note: Option<String>,
}

impl VarArray {
    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Qualified id of the cell at `index`, e.g. `x[1][2]`.
    pub fn cell_id(&self, index: &[usize]) -> String {
        let mut id = self.id.clone();
        for i in index {
            id.push('[');
            id.push_str(&i.to_string());
            id.push(']');
        }
        id
    }

    /// Row-major offset of `index` within the array, if in bounds.
    pub fn offset(&self, index: &[usize]) -> Option<usize> {
        if index.len() != self.dims.len() {
            return None;
        }
        let mut off = 0;
        for (i, d) in index.iter().zip(&self.dims) {
            if i >= d {
                return None;
            }
            off = off * d + i;
        }
        Some(off)
    }

    /// All index tuples in lexicographic order.
    pub fn indices(&self) -> Vec<Vec<usize>> {
        product_indices(&self.dims.iter().map(|&d| (0, d - 1)).collect::<Vec<_>>())
    }
}

fn product_indices(ranges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        let mut next = Vec::with_capacity(out.len() * (hi - lo + 1));
        for prefix in &out {
            for i in lo..=hi {
                let mut t = prefix.clone();
                t.push(i);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

/// Expansion context for compact array references.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ListContext {
    List,
    Matrix,
}

/// Result of expanding a compact reference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expanded {
    List(Vec<String>),
    Rows(Vec<Vec<String>>),
}

/// One bracketed index slot of a compact reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    All,
    One(usize),
    Range(usize, usize),
}

/// Splits `x[2..3][]` into its base name and raw slot texts.
pub(crate) fn split_reference(token: &str) -> Option<(&str, Vec<&str>)> {
    let base_end = token.find('[').unwrap_or(token.len());
    let base = &token[..base_end];
    if !is_identifier(base) {
        return None;
    }
    let mut slots = Vec::new();
    let mut rest = &token[base_end..];
    while !rest.is_empty() {
        let inner = rest.strip_prefix('[')?;
        let close = inner.find(']')?;
        slots.push(&inner[..close]);
        rest = &inner[close + 1..];
    }
    Some((base, slots))
}

/// `letter (letter | digit | "_")*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `identifier [indexing]` with plain unsigned indices.
pub fn is_variable_id(s: &str) -> bool {
    match split_reference(s) {
        Some((_, slots)) => slots
            .iter()
            .all(|sl| !sl.is_empty() && sl.bytes().all(|b| b.is_ascii_digit())),
        None => false,
    }
}

/// Converts `x[0][3]` into `x_0_3` for exporting sub-networks.
pub fn flat_export_id(id: &str) -> String {
    let mut out = String::with_capacity(id.len());
    for c in id.chars() {
        match c {
            '[' => out.push('_'),
            ']' => {}
            c => out.push(c),
        }
    }
    out
}

fn parse_slot(raw: &str, token: &str) -> Result<Slot, ModelError> {
    let bad = || ModelError::MalformedReference(token.to_string());
    if raw.is_empty() {
        return Ok(Slot::All);
    }
    let unsigned = |s: &str| -> Result<usize, ModelError> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    match raw.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (unsigned(lo)?, unsigned(hi)?);
            if lo > hi {
                return Err(bad());
            }
            Ok(Slot::Range(lo, hi))
        }
        None => Ok(Slot::One(unsigned(raw)?)),
    }
}

/// Expands a compact list of array variables such as `y[2..3][]`.
///
/// In list context the cells come in lexicographic order of their index
/// tuples. In matrix context the reference must be two-dimensional and the
/// result is one row per first-dimension index.
pub fn expand_compact_variable_list(
    token: &str,
    arrays: &[VarArray],
    ctx: ListContext,
) -> Result<Expanded, ModelError> {
    let (base, raw_slots) =
        split_reference(token).ok_or_else(|| ModelError::MalformedReference(token.to_string()))?;
    let array = arrays
        .iter()
        .find(|a| a.id == base)
        .ok_or_else(|| ModelError::UnknownArray(base.to_string()))?;
    if raw_slots.len() != array.dims.len() {
        return Err(ModelError::IndexOutOfBounds(token.to_string()));
    }
    let mut ranges = Vec::with_capacity(raw_slots.len());
    for (raw, &dim) in raw_slots.iter().zip(&array.dims) {
        let (lo, hi) = match parse_slot(raw, token)? {
            Slot::All => (0, dim - 1),
            Slot::One(i) => (i, i),
            Slot::Range(lo, hi) => (lo, hi),
        };
        if hi >= dim {
            return Err(ModelError::IndexOutOfBounds(token.to_string()));
        }
        ranges.push((lo, hi));
    }
    match ctx {
        ListContext::List => Ok(Expanded::List(
            product_indices(&ranges)
                .iter()
                .map(|ix| array.cell_id(ix))
                .collect(),
        )),
        ListContext::Matrix => {
            if ranges.len() != 2 {
                return Err(ModelError::NotAMatrix(token.to_string()));
            }
            let rows = (ranges[0].0..=ranges[0].1)
                .map(|i| {
                    (ranges[1].0..=ranges[1].1)
                        .map(|j| array.cell_id(&[i, j]))
                        .collect()
                })
                .collect();
            Ok(Expanded::Rows(rows))
        }
    }
}

/// CSP or COP.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Framework {
    Csp,
    Cop,
}

impl Framework {
    pub fn as_str(&self) -> &'static str {
        match self {
            Framework::Csp => "CSP",
            Framework::Cop => "COP",
        }
    }
}

/// A constraint of the normalized instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub id: Option<String>,
    /// Classes inherited from enclosing blocks, outermost first, then the
    /// constraint's own `class` tokens.
    pub classes: Vec<String>,
    pub note: Option<String>,
    pub kind: ConstraintKind,
}

impl Constraint {
    pub fn new(kind: ConstraintKind) -> Self {
        Constraint {
            id: None,
            classes: Vec::new(),
            note: None,
            kind,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }
}

/// A normalized XCSP3-core instance: aliases resolved, arrays materialized,
/// groups, slides and blocks flattened.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub framework: Framework,
    /// Stand-alone variables and array cells, in declaration order.
    pub variables: Vec<Variable>,
    pub arrays: Vec<VarArray>,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Objective>,
    pub decision: Option<Vec<String>>,
    index: std::collections::HashMap<String, usize>,
}

impl Instance {
    pub fn new(
        framework: Framework,
        variables: Vec<Variable>,
        arrays: Vec<VarArray>,
        constraints: Vec<Constraint>,
        objective: Option<Objective>,
        decision: Option<Vec<String>>,
    ) -> Self {
        let index = variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        Instance {
            framework,
            variables,
            arrays,
            constraints,
            objective,
            decision,
            index,
        }
    }

    pub fn variable(&self, id: &str) -> Option<&Variable> {
        self.index.get(id).map(|&i| &self.variables[i])
    }

    pub fn variable_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Label used in reports: the constraint id, or `#k` for the k-th
    /// anonymous constraint of the flat list.
    pub fn constraint_label(&self, pos: usize) -> String {
        match &self.constraints[pos].id {
            Some(id) => id.clone(),
            None => format!("#{pos}"),
        }
    }

    /// Variables referenced by at least one constraint or the objective.
    pub fn useful_variables(&self) -> std::collections::HashSet<String> {
        let mut set = std::collections::HashSet::new();
        for c in &self.constraints {
            set.extend(c.kind.scope());
        }
        if let Some(obj) = &self.objective {
            set.extend(obj.scope());
        }
        set
    }

    /// Keeps only the constraints for which `keep` returns true.
    pub fn retain_constraints<F: FnMut(&Constraint) -> bool>(&mut self, keep: F) {
        self.constraints.retain(keep);
    }
}
