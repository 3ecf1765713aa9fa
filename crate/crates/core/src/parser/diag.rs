use std::fmt;

use crate::model::ModelError;

/// Validation rule violated by a document. The tag appears in diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Xml,
    Format,
    BadFramework,
    UnknownElement,
    Unsupported,
    MissingElement,
    UnexpectedElement,
    Syntax,
    DuplicateId,
    Identifier,
    MissingVariables,
    ObjectiveCount,
    AttributeWhitespace,
    AttributeValue,
    ConditionWhitespace,
    Condition,
    ExpressionWhitespace,
    Expression,
    TupleWhitespace,
    Tuple,
    TableOrder,
    IntervalWhitespace,
    DomainOrder,
    Domain,
    Integer,
    BadSize,
    OverlappingFor,
    MisplacedOthers,
    StartIndex,
    UnknownAliasTarget,
    ForwardAlias,
    TransitiveAlias,
    AliasOnForbiddenElement,
    AliasNotEmpty,
    ArityMismatch,
    ParamOutsideTemplate,
    RestInSlide,
    RestInExpression,
    TemplateNotCore,
    NestedTemplate,
    LengthMismatch,
    UnknownVariable,
    UndefinedVariable,
    Reference,
    Solution,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        use Rule::*;
        match self {
            Xml => "xml",
            Format => "format",
            BadFramework => "framework",
            UnknownElement => "unknown-element",
            Unsupported => "unsupported",
            MissingElement => "missing-element",
            UnexpectedElement => "unexpected-element",
            Syntax => "syntax",
            DuplicateId => "duplicate-id",
            Identifier => "identifier",
            MissingVariables => "missing-variables",
            ObjectiveCount => "objective-count",
            AttributeWhitespace => "attribute-whitespace",
            AttributeValue => "attribute-value",
            ConditionWhitespace => "condition-whitespace",
            Condition => "condition",
            ExpressionWhitespace => "expression-whitespace",
            Expression => "expression",
            TupleWhitespace => "tuple-whitespace",
            Tuple => "tuple",
            TableOrder => "table-order",
            IntervalWhitespace => "interval-whitespace",
            DomainOrder => "domain-order",
            Domain => "domain",
            Integer => "integer",
            BadSize => "array-size",
            OverlappingFor => "overlapping-for",
            MisplacedOthers => "misplaced-others",
            StartIndex => "start-index",
            UnknownAliasTarget => "alias-target",
            ForwardAlias => "forward-alias",
            TransitiveAlias => "transitive-alias",
            AliasOnForbiddenElement => "alias-forbidden",
            AliasNotEmpty => "alias-not-empty",
            ArityMismatch => "arity-mismatch",
            ParamOutsideTemplate => "parameter-outside-template",
            RestInSlide => "rest-in-slide",
            RestInExpression => "rest-in-expression",
            TemplateNotCore => "slide-template",
            NestedTemplate => "nested-template",
            LengthMismatch => "length-mismatch",
            UnknownVariable => "unknown-variable",
            UndefinedVariable => "undefined-variable",
            Reference => "reference",
            Solution => "solution",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A located validation failure: `error[rule]: /element/path: reason`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    pub fn new(rule: Rule, path: &str, message: impl Into<String>) -> Self {
        Diagnostic {
            rule,
            path: path.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn from_model(path: &str, e: ModelError) -> Self {
        let rule = match &e {
            ModelError::OutOfOrder(_) => Rule::DomainOrder,
            ModelError::MalformedInterval(t) if t.contains(char::is_whitespace) || t.starts_with("..") || t.ends_with("..") => {
                Rule::IntervalWhitespace
            }
            ModelError::MalformedInterval(_) => Rule::Domain,
            ModelError::MalformedInteger(_) | ModelError::MalformedCompactToken(_) => Rule::Integer,
            ModelError::BadConditionOperand { .. } | ModelError::UnresolvedOperand(_) => Rule::Condition,
            ModelError::UnknownArray(_) => Rule::UnknownVariable,
            ModelError::IndexOutOfBounds(_)
            | ModelError::NotAMatrix(_)
            | ModelError::MalformedReference(_) => Rule::Reference,
            ModelError::DuplicateAssignment(_) => Rule::Solution,
        };
        Diagnostic::new(rule, path, e.to_string())
    }

    /// Same message rendered as a warning.
    pub fn warning_line(&self) -> String {
        format!("warning[{}]: {}: {}", self.rule, self.path, self.message)
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}: {}", self.rule, self.path, self.message)
    }
}

impl std::error::Error for Diagnostic {}
