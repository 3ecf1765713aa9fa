//! Reading, checking and solving XCSP3-core constraint instances.

pub mod cli;
pub mod constraints;
pub mod expr;
pub mod model;
pub mod parser;
pub mod solver;

pub use constraints::{check_solution, CheckMode, ConstraintKind, Objective, Verdict};
pub use expr::{parse_expr, Expr};
pub use model::{Domain, Instance, Instantiation, Value};
