//! The `xcsp3` command line: validate, check, solve and stats.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::constraints::{check_solution, CheckMode, SolutionError, Verdict};
use crate::model::{Framework, Instance};
use crate::parser::{
    parse_instance_with, parse_solution, parse_value_list, write_canonical, write_instantiation,
    ParseOptions, SolutionKind,
};
use crate::solver::{self, SearchConfig, SolveError, SolveResult, Status, VarOrder};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_VIOLATED: i32 = 10;
pub const EXIT_INCOMPLETE: i32 = 11;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_LIMIT: i32 = 21;

#[derive(Parser, Debug)]
#[command(name = "xcsp3", version, about = "Validate, check and solve XCSP3-core instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and normalize an instance, then print a summary.
    Validate {
        #[command(flatten)]
        input: Input,
        /// Write the canonical flat XML to this file.
        #[arg(long, value_name = "PATH")]
        canonical_out: Option<PathBuf>,
    },
    /// Check a solution against an instance.
    Check {
        #[command(flatten)]
        input: Input,
        /// An `instantiation` element, or a plain value list when `--vars` is given.
        #[arg(long, value_name = "PATH")]
        solution: PathBuf,
        /// Variables matching a plain value list, e.g. "x[] y".
        #[arg(long, value_name = "LIST")]
        vars: Option<String>,
    },
    /// Search for solutions (or an optimum for COP instances).
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "N")]
        max_solutions: Option<u64>,
        /// Count all solutions instead of printing them.
        #[arg(long, conflicts_with_all = ["max_solutions", "optimize"])]
        count: bool,
        /// Run branch and bound (the default for COP instances).
        #[arg(long)]
        optimize: bool,
        #[arg(long, value_name = "S")]
        time_limit: Option<f64>,
        #[arg(long, value_name = "N")]
        node_limit: Option<u64>,
        #[arg(long, value_enum, default_value_t = Order::Declaration)]
        var_order: Order,
        /// Branch only on the variables of the decision annotation.
        #[arg(long)]
        decision_only: bool,
    },
    /// Print instance metrics as key=value lines.
    Stats {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args, Debug)]
struct Input {
    path: PathBuf,
    /// Reject unknown or unsupported elements (default).
    #[arg(long, conflicts_with = "lenient")]
    strict: bool,
    /// Skip unknown or unsupported elements with a warning.
    #[arg(long)]
    lenient: bool,
    /// Drop constraints carrying this class before anything else.
    #[arg(long, value_name = "TAG")]
    drop_class: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Order {
    Declaration,
    SmallestDomain,
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut io = Io { out, err };
    let code = match cli.command {
        Command::Validate {
            input,
            canonical_out,
        } => validate(&mut io, &input, canonical_out.as_deref()),
        Command::Check {
            input,
            solution,
            vars,
        } => check(&mut io, &input, &solution, vars.as_deref()),
        Command::Solve {
            input,
            max_solutions,
            count,
            optimize,
            time_limit,
            node_limit,
            var_order,
            decision_only,
        } => {
            let cfg = SearchConfig {
                max_solutions,
                node_limit,
                time_limit: time_limit.map(Duration::from_secs_f64),
                var_order: match var_order {
                    Order::Declaration => VarOrder::Declaration,
                    Order::SmallestDomain => VarOrder::SmallestDomainFirst,
                },
                restrict_to_decision: decision_only,
                no_partial_checks: false,
            };
            solve(&mut io, &input, cfg, count, optimize)
        }
        Command::Stats { input } => stats(&mut io, &input),
    };
    code.unwrap_or_else(|c| c)
}

type Code = Result<i32, i32>;

fn fail(io: &mut Io, code: i32, msg: impl std::fmt::Display) -> i32 {
    let _ = writeln!(io.err, "{msg}");
    code
}

fn read(io: &mut Io, path: &Path) -> Result<String, i32> {
    fs::read_to_string(path)
        .map_err(|e| fail(io, EXIT_PARSE, format!("error[io]: {}: {e}", path.display())))
}

fn load(io: &mut Io, input: &Input) -> Result<Instance, i32> {
    let text = read(io, &input.path)?;
    let opts = ParseOptions {
        strict: !input.lenient,
    };
    let parsed = parse_instance_with(&text, opts).map_err(|d| fail(io, EXIT_PARSE, d))?;
    for w in &parsed.warnings {
        let _ = writeln!(io.err, "{}", w.warning_line());
    }
    let mut inst = parsed.instance;
    if !input.drop_class.is_empty() {
        inst.retain_constraints(|c| !c.classes.iter().any(|k| input.drop_class.contains(k)));
    }
    Ok(inst)
}

fn summary(inst: &Instance) -> Vec<(String, String)> {
    let mut lines = vec![
        ("framework".to_string(), inst.framework.as_str().to_string()),
        ("variables".into(), inst.variables.len().to_string()),
        ("arrays".into(), inst.arrays.len().to_string()),
        ("constraints".into(), inst.constraints.len().to_string()),
    ];
    let mut by_kind: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &inst.constraints {
        *by_kind.entry(c.kind.name()).or_default() += 1;
    }
    for (k, n) in by_kind {
        lines.push((format!("constraints.{k}"), n.to_string()));
    }
    let obj = inst
        .objective
        .as_ref()
        .map_or("none".to_string(), |o| o.describe());
    lines.push(("objective".into(), obj));
    lines
}

fn print_pairs(io: &mut Io, pairs: &[(String, String)]) {
    for (k, v) in pairs {
        let _ = writeln!(io.out, "{k}={v}");
    }
}

fn validate(io: &mut Io, input: &Input, canonical: Option<&Path>) -> Code {
    let inst = load(io, input)?;
    print_pairs(io, &summary(&inst));
    if let Some(p) = canonical {
        fs::write(p, write_canonical(&inst))
            .map_err(|e| fail(io, EXIT_PARSE, format!("error[io]: {}: {e}", p.display())))?;
    }
    Ok(EXIT_OK)
}

fn check(io: &mut Io, input: &Input, solution: &Path, vars: Option<&str>) -> Code {
    let inst = load(io, input)?;
    let text = read(io, solution)?;
    let (assignment, cost) = match vars {
        Some(vars) => (parse_value_list(&text, vars, &inst), None),
        None => match parse_solution(&text, &inst) {
            Ok(doc) => (Ok(doc.assignment), doc.cost),
            Err(d) => (Err(d), None),
        },
    };
    let assignment = assignment.map_err(|d| fail(io, EXIT_PARSE, d))?;
    match check_solution(&inst, &assignment, CheckMode::PartialAllowed, cost) {
        Ok(Verdict::Satisfied { cost: computed }) => {
            let line = match (cost, computed) {
                (Some(c), _) => format!("satisfied, cost verified: {c}"),
                (None, Some(c)) => format!("satisfied, cost: {c}"),
                (None, None) => "satisfied".to_string(),
            };
            let _ = writeln!(io.out, "{line}");
            Ok(EXIT_OK)
        }
        Ok(Verdict::Violated(ids)) => {
            let _ = writeln!(io.out, "violated: {}", ids.join(" "));
            Ok(EXIT_VIOLATED)
        }
        Ok(Verdict::Incomplete(ids)) => {
            let _ = writeln!(io.out, "incomplete: missing {}", ids.join(" "));
            Ok(EXIT_INCOMPLETE)
        }
        Err(e @ SolutionError::CostMismatch { .. }) => {
            let _ = writeln!(io.out, "violated: {e}");
            Ok(EXIT_VIOLATED)
        }
        Err(e) => Err(fail(io, EXIT_PARSE, format!("error[solution]: {e}"))),
    }
}

fn solve(io: &mut Io, input: &Input, cfg: SearchConfig, count: bool, optimize: bool) -> Code {
    let inst = load(io, input)?;
    let is_cop = inst.framework == Framework::Cop;
    if optimize && !is_cop {
        return Err(fail(io, EXIT_USAGE, "error: --optimize needs a COP instance"));
    }
    let result: Result<SolveResult, SolveError> = if count {
        solver::count(&inst, &cfg)
    } else if is_cop {
        solver::optimize(&inst, &cfg)
    } else {
        solver::solve(&inst, &cfg)
    };
    let r = result.map_err(|e| fail(io, EXIT_PARSE, format!("error[solve]: {e}")))?;
    if count {
        let _ = writeln!(io.out, "solutions={}", r.count);
        let _ = writeln!(io.out, "status={}", r.status.as_str());
        let _ = writeln!(io.out, "nodes={}", r.nodes);
    } else {
        let kind = if r.status == Status::Optimum {
            SolutionKind::Optimum
        } else {
            SolutionKind::Solution
        };
        for (i, s) in r.solutions.iter().enumerate() {
            let cost = if is_cop {
                inst.objective
                    .as_ref()
                    .and_then(|o| crate::constraints::eval_objective(o, s).ok())
            } else {
                None
            };
            let kind = if i + 1 == r.solutions.len() { kind } else { SolutionKind::Solution };
            let _ = write!(io.out, "{}", write_instantiation(s, kind, cost.as_ref()));
        }
        if r.solutions.is_empty() {
            let _ = writeln!(io.out, "status={}", r.status.as_str());
        }
        let _ = writeln!(io.err, "status={} nodes={}", r.status.as_str(), r.nodes);
    }
    Ok(match r.status {
        Status::Sat | Status::Optimum => EXIT_OK,
        Status::Unsat => EXIT_UNSAT,
        Status::Limit => EXIT_LIMIT,
    })
}

fn stats(io: &mut Io, input: &Input) -> Code {
    let inst = load(io, input)?;
    let mut pairs = summary(&inst);
    let sizes: Vec<u64> = inst
        .variables
        .iter()
        .filter_map(|v| v.domain.as_ref().map(|d| d.size()))
        .collect();
    let undefined = inst.variables.len() - sizes.len();
    pairs.insert(2, ("variables.undefined".into(), undefined.to_string()));
    let useful = inst.useful_variables();
    pairs.insert(3, ("variables.useful".into(), useful.len().to_string()));
    if let (Some(lo), Some(hi)) = (sizes.iter().min(), sizes.iter().max()) {
        pairs.push(("domain.min_size".into(), lo.to_string()));
        pairs.push(("domain.max_size".into(), hi.to_string()));
    }
    let mut arities: BTreeMap<usize, usize> = BTreeMap::new();
    for c in &inst.constraints {
        *arities.entry(c.kind.scope().len()).or_default() += 1;
    }
    for (a, n) in arities {
        pairs.push((format!("arity.{a}"), n.to_string()));
    }
    print_pairs(io, &pairs);
    Ok(EXIT_OK)
}
