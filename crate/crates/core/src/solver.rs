//! Depth-first backtracking search with eager violation detection.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::constraints::{
    check_partial, eval_objective, is_undefined_arithmetic, CheckError, ObjectiveValue,
};
use crate::model::{Env, Framework, Instance, Instantiation, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum VarOrder {
    #[default]
    Declaration,
    SmallestDomainFirst,
}

#[derive(Debug, Clone, Default)]
pub struct SearchConfig {
    pub max_solutions: Option<u64>,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub var_order: VarOrder,
    /// Branch on the `decision` annotation only.
    pub restrict_to_decision: bool,
    /// Turns off early detection on partial assignments.
    pub no_partial_checks: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    Optimum,
    Limit,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::Optimum => "OPTIMUM",
            Status::Limit => "LIMIT",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: Status,
    pub solutions: Vec<Instantiation>,
    pub best_cost: Option<ObjectiveValue>,
    /// Number of solutions met during search (all of them in counting mode).
    pub count: u64,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("variable `{0}` has an empty domain")]
    EmptyDomain(String),
    #[error("variable `{0}` is undefined but used")]
    UndefinedVariable(String),
    #[error("the instance has no objective")]
    NotOptimization,
    #[error("the instance has no decision annotation")]
    NoDecision,
    #[error("decision variables do not determine `{0}`")]
    NotForced(String),
    #[error("search limit reached")]
    LimitExceeded,
    #[error("constraint {label}: {source}")]
    Check { label: String, source: CheckError },
}

/// Finds up to `max_solutions` solutions (one when unset).
pub fn solve(inst: &Instance, cfg: &SearchConfig) -> Result<SolveResult, SolveError> {
    let max = cfg.max_solutions.unwrap_or(1);
    Search::new(inst, cfg)?.run(Mode::Collect(max))
}

/// Enumerates every solution without storing them.
pub fn count(inst: &Instance, cfg: &SearchConfig) -> Result<SolveResult, SolveError> {
    Search::new(inst, cfg)?.run(Mode::Count)
}

/// Exact model count; a search limit is an error here.
pub fn count_solutions(inst: &Instance, cfg: &SearchConfig) -> Result<u64, SolveError> {
    let r = count(inst, cfg)?;
    if r.status == Status::Limit {
        return Err(SolveError::LimitExceeded);
    }
    Ok(r.count)
}

/// Branch and bound over the objective.
pub fn optimize(inst: &Instance, cfg: &SearchConfig) -> Result<SolveResult, SolveError> {
    if inst.framework != Framework::Cop || inst.objective.is_none() {
        return Err(SolveError::NotOptimization);
    }
    Search::new(inst, cfg)?.run(Mode::Optimize)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Collect(u64),
    Count,
    Optimize,
}

struct Assignment<'a> {
    index: &'a HashMap<&'a str, usize>,
    values: &'a [Option<i64>],
    star: &'a [bool],
}

impl Env for Assignment<'_> {
    fn lookup(&self, var: &str) -> Option<Value> {
        let &i = self.index.get(var)?;
        match self.values[i] {
            Some(v) => Some(Value::Int(v)),
            None if self.star[i] => Some(Value::Star),
            None => None,
        }
    }
}

struct Search<'a> {
    inst: &'a Instance,
    cfg: &'a SearchConfig,
    ids: Vec<&'a str>,
    index: HashMap<&'a str, usize>,
    domains: Vec<Vec<i64>>,
    /// Branching order, as positions into `ids`.
    order: Vec<usize>,
    /// Variables left to the forcing check in decision mode.
    forced: Vec<usize>,
    /// Constraints fully checked once the depth is reached.
    complete_at: Vec<Vec<usize>>,
    /// Constraints checked partially at each depth.
    partial_at: Vec<Vec<usize>>,
    values: Vec<Option<i64>>,
    star: Vec<bool>,
    nodes: u64,
    started: Instant,
    limited: bool,
}

impl<'a> Search<'a> {
    fn new(inst: &'a Instance, cfg: &'a SearchConfig) -> Result<Self, SolveError> {
        let mut ids = Vec::new();
        let mut domains = Vec::new();
        for v in &inst.variables {
            if let Some(d) = &v.domain {
                if d.is_empty() {
                    return Err(SolveError::EmptyDomain(v.id.clone()));
                }
                ids.push(v.id.as_str());
                domains.push(d.values().collect::<Vec<_>>());
            }
        }
        let index: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, x)| (*x, i)).collect();

        let useful = inst.useful_variables();
        for x in &useful {
            if !index.contains_key(x.as_str()) {
                return Err(SolveError::UndefinedVariable(x.clone()));
            }
        }

        let mut star = vec![false; ids.len()];
        let mut forced = Vec::new();
        let mut order: Vec<usize> = if cfg.restrict_to_decision {
            let decision = inst.decision.as_ref().ok_or(SolveError::NoDecision)?;
            let mut chosen: Vec<usize> = Vec::new();
            for i in decision.iter().filter_map(|x| index.get(x.as_str()).copied()) {
                if !chosen.contains(&i) {
                    chosen.push(i);
                }
            }
            for i in 0..ids.len() {
                if !chosen.contains(&i) {
                    if useful.contains(ids[i]) {
                        forced.push(i);
                    } else {
                        star[i] = true;
                    }
                }
            }
            chosen
        } else {
            (0..ids.len()).collect()
        };
        if cfg.var_order == VarOrder::SmallestDomainFirst {
            order.sort_by_key(|&i| domains[i].len());
        }
        let all: Vec<usize> = order.iter().chain(&forced).copied().collect();
        let mut depth_of = vec![0; ids.len()];
        for (d, &i) in all.iter().enumerate() {
            depth_of[i] = d + 1;
        }

        let mut complete_at = vec![Vec::new(); all.len() + 1];
        let mut partial_at = vec![Vec::new(); all.len() + 1];
        for (ci, c) in inst.constraints.iter().enumerate() {
            let depths: Vec<usize> = c
                .kind
                .scope()
                .iter()
                .filter_map(|x| index.get(x.as_str()).map(|&i| depth_of[i]))
                .collect();
            let last = depths.iter().copied().max().unwrap_or(0);
            complete_at[last].push(ci);
            if !cfg.no_partial_checks {
                let mut ds = depths;
                ds.sort_unstable();
                ds.dedup();
                for d in ds {
                    if d != last {
                        partial_at[d].push(ci);
                    }
                }
            }
        }

        Ok(Search {
            inst,
            cfg,
            values: vec![None; ids.len()],
            ids,
            index,
            domains,
            order: all,
            forced,
            complete_at,
            partial_at,
            star,
            nodes: 0,
            started: Instant::now(),
            limited: false,
        })
    }

    fn env(&self) -> Assignment<'_> {
        Assignment {
            index: &self.index,
            values: &self.values,
            star: &self.star,
        }
    }

    fn consistent(&self, depth: usize) -> Result<bool, SolveError> {
        let env = self.env();
        for &ci in &self.complete_at[depth] {
            let c = &self.inst.constraints[ci];
            let ok = match c.kind.check(&env) {
                Ok(ok) => ok,
                Err(e) if is_undefined_arithmetic(&e) => false,
                Err(source) => {
                    return Err(SolveError::Check {
                        label: self.inst.constraint_label(ci),
                        source,
                    })
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        for &ci in &self.partial_at[depth] {
            if !check_partial(&self.inst.constraints[ci].kind, &env) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn out_of_budget(&mut self) -> bool {
        if self.cfg.node_limit.is_some_and(|n| self.nodes >= n)
            || self
                .cfg
                .time_limit
                .is_some_and(|t| self.nodes % 256 == 0 && self.started.elapsed() >= t)
        {
            self.limited = true;
        }
        self.limited
    }

    fn snapshot(&self) -> Instantiation {
        let mut sol = Instantiation::new();
        for (i, id) in self.ids.iter().enumerate() {
            let v = match self.values[i] {
                Some(v) => Value::Int(v),
                None => Value::Star,
            };
            sol.assign(*id, v).expect("ids are unique");
        }
        sol
    }

    /// Visits every consistent total assignment from `depth` on; the
    /// callback returns false to stop.
    fn dfs(
        &mut self,
        depth: usize,
        stop_at: usize,
        visit: &mut dyn FnMut(&mut Self) -> Result<bool, SolveError>,
    ) -> Result<bool, SolveError> {
        if depth == stop_at {
            return visit(self);
        }
        let var = self.order[depth];
        for k in 0..self.domains[var].len() {
            if self.out_of_budget() {
                self.values[var] = None;
                return Ok(false);
            }
            self.nodes += 1;
            self.values[var] = Some(self.domains[var][k]);
            if self.consistent(depth + 1)? && !self.dfs(depth + 1, stop_at, visit)? {
                self.values[var] = None;
                return Ok(false);
            }
        }
        self.values[var] = None;
        Ok(true)
    }

    fn run(mut self, mode: Mode) -> Result<SolveResult, SolveError> {
        let objective = self.inst.objective.clone();
        let mut solutions: Vec<Instantiation> = Vec::new();
        let mut best: Option<ObjectiveValue> = None;
        let mut found = 0u64;

        if self.consistent(0)? {
            let branch = self.order.len() - self.forced.len();
            let total = self.order.len();
            let mut visit = |s: &mut Self| -> Result<bool, SolveError> {
                if branch < total {
                    let mut completions = 0;
                    let mut first = Vec::new();
                    s.dfs(branch, total, &mut |s: &mut Self| {
                        completions += 1;
                        if completions == 1 {
                            first = s.values.clone();
                        }
                        Ok(completions < 2)
                    })?;
                    if s.limited {
                        return Ok(false);
                    }
                    match completions {
                        0 => return Ok(true),
                        1 => s.values = first,
                        _ => {
                            let x = s.ids[s.forced[0]];
                            return Err(SolveError::NotForced(x.to_string()));
                        }
                    }
                }
                let keep_going = s.record(mode, &objective, &mut solutions, &mut best, &mut found);
                for &i in &s.forced {
                    s.values[i] = None;
                }
                keep_going
            };
            self.dfs(0, branch, &mut visit)?;
        }

        let status = if self.limited {
            Status::Limit
        } else if found == 0 {
            Status::Unsat
        } else if mode == Mode::Optimize {
            Status::Optimum
        } else {
            Status::Sat
        };
        Ok(SolveResult {
            status,
            solutions,
            best_cost: best,
            count: found,
            nodes: self.nodes,
        })
    }

    fn record(
        &mut self,
        mode: Mode,
        objective: &Option<crate::constraints::Objective>,
        solutions: &mut Vec<Instantiation>,
        best: &mut Option<ObjectiveValue>,
        found: &mut u64,
    ) -> Result<bool, SolveError> {
        let cost = match objective {
            Some(obj) => Some(eval_objective(obj, &self.env()).map_err(|source| {
                SolveError::Check {
                    label: "objective".into(),
                    source,
                }
            })?),
            None => None,
        };
        match mode {
            Mode::Count => {
                *found += 1;
                Ok(true)
            }
            Mode::Collect(max) => {
                *found += 1;
                solutions.push(self.snapshot());
                if best.is_none() {
                    *best = cost;
                }
                Ok(*found < max)
            }
            Mode::Optimize => {
                let (obj, cost) = (objective.as_ref().expect("checked"), cost.expect("objective"));
                if best.as_ref().is_none_or(|b| obj.improves(&cost, b)) {
                    *found += 1;
                    *best = Some(cost);
                    solutions.clear();
                    solutions.push(self.snapshot());
                }
                Ok(true)
            }
        }
    }
}
