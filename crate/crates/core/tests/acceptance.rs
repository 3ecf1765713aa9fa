//! End-to-end acceptance checks, one line per criterion.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use xcsp3_core::constraints::{
    mdd_accepts, regular_accepts, Cell, ObjectiveValue, Table, Transition,
};
use xcsp3_core::model::Instantiation;
use xcsp3_core::parser::{parse_instance, write_canonical};
use xcsp3_core::solver::{count_solutions, optimize, solve, SearchConfig, Status};
use xcsp3_core::{check_solution, CheckMode, ConstraintKind, Instance, Value, Verdict};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn load(rel: &str) -> Instance {
    let text = fs::read_to_string(fixtures().join(rel)).unwrap();
    parse_instance(&text).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn all_solutions() -> SearchConfig {
    SearchConfig {
        max_solutions: Some(u64::MAX),
        ..Default::default()
    }
}

fn ints(sol: &Instantiation, vars: &[&str]) -> Vec<i64> {
    vars.iter()
        .map(|x| match sol.get(x) {
            Some(Value::Int(v)) => v,
            other => panic!("{x} = {other:?}"),
        })
        .collect()
}

fn satisfied(inst: &Instance, sol: &Instantiation) -> bool {
    matches!(
        check_solution(inst, sol, CheckMode::TotalRequired, None),
        Ok(Verdict::Satisfied { .. })
    )
}

/// Every total assignment over the defined variables.
fn cartesian(inst: &Instance) -> Vec<Instantiation> {
    let mut out = vec![Instantiation::new()];
    for v in &inst.variables {
        let Some(d) = &v.domain else { continue };
        let mut next = Vec::new();
        for partial in &out {
            for x in d.values() {
                let mut s = partial.clone();
                s.assign(v.id.clone(), Value::Int(x)).unwrap();
                next.push(s);
            }
        }
        out = next;
    }
    out
}

fn naive_count(inst: &Instance) -> u64 {
    cartesian(inst).iter().filter(|s| satisfied(inst, s)).count() as u64
}

const CAKES: [&str; 3] = ["cake_intension.xml", "cake_group.xml", "cake_sum.xml"];

fn cake_optimum() {
    for name in CAKES {
        let inst = load(name);
        let t = Instant::now();
        let r = optimize(&inst, &SearchConfig::default()).unwrap();
        assert!(t.elapsed() < Duration::from_secs(1), "{name} took {:?}", t.elapsed());
        assert_eq!(r.status, Status::Optimum, "{name}");
        assert_eq!(r.best_cost, Some(ObjectiveValue::Int(1700)), "{name}");
        assert_eq!(ints(r.solutions.last().unwrap(), &["b", "c"]), [2, 2], "{name}");
    }
}

fn cake_encodings_agree() {
    // direct reading of the five resource limits
    let mut oracle = BTreeSet::new();
    for b in 0..100i64 {
        for c in 0..100i64 {
            if 250 * b + 200 * c <= 4000
                && 2 * b <= 6
                && 75 * b + 150 * c <= 2000
                && 100 * b + 150 * c <= 500
                && 75 * c <= 500
            {
                oracle.insert(vec![b, c]);
            }
        }
    }
    let t = Instant::now();
    for name in CAKES {
        let inst = load(name);
        let r = solve(&inst, &all_solutions()).unwrap();
        let got: BTreeSet<Vec<i64>> = r.solutions.iter().map(|s| ints(s, &["b", "c"])).collect();
        assert_eq!(got, oracle, "{name}");
        assert_eq!(count_solutions(&inst, &SearchConfig::default()).unwrap(), oracle.len() as u64);
    }
    assert!(t.elapsed() < Duration::from_secs(5));
}

fn toy_network() {
    let inst = load("toy.xml");
    let t = Instant::now();
    let assignments = cartesian(&inst);
    assert_eq!(assignments.len(), 8);
    assert_eq!(naive_count(&inst), 0);
    assert_eq!(count_solutions(&inst, &SearchConfig::default()).unwrap(), 0);
    assert_eq!(solve(&inst, &SearchConfig::default()).unwrap().status, Status::Unsat);
    assert!(t.elapsed() < Duration::from_secs(1));
}

/// Positions of the first and second occurrence of each k in 1..=n, for
/// every Langford pairing of order 2.
fn langford_oracle(n: usize) -> BTreeSet<Vec<i64>> {
    fn place(k: usize, n: usize, slots: &mut Vec<bool>, pos: &mut Vec<(i64, i64)>, out: &mut BTreeSet<Vec<i64>>) {
        if k > n {
            let mut v: Vec<i64> = pos.iter().map(|p| p.0).collect();
            v.extend(pos.iter().map(|p| p.1));
            out.insert(v);
            return;
        }
        for p in 0..slots.len() {
            let q = p + k + 1;
            if q < slots.len() && !slots[p] && !slots[q] {
                slots[p] = true;
                slots[q] = true;
                pos.push((p as i64, q as i64));
                place(k + 1, n, slots, pos, out);
                pos.pop();
                slots[p] = false;
                slots[q] = false;
            }
        }
    }
    let mut out = BTreeSet::new();
    place(1, n, &mut vec![false; 2 * n], &mut Vec::new(), &mut out);
    out
}

fn langford() {
    let inst = load("langford.xml");
    let t = Instant::now();
    let r = solve(&inst, &all_solutions()).unwrap();
    assert!(t.elapsed() < Duration::from_secs(60));
    assert_eq!(r.solutions.len(), 2);
    let vars = ["x[0][0]", "x[0][1]", "x[0][2]", "x[0][3]", "x[1][0]", "x[1][1]", "x[1][2]", "x[1][3]"];
    let got: BTreeSet<Vec<i64>> = r.solutions.iter().map(|s| ints(s, &vars)).collect();
    assert_eq!(got, langford_oracle(4));
    for s in &r.solutions {
        assert!(satisfied(&inst, s));
    }
}

fn magic_oracle() -> BTreeSet<Vec<i64>> {
    fn permute(k: usize, a: &mut [i64; 9], out: &mut BTreeSet<Vec<i64>>) {
        if k == 9 {
            let lines = [
                [0, 1, 2], [3, 4, 5], [6, 7, 8],
                [0, 3, 6], [1, 4, 7], [2, 5, 8],
                [0, 4, 8], [6, 4, 2],
            ];
            if lines.iter().all(|l| l.iter().map(|&i| a[i]).sum::<i64>() == 15) {
                out.insert(a.to_vec());
            }
            return;
        }
        for i in k..9 {
            a.swap(k, i);
            permute(k + 1, a, out);
            a.swap(k, i);
        }
    }
    let mut out = BTreeSet::new();
    permute(0, &mut [1, 2, 3, 4, 5, 6, 7, 8, 9], &mut out);
    out
}

fn magic_square() {
    let inst = load("magic_square.xml");
    let t = Instant::now();
    let r = solve(&inst, &all_solutions()).unwrap();
    assert!(t.elapsed() < Duration::from_secs(60));
    assert_eq!(r.solutions.len(), 8);
    let cells: Vec<String> = (0..3)
        .flat_map(|i| (0..3).map(move |j| format!("x[{i}][{j}]")))
        .collect();
    let refs: Vec<&str> = cells.iter().map(String::as_str).collect();
    let got: BTreeSet<Vec<i64>> = r.solutions.iter().map(|s| ints(s, &refs)).collect();
    assert_eq!(got, magic_oracle());
}

fn constraint_kinds(inst: &Instance) -> Vec<ConstraintKind> {
    inst.constraints.iter().map(|c| c.kind.clone()).collect()
}

fn expansion_suite() {
    for name in ["group_g", "group_h", "slide_c1", "slide_c2", "slide_c3", "slide_c4"] {
        let got = load(&format!("expansion/{name}.xml"));
        let want = load(&format!("expansion/{name}.expanded.xml"));
        assert_eq!(constraint_kinds(&got), constraint_kinds(&want), "{name}");
        let ids = |i: &Instance| i.constraints.iter().map(|c| c.id.clone()).collect::<Vec<_>>();
        assert_eq!(ids(&got), ids(&want), "{name}");
    }
    let want = constraint_kinds(&load("expansion/latin.expanded.xml"));
    for name in ["latin_explicit.xml", "latin_compact.xml"] {
        assert_eq!(constraint_kinds(&load(name)), want, "{name}");
    }
}

fn short_tables() {
    let mut rng = StdRng::seed_from_u64(7);
    let t = Instant::now();
    for _ in 0..200 {
        let arity = rng.random_range(3..=4);
        let d = rng.random_range(1..=4i64);
        let rows = rng.random_range(1..=6);
        let mut table: Vec<Vec<Cell>> = (0..rows)
            .map(|_| {
                (0..arity)
                    .map(|_| {
                        if rng.random_bool(0.3) {
                            Cell::Star
                        } else {
                            Cell::Val(rng.random_range(0..d))
                        }
                    })
                    .collect()
            })
            .collect();
        table.sort();
        table.dedup();
        // independent expansion of every star over 0..d
        let mut expanded: BTreeSet<Vec<i64>> = BTreeSet::new();
        for row in &table {
            let mut partial = vec![Vec::new()];
            for c in row {
                let choices: Vec<i64> = match c {
                    Cell::Star => (0..d).collect(),
                    Cell::Val(v) => vec![*v],
                };
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        choices.iter().map(move |v| {
                            let mut q = p.clone();
                            q.push(*v);
                            q
                        })
                    })
                    .collect();
            }
            expanded.extend(partial);
        }
        let scope: Vec<String> = (0..arity).map(|i| format!("v{i}")).collect();
        for positive in [true, false] {
            let kind = ConstraintKind::Extension {
                scope: scope.clone(),
                table: Table::Tuples(table.clone()),
                positive,
            };
            let total = (d as u64).pow(arity as u32);
            for code in 0..total {
                let mut rest = code;
                let tuple: Vec<i64> = (0..arity)
                    .map(|_| {
                        let v = (rest % d as u64) as i64;
                        rest /= d as u64;
                        v
                    })
                    .collect();
                let env = Instantiation::from_pairs(
                    scope.iter().zip(&tuple).map(|(x, v)| (x.as_str(), Value::Int(*v))),
                )
                .unwrap();
                let got = kind.check(&env).unwrap();
                assert_eq!(got, expanded.contains(&tuple) == positive, "{table:?} {tuple:?}");
            }
        }
    }
    assert!(t.elapsed() < Duration::from_secs(10));
}

fn tr(from: impl ToString, value: i64, to: impl ToString) -> Transition {
    Transition {
        from: from.to_string(),
        value,
        to: to.to_string(),
    }
}

/// Words labelling a path of exactly `len` arcs from `start` into `finals`.
fn path_words(ts: &[Transition], start: &str, finals: &[String], len: usize) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    let mut stack = vec![(start.to_string(), Vec::new())];
    while let Some((state, word)) = stack.pop() {
        if word.len() == len {
            if finals.contains(&state) {
                out.insert(word);
            }
            continue;
        }
        for t in ts.iter().filter(|t| t.from == state) {
            let mut w = word.clone();
            w.push(t.value);
            stack.push((t.to.clone(), w));
        }
    }
    out
}

fn words(alphabet: i64, len: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..alphabet).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

fn automata() {
    let fixture = load("regular.xml");
    let ConstraintKind::Regular {
        transitions,
        start,
        finals,
        ..
    } = &fixture.constraints[0].kind
    else {
        panic!("expected regular")
    };
    assert!(regular_accepts(&[0, 1, 1, 0, 0, 1, 0], transitions, start, finals));
    let mdd = load("mdd.xml");
    let ConstraintKind::Mdd { transitions, .. } = &mdd.constraints[0].kind else {
        panic!("expected mdd")
    };
    let accepted: BTreeSet<Vec<i64>> = words(3, 3)
        .into_iter()
        .filter(|w| mdd_accepts(w, transitions))
        .collect();
    let want: BTreeSet<Vec<i64>> = [[0, 2, 0], [1, 2, 0], [2, 0, 0]].iter().map(|w| w.to_vec()).collect();
    assert_eq!(accepted, want);
    assert_eq!(path_words(transitions, "r", &["t".to_string()], 3), want);

    let mut rng = StdRng::seed_from_u64(11);
    for round in 0..500 {
        let alphabet = rng.random_range(1..=4i64);
        let len = rng.random_range(1..=6usize);
        if round % 2 == 0 {
            let states = rng.random_range(1..=4);
            let mut ts = Vec::new();
            for s in 0..states {
                for a in 0..alphabet {
                    for q in 0..states {
                        if rng.random_bool(0.35) {
                            ts.push(tr(format!("q{s}"), a, format!("q{q}")));
                        }
                    }
                }
            }
            let start = format!("q{}", rng.random_range(0..states));
            let finals: Vec<String> = (0..states)
                .filter(|_| rng.random_bool(0.5))
                .map(|s| format!("q{s}"))
                .collect();
            let oracle = path_words(&ts, &start, &finals, len);
            for w in words(alphabet, len) {
                assert_eq!(regular_accepts(&w, &ts, &start, &finals), oracle.contains(&w));
            }
        } else {
            // layered diagram: r, then len-1 inner layers, then t
            let widths: Vec<usize> = (0..len.saturating_sub(1)).map(|_| rng.random_range(1..=3)).collect();
            let layer = |i: usize, k: usize| -> String {
                if i == 0 {
                    "r".into()
                } else if i == len {
                    "t".into()
                } else {
                    format!("n{i}_{k}")
                }
            };
            let width = |i: usize| if i == 0 || i == len { 1 } else { widths[i - 1] };
            let mut ts: Vec<Transition> = Vec::new();
            for i in 0..len {
                let mut reached = vec![false; width(i + 1)];
                for k in 0..width(i) {
                    let mut used = BTreeSet::new();
                    let arcs = rng.random_range(1..=alphabet as usize);
                    for _ in 0..arcs {
                        let a = rng.random_range(0..alphabet);
                        if used.insert(a) {
                            let to = rng.random_range(0..width(i + 1));
                            reached[to] = true;
                            ts.push(tr(layer(i, k), a, layer(i + 1, to)));
                        }
                    }
                }
                for (to, hit) in reached.iter().enumerate() {
                    if !hit {
                        let from = rng.random_range(0..width(i));
                        let a = rng.random_range(0..alphabet);
                        if !ts.iter().any(|t| t.from == layer(i, from) && t.value == a) {
                            ts.push(tr(layer(i, from), a, layer(i + 1, to)));
                        } else {
                            ts.retain(|t| !(t.from == layer(i, from) && t.value == a));
                            ts.push(tr(layer(i, from), a, layer(i + 1, to)));
                        }
                    }
                }
            }
            // nodes that lost every outgoing arc cannot reach t; drop arcs into them
            loop {
                let sources: BTreeSet<String> = ts.iter().map(|t| t.from.clone()).collect();
                let before = ts.len();
                ts.retain(|t| t.to == "t" || sources.contains(&t.to));
                if ts.len() == before {
                    break;
                }
            }
            if !ts.iter().any(|t| t.from == "r") {
                continue;
            }
            let oracle = path_words(&ts, "r", &["t".to_string()], len);
            for w in words(alphabet, len) {
                assert_eq!(mdd_accepts(&w, &ts), oracle.contains(&w), "{ts:?} {w:?}");
            }
        }
    }
}

/// A random core constraint over `vars` with values in 0..d.
fn random_constraint(rng: &mut StdRng, vars: &[String], d: i64) -> String {
    let n = vars.len();
    let pick = |rng: &mut StdRng, k: usize| -> Vec<String> {
        let mut idx: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            idx.swap(i, rng.random_range(0..=i));
        }
        idx.truncate(k.min(n));
        idx.into_iter().map(|i| vars[i].clone()).collect()
    };
    let some = |rng: &mut StdRng| {
        let k = rng.random_range(2..=n);
        pick(rng, k)
    };
    let ops = ["lt", "le", "ge", "gt", "eq", "ne"];
    let op = |rng: &mut StdRng| ops[rng.random_range(0..ops.len())];
    let cond = |rng: &mut StdRng, hi: i64| -> String {
        match rng.random_range(0..3) {
            0 => format!("({},{})", op(rng), rng.random_range(0..=hi)),
            1 => {
                let lo = rng.random_range(0..=hi);
                format!("(in,{lo}..{})", rng.random_range(lo..=hi + 1))
            }
            _ => format!("({},{})", op(rng), vars[rng.random_range(0..n)]),
        }
    };
    match rng.random_range(0..16) {
        0 => {
            let xs = pick(rng, 2);
            let forms = [
                format!("{}({},{})", op(rng), xs[0], xs[1]),
                format!("{}(add({},{}),{})", op(rng), xs[0], xs[1], rng.random_range(0..2 * d)),
                format!("eq(dist({},{}),1)", xs[0], xs[1]),
                format!("or(eq({},0),{}({},{}))", xs[0], op(rng), xs[1], xs[0]),
                format!("ne(mod({},2),0)", xs[0]),
                format!("ge(div({},{}),1)", xs[0], xs[1]),
            ];
            format!("<intension> {} </intension>", forms[rng.random_range(0..forms.len())])
        }
        1 | 2 => {
            let k = rng.random_range(1..=3.min(n));
            let xs = pick(rng, k);
            let mut rows: Vec<Vec<Option<i64>>> = (0..rng.random_range(1..=6))
                .map(|_| {
                    (0..k)
                        .map(|_| (!rng.random_bool(0.2)).then(|| rng.random_range(0..d)))
                        .collect()
                })
                .collect();
            rows.sort_by_key(|r| r.iter().map(|c| c.map_or(i64::MAX, |v| v)).collect::<Vec<_>>());
            rows.dedup();
            let body: String = rows
                .iter()
                .map(|r| {
                    let cells: Vec<String> = r.iter().map(|c| c.map_or("*".into(), |v| v.to_string())).collect();
                    format!("({})", cells.join(","))
                })
                .collect();
            let tag = if rng.random_bool(0.5) { "supports" } else { "conflicts" };
            if k == 1 {
                let vals: BTreeSet<i64> = rows.iter().map(|r| r[0].unwrap_or(0)).collect();
                let vals: Vec<String> = vals.iter().map(i64::to_string).collect();
                return format!(
                    "<extension> <list> {} </list> <{tag}> {} </{tag}> </extension>",
                    xs[0],
                    vals.join(" ")
                );
            }
            format!("<extension> <list> {} </list> <{tag}> {body} </{tag}> </extension>", xs.join(" "))
        }
        3 => {
            let xs = some(rng);
            if rng.random_bool(0.3) {
                format!("<allDifferent> <list> {} </list> <except> 0 </except> </allDifferent>", xs.join(" "))
            } else {
                format!("<allDifferent> {} </allDifferent>", xs.join(" "))
            }
        }
        4 => format!("<allEqual> {} </allEqual>", some(rng).join(" ")),
        5 => {
            let xs = some(rng);
            let coeffs: Vec<String> = xs.iter().map(|_| rng.random_range(-2..=3).to_string()).collect();
            format!(
                "<sum> <list> {} </list> <coeffs> {} </coeffs> <condition> {} </condition> </sum>",
                xs.join(" "),
                coeffs.join(" "),
                cond(rng, d * 2)
            )
        }
        6 => {
            let xs = some(rng);
            format!(
                "<count> <list> {} </list> <values> {} </values> <condition> {} </condition> </count>",
                xs.join(" "),
                rng.random_range(0..d),
                cond(rng, xs.len() as i64)
            )
        }
        7 => {
            let xs = some(rng);
            format!(
                "<nValues> <list> {} </list> <condition> {} </condition> </nValues>",
                xs.join(" "),
                cond(rng, xs.len() as i64)
            )
        }
        8 => {
            let xs = some(rng);
            let op = ["lt", "le", "ge", "gt"][rng.random_range(0..4)];
            format!("<ordered> <list> {} </list> <operator> {op} </operator> </ordered>", xs.join(" "))
        }
        9 => {
            let k = rng.random_range(1..=n / 2);
            let xs = pick(rng, 2 * k);
            let op = ["lt", "le", "ge", "gt"][rng.random_range(0..4)];
            format!(
                "<lex> <list> {} </list> <list> {} </list> <operator> {op} </operator> </lex>",
                xs[..k].join(" "),
                xs[k..].join(" ")
            )
        }
        10 => {
            let xs = some(rng);
            let tag = if rng.random_bool(0.5) { "minimum" } else { "maximum" };
            format!("<{tag}> <list> {} </list> <condition> {} </condition> </{tag}>", xs.join(" "), cond(rng, d))
        }
        11 => {
            let k = rng.random_range(3..=n.max(3));
            let xs = pick(rng, k);
            let (list, rest) = xs.split_at(xs.len() - 1);
            let idx = &rest[0];
            let value = if rng.random_bool(0.5) {
                list[0].clone()
            } else {
                rng.random_range(0..d).to_string()
            };
            let list = &list[1..];
            if list.is_empty() {
                return format!("<allEqual> {} {} </allEqual>", idx, value);
            }
            format!(
                "<element> <list> {} </list> <index> {idx} </index> <value> {value} </value> </element>",
                list.join(" ")
            )
        }
        12 => {
            let k = rng.random_range(1..=n);
            let xs = pick(rng, k);
            let vals: Vec<String> = xs.iter().map(|_| rng.random_range(0..d).to_string()).collect();
            format!(
                "<instantiation> <list> {} </list> <values> {} </values> </instantiation>",
                xs.join(" "),
                vals.join(" ")
            )
        }
        13 => {
            let xs = some(rng);
            let vals: BTreeSet<i64> = (0..2).map(|_| rng.random_range(0..d)).collect();
            let occ: Vec<String> = vals
                .iter()
                .map(|_| {
                    let lo = rng.random_range(0..=2);
                    format!("{lo}..{}", lo + rng.random_range(0..=2))
                })
                .collect();
            let vals: Vec<String> = vals.iter().map(i64::to_string).collect();
            format!(
                "<cardinality> <list> {} </list> <values> {} </values> <occurs> {} </occurs> </cardinality>",
                xs.join(" "),
                vals.join(" "),
                occ.join(" ")
            )
        }
        14 => {
            let xs = some(rng);
            let states = rng.random_range(1..=3);
            let mut ts = String::new();
            for s in 0..states {
                for a in 0..d {
                    if rng.random_bool(0.6) {
                        ts.push_str(&format!("(q{s},{a},q{})", rng.random_range(0..states)));
                    }
                }
            }
            if ts.is_empty() {
                ts.push_str("(q0,0,q0)");
            }
            format!(
                "<regular> <list> {} </list> <transitions> {ts} </transitions> <start> q0 </start> <final> q{} </final> </regular>",
                xs.join(" "),
                rng.random_range(0..states)
            )
        }
        _ => {
            let xs = some(rng);
            if rng.random_bool(0.5) {
                format!("<channel> {} </channel>", xs.join(" "))
            } else {
                format!("<circuit> {} </circuit>", xs.join(" "))
            }
        }
    }
}

fn random_instance(rng: &mut StdRng) -> String {
    let n = rng.random_range(2..=6);
    let d = rng.random_range(1..=5i64);
    let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut xml = String::from("<instance format=\"XCSP3\" type=\"CSP\">\n<variables>\n");
    for v in &vars {
        xml.push_str(&format!("<var id=\"{v}\"> 0..{} </var>\n", d - 1));
    }
    xml.push_str("</variables>\n<constraints>\n");
    for _ in 0..rng.random_range(2..=4) {
        xml.push_str(&random_constraint(rng, &vars, d));
        xml.push('\n');
    }
    xml.push_str("</constraints>\n</instance>\n");
    xml
}

fn solver_checker_agreement() {
    let mut rng = StdRng::seed_from_u64(2024);
    let t = Instant::now();
    let mut kinds: HashMap<&'static str, usize> = HashMap::new();
    for _ in 0..500 {
        let xml = random_instance(&mut rng);
        let inst = parse_instance(&xml).unwrap_or_else(|e| panic!("{e}\n{xml}"));
        for c in &inst.constraints {
            *kinds.entry(c.kind.name()).or_default() += 1;
        }
        let want = naive_count(&inst);
        let got = count_solutions(&inst, &SearchConfig::default()).unwrap();
        assert_eq!(got, want, "{xml}");
    }
    assert!(kinds.len() >= 14, "{kinds:?}");
    assert!(t.elapsed() < Duration::from_secs(120), "{:?}", t.elapsed());
}

fn instance_files(dir: &Path, out: &mut Vec<PathBuf>) {
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            if p.file_name().unwrap() != "invalid" {
                instance_files(&p, out);
            }
        } else if fs::read_to_string(&p).unwrap().contains("<instance") {
            out.push(p);
        }
    }
}

fn round_trip() {
    let mut files = Vec::new();
    instance_files(&fixtures(), &mut files);
    assert!(files.len() >= 25, "{}", files.len());
    for p in files {
        let a = parse_instance(&fs::read_to_string(&p).unwrap()).unwrap();
        let flat = write_canonical(&a);
        let b = parse_instance(&flat).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert_eq!(a, b, "{}", p.display());
        assert_eq!(write_canonical(&b), flat);
    }
}

fn negative_parse() {
    let bin = env!("CARGO_BIN_EXE_xcsp3");
    let cases = [
        ("attribute_whitespace", "attribute-whitespace"),
        ("condition_whitespace", "condition-whitespace"),
        ("expression_whitespace", "expression-whitespace"),
        ("tuple_whitespace", "tuple-whitespace"),
        ("interval_whitespace", "interval-whitespace"),
        ("domain_order", "domain-order"),
    ];
    for (file, rule) in cases {
        let path = fixtures().join("invalid").join(format!("{file}.xml"));
        let out = Command::new(bin).arg("validate").arg(&path).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{file}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with(&format!("error[{rule}]: /instance")), "{file}: {err}");
        assert_eq!(err.lines().count(), 1, "{file}: {err}");
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 11] = [
        ("cake optimum is 1700 at b=2 c=2 in all three encodings", cake_optimum),
        ("cake encodings have identical solution sets", cake_encodings_agree),
        ("toy network is unsatisfiable", toy_network),
        ("langford-2-04 has exactly two solutions", langford),
        ("3x3 magic square has exactly eight solutions", magic_square),
        ("group and slide expansion matches hand expansion", expansion_suite),
        ("short tables agree with their expansion", short_tables),
        ("regular and mdd agree with path enumeration", automata),
        ("solver count agrees with the naive filter", solver_checker_agreement),
        ("canonical XML reparses to an equal instance", round_trip),
        ("invalid documents are rejected with their rule", negative_parse),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f));
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("FAIL {:>2} {name} ({secs:.2}s): {msg}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
