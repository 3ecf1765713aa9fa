use std::fs;
use std::path::{Path, PathBuf};

use xcsp3_core::parser::{parse_instance, parse_solution, write_canonical, Rule, SolutionKind};
use xcsp3_core::{ConstraintKind, Instance};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn load(rel: &str) -> Instance {
    let text = fs::read_to_string(fixtures().join(rel)).unwrap();
    parse_instance(&text).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

fn instance_files(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        if p.is_dir() {
            if p.file_name().unwrap() != "invalid" {
                out.extend(instance_files(&p));
            }
        } else if fs::read_to_string(&p).unwrap().contains("<instance") {
            out.push(p);
        }
    }
    out.sort();
    out
}

fn kinds(inst: &Instance) -> Vec<(Option<String>, ConstraintKind)> {
    inst.constraints
        .iter()
        .map(|c| (c.id.clone(), c.kind.clone()))
        .collect()
}

#[test]
fn every_fixture_parses_and_round_trips() {
    let files = instance_files(&fixtures());
    assert!(files.len() >= 20);
    for p in files {
        let text = fs::read_to_string(&p).unwrap();
        let a = parse_instance(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        let flat = write_canonical(&a);
        let b = parse_instance(&flat).unwrap_or_else(|e| panic!("{}: {e}\n{flat}", p.display()));
        assert_eq!(a, b, "{}", p.display());
    }
}

#[test]
fn groups_and_slides_match_hand_expansion() {
    for name in ["group_g", "group_h", "slide_c1", "slide_c2", "slide_c3", "slide_c4"] {
        let got = load(&format!("expansion/{name}.xml"));
        let want = load(&format!("expansion/{name}.expanded.xml"));
        assert_eq!(kinds(&got), kinds(&want), "{name}");
    }
    let want: Vec<_> = kinds(&load("expansion/latin.expanded.xml"))
        .into_iter()
        .map(|(_, k)| k)
        .collect();
    for name in ["latin_explicit.xml", "latin_compact.xml"] {
        let got: Vec<_> = kinds(&load(name)).into_iter().map(|(_, k)| k).collect();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn invalid_fixtures_name_their_rule() {
    let dir = fixtures().join("invalid");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let p = entry.unwrap().path();
        let text = fs::read_to_string(&p).unwrap();
        let rule = text
            .lines()
            .next()
            .and_then(|l| l.strip_prefix("<!-- expect: "))
            .and_then(|l| l.strip_suffix(" -->"))
            .unwrap();
        let err = parse_instance(&text).expect_err(rule);
        assert_eq!(err.rule.tag(), rule, "{}: {err}", p.display());
        assert!(err.to_string().starts_with(&format!("error[{rule}]: /")));
        seen += 1;
    }
    assert_eq!(seen, 6);
}

#[test]
fn cake_encodings_parse_to_five_constraints() {
    for name in ["cake_intension.xml", "cake_group.xml", "cake_sum.xml"] {
        let inst = load(name);
        assert_eq!(inst.constraints.len(), 5, "{name}");
        assert!(inst.objective.is_some());
    }
    let sum = load("cake_sum.xml");
    assert_eq!(
        sum.constraints[1].note.as_deref(),
        Some("using the 6 bananas")
    );
}

#[test]
fn solution_documents() {
    let cake = load("cake_sum.xml");
    let text = fs::read_to_string(fixtures().join("cake_optimum.xml")).unwrap();
    let sol = parse_solution(&text, &cake).unwrap();
    assert_eq!(sol.kind, SolutionKind::Optimum);
    assert_eq!(sol.cost, Some(1700));
    assert_eq!(sol.assignment.len(), 2);

    let useless = load("useless.xml");
    for f in ["useless_sol_listed.xml", "useless_sol_star.xml", "useless_sol_value.xml"] {
        let text = fs::read_to_string(fixtures().join(f)).unwrap();
        let sol = parse_solution(&text, &useless).unwrap_or_else(|e| panic!("{f}: {e}"));
        assert_eq!(sol.kind, SolutionKind::Solution);
    }
}

#[test]
fn diagnostics_carry_element_paths() {
    let text = r#"<instance format="XCSP3" type="CSP">
  <variables>
    <var id="x"> 0..3 </var>
    <var id="y"> 0..3 </var>
  </variables>
  <constraints>
    <intension> lt(x,y) </intension>
    <sum>
      <list> x y </list>
      <condition> (lt, 10) </condition>
    </sum>
  </constraints>
</instance>"#;
    let err = parse_instance(text).unwrap_err();
    assert_eq!(err.rule, Rule::ConditionWhitespace);
    assert_eq!(err.path, "/instance/constraints/sum/condition");
}
