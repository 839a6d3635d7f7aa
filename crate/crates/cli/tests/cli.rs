use std::path::{Path, PathBuf};
use std::process::Command;

use dialg_cli::app::run;
use dialg_cli::model::{self, Bindings, Structure};
use dialg_cli::syntax::{parse, print, Block, Coef, DefinitionFile, Entry, LinComb, StructureBlock, StructureKind, Target, Term};
use dialgebra::algebra::{catalog, catalog_names, default_bindings, tw3_algebra, Tw3Reading};
use dialgebra::scalars::{frac, int};
use proptest::prelude::*;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

const CORPUS: [&str; 4] = ["alg2.dlg", "alg3.dlg", "tw3.dlg", "deform.dlg"];

fn dialg(args: &[&str]) -> dialg_cli::app::Outcome {
    run(std::iter::once("dialg").chain(args.iter().copied()))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn corpus_round_trips() {
    for name in CORPUS {
        let text = std::fs::read_to_string(corpus(name)).unwrap();
        let parsed = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = print(&parsed);
        let reparsed = parse(&printed).unwrap();
        assert_eq!(reparsed, parsed, "{name}");
        assert_eq!(print(&reparsed), printed, "{name}");
    }
}

#[test]
fn corpus_matches_builtin_structures() {
    let mut seen = Vec::new();
    for name in ["alg2.dlg", "alg3.dlg"] {
        let file = parse(&std::fs::read_to_string(corpus(name)).unwrap()).unwrap();
        for b in &file.blocks {
            let Block::Structure(s) = b else { panic!() };
            let Structure::Dialgebra(d) = model::structure(s, &Bindings::new()) else { panic!() };
            let expected = catalog(&s.name, &default_bindings(&s.name).unwrap()).unwrap();
            assert_eq!(d, expected, "{}", s.name);
            seen.push(s.name.clone());
        }
    }
    assert_eq!(seen, catalog_names());
    let file = parse(&std::fs::read_to_string(corpus("tw3.dlg")).unwrap()).unwrap();
    for (b, r) in file.blocks.iter().zip(Tw3Reading::ALL) {
        let Block::Structure(s) = b else { panic!() };
        let Structure::Algebra(a) = model::structure(s, &Bindings::new()) else { panic!() };
        assert_eq!(a, tw3_algebra(r));
        assert_eq!(model::matching_tw3(&a), Some(r));
    }
}

#[test]
fn parameter_overrides_follow_catalog() {
    let file = parse(&std::fs::read_to_string(corpus("alg2.dlg")).unwrap()).unwrap();
    let Block::Structure(s) = &file.blocks[0] else { panic!() };
    let b: Bindings = [("a", frac(2, 3)), ("b", int(-1)), ("c", int(5)), ("d", frac(1, 2)), ("f", int(7))]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let Structure::Dialgebra(d) = model::structure(s, &b) else { panic!() };
    assert_eq!(d, catalog("Alg2_1", &b).unwrap());
}

#[test]
fn verify_exit_codes() {
    for name in ["alg2.dlg", "alg3.dlg", "deform.dlg"] {
        let out = dialg(&["verify", path(&corpus(name))]);
        assert_eq!(out.code, 0, "{name}: {}", out.stdout);
        assert!(out.stdout.contains("axioms: OK (6/6)"));
    }
    let out = dialg(&["verify", path(&corpus("tw3.dlg"))]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("axioms: FAIL"));
}

#[test]
fn error_fixtures() {
    for (file, message) in [
        ("lexical.dlg", ":4:22: error: unexpected character `@`"),
        ("unknown_basis.dlg", ":4:13: error: unknown basis e3"),
        ("conflicting_entry.dlg", ":7:3: error: conflicting entry mul(e1, e2)"),
    ] {
        let p = fixture(file);
        let out = dialg(&["verify", path(&p)]);
        assert_eq!(out.code, 2, "{file}");
        assert_eq!(out.stderr, format!("{}{message}\n", p.display()));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn usage_errors() {
    let alg2 = corpus("alg2.dlg");
    let deform = corpus("deform.dlg");
    for args in [
        vec!["verify", "/nonexistent.dlg"],
        vec!["verify", path(&alg2), "--name", "Nope"],
        vec!["derive", path(&alg2), "--k", "1", "--l", "1"],
        vec!["deform", path(&deform), "--name", "Rigid", "--check-order", "2"],
        vec!["trivialize", path(&deform), "--name", "Rigid", "--order", "5"],
        vec!["cohomology", path(&alg2), "--name", "Alg2_1", "--degree", "2", "--complex", "hoch"],
        vec!["cohomology", path(&alg2), "--name", "Alg2_1", "--degree", "0"],
        vec!["classify", "--catalog", "--bind", "a"],
        vec!["frobnicate"],
    ] {
        let out = dialg(&args);
        assert_eq!(out.code, 2, "{args:?}: {}", out.stdout);
        assert!(!out.stderr.is_empty());
    }
    assert_eq!(dialg(&["--help"]).code, 0);
}

#[test]
fn derive_reports_dimension() {
    let out = dialg(&["derive", path(&corpus("alg3.dlg")), "--name", "Alg3_3", "--k", "1", "--l", "1"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("dim Der = 2"), "{}", out.stdout);
    let out = dialg(&["derive", path(&corpus("alg2.dlg")), "--name", "Alg2_1", "--k", "1", "--l", "1", "--quasi"]);
    assert!(out.stdout.contains("dim Der = 3"), "{}", out.stdout);
    let out = dialg(&[
        "derive",
        path(&corpus("alg2.dlg")),
        "--name",
        "Alg2_1",
        "--k",
        "0",
        "--l",
        "0",
        "--alpha",
        "1",
        "--beta",
        "1",
        "--gamma",
        "1",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
}

#[test]
fn deformation_commands() {
    let f = corpus("deform.dlg");
    let run_on = |args: &[&str]| dialg(&[&[args[0], path(&f)], &args[1..]].concat());
    assert_eq!(run_on(&["deform", "--name", "Rigid", "--check-order", "1"]).code, 0);
    let rigid = run_on(&["trivialize", "--name", "Rigid", "--order", "1"]);
    assert_eq!(rigid.code, 1);
    assert!(rigid.stdout.contains("trivial: no"));
    assert!(rigid.stdout.contains("obstruction is a cocycle: yes"));
    let removable = run_on(&["trivialize", "--name", "Removable", "--order", "1"]);
    assert_eq!(removable.code, 0);
    assert!(removable.stdout.contains("witness verified: yes"));
    assert_eq!(run_on(&["trivialize", "--name", "Still", "--order", "2"]).code, 0);
}

#[test]
fn cohomology_and_operad_commands() {
    let out = dialg(&["cohomology", path(&corpus("alg2.dlg")), "--name", "Alg2_2", "--degree", "2"]);
    assert_eq!(out.code, 0);
    for line in ["compatible cochains: 8", "dim Z = 6", "dim B = 2", "dim H = 4"] {
        assert!(out.stdout.contains(line), "{}", out.stdout);
    }
    let out = dialg(&["cohomology", path(&corpus("tw3.dlg")), "--name", "Tw3_A", "--degree", "2"]);
    assert_eq!(out.code, 1, "failed precondition is reported");
    assert!(out.stdout.contains("listed 2-cocycles for Tw3_A"));
    let out = dialg(&["cohomology", path(&corpus("tw3.dlg")), "--name", "Tw3_B", "--degree", "3"]);
    assert!(out.stdout.contains("excluded"));
    let out = dialg(&["operad-check", path(&corpus("alg3.dlg")), "--name", "Alg3_5"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.matches(" matches").count(), 5);
}

#[test]
fn reports_are_deterministic() {
    let alg2 = corpus("alg2.dlg");
    let deform = corpus("deform.dlg");
    let commands: Vec<Vec<&str>> = vec![
        vec!["verify", path(&alg2)],
        vec!["derive", path(&alg2), "--name", "Alg2_4", "--k", "1", "--l", "1", "--triple"],
        vec!["classify", "--catalog", "--bind", "a=2,f=-1/3"],
        vec!["cohomology", path(&alg2), "--name", "Alg2_3", "--degree", "2"],
        vec!["operad-check", path(&alg2), "--name", "Alg2_1"],
        vec!["trivialize", path(&deform), "--name", "Removable", "--order", "1"],
    ];
    for c in commands {
        let a = dialg(&c);
        let b = dialg(&c);
        assert_eq!(a, b, "{c:?}");
        let seq = dialg(&[&["--sequential"], c.as_slice()].concat());
        assert_eq!(seq.stdout, a.stdout, "{c:?}");
        let j1 = dialg(&[&["--json"], c.as_slice()].concat());
        let j2 = dialg(&[&["--json"], c.as_slice()].concat());
        assert_eq!(j1, j2);
        assert_eq!(j1.code, a.code);
        let v: serde_json::Value = serde_json::from_str(&j1.stdout).unwrap();
        let titles: Vec<&str> = v["sections"].as_array().unwrap().iter().map(|s| s["title"].as_str().unwrap()).collect();
        for t in titles {
            assert!(a.stdout.contains(t));
        }
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_dialg");
    let ok = Command::new(bin).args(["verify", path(&corpus("alg2.dlg"))]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("axioms: OK (6/6)"));
    let bad = Command::new(bin).args(["verify", path(&fixture("lexical.dlg"))]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let fail = Command::new(bin).args(["verify", path(&corpus("tw3.dlg"))]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
}

fn lincomb(dim: usize, params: usize) -> impl Strategy<Value = LinComb> {
    let coef = prop_oneof![
        (-9i64..=9, 1i64..=5).prop_filter("nonzero", |(p, _)| *p != 0).prop_map(|(p, q)| Coef { scale: frac(p, q), param: None }),
        (0..params.max(1), any::<bool>()).prop_map(move |(i, neg)| Coef {
            scale: int(if neg { -1 } else { 1 }),
            param: Some(format!("p{i}")),
        }),
    ];
    let coef = if params == 0 { coef.prop_filter("no params", |c| c.param.is_none()).boxed() } else { coef.boxed() };
    prop::collection::vec((coef, 0..dim).prop_map(|(coef, basis)| Term { coef, basis }), 0..4).prop_map(|terms| LinComb { terms })
}

fn structure_block() -> impl Strategy<Value = StructureBlock> {
    (1usize..=3, 0usize..=2, any::<bool>()).prop_flat_map(|(dim, params, dialgebra)| {
        let kind = if dialgebra { StructureKind::Dialgebra } else { StructureKind::Algebra };
        let target = (0..5usize, 0..dim, 0..dim).prop_map(move |(t, i, j)| match (t, dialgebra) {
            (0, true) => Target::Dashv(i, j),
            (1, true) => Target::Vdash(i, j),
            (0 | 1, false) => Target::Mul(i, j),
            (2 | 3, _) => Target::Phi(i),
            _ => Target::Psi(j),
        });
        let entries = prop::collection::vec((target, lincomb(dim, params)).prop_map(|(target, value)| Entry { target, value }), 0..8);
        let values = prop::collection::vec((-5i64..=5, 1i64..=4), params);
        (entries, values).prop_map(move |(entries, values)| {
            let mut kept: Vec<Entry> = Vec::new();
            for e in entries {
                if !kept.iter().any(|k| k.target == e.target) {
                    kept.push(e);
                }
            }
            StructureBlock {
                kind,
                name: "S".into(),
                basis: (1..=dim).map(|i| format!("e{i}")).collect(),
                params: values.into_iter().enumerate().map(|(i, (p, q))| (format!("p{i}"), frac(p, q))).collect(),
                entries: kept,
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_files_reparse_to_the_same_definition(block in structure_block()) {
        let file = DefinitionFile { blocks: vec![Block::Structure(block)] };
        let text = print(&file);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, file);
    }
}
