use std::path::PathBuf;
use std::process::Command;

use serde_json::Value as Json;
use skelsem::exit;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("skelsem").chain(args.iter().copied());
    let code = skelsem::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn check_wf_both_packs() {
    let (code, out, _) = run(&["check-wf"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out.lines().count(), 10);
    assert!(out.lines().all(|l| l.starts_with("OK ")));
    let (code, out, _) = run(&["--lang", "while-ext", "check-wf"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out.lines().count(), 17);
}

#[test]
fn check_wf_mutations_fail_with_reason() {
    for (m, line) in [
        ("undefined-var", "FAIL Seq bone=2 reason=UseBeforeDef"),
        ("branch-share", "FAIL If bone=3 reason=BranchShareMismatch"),
        ("filter-arity", "FAIL Lit bone=1 reason=SortClash"),
    ] {
        let (code, out, _) = run(&["check-wf", "--mutate", m]);
        assert_eq!(code, exit::CHECK_FAILED, "{m}");
        let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
        assert_eq!(fails, [line], "{m}");
    }
}

#[test]
fn check_wf_json() {
    let (code, out, _) = run(&["--json", "check-wf", "--mutate", "branch-share"]);
    assert_eq!(code, exit::CHECK_FAILED);
    let j: Json = serde_json::from_str(&out).unwrap();
    let bad: Vec<&Json> = j
        .as_array()
        .unwrap()
        .iter()
        .filter(|v| v["ok"] == false)
        .collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["reason"], "BranchShareMismatch");
}

#[test]
fn eval_exit_codes() {
    let (code, out, _) = run(&["eval", &fixture("countdown.wh"), "--state", "x=5"]);
    assert_eq!((code, out.as_str()), (exit::OK, "{x=0}\n"));
    let (code, out, _) = run(&["eval", &fixture("stuck.wh")]);
    assert_eq!((code, out.as_str()), (exit::STUCK, "STUCK\n"));
    let (code, out, _) = run(&["eval", &fixture("forever.wh"), "--fuel", "50"]);
    assert_eq!((code, out.as_str()), (exit::FUEL, "FUEL\n"));
}

#[test]
fn eval_ext_programs() {
    let (code, out, _) = run(&[
        "--lang",
        "while-ext",
        "eval",
        &fixture("counter.whx"),
        "--input",
        "41",
    ]);
    assert_eq!(code, exit::OK);
    assert_eq!(
        out,
        "(ok, (in=[], out=[42, 7], {p=@0, x=41}, heap=<1|0:42>))\n"
    );
    let (code, out, _) = run(&["--lang", "while-ext", "eval", &fixture("escape.whx")]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("out=[0, 1, 2, -1]"), "{out}");
    let (code, _, _) = run(&["--lang", "while-ext", "eval", &fixture("counter.whx")]);
    assert_eq!(code, exit::STUCK);
}

#[test]
fn usage_errors() {
    for args in [
        vec!["frobnicate"],
        vec!["eval"],
        vec!["eval", "no-such-file.wh"],
        vec!["eval", &fixture("countdown.wh"), "--state", "x"],
        vec!["eval", &fixture("countdown.wh"), "--bogus"],
        vec!["eval", &fixture("counter.whx")],
        vec!["--lang", "cobol", "check-wf"],
        vec!["check-triples", &fixture("countdown.wh")],
        vec!["show-skeleton", "goto"],
        vec!["prove-filters", "--mutate", "nosuch"],
        vec!["analyze", &fixture("countdown.wh"), "--state", "x=[1;"],
    ] {
        let (code, _, err) = run(&args);
        assert_eq!(code, exit::USAGE, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, exit::OK);
    assert!(out.contains("check-wf"));
}

#[test]
fn check_triples_with_and_without_split() {
    let f = fixture("countdown_split.json");
    let (code, out, _) = run(&["check-triples", "--split", &f]);
    assert_eq!((code, out.as_str()), (exit::OK, "PASS 14/14\n"));
    let (code, out, _) = run(&["check-triples", &f]);
    assert_eq!(code, exit::CHECK_FAILED);
    assert_eq!(
        out,
        "FAIL 1/14\n  {x=[1;+inf]} while not (x = 0) do x := x - 1 end {x=0}\n"
    );
    let (code, out, _) = run(&["check-triples", "--split", &fixture("countdown_gap.json")]);
    assert_eq!(code, exit::CHECK_FAILED);
    assert!(out.contains("{x=[0;+inf]} while"), "{out}");
}

#[test]
fn gen_constraints_to_file() {
    let dir = std::env::temp_dir().join(format!("skelsem-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.json");
    let (code, out, _) = run(&[
        "gen-constraints",
        &fixture("countdown.wh"),
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!((code, out.as_str()), (exit::OK, ""));
    let j: Json = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["vars"]["r.1#x_o"], "Val");
    let list = j["constraints"].as_array().unwrap();
    assert!(
        list.contains(&serde_json::json!({"filter": "isBool", "in": ["r#f1"], "out": ["r#f1p"]}))
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn analyze_prints_root_triple() {
    let (code, out, _) = run(&["analyze", &fixture("countdown.wh"), "--state", "x=[0;+inf]"]);
    assert_eq!(code, exit::OK);
    assert_eq!(out.lines().next(), Some("state  {x=[-inf;+inf]}"));
    let (code, out, _) = run(&[
        "--json",
        "analyze",
        &fixture("countdown.wh"),
        "--state",
        r#"{"state": {"x": {"int": 3}}}"#,
    ]);
    assert_eq!(code, exit::OK);
    let j: Json = serde_json::from_str(&out).unwrap();
    assert_eq!(j["triples"], 8);
}

#[test]
fn analyze_writes_triples_that_check() {
    let dir = std::env::temp_dir().join(format!("skelsem-an-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("t.json");
    let p = path.to_str().unwrap();
    let (code, _, _) = run(&[
        "--lang",
        "while-ext",
        "analyze",
        &fixture("escape.whx"),
        "--triples",
        p,
    ]);
    assert_eq!(code, exit::OK);
    let (code, out, _) = run(&["--lang", "while-ext", "check-triples", p]);
    assert_eq!(code, exit::OK, "{out}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn show_skeleton_dump() {
    let (code, out, _) = run(&["show-skeleton", "while"]);
    assert_eq!(code, exit::OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[1], "  H x_s |- t1 -| f1");
    assert_eq!(lines[2], "  F isBool(f1) |> (f1')");
    assert_eq!(lines[3], "  BRANCH {x_o}:");
}

#[test]
fn prove_filters_passes_and_catches_mutant() {
    let (code, out, _) = run(&["prove-filters", "--trials", "300"]);
    assert_eq!(code, exit::OK, "{out}");
    assert_eq!(out.lines().count(), 13);
    let (code, out, _) = run(&["prove-filters", "--trials", "300", "--mutate", "add"]);
    assert_eq!(code, exit::CHECK_FAILED);
    let fails: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(fails.len(), 1);
    assert!(fails[0].starts_with("FAIL add "));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec![
            "--seed",
            "7",
            "--lang",
            "while-ext",
            "prove-filters",
            "--trials",
            "200",
        ],
        vec![
            "--lang",
            "while-ext",
            "--json",
            "analyze",
            &fixture("counter.whx"),
        ],
        vec!["gen-constraints", &fixture("countdown.wh")],
    ] {
        let a = run(&args);
        let b = run(&args);
        let mut seq = args.clone();
        seq.insert(0, "--sequential");
        let c = run(&seq);
        assert_eq!(a, b, "{args:?}");
        assert_eq!(a, c, "{args:?}");
    }
}

#[test]
fn binary_exit_code() {
    let st = Command::new(env!("CARGO_BIN_EXE_skelsem"))
        .args(["eval", &fixture("forever.wh"), "--fuel", "20"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(exit::FUEL));
    assert_eq!(String::from_utf8_lossy(&st.stdout), "FUEL\n");
}
