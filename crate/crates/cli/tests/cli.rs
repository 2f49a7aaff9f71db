use std::path::PathBuf;
use std::process::{Command, Output};

fn core(rel: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", rel].iter().collect();
    p.to_string_lossy().into_owned()
}

fn elas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_elas")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn parse_prints_formula_and_free_variables() {
    let o = elas(&["parse", "[?x := b] K{a} (?x = b)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "[?x := b] K{a} (?x = b)\nfree: {}\n");

    let o = elas(&["parse", "[?x:=?y]P(?x,?z)"]);
    assert!(stdout(&o).ends_with("free: {?y, ?z}\n"));
}

#[test]
fn parse_error_exits_2_with_position() {
    let o = elas(&["parse", "P(a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("column 4"), "{}", stderr(&o));
}

#[test]
fn parse_json() {
    let o = elas(&["parse", "--json", "P(?x) & Q(?y)"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["free"], serde_json::json!(["?x", "?y"]));
}

#[test]
fn check_separates_fixture_models() {
    let phi = "[?x := a] Kh{a} P(?x)";
    let m1 = core("fixtures/m1.json");
    let m2 = core("fixtures/m2.json");
    let o = elas(&["check", &m1, phi, "--world", "s1", "--sigma", "?x=i"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "true"));
    let o = elas(&["check", &m2, phi, "--world", "s1", "--sigma", "?x=i"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "false"));
}

#[test]
fn check_reports_unbound_variable() {
    let o = elas(&["check", &core("fixtures/m1.json"), "P(?x)", "--world", "s1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unbound variable ?x"));
}

#[test]
fn check_rejects_invalid_model() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"worlds": [], "agents": ["i"]}"#).unwrap();
    let o = elas(&["check", path.to_str().unwrap(), "true", "--world", "s1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("invalid model"));
}

#[test]
fn valid_and_sat() {
    let o = elas(&[
        "valid",
        "?x = ?y -> K{a} ?x = ?y",
        "--worlds",
        "3",
        "--agents",
        "3",
        "--epistemic",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("no countermodel up to 3 worlds, 3 agents"));

    let o = elas(&["valid", "a = b -> K{c} a = b", "--epistemic", "--json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "countermodel");
    assert!(v["model"]["worlds"].is_array());

    let o = elas(&["sat", "P(a) & ~P(a)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("unsatisfiable up to"));
}

#[test]
fn countermodel_dump_is_a_loadable_model() {
    let o = elas(&["valid", "a = b -> K{c} a = b", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cm.json");
    std::fs::write(&path, v["model"].to_string()).unwrap();
    let o = elas(&["check", path.to_str().unwrap(), "a = b -> K{c} a = b"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "false"));
}

#[test]
fn json_output_is_stable() {
    let args = [
        "valid",
        "K{a} P(a) -> K{a} K{a} P(a)",
        "--any-frames",
        "--json",
        "--trials",
        "50",
        "--seed",
        "3",
    ];
    assert_eq!(elas(&args).stdout, elas(&args).stdout);
}

#[test]
fn parallel_search_agrees() {
    let one = elas(&["valid", "[?x := b] K{a} P(?x) -> K{a} [?x := b] P(?x)", "--json"]);
    let four = elas(&[
        "valid",
        "[?x := b] K{a} P(?x) -> K{a} [?x := b] P(?x)",
        "--json",
        "--jobs",
        "4",
    ]);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(elas(&["valid", "true", "--jobs", "0"]).status.code(), Some(2));
}

#[test]
fn translate_forms() {
    let o = elas(&["translate", "K{a} P(?x)"]);
    let text = stdout(&o);
    assert!(text.starts_with("forall_w "), "{text}");
    assert!(text.contains("R(w, ") && text.contains("f_a(w)") && text.contains("Q_P("));

    let ex = stdout(&elas(&["translate", "[?x := b] P(?x)"]));
    let un = stdout(&elas(&["translate", "--form", "forall", "[?x := b] P(?x)"]));
    assert!(ex.starts_with("exists_a x."));
    assert!(un.starts_with("forall_a x."));

    let phi = "K{a} (P(b) -> ?y = c)";
    assert_eq!(
        stdout(&elas(&["translate", phi])),
        stdout(&elas(&["translate", "--form", "forall", phi]))
    );
}

#[test]
fn prove_bundled_and_mutated_scripts() {
    for name in ["T", "reletter"] {
        let o = elas(&["prove", &core(&format!("proofs/{name}.selas"))]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).ends_with("proof accepted\n"));
    }
    let text = std::fs::read_to_string(core("proofs/SYM.selas")).unwrap();
    let mutated: String = text
        .lines()
        .map(|l| if l.starts_with("3.") { "3. P(a) ; taut" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mut.selas");
    std::fs::write(&path, mutated).unwrap();
    let o = elas(&["prove", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("   3. FAIL"));

    let o = elas(&["prove", "--json", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["steps"][2]["failure"]["kind"], "not_tautology");
}

#[test]
fn prove_reports_script_syntax_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.selas");
    std::fs::write(&path, "goal: true\n1. true taut\n").unwrap();
    let o = elas(&["prove", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn suites() {
    let o = elas(&["suite", "prop24", "--max-size", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("no EL distinguisher <= 9") && text.contains("ELAS distinguisher found"));

    let o = elas(&["suite", "soundness", "--trials", "300", "--seed", "7", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["violations"], serde_json::json!([]));

    let o = elas(&["suite", "corpus"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(elas(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        elas(&["valid", "true", "--any-frames", "--epistemic"]).status.code(),
        Some(2)
    );
    assert_eq!(elas(&["valid", "true", "--worlds", "0"]).status.code(), Some(2));
}
