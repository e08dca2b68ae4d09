//! End-to-end runs of the nimforge binary: output text, file artifacts,
//! and the exit-code contract (0 ok, 1 disagreement, 2 resource limit,
//! 3 bad input).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use nimforge_core::catalog::{load_catalog, save_catalog};
use nimforge_core::FusionRing;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nimforge"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nimforge"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn classify_to(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let out = Command::new(env!("CARGO_BIN_EXE_nimforge"))
        .args(args)
        .arg("--out")
        .arg(&path)
        .output()
        .expect("binary should run");
    assert_eq!(code(&out), 0, "classify failed: {}", stderr_of(&out));
    path
}

#[test]
fn classify_jl_prints_the_class_count() {
    let out = run(&["classify", "jl", "--group", "Z2xZ2", "--p", "3", "--orbits", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("classes: 4 (orbit count 1)"));
}

#[test]
fn classify_summary_breaks_counts_down_by_dimension() {
    let out = run(&[
        "classify", "jl", "--group", "Z2xZ2", "--p", "3", "--orbits", "1", "--summary",
    ]);
    let text = stdout_of(&out);
    assert!(text.contains("orbits=1 dim=1: 1"));
    assert!(text.contains("orbits=1 dim=2: 3"));
}

#[test]
fn reproducible_catalogs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["classify", "glm", "--group", "Z2xZ2", "--delta", "0", "--reproducible"];
    let a = classify_to(dir.path(), "a.json", &args);
    let b = classify_to(dir.path(), "b.json", &args);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn catalog_files_round_trip_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z2xZ2", "--p", "3", "--reproducible"],
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let catalog = load_catalog(&text).unwrap();
    assert_eq!(save_catalog(&catalog).unwrap(), text);
}

#[test]
fn delta_digit_tuples_name_the_same_element() {
    let dir = tempfile::tempdir().unwrap();
    let a = classify_to(
        dir.path(),
        "digits.json",
        &["classify", "glm", "--group", "Z2xZ2", "--delta", "(1,0)", "--reproducible"],
    );
    let b = classify_to(
        dir.path(),
        "index.json",
        &["classify", "glm", "--group", "Z2xZ2", "--delta", "2", "--reproducible"],
    );
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn ring_jl_rejects_non_square_orders() {
    let out = run(&["ring", "jl", "--group", "Z2", "--p", "3"]);
    assert_eq!(code(&out), 3);
    assert!(stderr_of(&out).contains("perfect square"));
}

#[test]
fn ring_glm_rejects_odd_orders_without_the_flag() {
    let refused = run(&["ring", "glm", "--group", "Z3", "--delta", "0"]);
    assert_eq!(code(&refused), 3);
    assert!(stderr_of(&refused).contains("even order"));

    let allowed = run(&["ring", "glm", "--group", "Z3", "--delta", "0", "--allow-odd"]);
    assert_eq!(code(&allowed), 0, "{}", stderr_of(&allowed));
    assert!(stdout_of(&allowed).contains("axioms: pass"));
}

#[test]
fn ring_jl_reports_axioms_and_writes_the_ring() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ring.json");
    let out = run(&[
        "ring", "jl", "--group", "Z2xZ2", "--p", "3", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("axioms: pass"));
    let ring = FusionRing::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(ring.basis_len(), 6);
}

#[test]
fn group_and_table_flags_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("z2.json");
    std::fs::write(&table, "[[0,1],[1,0]]").unwrap();
    let both = run(&[
        "ring", "jl", "--group", "Z2", "--table", table.to_str().unwrap(), "--p", "2",
    ]);
    assert_eq!(code(&both), 3);
    let neither = run(&["ring", "jl", "--p", "2"]);
    assert_eq!(code(&neither), 3);
}

#[test]
fn table_files_define_groups() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("z2.json");
    std::fs::write(&table, "[[0,1],[1,0]]").unwrap();
    let out = run(&["ring", "glm", "--table", table.to_str().unwrap(), "--delta", "1"]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    assert!(stdout_of(&out).contains("axioms: pass"));
}

#[test]
fn graph_dot_output_is_stable_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z2", "--p", "2", "--reproducible"],
    );
    let args = ["graph", "--catalog", path.to_str().unwrap(), "--entry", "0"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(stdout_of(&first), stdout_of(&second));
    assert!(stdout_of(&first).starts_with("digraph"));
}

#[test]
fn orbit_graph_flag_contracts_group_edges() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z2xZ2", "--p", "3", "--reproducible"],
    );
    let out = run(&[
        "graph", "--catalog", path.to_str().unwrap(), "--entry", "0", "--orbit-graph",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("digraph nim_orbits"));
    assert!(text.contains("X1"));
}

#[test]
fn graph_rejects_out_of_range_entries() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z2", "--p", "2"],
    );
    let out = run(&["graph", "--catalog", path.to_str().unwrap(), "--entry", "99"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_matching_catalog_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z2", "--p", "2"],
    );
    let out = run(&[
        "verify", "--catalog", path.to_str().unwrap(), "--max-dim", "3", "--no-hints",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("oracle classes found: 1"));
    assert!(text.contains("agreement: yes"));
}

#[test]
fn verify_reports_a_missing_class() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z4", "--p", "2"],
    );
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let entries = v["entries"].as_array_mut().unwrap();
    let before = entries.len();
    entries.retain(|e| e["dim"].as_u64() != Some(1));
    assert_eq!(entries.len(), before - 1);
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();

    let out = run(&["verify", "--catalog", path.to_str().unwrap(), "--max-dim", "4"]);
    assert_eq!(code(&out), 1);
    let text = stdout_of(&out);
    assert!(text.contains("oracle-only classes"));
    assert!(text.contains("agreement: no"));
}

#[test]
fn verify_rejects_tampered_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z2", "--p", "2"],
    );
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cell = &mut v["entries"][0]["matrices"][2][0][0];
    *cell = serde_json::json!(cell.as_u64().unwrap() + 1);
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();

    let out = run(&["verify", "--catalog", path.to_str().unwrap(), "--max-dim", "3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn verify_zero_budget_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z2xZ2", "--p", "3"],
    );
    let out = run(&[
        "verify", "--catalog", path.to_str().unwrap(), "--max-dim", "6", "--time-budget", "0",
    ]);
    assert_eq!(code(&out), 2, "{}", stdout_of(&out));
    assert!(stdout_of(&out).contains("(partial)"));
}

#[test]
fn verify_report_file_carries_reference_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z2", "--p", "2"],
    );
    let report_path = dir.path().join("report.json");
    let out = run(&[
        "verify",
        "--catalog",
        path.to_str().unwrap(),
        "--max-dim",
        "3",
        "--reference",
        "stated=1",
        "--reference",
        "wrong=7",
        "--report",
        report_path.to_str().unwrap(),
        "--attach",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("stated count stated=1 matches the oracle"));
    assert!(text.contains("stated count wrong=7 differs from the oracle"));

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(report["oracle_count"], 1);
    assert_eq!(report["reference_counts"][0]["matches_oracle"], true);
    assert_eq!(report["reference_counts"][1]["matches_oracle"], false);

    let attached: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(attached["cross_check"].is_object());
}

#[test]
fn verify_dump_lists_every_found_class() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "jl", "--group", "Z4", "--p", "2"],
    );
    let dump_path = dir.path().join("found.json");
    let out = run(&[
        "verify",
        "--catalog",
        path.to_str().unwrap(),
        "--max-dim",
        "4",
        "--dump",
        dump_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout_of(&out));

    let found: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&dump_path).unwrap()).unwrap();
    let list = found.as_array().unwrap();
    assert_eq!(list.len(), 4);
    let catalog = load_catalog(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let ring = catalog.build_ring().unwrap();
    for rep in list {
        assert_eq!(rep["matrices"].as_object().unwrap().len(), ring.basis_len());
        let back =
            nimforge_core::NimRep::from_json(&rep.to_string(), ring.clone()).unwrap();
        assert!(back.is_irreducible());
    }
}

#[test]
fn algebras_agree_for_small_catalogs() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "glm", "--group", "Z2", "--delta", "0"],
    );
    let out = run(&["algebras", "--catalog", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.contains("closed-form"));
    assert!(text.contains("(agree)"));
    assert!(!text.contains("DIFFER"));
}

#[test]
fn algebras_rejects_out_of_range_entries() {
    let dir = tempfile::tempdir().unwrap();
    let path = classify_to(
        dir.path(),
        "cat.json",
        &["classify", "glm", "--group", "Z2", "--delta", "0"],
    );
    let out = run(&["algebras", "--catalog", path.to_str().unwrap(), "--entry", "99"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn thread_cap_is_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_nimforge"))
        .env("NIMFORGE_THREADS", "1")
        .args(["classify", "jl", "--group", "Z2xZ2", "--p", "3"])
        .output()
        .expect("binary should run");
    assert_eq!(code(&out), 0);
    assert!(stdout_of(&out).contains("classes: 17"));
}

#[test]
fn relative_out_paths_land_in_the_working_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["classify", "jl", "--group", "Z2", "--p", "2", "--out", "cat.json"],
    );
    assert_eq!(code(&out), 0);
    assert!(dir.path().join("cat.json").exists());
}
