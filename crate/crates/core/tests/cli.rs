//! End-to-end tests of the `bondlab` binary: exit codes, golden help text,
//! seeded determinism, environment fallback, and pipeline composition.

use std::path::Path;
use std::process::{Command, Output};

use bondlab::domination;
use bondlab::graph;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bondlab"));
    // Isolate from the ambient environment; individual tests opt back in.
    cmd.env_remove("BONDLAB_SEED");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn json_line(out: &Output) -> serde_json::Value {
    let text = stdout_str(out);
    let line = text.lines().next().expect("has output");
    serde_json::from_str(line).expect("first stdout line is JSON")
}

fn write_temp(dir: &tempfile::TempDir, name: &str, contents: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_string()
}

// ---------------------------------------------------------------------------
// Exit codes
// ---------------------------------------------------------------------------

#[test]
fn help_and_version_exit_zero() {
    for args in [&["--help"][..], &["--version"][..], &["gamma", "--help"][..]] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
    }
    let out = run(&["--version"]);
    assert!(stdout_str(&out).starts_with("bondlab "));
}

#[test]
fn usage_errors_exit_one() {
    let cases: &[&[&str]] = &[
        &[],                                              // no subcommand
        &["gamma"],                                       // missing --in
        &["gamma", "--in", "g.json", "--bogus"],          // unknown flag
        &["gen", "--n", "8", "--p", "0.5", "--m", "3"],   // conflicting model flags
        &["gen", "--n", "8"],                             // neither model flag
        &["nope"],                                        // unknown subcommand
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write_temp(&dir, "bad.json", "{\"n\": 3, \"edges\": [[0, 9]]}\n");
    let cases: &[&[&str]] = &[
        &["gen", "--n", "8", "--p", "1.5"],
        &["formulas", "--n", "10", "--p", "0.05"], // p*n <= 1
        &["exp", "unknown-kind", "--n", "8"],
        &["exp", "moments", "--n", "8", "--p", "0.4"], // missing --k
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr_str(&out).contains("error:"), "{args:?}");
    }
    let out = run(&["gamma", "--in", &bad_json]);
    assert_eq!(out.status.code(), Some(1), "malformed graph file");
}

#[test]
fn capacity_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let complete = run(&["gen", "--n", "8", "--p", "1"]);
    let k8 = write_temp(&dir, "k8.json", &stdout_str(&complete));
    // K8 has eight minimum dominating sets; a cap of two overflows.
    let out = run(&["bondage", "--in", &k8, "--mode", "certify", "--cap", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_errors_exit_three() {
    let out = run(&["gamma", "--in", "/nonexistent/graph.json"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&[
        "gen", "--n", "4", "--p", "0.5", "--out", "/nonexistent/dir/g.json",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

// ---------------------------------------------------------------------------
// Golden help text
// ---------------------------------------------------------------------------

fn check_golden(args: &[&str], golden: &str) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0));
    let expected_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(golden);
    let expected = std::fs::read_to_string(&expected_path)
        .unwrap_or_else(|_| panic!("golden file {} exists", expected_path.display()));
    assert_eq!(
        stdout_str(&out),
        expected,
        "help text changed; regenerate tests/golden/{golden} if intentional"
    );
}

#[test]
fn help_matches_golden_files() {
    check_golden(&["--help"], "help.txt");
    check_golden(&["gen", "--help"], "help_gen.txt");
    check_golden(&["gamma", "--help"], "help_gamma.txt");
    check_golden(&["bondage", "--help"], "help_bondage.txt");
    check_golden(&["damage", "--help"], "help_damage.txt");
    check_golden(&["formulas", "--help"], "help_formulas.txt");
    check_golden(&["exp", "--help"], "help_exp.txt");
}

// ---------------------------------------------------------------------------
// Seeding and determinism
// ---------------------------------------------------------------------------

#[test]
fn gen_is_deterministic_per_seed() {
    let a = run(&["gen", "--n", "20", "--p", "0.3", "--seed", "11"]);
    let b = run(&["gen", "--n", "20", "--p", "0.3", "--seed", "11"]);
    let c = run(&["gen", "--n", "20", "--p", "0.3", "--seed", "12"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert!(stderr_str(&a).contains("seed: 11"));
}

#[test]
fn seed_env_fallback_and_precedence() {
    let flag = run(&["gen", "--n", "12", "--p", "0.5", "--seed", "7"]);
    let mut env_cmd = bin();
    env_cmd.env("BONDLAB_SEED", "7");
    let env_out = env_cmd
        .args(["gen", "--n", "12", "--p", "0.5"])
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env_out.stdout);
    assert!(stderr_str(&env_out).contains("seed: 7"));

    // The flag wins over the environment.
    let mut both_cmd = bin();
    both_cmd.env("BONDLAB_SEED", "99");
    let both = both_cmd
        .args(["gen", "--n", "12", "--p", "0.5", "--seed", "7"])
        .output()
        .unwrap();
    assert_eq!(both.stdout, flag.stdout);
    assert!(stderr_str(&both).contains("seed: 7"));

    // Unset means seed 0.
    let default = run(&["gen", "--n", "12", "--p", "0.5"]);
    let zero = run(&["gen", "--n", "12", "--p", "0.5", "--seed", "0"]);
    assert_eq!(default.stdout, zero.stdout);
    assert!(stderr_str(&default).contains("seed: 0"));

    // A garbage environment value is an error, not a silent fallback.
    let mut bad_cmd = bin();
    bad_cmd.env("BONDLAB_SEED", "not-a-number");
    let bad = bad_cmd.args(["gen", "--n", "12", "--p", "0.5"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn every_run_prints_the_resolved_seed() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_temp(&dir, "k2.txt", "n 2\n0 1\n");
    for args in [
        &["gamma", "--in", g.as_str()][..],
        &["bondage", "--in", g.as_str()][..],
        &["damage", "--in", g.as_str()][..],
        &["formulas", "--n", "100", "--p", "0.5"][..],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        assert!(stderr_str(&out).contains("seed: 0"), "{args:?}");
    }
}

#[test]
fn exp_output_files_are_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    for (path, fmt) in [(&out_a, "csv"), (&out_b, "csv")] {
        let out = bin()
            .args([
                "exp", "moments", "--n", "10", "--p", "0.4", "--k", "3",
                "--samples", "15", "--seed", "5",
                "--out", path.to_str().unwrap(), "--format", fmt,
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert_eq!(a, b);

    // JSON-lines: one metadata line plus one line per replicate.
    let out_j = dir.path().join("a.jsonl");
    let out = bin()
        .args([
            "exp", "moments", "--n", "10", "--p", "0.4", "--k", "3",
            "--samples", "15", "--seed", "5",
            "--out", out_j.to_str().unwrap(), "--format", "jsonl",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_j).unwrap();
    assert_eq!(text.lines().count(), 16);
}

// ---------------------------------------------------------------------------
// Output contracts
// ---------------------------------------------------------------------------

#[test]
fn gamma_on_k2_matches_contract_and_library() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_temp(&dir, "k2.txt", "n 2\n0 1\n");
    let out = run(&["gamma", "--in", &g]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.trim(), "{\"gamma\":1,\"X_gamma\":2}");

    // Thin-adapter check: the CLI numbers are exactly the library's.
    let lib_g = graph::read_graph(dir.path().join("k2.txt")).unwrap();
    let value = json_line(&out);
    assert_eq!(
        value["gamma"].as_u64().unwrap() as usize,
        domination::gamma_exact(&lib_g)
    );
    assert_eq!(
        value["X_gamma"].as_u64().unwrap(),
        domination::count_dominating_sets(&lib_g, 1)
    );
}

#[test]
fn gamma_enumerate_streams_hex_masks() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = write_temp(&dir, "c6.txt", "n 6\n0 1\n1 2\n2 3\n3 4\n4 5\n0 5\n");
    let out = run(&["gamma", "--in", &c6, "--enumerate", "--cap", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let mut lines = text.lines();
    let report: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(report["gamma"], 2);
    assert_eq!(report["X_gamma"], 3);
    assert_eq!(report["truncated"], false);
    // The three antipodal pairs of the 6-cycle.
    assert_eq!(lines.collect::<Vec<_>>(), ["9", "12", "24"]);
}

#[test]
fn bondage_reports_infinity_on_edgeless_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_temp(&dir, "empty.txt", "n 5\n");
    for mode in ["exact", "bounds", "certify"] {
        let out = run(&["bondage", "--in", &g, "--mode", mode]);
        assert_eq!(out.status.code(), Some(0), "mode {mode}");
        let value = json_line(&out);
        assert_eq!(value["b"], "infinity", "mode {mode}");
        assert_eq!(value["gamma"], 5);
    }
}

#[test]
fn bondage_exact_respects_limit() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = write_temp(&dir, "c4.txt", "n 4\n0 1\n1 2\n2 3\n0 3\n");
    let out = run(&["bondage", "--in", &c4, "--mode", "exact"]);
    assert_eq!(json_line(&out)["b"], 3);
    let out = run(&["bondage", "--in", &c4, "--mode", "exact", "--limit", "2"]);
    let value = json_line(&out);
    assert!(value.get("b").is_none() || value["b"].is_null());
    assert_eq!(value["b_gt"], 2);
    // The pruning flag must not change the answer.
    let out = run(&["bondage", "--in", &c4, "--mode", "exact", "--no-prune"]);
    assert_eq!(json_line(&out)["b"], 3);
}

#[test]
fn damage_csv_header_is_pinned() {
    let dir = tempfile::tempdir().unwrap();
    let g = write_temp(&dir, "k3.txt", "n 3\n0 1\n0 2\n1 2\n");
    let out = run(&["damage", "--in", &g]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "u,v,direction,Z_num,Z_den,Z_light_num,Z_light_den,Z_heavy_num,Z_heavy_den,j_breakdown"
    );
    // Two directions per edge.
    assert_eq!(text.lines().count(), 1 + 6);

    // --out redirects the table and leaves stdout empty.
    let table = dir.path().join("t.csv");
    let out = run(&["damage", "--in", &g, "--out", table.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_str(&out).is_empty());
    assert_eq!(std::fs::read_to_string(&table).unwrap(), text);
}

#[test]
fn formulas_key_set_is_pinned() {
    let out = run(&["formulas", "--n", "100", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let value = json_line(&out);
    let obj = value.as_object().unwrap();
    let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    let mut expected = vec![
        "n", "p", "epsilon", "p_hat", "r", "r_closed_form", "L",
        "log_f_at_r", "log_one_over_pn", "expected_damage_log",
    ];
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    expected.sort_unstable();
    assert_eq!(sorted, expected);
    assert_eq!(value["r"], 3);
}

#[test]
fn pipeline_gen_to_gamma_to_bondage() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let out = run(&[
        "gen", "--n", "14", "--m", "30", "--seed", "4",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let g = graph::read_graph(&path).unwrap();
    assert_eq!(g.n(), 14);
    assert_eq!(g.edge_count(), 30);

    let gamma_out = run(&["gamma", "--in", path.to_str().unwrap()]);
    let report = json_line(&gamma_out);
    assert_eq!(
        report["gamma"].as_u64().unwrap() as usize,
        domination::gamma_exact(&g)
    );

    let bond_out = run(&[
        "bondage", "--in", path.to_str().unwrap(), "--mode", "certify",
    ]);
    let bond = json_line(&bond_out);
    assert_eq!(bond["gamma"], report["gamma"]);
    assert!(bond["b_gt"].as_u64().is_some());
}

#[test]
fn gen_edge_list_format_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let out = run(&[
        "gen", "--n", "9", "--p", "0.4", "--seed", "2",
        "--format", "edges", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("n 9\n"));
    let g = graph::read_graph(&path).unwrap();
    // Same seed through the JSON path gives the same graph.
    let json_out = run(&["gen", "--n", "9", "--p", "0.4", "--seed", "2"]);
    let g2 = graph::from_json_str(stdout_str(&json_out).trim()).unwrap();
    assert_eq!(g.edges(), g2.edges());
}

#[test]
fn exp_domain_error_exits_one() {
    // A p > 1 - epsilon concentration spec is rejected up front.
    let out = run(&[
        "exp", "concentration", "--n", "10", "--p", "0.99", "--samples", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exp_summary_reports_identities() {
    let out = run(&[
        "exp", "profile", "--n", "9", "--p", "0.5", "--k", "3",
        "--samples", "10", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let summary = json_line(&out);
    assert_eq!(summary["identities_ok"], true);
    assert_eq!(summary["identity_violations"], 0);
}
