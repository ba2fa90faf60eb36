//! End-to-end checks of the pgfatal binary: exit codes, output schemas,
//! benchmark records and the verify round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pgfatal"))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/test-data").join(name)
}

fn scratch(name: &str) -> PathBuf {
    Path::new(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn solve_exit_codes_follow_residuals() {
    let out = bin().arg("solve").arg(fixture("g1.gm")).arg("psolB").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("residual = {v3, v5, v7}"), "{text}");

    let out = bin().arg("solve").arg(fixture("g1.gm")).arg("psolQ").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("residual = {}"));

    let out = bin().arg("solve").arg(fixture("g7.gm")).arg("lift-psolB").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("won[0] = {v0, v1, v2, v3, v4, v5, v6, v7}"), "{text}");

    let out = bin().arg("solve").arg("no-such-file.gm").arg("psolB").output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin().arg("solve").arg(fixture("g1.gm")).arg("bogus").output().unwrap();
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn solve_json_is_schema_stable() {
    let out = bin()
        .args(["solve", fixture("g1.gm").to_str().unwrap(), "psolB", "--json", "--strategies"])
        .output()
        .unwrap();
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["solver"], "psolB");
    assert_eq!(json["won"]["0"].as_array().unwrap().len(), 9);
    assert_eq!(json["residual"].as_array().unwrap().len(), 3);
    assert_eq!(json["stats"]["fatal_attractors"], 2);
    assert!(json["strategy"]["0"].is_object());
}

#[test]
fn lift_on_uncertified_solver_warns() {
    let out = bin()
        .args(["solve", fixture("g1.gm").to_str().unwrap(), "lift-psol"])
        .output()
        .unwrap();
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("proven for psolB only"), "{err}");
}

#[test]
fn gen_writes_deterministic_pgsolver_output() {
    let out1 = bin().args(["gen", "random", "n=30,l=1,u=4,c=5", "--seed", "9"]).output().unwrap();
    assert_eq!(out1.status.code(), Some(0));
    let out2 = bin().args(["gen", "random", "n=30,l=1,u=4,c=5,seed=9"]).output().unwrap();
    assert_eq!(stdout(&out1), stdout(&out2));
    assert!(stdout(&out1).starts_with("parity 29;\n"));

    let clique = bin().args(["gen", "clique", "4"]).output().unwrap();
    assert_eq!(
        stdout(&clique),
        "parity 3;\n0 0 0 1,2,3;\n1 1 1 0,2,3;\n2 2 0 0,1,3;\n3 3 1 0,1,2;\n"
    );

    let file = scratch("gen_ladder.gm");
    let run = bin()
        .args(["gen", "ladder", "8", "-o", file.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("parity 15;\n"));
}

#[test]
fn bench_clique_sweep_has_one_record_per_game_and_solver() {
    let out = bin()
        .args(["bench", "clique:32,64,128,256,512", "--solvers", "psolB,zielonka"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "game_id,family,params,solver,solved_completely,residual_nodes,fatal_attractors,\
         edges_removed,elapsed_ms,outcome"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 10);
    for row in &rows {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[9], "ok");
        if fields[3] == "psolB" {
            assert_eq!(fields[4], "true", "{row}");
            assert_eq!(fields[6], "2", "psolB finds two fatal attractors: {row}");
        }
    }
}

#[test]
fn bench_counts_are_reproducible_across_runs() {
    let args = [
        "bench",
        "random:n=60,l=1,u=4,c=6,count=12,seed=5",
        "--solvers",
        "psolB,psol",
        "--jsonl",
    ];
    let first = bin().args(args).output().unwrap();
    let second = bin().args(args).output().unwrap();
    let strip_time = |text: &str| -> Vec<serde_json::Value> {
        text.lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("elapsed_ms");
                v
            })
            .collect()
    };
    assert_eq!(strip_time(&stdout(&first)), strip_time(&stdout(&second)));
    // records are ordered by game id
    let ids: Vec<String> = stdout(&first)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["game_id"]
            .as_str()
            .unwrap()
            .to_string())
        .collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn bench_timeout_records_abo() {
    let out = bin()
        .args([
            "bench",
            "ladder:65536",
            "--solvers",
            "zielonka",
            "--timeout",
            "0.001",
            "--jsonl",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["outcome"], "abo");
    assert!(record["elapsed_ms"].as_f64().unwrap() >= 1.0);
    assert_eq!(record["solved_completely"], false);
}

#[test]
fn bench_reads_directories_and_files() {
    let dir = scratch("bench_dir");
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["g1.gm", "g5a.gm", "g5b.gm"] {
        std::fs::copy(fixture(name), dir.join(name)).unwrap();
    }
    std::fs::write(dir.join("broken.gm"), "0 0 9 1;").unwrap();
    let out = bin()
        .args(["bench", dir.to_str().unwrap(), "--solvers", "psolB", "--complete"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 3, "{text}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipping unreadable input"));
}

#[test]
fn compare_reports_precision_deltas() {
    // g5a: psol solves completely, psolB decides nothing
    let out = bin()
        .args([
            "compare",
            fixture("g5a.gm").to_str().unwrap(),
            "--a",
            "psol",
            "--b",
            "psolB",
            "--json",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[0]["regions_match"], true);
    assert_eq!(rows[0]["residual_a"], 0);
    assert_eq!(rows[0]["residual_b"], 5);

    // g5b: the other way around
    let out = bin()
        .args([
            "compare",
            fixture("g5b.gm").to_str().unwrap(),
            "--a",
            "psol",
            "--b",
            "psolB",
            "--json",
        ])
        .output()
        .unwrap();
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[0]["residual_a"], 3);
    assert_eq!(rows[0]["residual_b"], 0);

    // regression methodology: complete:psolB against zielonka on all fixtures
    let out = bin()
        .args([
            "compare",
            fixture("g1.gm").to_str().unwrap(),
            fixture("g5a.gm").to_str().unwrap(),
            fixture("g5b.gm").to_str().unwrap(),
            fixture("g7.gm").to_str().unwrap(),
            "--a",
            "complete:psolB",
            "--b",
            "zielonka",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!stdout(&out).contains("MISMATCH"));
}

#[test]
fn verify_round_trips_solver_output() {
    let solution = scratch("g1_solution.json");
    let out = bin()
        .args(["solve", fixture("g1.gm").to_str().unwrap(), "zielonka", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&solution, stdout(&out)).unwrap();

    let verify = bin()
        .args(["verify", fixture("g1.gm").to_str().unwrap(), solution.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(verify.status.code(), Some(0), "{}", stdout(&verify));
    assert!(stdout(&verify).contains("verified"));

    // corrupt the strategy: moving v2 to v3 loses for player 0
    let text = std::fs::read_to_string(&solution).unwrap();
    let mut json: serde_json::Value = serde_json::from_str(&text).unwrap();
    json["strategy"]["0"]["2"] = serde_json::json!(3);
    let bad = scratch("g1_bad_solution.json");
    std::fs::write(&bad, serde_json::to_string(&json).unwrap()).unwrap();

    let verify = bin()
        .args(["verify", fixture("g1.gm").to_str().unwrap(), bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(verify.status.code(), Some(2));
    assert!(stdout(&verify).contains("verification failed"));
}
