//! End-to-end runs of the `tie` binary: generator output, solve/verify
//! round trips, exit codes, and bench artifacts.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tie() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tie"))
}

fn run(args: &[&str]) -> Output {
    tie().args(args).output().expect("binary launches")
}

fn assert_exit(out: &Output, code: i32) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn teaching_ids(result: &Value) -> Vec<String> {
    result["teaching_states"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect()
}

#[test]
fn tower_gen_solve_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("tower6.json");
    let result = dir.path().join("result.json");

    assert_exit(
        &run(&["gen", "tower", "--n", "6", "--out", inst.to_str().unwrap()]),
        0,
    );
    assert_exit(
        &run(&[
            "solve",
            inst.to_str().unwrap(),
            "--method",
            "exact",
            "--out",
            result.to_str().unwrap(),
        ]),
        0,
    );

    let parsed = read_json(&result);
    assert_eq!(teaching_ids(&parsed), vec!["4", "5", "6"]);
    assert_eq!(parsed["size"], 3);
    assert_eq!(parsed["method"], "exact");
    assert_eq!(parsed["optimal"], true);
    assert_eq!(parsed["stats"]["num_extreme_rays"], 12);

    assert_exit(
        &run(&[
            "verify",
            inst.to_str().unwrap(),
            result.to_str().unwrap(),
        ]),
        0,
    );
}

#[test]
fn solve_is_deterministic_across_runs() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("inst.json");
    assert_exit(
        &run(&[
            "gen", "random", "--dim", "3", "--states", "8", "--actions", "4", "--seed", "11",
            "--out", inst.to_str().unwrap(),
        ]),
        0,
    );

    let mut sets = Vec::new();
    for name in ["a.json", "b.json"] {
        let out = dir.path().join(name);
        assert_exit(
            &run(&[
                "solve", inst.to_str().unwrap(), "--out", out.to_str().unwrap(),
            ]),
            0,
        );
        let parsed = read_json(&out);
        sets.push((teaching_ids(&parsed), parsed["extreme_rays"].clone()));
    }
    assert_eq!(sets[0], sets[1]);
}

#[test]
fn diamond_counts_and_greedy_verify() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("d2.json");
    assert_exit(
        &run(&["gen", "diamond", "--n", "2", "--out", inst.to_str().unwrap()]),
        0,
    );
    let parsed = read_json(&inst);
    assert_eq!(parsed["states"].as_array().unwrap().len(), 24);
    assert_eq!(parsed["d"], 2);

    let result = dir.path().join("res.json");
    assert_exit(
        &run(&[
            "solve", inst.to_str().unwrap(), "--method", "greedy",
            "--out", result.to_str().unwrap(),
        ]),
        0,
    );
    let res = read_json(&result);
    assert_eq!(res["method"], "greedy");
    assert_eq!(res["optimal"], false);
    assert_exit(
        &run(&[
            "verify", inst.to_str().unwrap(),
            result.to_str().unwrap(), "--threads", "3",
        ]),
        0,
    );
}

#[test]
fn solve_json_mode_prints_result_on_stdout() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("t4.json");
    assert_exit(
        &run(&["gen", "tower", "--n", "4", "--out", inst.to_str().unwrap()]),
        0,
    );
    let out = run(&["solve", inst.to_str().unwrap(), "--json"]);
    assert_exit(&out, 0);
    let parsed: Value = serde_json::from_slice(&out.stdout).expect("stdout is a JSON document");
    assert_eq!(teaching_ids(&parsed), vec!["3", "4"]);
}

#[test]
fn reduction_solves_cover_through_teaching() {
    let dir = TempDir::new().unwrap();
    let cover = dir.path().join("cover.json");
    std::fs::write(&cover, r#"{"universe": 3, "subsets": [[1, 2], [2, 3], [3]]}"#).unwrap();

    let inst = dir.path().join("inst.json");
    assert_exit(
        &run(&[
            "gen", "reduce", "--cover", cover.to_str().unwrap(), "--out", inst.to_str().unwrap(),
        ]),
        0,
    );
    let result = dir.path().join("res.json");
    assert_exit(
        &run(&[
            "solve", inst.to_str().unwrap(), "--method", "exact",
            "--out", result.to_str().unwrap(),
        ]),
        0,
    );
    let res = read_json(&result);
    assert_eq!(res["size"], 2);
    assert_eq!(teaching_ids(&res), vec!["1", "2"]);
}

#[test]
fn undersized_teaching_set_fails_verification() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("tower5.json");
    assert_exit(
        &run(&["gen", "tower", "--n", "5", "--out", inst.to_str().unwrap()]),
        0,
    );
    let teaching = dir.path().join("short.json");
    std::fs::write(&teaching, r#"{"teaching_states": ["5"]}"#).unwrap();

    let out = run(&[
        "verify", inst.to_str().unwrap(), teaching.to_str().unwrap(),
    ]);
    assert_exit(&out, 1);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["state"].is_string());
    assert!(report["alt_action"].is_string());
    assert!(report["witness"].as_array().unwrap().len() == 3);
}

#[test]
fn bare_id_array_is_accepted_as_teaching_input() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("tower4.json");
    assert_exit(
        &run(&["gen", "tower", "--n", "4", "--out", inst.to_str().unwrap()]),
        0,
    );
    let teaching = dir.path().join("ids.json");
    std::fs::write(&teaching, r#"["3", "4"]"#).unwrap();
    assert_exit(
        &run(&[
            "verify", inst.to_str().unwrap(),
            teaching.to_str().unwrap(),
        ]),
        0,
    );
}

#[test]
fn unusable_inputs_exit_with_code_two() {
    let missing = run(&["solve", "/nonexistent/inst.json"]);
    assert_exit(&missing, 2);

    let bad_n = run(&["gen", "diamond", "--n", "0", "--out", "/tmp/ignored.json"]);
    assert_exit(&bad_n, 2);

    let dir = TempDir::new().unwrap();
    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{not json").unwrap();
    assert_exit(&run(&["solve", garbled.to_str().unwrap()]), 2);
}

#[test]
fn exhausted_node_budget_reports_incumbent_with_code_three() {
    // Three sets are required; the root lower bound says two, so a one-node
    // budget dies before the incumbent can be proven optimal.
    let dir = TempDir::new().unwrap();
    let cover = dir.path().join("cover.json");
    std::fs::write(
        &cover,
        r#"{"universe": 6, "subsets": [[1, 2, 3], [3, 4, 5], [5, 6, 1], [2, 4, 6]]}"#,
    )
    .unwrap();
    let inst = dir.path().join("inst.json");
    assert_exit(
        &run(&[
            "gen", "reduce", "--cover", cover.to_str().unwrap(), "--out", inst.to_str().unwrap(),
        ]),
        0,
    );

    let result = dir.path().join("res.json");
    let out = run(&[
        "solve", inst.to_str().unwrap(), "--method", "exact",
        "--node-budget", "1", "--out", result.to_str().unwrap(),
    ]);
    assert_exit(&out, 3);
    let res = read_json(&result);
    assert_eq!(res["method"], "exact");
    assert_eq!(res["optimal"], false);
    assert_eq!(res["stats"]["budget_exhausted"], true);
    assert_eq!(res["size"], 3);

    // With the default budget the same instance proves out at three sets.
    let full = dir.path().join("full.json");
    assert_exit(
        &run(&[
            "solve", inst.to_str().unwrap(), "--method", "exact",
            "--out", full.to_str().unwrap(),
        ]),
        0,
    );
    let res = read_json(&full);
    assert_eq!(res["optimal"], true);
    assert_eq!(res["size"], 3);
}

#[test]
fn bench_writes_csv_and_plot_files() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("bench.csv");
    let plot = dir.path().join("bench.dat");
    assert_exit(
        &run(&[
            "bench", "--family", "tower", "--range", "2..4", "--trials", "2",
            "--csv", csv.to_str().unwrap(), "--plot", plot.to_str().unwrap(),
        ]),
        0,
    );

    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("instance_label,n,num_states,"));
    for (row, n) in lines[1..].iter().zip(2..) {
        let fields: Vec<&str> = row.split(',').collect();
        assert_eq!(fields[0], "tower");
        assert_eq!(fields[1], n.to_string());
        assert_eq!(fields[6], fields[8], "exact td must match ground truth");
        assert_eq!(fields.last().unwrap(), &"", "error column should be empty");
    }

    let plot_text = std::fs::read_to_string(&plot).unwrap();
    let plot_lines: Vec<&str> = plot_text.lines().collect();
    assert_eq!(plot_lines.len(), 4);
    assert!(plot_lines[0].starts_with('#'));
}
