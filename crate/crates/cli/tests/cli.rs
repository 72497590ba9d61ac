//! End-to-end tests against the compiled `dlgsum` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_dlgsum");

const FIXTURE: &str = concat!(
    r#"{"id": "d1", "dialogue": "Maya: Bring home the clothes that are hanging outside\nMaya: All of them should be dry already and it looks like it's going to rain\nBoris: I'm not home right now\nBoris: I'll tell Brian to take care of that\nMaya: Fine, thanks"}"#,
    "\n",
    r#"{"id": "d2", "dialogue": "Megan: Are we going to take a taxi to the opera?\nJoseph: No, I'll take my car.\nMegan: Great, more convenient"}"#,
    "\n",
);

fn write_fixture(dir: &Path) -> PathBuf {
    let path = dir.join("corpus.jsonl");
    fs::write(&path, FIXTURE).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn summarize_emits_schema_records() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&["summarize", input.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim().lines().map(str::trim).collect();
    assert_eq!(lines.len(), 2);
    for line in lines {
        let rec: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["id", "summary", "sentences", "keywords", "threshold", "segments"] {
            assert!(rec.get(key).is_some(), "missing {key} in {line}");
        }
    }
}

#[test]
fn summarize_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let a = run(&["summarize", input.to_str().unwrap()]);
    let b = run(&["summarize", input.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn no_pov_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let pov = run(&["summarize", input.to_str().unwrap()]);
    let plain = run(&["summarize", input.to_str().unwrap(), "--no-pov"]);
    assert!(plain.status.success(), "{}", stderr(&plain));
    assert_ne!(pov.stdout, plain.stdout);
    assert!(stdout(&plain).contains("i 'll"), "{}", stdout(&plain));
}

#[test]
fn lead3_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&["summarize", input.to_str().unwrap(), "--baseline", "lead3"]);
    assert!(out.status.success());
    let first: serde_json::Value =
        serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert!(first["summary"]
        .as_str()
        .unwrap()
        .starts_with("Bring home the clothes"));
}

#[test]
fn unknown_baseline_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&["summarize", input.to_str().unwrap(), "--baseline", "oracle"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn missing_input_is_input_error() {
    let out = run(&["summarize", "/nonexistent/corpus.jsonl"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn effective_config_echoed_next_to_output() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let output = dir.path().join("out.jsonl");
    let out = run(&[
        "summarize",
        input.to_str().unwrap(),
        "-o",
        output.to_str().unwrap(),
        "--topics",
        "3",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let echoed =
        fs::read_to_string(dir.path().join("effective-config.txt")).unwrap();
    assert!(echoed.contains("topics = 3"), "{echoed}");
    assert!(output.exists());
}

#[test]
fn config_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out_a = dir.path().join("a/out.jsonl");
    let out_b = dir.path().join("b/out.jsonl");
    fs::create_dir_all(dir.path().join("a")).unwrap();
    fs::create_dir_all(dir.path().join("b")).unwrap();

    let run_a = run(&[
        "summarize",
        input.to_str().unwrap(),
        "-o",
        out_a.to_str().unwrap(),
        "--min-tokens",
        "4",
        "--no-pov",
    ]);
    assert!(run_a.status.success(), "{}", stderr(&run_a));

    // Re-run purely from the echoed config; output must be identical.
    let echoed = dir.path().join("a/effective-config.txt");
    let run_b = run(&[
        "summarize",
        input.to_str().unwrap(),
        "-o",
        out_b.to_str().unwrap(),
        "--config",
        echoed.to_str().unwrap(),
    ]);
    assert!(run_b.status.success(), "{}", stderr(&run_b));
    assert_eq!(fs::read(&out_a).unwrap(), fs::read(&out_b).unwrap());
}

#[test]
fn stats_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&["stats", input.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("documents: 2"), "{text}");
    assert!(text.contains("mean dialogue length (chars):"), "{text}");
}

#[test]
fn evaluate_perfect_match_scores_one() {
    let dir = tempfile::tempdir().unwrap();
    let refs = dir.path().join("refs.jsonl");
    fs::write(
        &refs,
        "{\"id\":\"d1\",\"summary\":\"boris will handle it\"}\n",
    )
    .unwrap();
    let out = run(&[
        "evaluate",
        "--system",
        refs.to_str().unwrap(),
        "--reference",
        refs.to_str().unwrap(),
        "-o",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("R1=1.0000"), "{}", stdout(&out));
    let report = fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(report.contains("\"rouge1_f1\": 1.0"), "{report}");
    assert!(dir.path().join("report.csv").exists());
}

#[test]
fn evaluate_missing_id_fails_and_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.jsonl");
    let refs = dir.path().join("refs.jsonl");
    fs::write(&sys, "{\"id\":\"d1\",\"summary\":\"a\"}\n{\"id\":\"d9\",\"summary\":\"b\"}\n")
        .unwrap();
    fs::write(&refs, "{\"id\":\"d1\",\"summary\":\"a\"}\n").unwrap();
    let out = run(&[
        "evaluate",
        "--system",
        sys.to_str().unwrap(),
        "--reference",
        refs.to_str().unwrap(),
        "-o",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("d9"), "{}", stderr(&out));
}

#[test]
fn graph_dump_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&["graph-dump", input.to_str().unwrap(), "--doc", "d2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"), "{dot}");
    assert!(dot.contains("taxi"), "{dot}");
}

#[test]
fn plot_data_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&["plot-data", input.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = stdout(&out);
    assert!(csv.starts_with("doc_id,gap_index,distance"), "{csv}");
    assert!(csv.lines().count() > 1, "{csv}");
}

#[test]
fn bad_edge_weight_mode_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let out = run(&["summarize", input.to_str().unwrap(), "--edge-weight", "bogus"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn jobs_parallelism_preserves_order_and_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_fixture(dir.path());
    let serial = run(&["summarize", input.to_str().unwrap()]);
    let parallel = run(&["summarize", input.to_str().unwrap(), "--jobs", "4"]);
    assert_eq!(serial.stdout, parallel.stdout);
}
