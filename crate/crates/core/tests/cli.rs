//! Command-line behavior: exit codes, simple invariants and the golden fixtures.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use swkernel::cli::documents::RerankDocument;
use swkernel::{Config, Order, Positional};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn swkernel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swkernel"))
        .args(args)
        .env_remove("SWKERNEL_SEED")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn same_id_scores_one() {
    let seqs = fixture("sequences.json");
    let out = swkernel(&["score", seqs.to_str().unwrap(), "a", "a"]);
    assert_eq!(json(&out)["value"], 1.0);
}

#[test]
fn dtw_of_identical_sequences_is_zero() {
    let seqs = fixture("sequences.json");
    let out = swkernel(&["score", seqs.to_str().unwrap(), "b", "b", "--metric", "dtw"]);
    assert_eq!(json(&out)["value"], 0.0);
}

#[test]
fn reversal_is_invisible_without_positions() {
    // "c" is "a" in reverse order
    let seqs = fixture("sequences.json");
    let plain = swkernel(&["score", seqs.to_str().unwrap(), "a", "c"]);
    assert_eq!(json(&plain)["value"], 1.0);
    let rotary = swkernel(&["score", seqs.to_str().unwrap(), "a", "c", "--pe", "rotary"]);
    assert!(json(&rotary)["value"].as_f64().unwrap() < 1.0);
}

#[test]
fn gram_of_one_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let doc = write(
        dir.path(),
        "one.json",
        r#"{"dim": 1, "sequences": [{"id": "x", "vectors": [[0.5], [2.0]]}]}"#,
    );
    let v = json(&swkernel(&["gram", &doc]));
    assert_eq!(v["matrix"], serde_json::json!([[1.0]]));
}

#[test]
fn seed_falls_back_to_environment() {
    let seqs = fixture("sequences.json");
    let flag = swkernel(&["score", seqs.to_str().unwrap(), "a", "b", "--seed", "11"]);
    let env = Command::new(env!("CARGO_BIN_EXE_swkernel"))
        .args(["score", seqs.to_str().unwrap(), "a", "b"])
        .env("SWKERNEL_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
    let other = swkernel(&["score", seqs.to_str().unwrap(), "a", "b", "--seed", "12"]);
    assert_ne!(flag.stdout, other.stdout);
}

#[test]
fn gen_output_feeds_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("walks.json");
    let out = swkernel(&[
        "gen",
        "--count",
        "3",
        "--d",
        "4",
        "--seed",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert!(!dir.path().join("walks.json.tmp").exists());
    let g = json(&swkernel(&["gram", path.to_str().unwrap(), "--pe", "absolute"]));
    assert_eq!(g["ids"], serde_json::json!(["s0", "s1", "s2"]));
    assert!(g["min_eigenvalue"].as_f64().unwrap() > -1e-6);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let seqs = fixture("sequences.json");
    let seqs = seqs.to_str().unwrap();
    let code = |args: &[&str]| swkernel(args).status.code();

    assert_eq!(code(&["score", seqs, "a", "missing"]), Some(2));
    assert_eq!(code(&["nonsense"]), Some(2));
    assert_eq!(code(&["score", seqs, "a", "b", "--gamma", "-1"]), Some(2));
    assert_eq!(code(&["score", seqs, "a", "b", "--p", "0.5"]), Some(2));

    let bad = write(dir.path(), "bad.json", "{not json");
    assert_eq!(code(&["gram", &bad]), Some(3));
    let ragged = write(
        dir.path(),
        "ragged.json",
        r#"{"dim": 2, "sequences": [{"id": "x", "vectors": [[0.0, 1.0], [1.0]]}]}"#,
    );
    assert_eq!(code(&["gram", &ragged]), Some(3));

    // the mean-pooled vector of "z" is zero, so the cosine is undefined
    let zero = write(
        dir.path(),
        "zero.json",
        r#"{"dim": 2, "sequences": [{"id": "z", "vectors": [[1.0, 0.0], [-1.0, 0.0]]}, {"id": "w", "vectors": [[1.0, 1.0]]}]}"#,
    );
    let out = swkernel(&["score", &zero, "z", "w", "--metric", "cosine"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out.stderr.is_empty());
}

#[test]
fn golden_rerank_agrees_with_brute_force() {
    let doc: RerankDocument = serde_json::from_str(&std::fs::read_to_string(fixture("rerank.json")).unwrap()).unwrap();
    let golden: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("rerank.golden.json")).unwrap()).unwrap();
    let set = doc.candidate_set().unwrap();
    let kcfg = Config::new(2.5, Order::two(), 50, 7).unwrap();
    let pcfg = Positional::for_dim(set.anchor().dim());
    let dirs = kcfg.projection_set(set.anchor().dim() + pcfg.k).unwrap();

    let combined: Vec<f64> = set
        .candidates()
        .iter()
        .map(|c| {
            let k = common::brute_force_score(set.anchor(), &c.sequence, 2.5, dirs.directions(), pcfg.k);
            (1.0 - doc.alpha) * c.likelihood + doc.alpha * k
        })
        .collect();
    for (g, want) in golden["candidates"].as_array().unwrap().iter().zip(&combined) {
        assert!((g["combined"].as_f64().unwrap() - want).abs() < 1e-9);
    }
    let best = (0..combined.len())
        .max_by(|&i, &j| combined[i].total_cmp(&combined[j]).then(j.cmp(&i)))
        .unwrap();
    assert_eq!(golden["winner_index"], best);
    assert_eq!(golden["winner_id"], set.candidates()[best].id.as_str());
}
