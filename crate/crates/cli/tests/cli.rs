use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn rotnet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rotnet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn analyze(out: &Path) -> Output {
    rotnet(&[
        "analyze",
        "--corpus",
        fixture("bridge.csv").to_str().unwrap(),
        "--vocab",
        fixture("bridge.vocab.txt").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
}

fn snapshot(bundle: &Path, turn: usize, format: &str, out: &Path) -> Output {
    rotnet(&[
        "snapshot",
        "--bundle",
        bundle.to_str().unwrap(),
        "--turn",
        &turn.to_string(),
        "--kind",
        "agent",
        "--format",
        format,
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn analyze_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    assert!(analyze(&a).status.success());
    assert!(analyze(&b).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn bundle_names_the_bridging_agent() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.json");
    assert_eq!(analyze(&out).status.code(), Some(0));
    let v: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["top_episodes"][0]["agent"], "u26");
    assert_eq!(v["manifest"]["network"], "agent");
    assert_eq!(v["manifest"]["note_count"], 6);
    assert_eq!(v["series"]["betweenness"].as_array().unwrap().len(), 6);
}

#[test]
fn missing_vocabulary_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.vocab.txt");
    let out = rotnet(&[
        "analyze",
        "--corpus",
        fixture("bridge.csv").to_str().unwrap(),
        "--vocab",
        missing.to_str().unwrap(),
        "--out",
        dir.path().join("x.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(missing.to_str().unwrap()), "{err}");
}

#[test]
fn malformed_corpus_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "note_id,author_id,timestamp,text\nn1,a,never,hi\n").unwrap();
    let out = rotnet(&[
        "analyze",
        "--corpus",
        bad.to_str().unwrap(),
        "--vocab",
        fixture("bridge.vocab.txt").to_str().unwrap(),
        "--out",
        dir.path().join("x.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn snapshots_at_first_and_last_turn() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("b.json");
    assert!(analyze(&bundle).status.success());

    let empty = dir.path().join("t0.json");
    assert!(snapshot(&bundle, 0, "json", &empty).status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(&empty).unwrap()).unwrap();
    assert_eq!(v["turn"], 0);
    assert!(v["nodes"].as_array().unwrap().is_empty());
    assert!(v["edges"].as_array().unwrap().is_empty());

    let last = dir.path().join("t6.json");
    assert!(snapshot(&bundle, 6, "json", &last).status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(&last).unwrap()).unwrap();
    let nodes: Vec<&str> = v["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|n| n["id"].as_str().unwrap())
        .collect();
    assert_eq!(nodes, ["u03", "u07", "u18", "u22", "u26"]);
    let edges: Vec<(String, String, u64)> = v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["source"].as_str().unwrap().into(),
                e["target"].as_str().unwrap().into(),
                e["weight"].as_u64().unwrap(),
            )
        })
        .collect();
    let want = [
        ("u03", "u07", 1),
        ("u03", "u26", 2),
        ("u07", "u26", 1),
        ("u18", "u26", 2),
        ("u22", "u26", 1),
    ];
    assert_eq!(edges.len(), want.len());
    for (got, w) in edges.iter().zip(want) {
        assert_eq!((got.0.as_str(), got.1.as_str(), got.2), w);
    }

    let xml = dir.path().join("t6.graphml");
    assert!(snapshot(&bundle, 6, "graphml", &xml).status.success());
    let text = std::fs::read_to_string(&xml).unwrap();
    assert_eq!(text.matches("<node ").count(), 5);
    assert_eq!(text.matches("<edge ").count(), 5);

    let out = snapshot(&bundle, 7, "json", &dir.path().join("t7.json"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gen_writes_an_analysable_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("rot.jsonl");
    let out = rotnet(&[
        "gen",
        "--spec",
        fixture("rotating.spec.json").to_str().unwrap(),
        "--out",
        corpus.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let vocab = dir.path().join("rot.vocab.txt");
    assert!(vocab.exists());
    let bundle = dir.path().join("rot.json");
    let out = rotnet(&[
        "analyze",
        "--corpus",
        corpus.to_str().unwrap(),
        "--vocab",
        vocab.to_str().unwrap(),
        "--out",
        bundle.to_str().unwrap(),
        "--network",
        "word",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&std::fs::read(&bundle).unwrap()).unwrap();
    assert_eq!(v["manifest"]["note_count"], 120);
    assert_eq!(v["manifest"]["network"], "word");
}
