//! End-to-end checks of the binary: exit codes, canonical output, and
//! determinism across runs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn cms(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cms"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout)
        .trim_end()
        .to_string()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).expect("write fixture");
    path
}

const TWO_POINT: &str = r#"{"points":["p","q"],"metric":[["0","1"],["1","0"]],"relations":{"R":{"arity":1,"tuples":[[0]]}}}"#;
const TWO_POINT_DOUBLED: &str = r#"{"points":["p","q"],"metric":[["0","2"],["2","0"]],"relations":{"R":{"arity":1,"tuples":[[0]]}}}"#;
const Z5: &str =
    r#"{"order":5,"table":[[0,1,2,3,4],[1,2,3,4,0],[2,3,4,0,1],[3,4,0,1,2],[4,0,1,2,3]]}"#;

#[test]
fn isometry_exit_codes_and_witnesses() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "x.json", TWO_POINT);
    write(dir.path(), "y.json", TWO_POINT_DOUBLED);

    let same = cms(dir.path(), &["isometry", "x.json", "x.json"]);
    assert_eq!(same.status.code(), Some(0));
    assert_eq!(stdout(&same), "0 1");

    let oracle = cms(dir.path(), &["isometry", "x.json", "x.json", "--oracle"]);
    assert_eq!(stdout(&oracle), "0 1");

    let different = cms(dir.path(), &["isometry", "x.json", "y.json"]);
    assert_eq!(different.status.code(), Some(2));
    assert_eq!(stdout(&different), "none");

    let json = cms(dir.path(), &["--json", "isometry", "x.json", "x.json"]);
    assert_eq!(stdout(&json), r#"{"witness":[0,1]}"#);
}

#[test]
fn invalid_input_reports_and_exits_1() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "bad.json",
        r#"{"points":["a","b"],"metric":[["0","0"],["0","0"]]}"#,
    );
    write(dir.path(), "x.json", TWO_POINT);
    let run = cms(dir.path(), &["isometry", "bad.json", "x.json"]);
    assert_eq!(run.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&run.stderr);
    assert!(stderr.contains("positivity"), "stderr was: {stderr}");
}

#[test]
fn distortion_scaling_and_dominance() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "x.json", TWO_POINT);
    write(dir.path(), "x2.json", TWO_POINT_DOUBLED);

    let run = cms(dir.path(), &["distortion", "x.json", "x2.json"]);
    assert_eq!(run.status.code(), Some(0));
    assert_eq!(stdout(&run), "2");

    let yes = cms(
        dir.path(),
        &["dominates", "x.json", "x2.json", "--c", "2", "--canonical"],
    );
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(stdout(&yes), "true");

    let no = cms(
        dir.path(),
        &[
            "dominates",
            "x.json",
            "x2.json",
            "--c",
            "3/2",
            "--canonical",
        ],
    );
    assert_eq!(no.status.code(), Some(2));
    assert_eq!(stdout(&no), "false");

    // Pattern file route.
    write(
        dir.path(),
        "patterns.json",
        r#"[{"n":2,"constraints":{"R":[[1]]},"r":["1","0"],"t":{"R":{"2":"0"}}}]"#,
    );
    let with_file = cms(
        dir.path(),
        &[
            "dominates",
            "x.json",
            "x2.json",
            "--c",
            "2",
            "--patterns",
            "patterns.json",
        ],
    );
    assert_eq!(with_file.status.code(), Some(0));

    // No relation-preserving bijection at all: sizes differ.
    write(
        dir.path(),
        "one.json",
        r#"{"points":["p"],"metric":[["0"]],"relations":{"R":{"arity":1,"tuples":[]}}}"#,
    );
    let none = cms(dir.path(), &["distortion", "x.json", "one.json"]);
    assert_eq!(none.status.code(), Some(2));
    assert_eq!(stdout(&none), "none");
}

#[test]
fn group_subcommands() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "z5.json", Z5);

    let word = cms(
        dir.path(),
        &[
            "group",
            "wordmetric",
            "z5.json",
            "--gens",
            "1",
            "--weights",
            "1",
        ],
    );
    assert_eq!(stdout(&word), r#"{"length":["0","1","2","2","1"]}"#);

    let roelcke = cms(
        dir.path(),
        &[
            "group",
            "roelcke",
            "z5.json",
            "--gens",
            "1",
            "--weights",
            "1",
        ],
    );
    assert_eq!(roelcke.status.code(), Some(0));
    assert!(stdout(&roelcke).contains("\"mult\""));

    // Explicit length function instead of generators.
    let lengths = cms(
        dir.path(),
        &["group", "roelcke", "z5.json", "--lengths", "0,1,2,2,1"],
    );
    assert_eq!(stdout(&lengths), stdout(&roelcke));

    let hit = cms(
        dir.path(),
        &[
            "group",
            "translate",
            "z5.json",
            "--a",
            "1",
            "--b",
            "2",
            "--A",
            "0,1",
            "--B",
            "2,3",
        ],
    );
    assert_eq!(hit.status.code(), Some(0));
    assert_eq!(stdout(&hit), "2");

    let miss = cms(
        dir.path(),
        &[
            "group",
            "translate",
            "z5.json",
            "--a",
            "1",
            "--b",
            "2",
            "--A",
            "0,1",
            "--B",
            "0,2",
        ],
    );
    assert_eq!(miss.status.code(), Some(2));
    assert_eq!(stdout(&miss), "none");

    // Alexandrov compactification of a 3-point path.
    write(
        dir.path(),
        "path.json",
        r#"{"points":["-1","0","1"],"metric":[["0","1","2"],["1","0","1"],["2","1","0"]]}"#,
    );
    let alexandrov = cms(
        dir.path(),
        &["group", "alexandrov", "path.json", "--base", "1"],
    );
    assert_eq!(alexandrov.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&alexandrov)).unwrap();
    assert_eq!(parsed["points"].as_array().unwrap().len(), 4);
    assert_eq!(parsed["metric"][3][1], "1");
}

#[test]
fn heap_subcommands() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "z5.json", Z5);

    let heap = cms(dir.path(), &["heap", "from-group", "z5.json"]);
    assert_eq!(heap.status.code(), Some(0));
    write(dir.path(), "h5.json", &stdout(&heap));

    let ok = cms(dir.path(), &["heap", "validate", "h5.json"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok), "ok");

    let back = cms(dir.path(), &["heap", "to-group", "h5.json", "--e", "0"]);
    assert_eq!(stdout(&back), Z5);

    let subs = cms(dir.path(), &["heap", "subheaps", "h5.json"]);
    assert_eq!(stdout(&subs).lines().count(), 6);

    // A table violating the identity law exits 1 with a witness.
    write(
        dir.path(),
        "bad.json",
        r#"{"order":2,"op":[[[0,0],[0,0]],[[0,0],[0,0]]]}"#,
    );
    let bad = cms(dir.path(), &["heap", "validate", "bad.json"]);
    assert_eq!(bad.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&bad.stderr);
    assert!(stderr.contains("identity_law"), "stderr was: {stderr}");
}

#[test]
fn stone_and_embed() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "x.json", TWO_POINT);

    let encoded = cms(dir.path(), &["stone", "encode", "x.json"]);
    assert_eq!(encoded.status.code(), Some(0));
    write(dir.path(), "algebra.json", &stdout(&encoded));

    let decoded = cms(dir.path(), &["stone", "decode", "algebra.json"]);
    assert_eq!(decoded.status.code(), Some(0));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&decoded)).unwrap();
    assert_eq!(parsed["relations"]["R"]["tuples"], serde_json::json!([[0]]));

    let embed = cms(dir.path(), &["embed", "x.json", "--dims", "3"]);
    assert_eq!(stdout(&embed), r#"[["0","1","0"],["1","0","1"]]"#);

    let short = cms(dir.path(), &["embed", "x.json", "--dims", "1"]);
    assert_eq!(short.status.code(), Some(1));

    // A wide structure must be scaled before embedding.
    write(dir.path(), "wide.json", TWO_POINT_DOUBLED);
    let unscaled = cms(dir.path(), &["embed", "wide.json", "--dims", "2"]);
    assert_eq!(unscaled.status.code(), Some(1));
    let scaled = cms(dir.path(), &["scale", "wide.json", "--factor", "1/2"]);
    assert_eq!(scaled.status.code(), Some(0));
    write(dir.path(), "narrow.json", &stdout(&scaled));
    let now_fits = cms(dir.path(), &["embed", "narrow.json", "--dims", "2"]);
    assert_eq!(now_fits.status.code(), Some(0));
    assert_eq!(stdout(&now_fits), r#"[["0","1"],["1","0"]]"#);
}

#[test]
fn corpus_is_seed_deterministic() {
    let dir = TempDir::new().unwrap();
    let args = [
        "corpus",
        "--seed",
        "9",
        "--count",
        "5",
        "--max-points",
        "4",
        "--relations",
        "R:2",
    ];
    let first = cms(dir.path(), &args);
    let second = cms(dir.path(), &args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(stdout(&first).lines().count(), 5);
    let other_seed = cms(
        dir.path(),
        &[
            "corpus",
            "--seed",
            "10",
            "--count",
            "5",
            "--max-points",
            "4",
            "--relations",
            "R:2",
        ],
    );
    assert_ne!(stdout(&first), stdout(&other_seed));
}

#[test]
fn signature_output_is_stable() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "x.json", TWO_POINT);
    let first = cms(dir.path(), &["signature", "x.json"]);
    let second = cms(dir.path(), &["signature", "x.json"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), stdout(&second));
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(parsed["entries"].as_array().unwrap().len(), 2);
}
