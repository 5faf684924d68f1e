//! End-to-end tests of the binary: commands, formats, exit codes, and the
//! count cache.

use std::path::Path;
use std::process::{Command, Output};

fn swilf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swilf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn count_examples() {
    let out = swilf(&["count", "--pattern", "123", "--n", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "14\n");

    let out = swilf(&["count", "--pattern", "21", "--n", "5"]);
    assert_eq!(stdout_of(&out), "1\n");

    let out = swilf(&["count", "--pattern", "1342", "--n", "6"]);
    assert_eq!(stdout_of(&out), "512\n");
}

#[test]
fn count_by_minima_csv() {
    let out = swilf(&[
        "count", "--pattern", "123", "--n", "4", "--by-lr-minima", "--format", "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout_of(&out),
        "pattern,n,m,count\n\"1,2,3\",4,1,1\n\"1,2,3\",4,2,6\n\"1,2,3\",4,3,6\n\"1,2,3\",4,4,1\n"
    );
}

#[test]
fn avoiders_are_lexicographic() {
    let out = swilf(&["avoiders", "--pattern", "123", "--n", "3", "--format", "csv"]);
    assert_eq!(
        stdout_of(&out),
        "permutation\n\"1,3,2\"\n\"2,1,3\"\n\"2,3,1\"\n\"3,1,2\"\n\"3,2,1\"\n"
    );
}

#[test]
fn construct_examples() {
    let out = swilf(&["construct", "qk", "--k", "5"]);
    assert_eq!(stdout_of(&out), "1,2,4,5,3\n");
    let out = swilf(&["construct", "layered", "--layers", "3,4"]);
    assert_eq!(stdout_of(&out), "3,2,1,7,6,5,4\n");
    let out = swilf(&["construct", "qprime", "--pattern", "1342"]);
    assert_eq!(stdout_of(&out), "1,2,4,5,3\n");
    let out = swilf(&["construct", "sandwich", "--pattern", "21"]);
    assert_eq!(stdout_of(&out), "1,3,2,4\n");
    let out = swilf(&["construct", "block", "--block", "21", "--block", "12"]);
    assert_eq!(stdout_of(&out), "4,3,1,2\n");
    let out = swilf(&[
        "construct", "witness", "--base", "1", "--block-size", "1", "--block", "1",
    ]);
    assert_eq!(stdout_of(&out), "1,2\n");
}

#[test]
fn wilf_reports_first_disagreement() {
    let out = swilf(&[
        "wilf", "--pattern", "1234", "--versus", "1342", "--max-n", "7", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.ends_with("6,513,512,differ\n"), "got: {text}");
}

#[test]
fn classify_shows_structure() {
    let out = swilf(&["classify", "--pattern", "3412", "--format", "csv"]);
    let text = stdout_of(&out);
    assert!(text.contains("decomposability,decomposable-at 2"), "got: {text}");
    let out = swilf(&["classify", "--pattern", "3217654", "--format", "csv"]);
    let text = stdout_of(&out);
    assert!(text.contains("layers,\"3,4\""), "got: {text}");
}

#[test]
fn limit_of_unknown_pattern_has_bounds_only() {
    let out = swilf(&["limit", "--pattern", "1324", "--max-n", "6", "--format", "csv"]);
    let text = stdout_of(&out);
    assert!(text.contains("closed_form,unknown"), "got: {text}");
    assert!(text.contains("upper_chain,none"), "got: {text}");
    assert!(text.contains("finite_lower,"), "got: {text}");
}

#[test]
fn limit_of_12453() {
    let out = swilf(&["limit", "--pattern", "12453", "--max-n", "8", "--format", "csv"]);
    let text = stdout_of(&out);
    assert!(text.contains("closed_form,9+4*sqrt(2)"), "got: {text}");
    assert!(text.contains("closed_form_decimal,14.65685425"), "got: {text}");
    assert!(text.contains("upper_chain_trace,8 -> 9+4*sqrt(2)"), "got: {text}");
}

#[test]
fn exit_codes() {
    // parse failure -> 2
    let out = swilf(&["count", "--pattern", "1x3", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    // duplicate value -> 2, naming the token
    let out = swilf(&["count", "--pattern", "121", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'1'"));
    // ceiling -> 3
    let out = swilf(&["count", "--pattern", "123", "--n", "13"]);
    assert_eq!(out.status.code(), Some(3));
    // ceiling raised explicitly -> ok
    let out = swilf(&["count", "--pattern", "21", "--n", "13", "--ceiling", "13"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "1\n");
    // or forced -> ok
    let out = swilf(&["count", "--pattern", "21", "--n", "13", "--force"]);
    assert!(out.status.success());
    // unknown suite -> 2 (from argument parsing)
    let out = swilf(&["verify", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
    // verify success -> 0
    let out = swilf(&["verify", "narayana", "--max-n", "4"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_suites_pass_at_small_scale() {
    for suite in ["layered", "bwx", "recprop", "supermult", "witness", "narayana"] {
        let out = swilf(&["verify", suite, "--max-n", "5"]);
        assert!(
            out.status.success(),
            "suite {suite} failed: {}",
            String::from_utf8_lossy(&out.stdout)
        );
    }
}

#[test]
fn output_is_deterministic_across_worker_counts() {
    for format in ["csv", "json"] {
        let one = swilf(&[
            "count", "--pattern", "1342", "--n", "7", "--workers", "1", "--format", format,
        ]);
        let two = swilf(&[
            "count", "--pattern", "1342", "--n", "7", "--workers", "2", "--format", format,
        ]);
        let auto = swilf(&[
            "count", "--pattern", "1342", "--n", "7", "--format", format,
        ]);
        assert_eq!(one.stdout, two.stdout);
        assert_eq!(two.stdout, auto.stdout);
    }
}

#[test]
fn cache_round_trip_and_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("counts.jsonl");
    let cache_str = cache.to_str().unwrap();

    // cold run populates the cache
    let cold = swilf(&["count", "--pattern", "1342", "--n", "6", "--cache", cache_str]);
    assert!(cold.status.success());
    assert_eq!(stdout_of(&cold), "512\n");
    let contents = std::fs::read_to_string(&cache).unwrap();
    assert!(contents.contains("\"pattern\":\"1,3,4,2\""), "got: {contents}");
    assert!(contents.contains("\"count\":\"512\""), "got: {contents}");
    let lines_after_first = contents.lines().count();

    // warm run returns the identical value and appends nothing
    let warm = swilf(&["count", "--pattern", "1342", "--n", "6", "--cache", cache_str]);
    assert_eq!(stdout_of(&warm), "512\n");
    let contents = std::fs::read_to_string(&cache).unwrap();
    assert_eq!(contents.lines().count(), lines_after_first);

    // and equals the uncached value
    let uncached = swilf(&["count", "--pattern", "1342", "--n", "6"]);
    assert_eq!(stdout_of(&uncached), stdout_of(&warm));
}

#[test]
fn corrupt_cache_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("counts.jsonl");
    std::fs::write(
        &cache,
        "this is not json\n{\"pattern\":\"1,2,3\",\"n\":4,\"count\":\"999\",\"engine_version\":\"0\"}\n",
    )
    .unwrap();
    let out = swilf(&[
        "count", "--pattern", "123", "--n", "4", "--cache", cache.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // the seeded (wrong) value is served, proving the good line loaded
    assert_eq!(stdout_of(&out), "999\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipping corrupt cache line 1"));
}

#[test]
fn witness_construct_notes_minima_shift() {
    let out = swilf(&[
        "construct", "witness", "--base", "3412", "--block-size", "3", "--block", "12345",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "3,2,1,4,5,6,7\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("minima"));
}

#[test]
fn cache_file_stays_line_delimited(){
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("counts.jsonl");
    let cache_str = cache.to_str().unwrap();
    swilf(&["wilf", "--pattern", "123", "--versus", "321", "--max-n", "6", "--cache", cache_str]);
    let contents = std::fs::read_to_string(Path::new(cache_str)).unwrap();
    for line in contents.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("each line is JSON");
        assert!(v.get("pattern").is_some() && v.get("count").is_some());
    }
    assert!(contents.lines().count() >= 14); // both patterns, n = 0..=6
}
