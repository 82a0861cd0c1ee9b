use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn posetsat(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posetsat"))
        .args(args)
        .env("POSETSAT_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn construct_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");

    let out = posetsat(&cache, &["construct", "wedge_diamond", "--n", "6", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["sets"].as_array().unwrap().len(), 5);
    assert_eq!(v["N"], 8);
    assert_eq!(v["provenance"]["construction"], "wedge_diamond");

    let out = posetsat(&cache, &["construct", "two_c2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("collision: {2,3} {2,3,4}"), "{err}");

    let out = posetsat(&cache, &["construct", "vee", "--n", "2"]);
    assert_eq!(json(&out)["sets"], serde_json::json!([[1], [2], [1, 2]]));

    let out = posetsat(&cache, &["construct", "antichain_external", "--n", "4", "--k", "3"]);
    assert_eq!(json(&out)["A"], serde_json::json!([5]));
}

#[test]
fn construct_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let file = dir.path().join("f.json");
    let f = file.to_str().unwrap();
    let out = posetsat(&cache, &["construct", "kst_lift", "--n", "4", "--s", "2", "--t", "2", "-o", f]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&file).unwrap();
    let fam = posetsat::SetFamily::from_json_str(&text).unwrap();
    assert_eq!(fam.len(), 12);
    assert_eq!(fam.ground().total, 7);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let wedge = dir.path().join("w.json");
    let vee = dir.path().join("v.json");
    posetsat(&cache, &["construct", "wedge_diamond", "--n", "6", "--k", "2", "-o", wedge.to_str().unwrap()]);
    posetsat(&cache, &["construct", "vee", "--n", "5", "-o", vee.to_str().unwrap()]);

    let out = posetsat(&cache, &["verify", "--mode", "projective", "--poset", "W_2", "--family", wedge.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["verdict"], "holds");
    for key in ["verdict", "violated", "witness", "projection_rule"] {
        assert!(report.get(key).is_some(), "{key}");
    }

    let out = posetsat(&cache, &["verify", "--mode", "sat-star", "--poset", "V_3", "--family", vee.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["violated"], "saturating");
    assert_eq!(report["witness"]["set"], serde_json::json!([1, 2, 3]));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"n\": 2, \"N\":").unwrap();
    let out = posetsat(&cache, &["verify", "--mode", "sat-star", "--poset", "V_2", "--family", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = posetsat(&cache, &["verify", "--mode", "sat-star", "--poset", "Q_9", "--family", vee.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn external_rules_via_cli() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let lift = dir.path().join("l.json");
    posetsat(&cache, &["construct", "kst_lift", "--n", "4", "--s", "1", "--t", "2", "-o", lift.to_str().unwrap()]);
    let base = ["verify", "--mode", "external", "--poset", "K_1_2", "--family", lift.to_str().unwrap()];

    let out = posetsat(&cache, &[&base[..], &["--rule", "relaxed"]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["projection_rule"], "relaxed");

    let out = posetsat(&cache, &[&base[..], &["--rule", "strict"]].concat());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["violated"], "projection");
}

#[test]
fn search_uses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let args = ["search", "--mode", "sat-star", "--poset", "V_2", "--n", "3"];
    let first = posetsat(&cache, &args);
    assert_eq!(first.status.code(), Some(0));
    let v = json(&first);
    assert_eq!(v["outcome"]["value"], 4);
    assert_eq!(v["cache_hit"], false);

    let second = json(&posetsat(&cache, &args));
    assert_eq!(second["cache_hit"], true);
    assert_eq!(second["outcome"], v["outcome"]);

    let out = posetsat(&cache, &["search", "--mode", "sat-star", "--poset", "V_2", "--n", "25"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn corrupt_cache_lines_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let args = ["search", "--mode", "sat-star", "--poset", "C_2", "--n", "2"];
    posetsat(&cache, &args);
    let mut text = fs::read_to_string(&cache).unwrap();
    text.push_str("{\"key\": \"tor");
    fs::write(&cache, text).unwrap();

    let out = posetsat(&cache, &args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cache_hit"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("corrupt cache line"));

    let other = posetsat(&cache, &["search", "--mode", "sat-star", "--poset", "C_2", "--n", "3"]);
    assert_eq!(other.status.code(), Some(0));
    let lines: Vec<_> = fs::read_to_string(&cache).unwrap().lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 3);
    assert!(serde_json::from_str::<serde_json::Value>(&lines[2]).is_ok());
}

#[test]
fn tabulate_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let args = ["tabulate", "--poset", "V_2", "--poset", "A_2", "--n", "2..3", "--mode", "sat-star,projective"];
    let first = posetsat(&cache, &args);
    assert_eq!(first.status.code(), Some(0));
    let csv = String::from_utf8(first.stdout.clone()).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("poset,n,mode,value,witness_hash,nodes,millis"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0][..4], ["V_2", "2", "sat-star", "3"]);
    assert_eq!(rows[2][..4], ["V_2", "3", "sat-star", "4"]);
    // antichain: strong and projective values agree
    assert_eq!(rows[4][3], rows[5][3]);

    let second = posetsat(&cache, &args);
    assert_eq!(second.stdout, first.stdout);
    assert!(String::from_utf8_lossy(&second.stderr).contains("8 cells, 8 cache hits"));
}

#[test]
fn tabulate_records_cap_overruns() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let out = posetsat(&cache, &["tabulate", "--poset", "C_2", "--n", "2,9", "--mode", "sat-star"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("C_2,9,sat-star,cap-exceeded")));
}

#[test]
fn threads_flag_keeps_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let a = json(&posetsat(&cache, &["--threads", "1", "search", "--no-cache", "--mode", "projective", "--poset", "V_2", "--n", "3"]));
    let b = json(&posetsat(&cache, &["--threads", "4", "search", "--no-cache", "--mode", "projective", "--poset", "V_2", "--n", "3"]));
    assert_eq!(a["outcome"]["witness"], b["outcome"]["witness"]);
    assert_eq!(a["outcome"]["value"], 4);
}

#[test]
fn paper_check_small_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let out = posetsat(&cache, &["paper-check", "--scale", "small"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("11 passed, 0 failed"));
}
