use paraprod_cli::{cache_path, run_cli};
use std::fs;

fn run(args: &[&str]) -> i32 {
    let mut argv = vec!["paraprod"];
    argv.extend_from_slice(args);
    run_cli(argv)
}

fn lines(path: &std::path::Path) -> Vec<serde_json::Value> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn argument_errors_exit_2() {
    assert_eq!(run(&["norm"]), 2);
    assert_eq!(run(&["--weight", "w0:-1:1", "check-weight"]), 2);
    assert_eq!(run(&["apply-word", "TXS", "poly:1,1", "poly:0,1"]), 2);
    assert_eq!(run(&["--p", "-1", "norm", "poly:1"]), 2);
    assert_eq!(run(&["--format", "xml", "norm", "poly:1"]), 2);
    assert_eq!(run(&["decompose", "MSTMSTMST"]), 2);
    assert_eq!(run(&["verify", "nonsense"]), 2);
}

#[test]
fn norm_of_constant() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("norm.jsonl");
    assert_eq!(run(&["--out", out.to_str().unwrap(), "norm", "poly:1"]), 0);
    let v = &lines(&out)[0];
    assert_eq!(v["quantity"], "bergman_norm");
    let x = v["value"].as_f64().unwrap();
    assert!(x > 0.0 && x.is_finite());
}

#[test]
fn apply_word_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h.jsonl");
    // T_g f with g = z, f = 1: ∫_0^z 1 dζ = z.
    assert_eq!(run(&["--out", out.to_str().unwrap(), "apply-word", "T", "poly:0,1", "poly:1"]), 0);
    let v = &lines(&out)[0];
    assert_eq!(v, &serde_json::json!([[0.0, 0.0], [1.0, 0.0]]));
}

#[test]
fn decompose_csv_has_header_and_spot_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.csv");
    assert_eq!(run(&["--out", out.to_str().unwrap(), "--format", "csv", "decompose", "TS"]), 0);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let headers = rdr.headers().unwrap().clone();
    assert_eq!(&headers[0], "word");
    let rec = rdr.records().next().unwrap().unwrap();
    let c_col = headers.iter().position(|h| h == "c").unwrap();
    assert_eq!(&rec[c_col], "-1");
}

#[test]
fn check_weight_passes_for_standard_weight() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.jsonl");
    assert_eq!(run(&["--weight", "w1:1:1", "--out", out.to_str().unwrap(), "check-weight"]), 0);
    assert!(lines(&out)[0]["checks"].as_array().unwrap().len() > 3);
}

#[test]
fn verify_writes_rows_summary_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lp.jsonl");
    let args = ["--out", out.to_str().unwrap(), "--seed", "3", "verify", "littlewood-paley", "--symbols", "6"];
    assert_eq!(run(&args), 0);
    let v = lines(&out);
    assert_eq!(v.len(), 7);
    assert_eq!(v[0]["experiment"], "littlewood-paley");
    assert_eq!(v[6]["pass"], true);
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("MANIFEST.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["experiment"], "littlewood-paley");

    // Deterministic: a second run is byte-identical.
    let first = fs::read(&out).unwrap();
    assert_eq!(run(&args), 0);
    assert_eq!(first, fs::read(&out).unwrap());
}

#[test]
fn verify_csv_has_stable_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rad.csv");
    let args = ["--out", out.to_str().unwrap(), "--format", "csv", "verify", "radicality", "--symbols", "4"];
    assert_eq!(run(&args), 0);
    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let headers: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        [
            "experiment", "weight", "p", "label", "word", "N", "n", "s", "symbol_id", "theory", "estimate", "ratio",
            "refinement_delta", "attained_by", "degree", "flags"
        ]
    );
    assert_eq!(rdr.records().count(), 12);
}

#[test]
fn moment_cache_is_reused_and_repaired() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("k.jsonl");
    let args = [
        "--cache-dir",
        cache.to_str().unwrap(),
        "--cap",
        "400",
        "--out",
        out.to_str().unwrap(),
        "kernel",
        "--re",
        "0.5",
    ];
    assert_eq!(run(&args), 0);
    let first = lines(&out)[0].clone();
    let path = cache_path(&cache, "w0:1:1".parse().unwrap(), 400);
    let body: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    assert_eq!(body["J"], 400);
    assert_eq!(body["hash"].as_str().unwrap().len(), 64);

    // Reuse gives the same numbers.
    assert_eq!(run(&args), 0);
    assert_eq!(lines(&out)[0], first);

    // A tampered cache is detected by its hash and rebuilt.
    let mut tampered = body.clone();
    tampered["log_alpha"][3] = serde_json::json!(0.0);
    fs::write(&path, serde_json::to_vec(&tampered).unwrap()).unwrap();
    assert_eq!(run(&args), 0);
    assert_eq!(lines(&out)[0], first);
    let repaired: serde_json::Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    assert_eq!(repaired, body);
}
