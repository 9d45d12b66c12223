use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use convlab::config::sha256_hex;
use convlab::output::CURVE_HEADER;
use convlab::RunRecord;
use serde_json::Value;

const RAVEN: &str = r#"{
  "experiment": {
    "problem": { "name": "easy-raven", "params": { "first_zero": [1, 20] } },
    "method": { "name": "raven-rule" },
    "mode": { "mode": "I", "horizon": 100 },
    "seed": 7
  }
}
"#;

const COIN: &str = r#"{
  "experiment": {
    "problem": { "name": "coin-bias", "params": { "theta_grid": [0.3, 0.5] } },
    "method": { "name": "frequency-estimator" },
    "mode": { "mode": "III", "epsilon": 0.1, "delta": 0.2, "horizon": 200, "stages": { "every": 50 } },
    "engine": { "exact_cap": 0, "symmetric_cap": 0, "trials": 2000 },
    "seed": 3
  }
}
"#;

fn convlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_convlab")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn run_into(config: &Path, out: &Path) -> (RunRecord, String) {
    let res = convlab(&["run", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", stderr(&res));
    let record = serde_json::from_str(&std::fs::read_to_string(out.join("record.json")).unwrap()).unwrap();
    (record, std::fs::read_to_string(out.join("curve.csv")).unwrap())
}

#[test]
fn easy_raven_run_reports_support_and_lock_stages() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "raven.json", RAVEN);
    let (record, csv) = run_into(&cfg, &dir.path().join("out"));
    let v = &record.verdicts[0];
    assert_eq!(v["status"], "SUPPORTED_AT_HORIZON");
    for w in v["worlds"].as_array().unwrap() {
        let id = w["world_id"].as_str().unwrap();
        let expected = match id.strip_prefix("first-0-at-") {
            Some(k) => k.parse::<u64>().unwrap(),
            None => 0,
        };
        assert_eq!(w["threshold"], expected, "{id}");
    }
    assert_eq!(v["worlds"].as_array().unwrap().len(), 21);
    assert_eq!(csv.lines().next().unwrap(), CURVE_HEADER);
    assert_eq!(record.seed, 7);
    assert_eq!(record.curves, vec![dir.path().join("out").join("curve.csv")]);
}

#[test]
fn curve_header_is_stable() {
    assert_eq!(CURVE_HEADER, "problem,method,world_id,n,criterion,estimate,stderr,exact,bound");
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "coin.json", COIN);
    let out = convlab(&["curve", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CURVE_HEADER));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let worlds: std::collections::BTreeSet<&str> = rows.iter().map(|r| r[2]).collect();
    assert!(worlds.contains("theta=0.3") && worlds.contains("theta=0.5"));
    assert_eq!(rows.len(), worlds.len() * 4);
    for r in &rows {
        assert!(["50", "100", "150", "200"].contains(&r[3]), "{r:?}");
        assert_eq!(r.len(), 9);
        assert_eq!(r[4], "within(0.1)");
        assert_eq!(r[7], "false");
        // the frequency estimator carries the Bernoulli bound
        assert!(r[8].parse::<f64>().is_ok(), "{r:?}");
    }
}

#[test]
fn identical_runs_give_identical_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "coin.json", COIN);
    let (a, csv_a) = run_into(&cfg, &dir.path().join("a"));
    let (b, csv_b) = run_into(&cfg, &dir.path().join("b"));
    assert_eq!(csv_a, csv_b);
    assert_eq!(a.verdicts, b.verdicts);
    assert_eq!(a.config_digest, b.config_digest);
}

#[test]
fn thread_count_does_not_change_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "coin.json", COIN);
    let curve = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_convlab"))
            .env("CONVLAB_THREADS", threads)
            .args(["curve", cfg.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        out.stdout
    };
    assert_eq!(curve("1"), curve("8"));
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_convlab"))
        .env("CONVLAB_THREADS", "lots")
        .args(["bound", "--eps", "0.1", "--n-max", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn record_digest_matches_config_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "raven.json", RAVEN);
    let (record, _) = run_into(&cfg, &dir.path().join("out"));
    assert_eq!(record.config_digest, sha256_hex(RAVEN.as_bytes()));

    let rec = dir.path().join("out").join("record.json");
    let ok = convlab(&["verify", cfg.to_str().unwrap(), "--record", rec.to_str().unwrap()]);
    assert!(ok.status.success(), "{}", stderr(&ok));
    let doc: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(doc["record"]["digest_matches"], true);
    assert_eq!(doc["record"]["curve_matches"], true);
    assert_eq!(doc["problem_valid"], true);

    // an edited config no longer matches the record
    let edited = write(dir.path(), "raven.json", &RAVEN.replace("\"seed\": 7", "\"seed\": 8"));
    let bad = convlab(&["verify", edited.to_str().unwrap(), "--record", rec.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(3));
    let doc: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(doc["record"]["digest_matches"], false);
}

#[test]
fn unknown_method_is_a_config_error_with_a_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.json", &RAVEN.replace("raven-rule", "raven-rul"));
    let out = convlab(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("bad.json:4:"), "{msg}");
    assert!(msg.contains("unknown method"), "{msg}");
}

#[test]
fn malformed_json_is_a_config_error_with_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "broken.json", &RAVEN.replace("\"horizon\": 100", "\"horizon\": "));
    let out = convlab(&["run", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("broken.json:5:"), "{}", stderr(&out));
}

#[test]
fn unknown_world_and_missing_file_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let with_world = RAVEN.replace("\"horizon\": 100", "\"horizon\": 100, \"worlds\": [\"nowhere\"]");
    let cfg = write(dir.path(), "w.json", &with_world);
    assert_eq!(convlab(&["run", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("absent.json");
    assert_eq!(convlab(&["run", missing.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn resource_errors_exit_with_three() {
    let out = convlab(&["witness", "--problem", "coin-bias", "--method", "frequency-estimator", "--depth", "30"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).starts_with("convlab: "));
}

#[test]
fn overrides_take_precedence_over_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "raven.json", RAVEN);
    let out = dir.path().join("out");
    let res = convlab(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--horizon", "30", "--seed", "11"]);
    assert!(res.status.success(), "{}", stderr(&res));
    let record: RunRecord = serde_json::from_str(&std::fs::read_to_string(out.join("record.json")).unwrap()).unwrap();
    assert_eq!(record.seed, 11);
    assert_eq!(record.verdicts[0]["horizon"], 30);
}

#[test]
fn outputs_default_to_the_config_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "raven.json", RAVEN);
    assert!(convlab(&["run", cfg.to_str().unwrap()]).status.success());
    assert!(dir.path().join("raven.curve.csv").exists());
    assert!(dir.path().join("raven.record.json").exists());
}

#[test]
fn bound_table_rows() {
    let out = convlab(&["bound", "--eps", "0.1,0.5", "--n-min", "1", "--n-max", "25"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,epsilon,bound");
    assert!(rows.contains(&"1,0.1,0"));
    assert!(rows.contains(&"25,0.5,0.96"));
    assert_eq!(rows.len(), 1 + 2 * 25);

    let eps = 100f64.powf(-0.25).to_string();
    let out = convlab(&["bound", "--eps", &eps, "--n-min", "100", "--n-max", "100"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let b: f64 = text.lines().nth(1).unwrap().rsplit(',').next().unwrap().parse().unwrap();
    assert!((b - 0.975).abs() < 1e-12);

    assert_eq!(convlab(&["bound", "--eps", "0.1", "--n-min", "5", "--n-max", "2"]).status.code(), Some(2));
}

#[test]
fn witness_documents() {
    let out = convlab(&["witness", "--problem", "coin-bias", "--method", "frequency-estimator", "--depth", "4"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["cardinality"]["value"], 0.125);
    assert_eq!(doc["cardinality"]["gap"], serde_json::json!([0.0, 0.25]));

    let out = convlab(&["witness", "--problem", "fair-coin", "--horizon", "64"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let u = &doc["underdetermination"];
    assert_eq!(u["first"]["branch"], u["second"]["branch"]);
    let truths = [u["first"]["truth"].as_str().unwrap(), u["second"]["truth"].as_str().unwrap()];
    assert!(truths.contains(&"Fair") && truths.contains(&"Unfair"), "{truths:?}");
    assert_eq!(u["prefix_equal_through"], 64);

    let out = convlab(&["witness", "--problem", "easy-raven"]);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["underdetermination"].is_null());
    assert!(doc["statement"].as_str().unwrap().starts_with("no witness exists"));

    assert_eq!(convlab(&["witness", "--problem", "hard-raven"]).status.code(), Some(2));
}
