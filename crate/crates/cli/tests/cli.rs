use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn kgres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kgres")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn validate(schema_file: &str, doc: &Value) {
    let path = manifest_dir().join("schemas").join(schema_file);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let v = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn resonances_report_validates_and_exits_zero() {
    let o = kgres(&["resonances", "--c", "5"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    validate("resonance-report-1.schema.json", &doc);
    assert_eq!(doc["separated"], true);
    let mut phases: Vec<&str> =
        doc["resonant_phases"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    phases.sort();
    assert_eq!(phases, ["c11+--", "cc1+--"]);
}

#[test]
fn exit_codes() {
    // c = 1 is degenerate
    assert_eq!(code(&kgres(&["resonances", "--c", "1"])), 1);
    assert_eq!(code(&kgres(&["resonances", "--c", "5", "--tau-sep", "0.01"])), 2);
    assert_eq!(code(&kgres(&["sweep", "--from", "4", "--to", "6", "--steps", "0"])), 1);
    assert_eq!(code(&kgres(&["simulate", "/nonexistent/config.conf"])), 1);
    assert_eq!(code(&kgres(&["resonances"])), 1);
    assert_eq!(code(&kgres(&["--help"])), 0);
    assert_eq!(code(&kgres(&["constants", "--verify", "5e-4,0.04,1e-4"])), 1);
    assert_eq!(code(&kgres(&["constants", "--verify", "5e-4,0.04,1e-4,10"])), 2);
}

#[test]
fn blowup_config_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "blowup.conf",
        "c = 5\nphase = c11+--\nalpha = 1\nbeta = 1\ngamma = 1\ndelta = 1\nepsilon = 1\nzeta = 1\n\
         amplitude = 1\nt_final = 20\ndt = 0.5\n",
    );
    let o = kgres(&["simulate", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let doc = json(&o);
    validate("experiment-record-1.schema.json", &doc);
    assert_eq!(doc["status"], "inconclusive");
    assert!(doc["growth_ratio"].is_null());
}

#[test]
fn sweep_is_deterministic_and_matches_single_scan() {
    let args = ["sweep", "--from", "4.5", "--to", "5.5", "--steps", "11"];
    let a = kgres(&args);
    let b = kgres(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c,separated,min_gap"));
    let row = lines.find(|l| l.split(',').next().unwrap().parse::<f64>().unwrap() == 5.0).expect("row at c = 5");
    let gap: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    let report = json(&kgres(&["resonances", "--c", "5"]));
    assert!((gap - report["min_gap"].as_f64().unwrap()).abs() <= 1e-12);
    assert_eq!(row.split(',').nth(1), Some("true"));
}

#[test]
fn probes_are_deterministic_and_validate() {
    let cases: [&[&str]; 5] = [
        &["operator-probe", "--probe", "bernstein", "--trials", "10"],
        &["operator-probe", "--probe", "holder", "--pairs", "5"],
        &["operator-probe", "--probe", "translation", "--pairs", "3"],
        &["operator-probe", "--probe", "radial"],
        &["operator-probe", "--probe", "cutoff", "--samples", "500"],
    ];
    for args in cases {
        let with_seed: Vec<&str> = args.iter().copied().chain(["--seed", "7"]).collect();
        let a = kgres(&with_seed);
        let b = kgres(&with_seed);
        assert_eq!(code(&a), 0, "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let doc = json(&a);
        assert_eq!(doc["seed"], 7);
        validate("operator-probe-1.schema.json", &doc);
    }
}

#[test]
fn constants_search_and_verify_validate() {
    let o = kgres(&["constants", "--a", "10", "--n", "1"]);
    assert_eq!(code(&o), 0);
    let doc = json(&o);
    validate("constants-1.schema.json", &doc);
    assert_eq!(doc["search"]["status"], "feasible");
    let s = &doc["search"];
    let replay = format!(
        "{},{},{},{}",
        s["delta1"].as_f64().unwrap(),
        s["delta2"].as_f64().unwrap(),
        s["delta3"].as_f64().unwrap(),
        s["n_reg"].as_u64().unwrap()
    );
    let v = kgres(&["constants", "--verify", &replay]);
    assert_eq!(code(&v), 0);
    let vdoc = json(&v);
    validate("constants-1.schema.json", &vdoc);
    assert_eq!(vdoc["verified"]["all_hold"], true);

    let o = kgres(&["constants", "--verify", "5e-4,0.04,1e-4,13200"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verified"]["all_hold"], true);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = kgres(&["resonances", "--c", "5", "--output", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["schema"], "resonance-report/1");
}

#[test]
fn cutoff_export_partition_sums_to_one() {
    let get = |kind: &str| {
        let o = kgres(&["cutoff-export", "--c", "5", "--kind", kind, "--rho", "0.1", "--points", "21"]);
        assert_eq!(code(&o), 0);
        let text = String::from_utf8(o.stdout).unwrap();
        assert_eq!(text.lines().next(), Some("x,y,value"));
        text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap()).collect::<Vec<_>>()
    };
    let (r, s, t) = (get("chi_r"), get("chi_s"), get("chi_t"));
    assert_eq!(r.len(), 21 * 21);
    for i in 0..r.len() {
        assert!((r[i] + s[i] + t[i] - 1.0).abs() <= 1e-12);
    }
    assert_eq!(code(&kgres(&["cutoff-export", "--c", "5", "--kind", "chi_q"])), 1);
}

#[test]
fn bundled_configs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ts.csv");
    // shortened copy of the calibrated config keeps the test quick
    let body = std::fs::read_to_string(manifest_dir().join("configs/c5_resonant.conf")).unwrap();
    let short = write_config(dir.path(), "short.conf", &body.replace("t_final = 100", "t_final = 20"));
    let o = kgres(&["simulate", short.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = json(&o);
    validate("experiment-record-1.schema.json", &doc);
    assert!(doc["growth_ratio"].as_f64().unwrap() > 1.0);
    let ts = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(ts.lines().next(), Some("run,t,band_energy,deviation"));
    assert_eq!(ts.lines().count(), 1 + 2 * 21);

    let body = std::fs::read_to_string(manifest_dir().join("configs/c5_linear.conf")).unwrap();
    let short = write_config(dir.path(), "linear.conf", &body.replace("t_final = 100", "t_final = 20"));
    let doc = json(&kgres(&["simulate", short.to_str().unwrap()]));
    assert!((doc["growth_ratio"].as_f64().unwrap() - 1.0).abs() <= 1e-9);

    let archived: Value =
        serde_json::from_str(&std::fs::read_to_string(manifest_dir().join("calibration/c5_resonant.json")).unwrap())
            .unwrap();
    validate("experiment-record-1.schema.json", &archived);
}

#[test]
fn bad_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for body in ["c = 5\nbogus = 1\n", "c = 5\nc = 6\n", "c = five\n", "grid = 7\n"] {
        let cfg = write_config(dir.path(), "bad.conf", body);
        let o = kgres(&["simulate", cfg.to_str().unwrap()]);
        assert_eq!(code(&o), 1, "{body:?}");
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}
