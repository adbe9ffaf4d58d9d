use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use smoothsq::artifacts::{sha256_hex, MANIFEST};

fn smoothsq(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smoothsq"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

#[test]
fn approx_sweep_writes_a_monotone_curve() {
    let dir = tempfile::tempdir().unwrap();
    let o = smoothsq(&["approx-sweep", "--sigma", "1.0", "--mmax", "20"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let mut rdr = csv::Reader::from_path(dir.path().join("degree_curve.csv")).unwrap();
    let headers = rdr.headers().unwrap().clone();
    for col in ["sigma", "m", "l1_error", "l2_error", "certificate_k", "certificate_value"] {
        assert!(headers.iter().any(|h| h == col), "missing {col}");
    }
    let l1_col = headers.iter().position(|h| h == "l1_error").unwrap();
    let l1: Vec<f64> = rdr.records().map(|r| r.unwrap()[l1_col].parse().unwrap()).collect();
    assert_eq!(l1.len(), 21);
    assert!(l1.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{l1:?}");
}

#[test]
fn hard_check_reports_pass() {
    let dir = tempfile::tempdir().unwrap();
    let o = smoothsq(&["hard-check", "--k", "4", "--S", "0.5,1.0", "--draws", "300000"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&dir.path().join("hard_check.json"));
    assert!(r["max_abs_moment_z"].as_f64().unwrap() <= 4.0);
    assert_eq!(r["fractional_mass"]["pass"], Value::Bool(true));
    assert_eq!(r["density_ratio"]["bound"].as_f64().unwrap(), 2.0);
    let moments = std::fs::read_to_string(dir.path().join("moments.csv")).unwrap();
    assert_eq!(moments.lines().count(), 5);
}

#[test]
fn manifest_hashes_every_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = smoothsq(&["--seed", "7", "gap", "--draws", "100000"], dir.path());
    assert!(o.status.success());
    let m = json(&dir.path().join(MANIFEST));
    assert_eq!(m["seed"], 7);
    assert_eq!(m["command"], "gap");
    assert_eq!(m["config"]["gap"]["draws"], 100000);
    let files = m["files"].as_array().unwrap();
    assert_eq!(files.len(), 1);
    for f in files {
        let bytes = std::fs::read(dir.path().join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), sha256_hex(&bytes));
    }
    let listed = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(listed, files.len() + 1);
}

#[test]
fn artifacts_do_not_depend_on_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (dir, threads) in [(&a, "1"), (&b, "3")] {
        let o = smoothsq(&["hard-check", "--draws", "200000", "--threads", threads], dir.path());
        assert!(o.status.success());
    }
    for name in ["hard_check.json", "moments.csv", "density_ratio.csv"] {
        assert_eq!(std::fs::read(a.path().join(name)).unwrap(), std::fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}

#[test]
fn config_file_env_and_flags_layer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "seed = 5\n[learn]\nd = 2\nn_train = 3000\nn_test = 3000\nseeds = [0]\n").unwrap();
    let out = dir.path().join("out");
    let o = Command::new(env!("CARGO_BIN_EXE_smoothsq"))
        .args(["learn", "--config"])
        .arg(&cfg)
        .args(["--seed", "6", "--out"])
        .arg(&out)
        .env("SMOOTHSQ_LEARN__LABELS", "halfspace")
        .env("SMOOTHSQ_LEARN__RUNS", "[{ degree = 3, policy = \"known\" }]")
        .env("SMOOTHSQ_SEED", "9")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let m = json(&out.join(MANIFEST));
    assert_eq!(m["seed"], 6);
    assert_eq!(m["config"]["learn"]["labels"], "halfspace");
    let text = std::fs::read_to_string(out.join("learn.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("d,m,sigma,epsilon,n_train,n_test,test_error,opt_sigma,gap,seed"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "2");
    assert_eq!(row[1], "3");
    assert!(lines.next().is_none());
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "seed = 1\n\n[hard_check]\n  kk = 3\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_smoothsq"))
        .args(["hard-check", "--config"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4, column 3"), "{err}");

    let o = smoothsq(&["hard-check", "--k", "4", "--C", "1"], &dir.path().join("x"));
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("hard-instance"));

    let o = smoothsq(&["learn", "--n-train", "5", "--seeds", "0"], &dir.path().join("y"));
    assert_eq!(o.status.code(), Some(3));

    let o = smoothsq(&["distinguish", "--budget", "3"], &dir.path().join("z"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lp_dump_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let o = smoothsq(&["approx-sweep", "--sigma", "0.5", "--mmax", "3", "--dump-lp", "2"], dir.path());
    assert!(o.status.success());
    let lp = std::fs::read_to_string(dir.path().join("lp_sigma0.5_m2.lp")).unwrap();
    assert!(lp.lines().nth(1) == Some("Minimize"), "{lp}");
    assert_eq!(lp.matches(" = 0e0").count(), 3);
    assert!(lp.trim_end().ends_with("End"));
}
