use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn goodbsq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_goodbsq"))
        .args(args)
        .env_remove("GOODBSQ_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn run_ok(args: &[&str]) -> String {
    let o = goodbsq(args);
    assert!(o.status.success(), "{args:?} failed: {}", stderr(&o));
    stdout(&o)
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap()
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv" || x == "bin"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    out.sort();
    out
}

#[test]
fn counterexample_summary_and_table() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("ce");
    let text = run_ok(&["counterexample", "--alpha", "0.3", "--gamma", "0.45", "--out", out.to_str().unwrap()]);
    assert!(text.contains("fitted slope 0.05 vs theory 0.05"), "{text}");
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("fitted slope 0.05 vs theory 0.05"));

    let mut rdr = csv::Reader::from_path(out.join("counterexample.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["N", "C", "C_exact"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 15);
    assert_eq!(&rows[0][0], "64");
    assert_eq!(&rows[14][0], "1048576");
    // 17 significant digits
    let c = &rows[0][1];
    let mantissa = c.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{c}");

    let m = manifest(&out);
    assert_eq!(m["config"]["alpha"], 0.3);
    assert_eq!(m["config"]["gamma"], 0.45);
    assert_eq!(m["config"]["command"], "counterexample");
    assert!(m["run_id"].as_str().unwrap().len() == 16);
    assert!(m["files"]["counterexample.csv"].is_string());
    assert!((m["results"]["slope"].as_f64().unwrap() - 0.05).abs() < 0.02);
}

fn twice(args: &[&str]) {
    let tmp = tempfile::tempdir().unwrap();
    let mut runs = Vec::new();
    for k in 0..2 {
        let dir = tmp.path().join(format!("run{k}"));
        let mut full = args.to_vec();
        let d = dir.to_str().unwrap().to_string();
        full.extend(["--out", &d]);
        run_ok(&full);
        let mut m = manifest(&dir);
        m.as_object_mut().unwrap().remove("files");
        runs.push((csv_files(&dir), m, fs::read(dir.join("manifest.json")).unwrap()));
    }
    assert!(!runs[0].0.is_empty());
    assert_eq!(runs[0].0, runs[1].0, "{args:?}");
    assert_eq!(runs[0].1, runs[1].1);
    assert_eq!(runs[0].2, runs[1].2);
}

#[test]
fn reruns_are_byte_identical() {
    twice(&["simulate", "--n", "16", "--horizon", "0.02", "--seed", "3"]);
    twice(&["decompose", "--n", "16", "--horizon", "0.02", "--data", "smooth", "--mean0", "0.1"]);
    twice(&["smoothing-scan", "--n", "8", "--n", "16", "--n", "32", "--horizon", "0.01", "--beta", "0.05", "--beta", "-0.3"]);
    twice(&["symbol-scan", "--kind", "M1", "--alpha", "0.375", "--gamma", "0", "--n", "8", "--n", "16", "--n", "32"]);
    twice(&["symbol-scan", "--kind", "m3", "--n", "4", "--n", "8", "--n", "12", "--eps3", "-"]);
    twice(&["t-bound", "--alpha", "0.25", "--trials", "3", "--n", "8", "--n", "16", "--n", "32", "--seed", "9"]);
    twice(&["counterexample", "--alpha", "0.35", "--gamma", "0.4"]);
}

#[test]
fn thread_count_does_not_change_output() {
    let tmp = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for threads in ["1", "3"] {
        let dir = tmp.path().join(threads);
        let o = Command::new(env!("CARGO_BIN_EXE_goodbsq"))
            .args(["t-bound", "--trials", "4", "--n", "8", "--n", "16", "--n", "32", "--out"])
            .arg(&dir)
            .env("GOODBSQ_THREADS", threads)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        files.push(csv_files(&dir));
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn validation_errors_exit_with_2() {
    let o = goodbsq(&[]);
    assert_eq!(o.status.code(), Some(2));
    let text = stderr(&o);
    for sub in ["simulate", "decompose", "smoothing-scan", "symbol-scan", "counterexample", "t-bound"] {
        assert!(text.contains(sub), "{text}");
    }

    let o = goodbsq(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));

    let o = goodbsq(&["simulate", "--alpha", "0.7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("alpha"));

    let o = goodbsq(&["symbol-scan", "--kind", "M7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("kind"));

    let o = goodbsq(&["counterexample", "--n", "64", "--n", "32", "--n", "128"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`n`"));

    let o = goodbsq(&["simulate", "--gamma", "0.4", "--beta", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("beta"));

    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("empty.toml");
    fs::write(&empty, "").unwrap();
    let o = goodbsq(&["counterexample", "--config", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("alpha, gamma, beta"), "{}", stderr(&o));

    let o = Command::new(env!("CARGO_BIN_EXE_goodbsq"))
        .args(["counterexample", "--out"])
        .arg(tmp.path().join("x"))
        .env("GOODBSQ_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("GOODBSQ_THREADS"));
}

#[test]
fn blow_up_exits_with_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("x");
    let o = goodbsq(&["simulate", "--n", "16", "--mean0", "-1000", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("instability"));
}

#[test]
fn config_file_with_overrides() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    let out = tmp.path().join("out");
    fs::write(
        &cfg,
        format!(
            "alpha = 0.3\ngamma = 0.45\nn = [64, 128, 256, 512]\nformat = \"json\"\nout = {:?}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let text = run_ok(&["counterexample", "--config", cfg.to_str().unwrap(), "--gamma", "0.4"]);
    assert!(text.contains("theory 0.00"), "{text}");
    let m = manifest(&out);
    assert_eq!(m["config"]["alpha"], 0.3);
    assert_eq!(m["config"]["gamma"], 0.4);
    assert_eq!(m["config"]["n_list"].as_array().unwrap().len(), 4);
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let rows = report["counterexample"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["N"], 64);
    assert!(rows[0]["C"].as_f64().unwrap() > 0.0);

    fs::write(&cfg, "alpha = 0.3\nspeed = 2\n").unwrap();
    let o = goodbsq(&["counterexample", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("speed"));
}

#[test]
fn simulate_keeps_the_mean_law() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("s");
    run_ok(&[
        "simulate", "--n", "16", "--data", "smooth", "--mean0", "0.25", "--mean1", "-0.5", "--horizon", "0.05",
        "--out", out.to_str().unwrap(),
    ]);
    let mut rdr = csv::Reader::from_path(out.join("zero_mode.csv")).unwrap();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let got: f64 = rec[1].parse().unwrap();
        let want: f64 = rec[3].parse().unwrap();
        assert!((got - want).abs() <= 1e-12, "{got} vs {want}");
    }
    let m = manifest(&out);
    assert_eq!(m["conventions"]["a0"], 0.5);
    assert_eq!(m["conventions"]["a1"], -1.0);
    assert!(out.join("final_state.bin").exists());
}
