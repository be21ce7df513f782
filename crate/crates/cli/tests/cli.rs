use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 output")
}

#[test]
fn every_subcommand_runs_on_defaults() {
    for sub in ["coin", "graph", "spectrum", "evolve", "period", "localize", "sweep-theta", "sweep-n"] {
        let start = Instant::now();
        let o = qwalk(&[sub]);
        assert!(o.status.success(), "{sub}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(start.elapsed() < Duration::from_secs(60), "{sub} took {:?}", start.elapsed());
        let text = stdout(&o);
        assert!(!text.is_empty() && text.ends_with('\n') && !text.contains('\r'), "{sub}");
    }
}

#[test]
fn subcommands_run_as_json_at_n50() {
    for sub in ["coin", "graph", "spectrum", "evolve", "period", "localize", "sweep-theta"] {
        let o = qwalk(&[sub, "--n", "50", "--format", "json", "--parallel"]);
        assert!(o.status.success(), "{sub}: {}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_str::<serde_json::Value>(&stdout(&o)).unwrap_or_else(|e| panic!("{sub}: {e}"));
    }
}

#[test]
fn period_example_is_six() {
    let o = qwalk(&["period", "--class", "X", "--theta", "2pi/3", "--n", "7", "--format", "json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["outcome"], "finite");
    assert_eq!(doc["tau"], 6);
    assert_eq!(doc["method"], "theorem");
}

#[test]
fn period_methods_agree_on_a_periodic_coin() {
    for method in ["theorem", "spectral", "brute"] {
        let o = qwalk(&["period", "--class", "Z", "--theta", "0", "--n", "6", "--method", method]);
        assert!(o.status.success(), "{method}");
        let text = stdout(&o);
        let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
        assert_eq!((row[0], row[1], row[2]), (method, "finite", "12"), "{text}");
    }
}

#[test]
fn malformed_theta_is_a_usage_error() {
    let o = qwalk(&["period", "--theta", "banana"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("banana"));
}

#[test]
fn unknown_flag_and_missing_subcommand_are_usage_errors() {
    assert_eq!(qwalk(&["period", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(qwalk(&[]).status.code(), Some(2));
    assert_eq!(qwalk(&["localize", "--method", "brute"]).status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let o = qwalk(&["coin", "--out", target.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn localize_rows_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = qwalk(&["localize", "--n", "4", "--T", "50", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 1 + 8);
    assert!(text.starts_with("theta_or_n,s,r,pbar\n"));
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn spectrum_has_six_rows_per_momentum() {
    let o = qwalk(&["spectrum", "--n", "5", "--class", "Y", "--theta", "0.4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 30);
    assert!(text.starts_with("k,j,re,im,phase,residual\n"));
    let closed = stdout(&qwalk(&["spectrum", "--n", "5", "--class", "Y", "--theta", "0.4", "--method", "closed-form"]));
    assert_eq!(closed.lines().count(), 31);
}

#[test]
fn floats_carry_seventeen_significant_digits() {
    let text = stdout(&qwalk(&["coin", "--class", "W", "--theta", "1"]));
    let entry = text.lines().nth(1).unwrap().split(',').nth(2).unwrap();
    let mantissa = entry.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
    assert_eq!(mantissa.len(), 17, "{entry}");
}

#[test]
fn parallel_sweep_matches_serial() {
    let args = ["sweep-theta", "--grid", "9", "--n", "6", "--T", "40"];
    let serial = stdout(&qwalk(&args));
    let mut par_args = args.to_vec();
    par_args.push("--parallel");
    assert_eq!(serial, stdout(&qwalk(&par_args)));
    assert_eq!(serial.lines().count(), 1 + 9 * 3);
}

#[test]
fn sweep_n_reports_one_row_per_ring() {
    let text = stdout(&qwalk(&["sweep-n", "--ns", "7,5,9", "--T", "30"]));
    let labels: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(labels, ["5", "7", "9"]);
}

#[test]
fn evolve_preserves_norm() {
    let o = qwalk(&["evolve", "--n", "6", "--steps", "25", "--init", "s=0,r=3,coin=0.6:0.8i:0", "--format", "json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["time"], 25);
    let total: f64 = doc["amplitudes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["re"].as_f64().unwrap().powi(2) + a["im"].as_f64().unwrap().powi(2))
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}
