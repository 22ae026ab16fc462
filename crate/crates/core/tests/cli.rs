use num_complex::Complex64 as C;
use qdilog::gamma::gamma;
use serde_json::Value;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qdilog");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("qdilog runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn cval(v: &Value) -> C {
    C::new(v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap())
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone()).unwrap().lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn eval_gamma_one() {
    let out = run(&["eval", "gamma", "1.0"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["function"], "gamma");
    assert!((cval(&v["value"]) - 1.0).norm() < 1e-14);
}

#[test]
fn eval_gb_fixture() {
    let out = run(&["eval", "gb", "--b", "0.8", "--x", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let want = C::new(0.2372083709438566, -0.6429814245704344);
    assert!((cval(&v["value"]) - want).norm() < 1e-11);
    assert_eq!(v["backend"], "integral");
    assert!(v["err_estimate"].as_f64().unwrap() < 1e-10);
}

#[test]
fn eval_symbolic_midpoint() {
    // reflection at x = Q/2 gives G_b(Q/2)^2 = exp(-pi i Q^2 / 4)
    let out = run(&["eval", "gb", "--b2", "0.3+0.4i", "--x", "Q/2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let q = C::new(0.3, 0.4).sqrt();
    let big_q = q + 1.0 / q;
    let g = cval(&v["value"]);
    assert!((cval(&v["args"][0]) - big_q / 2.0).norm() < 1e-15);
    assert!((g * g - (-PI * C::i() * big_q * big_q / 4.0).exp()).norm() < 1e-10);
    let real = json(&run(&["eval", "gb", "--b", "0.7", "Q/2"]));
    assert!((cval(&real["value"]).norm() - 1.0).abs() < 1e-12);
}

#[test]
fn eval_errors_are_structured() {
    let out = run(&["eval", "gamma", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "pole");
    assert_eq!(run(&["eval", "gb", "0.5"]).status.code(), Some(64));
    assert_eq!(run(&["eval", "gamma", "1+"]).status.code(), Some(64));
    assert_eq!(run(&["eval", "gb", "0.5", "--b", "0.8", "--b2", "0.3+0.4i"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn negative_positional_arguments() {
    let v = json(&run(&["eval", "gamma", "-0.5+0.2i"]));
    let want = gamma(C::new(-0.5, 0.2)).unwrap();
    assert!((cval(&v["value"]) - want).norm() < 1e-14);
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "gb-identities", "--tol", "1e-8", "--json"]);
    assert_eq!(ok.status.code(), Some(0));
    let report = json(&ok);
    assert_eq!(report["pass"], true);
    assert_eq!(report["failed"], 0);
    assert!(report["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    assert_eq!(run(&["verify", "gb-identities", "--tol", "1e-30"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(64));
}

#[test]
fn glim_table_decreases() {
    let out = run(&["table", "glim", "--points", "0.5;1;1.5", "--r", "0.1,0.05,0.025"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows[0], ["x_re", "x_im", "r", "residual"]);
    assert_eq!(rows.len(), 10);
    for group in rows[1..].chunks(3) {
        let res: Vec<f64> = group.iter().map(|r| r[3].parse().unwrap()).collect();
        // x = 1 is exact at every r
        let exact = res.iter().all(|&v| v < 1e-12);
        assert!(exact || (res[0] > res[1] && res[1] > res[2]), "{group:?}");
    }
}

#[test]
fn kernel_and_coaction_tables() {
    let rows = csv_rows(&run(&["table", "kernel-limit", "--points", "0.5,1,1.5"]));
    assert_eq!(rows.len(), 4);
    let res: Vec<f64> = rows[1..].iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(res[0] > res[1] && res[1] > res[2]);
    let rows = csv_rows(&run(&["table", "coaction-limit", "--points", "0.3,0.9", "--variant", "v_star"]));
    let res: Vec<f64> = rows[1..].iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(res[0] > res[1] && res[1] > res[2]);
}

#[test]
fn table_edge_cases() {
    let out = run(&["table", "glim", "--points", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x_re,x_im,r,residual\n");
    assert_eq!(run(&["table", "glim", "--r", "0.05,0.1"]).status.code(), Some(64));
    assert_eq!(run(&["table", "glim", "--r", "0.1,-0.05"]).status.code(), Some(64));
    assert_eq!(run(&["table", "glim", "--variant", "floor"]).status.code(), Some(64));
}

/// Forward transform of `f` at real `(lam, t)`: the line `Im t2 = -1/2` by the
/// trapezoid rule plus the pole at `t2 = -lam` it passes below.
fn forward_oracle(f: impl Fn(C, C) -> C, lam: f64, t: f64) -> C {
    let (lam, t) = (C::new(lam, 0.0), C::new(t, 0.0));
    let i = C::i();
    let h = 2e-3;
    let mut sum = C::new(0.0, 0.0);
    for k in -8000..=8000 {
        let t2 = C::new(k as f64 * h, -0.5);
        sum += gamma(i * (t2 - t + lam)).unwrap() * gamma(-i * (t2 + lam)).unwrap() * f(t - t2, t2);
    }
    sum * h / (2.0 * PI * gamma(-i * t).unwrap()) + f(t + lam, -lam)
}

#[test]
fn classical_forward_matches_fixture() {
    let dir = std::env::temp_dir().join(format!("qdilog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_path = dir.join("forward.json");
    let input = fixture("gaussian.json");
    let out = run(&["transform", "classical", "forward", "--input", input.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let got: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(fixture("gaussian_classical_forward.json")).unwrap()).unwrap();
    let (got, stored) = (got["values"].as_array().unwrap(), stored["values"].as_array().unwrap());
    assert_eq!(got.len(), stored.len());
    let gauss = |a: C, b: C| (-a * a - b * b).exp();
    for (g, s) in got.iter().zip(stored) {
        assert_eq!(g["point"], s["point"]);
        assert!((cval(&g["value"]) - cval(&s["value"])).norm() < 1e-10);
        let (lam, t) = (s["point"][0].as_f64().unwrap(), s["point"][1].as_f64().unwrap());
        let oracle = forward_oracle(gauss, lam, t);
        assert!((cval(&s["value"]) - oracle).norm() < 1e-8, "({lam}, {t}): {} vs {oracle}", cval(&s["value"]));
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn quantum_round_trip_and_empty_grid() {
    let dir = std::env::temp_dir().join(format!("qdilog-cli-q-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = std::fs::read_to_string(fixture("gaussian.json")).unwrap();
    let mut spec: Value = serde_json::from_str(&input).unwrap();
    spec["tol"] = 1e-6.into();
    let path = dir.join("in.json");
    std::fs::write(&path, spec.to_string()).unwrap();
    let report = json(&run(&["transform", "quantum", "round-trip", "--input", path.to_str().unwrap()]));
    assert!(report["round_trip_max"].as_f64().unwrap() < 1e-3);

    spec["grid"] = Value::Array(vec![]);
    std::fs::write(&path, spec.to_string()).unwrap();
    let out = run(&["transform", "classical", "forward", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["values"], Value::Array(vec![]));

    std::fs::write(&path, r#"{"grid": [], "function": [], "extra": 1}"#).unwrap();
    assert_eq!(run(&["transform", "classical", "forward", "--input", path.to_str().unwrap()]).status.code(), Some(64));
    std::fs::remove_dir_all(&dir).ok();
}
