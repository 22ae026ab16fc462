//! Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
//! if any criterion fails.
//!
//! Criteria 1 to 11 are read from `qdilog verify all --seed 42 --json`. Every
//! bounded check is compared against the tolerance pinned here, not the one the
//! suite used. Check sequences without a bound must be strictly decreasing
//! and are taken from the report's pass flag.

use serde_json::Value;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qdilog");

fn qdilog(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("qdilog runs")
}

/// `(suite, check name, pinned bound)`; `None` means a strict-decrease check.
type Rule = (&'static str, &'static str, Option<f64>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn judge(checks: &[Value], rules: &[Rule]) -> Outcome {
    let mut count = 0;
    let mut worst: Vec<String> = Vec::new();
    let mut pass = true;
    for &(suite, name, bound) in rules {
        let matching: Vec<&Value> = checks.iter().filter(|c| c["suite"] == suite && c["name"] == name).collect();
        if matching.is_empty() {
            pass = false;
            worst.push(format!("{name}: no records"));
            continue;
        }
        count += matching.len();
        match bound {
            Some(b) => {
                let mut max: f64 = 0.0;
                for c in &matching {
                    match c["residual"].as_f64() {
                        Some(r) if r.is_finite() => max = max.max(r),
                        _ => max = f64::INFINITY,
                    }
                }
                if !(max <= b) {
                    pass = false;
                }
                worst.push(format!("{name} {max:.1e}<{b:.0e}"));
            }
            None => {
                let bad = matching.iter().filter(|c| c["pass"] != true).count();
                if bad > 0 {
                    pass = false;
                }
                worst.push(format!("{name} decreasing {}/{}", matching.len() - bad, matching.len()));
            }
        }
    }
    Outcome { pass, detail: format!("{count} checks; {}", worst.join(", ")) }
}

fn criteria() -> Vec<(&'static str, Vec<Rule>)> {
    let g = "gb-identities";
    vec![
        (
            "G_b identities",
            vec![
                (g, "functional_b", Some(1e-8)),
                (g, "functional_binv", Some(1e-8)),
                (g, "reflection", Some(1e-8)),
                (g, "conjugation", Some(1e-8)),
                (g, "selfduality", Some(1e-8)),
            ],
        ),
        ("backend cross-validation", vec![(g, "backend_agreement", Some(1e-4))]),
        ("residues", vec![(g, "origin_residue", Some(1e-6)), (g, "residue", Some(1e-6))]),
        (
            "tau-beta and Fourier lemmas",
            vec![("tau-beta", "tau_beta", Some(1e-6)), ("fourier-gb", "fourier_gb", Some(1e-6))],
        ),
        ("q-binomial residues", vec![("q-binomial", "qbinom_residue", Some(1e-8))]),
        (
            "gamma limit",
            vec![
                ("limits", "glim", None),
                ("limits", "glimq", None),
                ("limits", "glim_small_r", Some(1e-2)),
                ("limits", "reflection_compat", Some(1e-3)),
            ],
        ),
        ("eta functional equation", vec![("limits", "eta", Some(1e-10))]),
        (
            "classical ax+b",
            vec![
                ("classical-rep", "group_law", Some(1e-12)),
                ("classical-rep", "point_unitarity", Some(1e-8)),
                ("classical-rep", "decompose_round_trip", Some(1e-12)),
                ("classical-rep", "mellin_route", Some(1e-6)),
                ("classical-rep", "intertwiner_round_trip", Some(1e-3)),
                ("classical-rep", "intertwiner_norms", Some(1e-3)),
                ("classical-rep", "intertwiner_equivariance", Some(1e-3)),
            ],
        ),
        (
            "quantum intertwiner",
            vec![
                ("q-intertwiner", "fourier_kernel_conjugation", Some(1e-10)),
                ("q-intertwiner", "round_trip", Some(1e-3)),
                ("q-intertwiner", "kernel_limit", None),
                ("q-intertwiner", "kernel_limit_small_r", Some(1e-2)),
            ],
        ),
        (
            "corepresentation",
            vec![
                ("corep", "corep_axiom", Some(1e-8)),
                ("corep", "pairing_x", Some(1e-6)),
                ("corep", "pairing_y", Some(1e-6)),
                ("corep", "coaction_limit", None),
                ("corep", "coaction_limit_small_r", Some(1e-2)),
            ],
        ),
        (
            "hypergeometric",
            vec![("limits", "fb_limit", Some(1e-2)), ("limits", "hyp2f1_contour_vs_series", Some(1e-8))],
        ),
    ]
}

fn cli_contract(first: &Output, second: &Output) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let identical = first.stdout == second.stdout && first.status.code() == second.status.code();
    pass &= identical;
    notes.push(format!("verify all --seed 42 twice identical={identical}"));
    let cases: [(&[&str], i32); 6] = [
        (&["verify", "gb-identities", "--tol", "1e-30"], 1),
        (&["eval", "gamma", "0"], 2),
        (&["eval", "gamma", "1"], 0),
        (&["eval", "no_such_function", "1"], 64),
        (&["verify", "gb-identities", "--bogus"], 64),
        (&["table", "glim", "--r", "0.05,0.1"], 64),
    ];
    for (args, want) in cases {
        let got = qdilog(args).status.code();
        if got != Some(want) {
            pass = false;
            notes.push(format!("`{}` exit {got:?} != {want}", args.join(" ")));
        }
    }
    notes.push(format!("{} exit-code cases", cases.len()));
    Outcome { pass, detail: notes.join(", ") }
}

fn main() {
    let args = ["verify", "all", "--seed", "42", "--json"];
    let first = qdilog(&args);
    let second = qdilog(&args);
    let report: Value = serde_json::from_slice(&first.stdout).expect("verify report is JSON");
    let checks = report["checks"].as_array().expect("checks array").clone();

    let mut outcomes: Vec<(String, Outcome)> = criteria()
        .into_iter()
        .map(|(label, rules)| (label.to_string(), judge(&checks, &rules)))
        .collect();
    outcomes.push(("CLI determinism and exit codes".into(), cli_contract(&first, &second)));

    let mut failed = 0;
    for (i, (label, o)) in outcomes.iter().enumerate() {
        if !o.pass {
            failed += 1;
        }
        println!("criterion {:>2} {} {label}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {}/{} criteria pass", outcomes.len() - failed, outcomes.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
