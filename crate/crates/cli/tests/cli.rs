use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hqc-dfs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 output")
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("JSON report")
}

fn check<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

fn csv_rows(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

fn column(text: &str, name: &str) -> usize {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.headers().unwrap().iter().position(|h| h == name).unwrap()
}

#[test]
fn gate_cnot_prints_unit_fidelity() {
    let o = run(&["gate", "--kind", "cnot"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("F = 1.000000"), "{text}");
    assert!(text.ends_with('\n'));
}

#[test]
fn cnot_report_shows_xi_pi_gives_minus_identity() {
    let r = json(&run(&["gate", "--format", "json"]));
    let e = &r["xi_pi_variant"];
    assert_eq!(e["xi"].as_f64().unwrap(), PI);
    assert!(e["distance_to_minus_identity"].as_f64().unwrap() < 1e-12);
    assert!((e["fidelity_vs_cnot"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(e["realized_block"][0][0]["re"].as_f64().unwrap().round(), -1.0);
}

#[test]
fn zero_angles_give_the_identity() {
    let o = run(&[
        "gate", "--kind", "c1u", "--delta", "0", "--theta", "0", "--alpha", "0", "--beta", "0", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert!((r["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let u = r["u_logical"].as_array().unwrap();
    // Up to a global phase, which is read off the first entry.
    let (p_re, p_im) = (u[0][0]["re"].as_f64().unwrap(), u[0][0]["im"].as_f64().unwrap());
    for (i, row) in u.iter().enumerate() {
        for (j, z) in row.as_array().unwrap().iter().enumerate() {
            let (re, im) = (z["re"].as_f64().unwrap(), z["im"].as_f64().unwrap());
            let (er, ei) = if i == j { (p_re, p_im) } else { (0.0, 0.0) };
            assert!((re - er).abs() < 1e-9 && (im - ei).abs() < 1e-9, "entry ({i},{j})");
        }
    }
}

#[test]
fn fredkin_gate_prints_the_controlled_swap() {
    let o = run(&["gate", "--kind", "fredkin", "--eta", "1.0"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("F = 1.000000"));
    let lines: Vec<&str> = text.lines().collect();
    let start = lines.iter().position(|l| *l == "U_logical =").unwrap() + 1;
    let ones: Vec<usize> = lines[start..start + 8]
        .iter()
        .map(|l| {
            l.split_whitespace()
                .position(|c| c.starts_with("1.000000") || c.starts_with("-1.000000"))
                .unwrap()
        })
        .collect();
    assert_eq!(ones, vec![0, 1, 2, 3, 4, 6, 5, 7]);
}

#[test]
fn default_verify_passes_every_check() {
    let o = run(&["verify"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["schema_version"], 1);
    for c in r["checks"].as_array().unwrap() {
        assert_eq!(c["pass"], true, "{c}");
        assert!(c["residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap());
    }
    for name in [
        "unitarity",
        "cyclic",
        "parallel_transport",
        "dfs_invariance",
        "gate_fidelity",
    ] {
        check(&r, name);
    }
    assert!(r["seed"].is_u64());
    assert!((r["gate"]["pulse_area"].as_f64().unwrap() - PI).abs() < 1e-15);
    assert!((r["gate"]["delta"].as_f64().unwrap() - FRAC_PI_2).abs() < 1e-15);
    assert!(r["generator"]["version"].is_string());
}

#[test]
fn perturbation_breaks_dfs_invariance() {
    let o = run(&["verify", "--perturb", "1e-3"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert_eq!(check(&r, "dfs_invariance")["pass"], false);
    assert_eq!(r["pass"], false);
}

#[test]
fn tolerance_below_rounding_fails() {
    // The Fredkin path-check residual sits well above 1e-15.
    let o = run(&["verify", "--kind", "fredkin", "--tolerance", "1e-15"]);
    assert_eq!(code(&o), 1);
    assert_eq!(check(&json(&o), "parallel_transport")["pass"], false);
    let o = run(&["verify", "--tolerance", "1e-17"]);
    assert_eq!(code(&o), 1);
    assert_eq!(check(&json(&o), "unitarity")["tolerance"].as_f64().unwrap(), 1e-17);
}

#[test]
fn every_gate_kind_verifies() {
    for kind in ["c1u", "cnot", "c2u", "toffoli", "fredkin"] {
        let o = run(&["verify", "--kind", kind]);
        assert_eq!(code(&o), 0, "{kind}");
    }
    let o = run(&[
        "verify", "--kind", "c2u", "--xi", "0.4", "--gamma", "-1.3", "--alpha", "2.1", "--beta", "-0.6",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn placed_gates_verify() {
    let o = run(&["verify", "--kind", "toffoli", "--placement", "3,1,4"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["gate"]["n_logical"], 4);
    assert_eq!(r["gate"]["n_physical"], 8);
    let o = run(&["verify", "--kind", "cnot", "--placement", "2,1", "--logical", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn xi_sweep_passes_everywhere() {
    let o = run(&[
        "sweep", "--kind", "c1u", "--xi", "0:pi:11", "--gamma", "0", "--alpha", "pi/2", "--beta", "0",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 11);
    let (xi, f) = (column(&text, "xi"), column(&text, "fidelity"));
    for (k, r) in rows.iter().enumerate() {
        let expected = PI * k as f64 / 10.0;
        assert!((r[xi].parse::<f64>().unwrap() - expected).abs() < 1e-15);
        assert!(r[f].parse::<f64>().unwrap() >= 1.0 - 1e-8);
        assert_eq!(&r[0], "1");
    }
}

#[test]
fn single_point_sweep_matches_verify() {
    let angles = [
        "--kind", "c1u", "--xi", "0.7", "--gamma", "-0.2", "--alpha", "1.1", "--beta", "0.3",
    ];
    let s = run(&[&["sweep"][..], &angles].concat());
    let v = json(&run(&[&["verify"][..], &angles].concat()));
    let text = stdout(&s);
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let get = |name| rows[0][column(&text, name)].parse::<f64>().unwrap();
    assert_eq!(get("fidelity"), v["fidelity"].as_f64().unwrap());
    assert_eq!(get("phase_distance"), v["phase_distance"].as_f64().unwrap());
    assert_eq!(
        get("cyclic_residual"),
        check(&v, "cyclic")["residual"].as_f64().unwrap()
    );
    assert_eq!(
        get("parallel_transport_residual"),
        check(&v, "parallel_transport")["residual"].as_f64().unwrap()
    );
    assert_eq!(
        get("dfs_residual"),
        check(&v, "dfs_invariance")["residual"].as_f64().unwrap()
    );
    assert_eq!(get("delta"), v["gate"]["delta"].as_f64().unwrap());
}

#[test]
fn alpha_sweep_tilts_the_rotation_axis() {
    let o = run(&[
        "sweep",
        "--kind",
        "c1u",
        "--delta",
        "pi/2",
        "--theta",
        "pi",
        "--alpha",
        "0,pi/2,pi",
        "--beta",
        "0",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    let alphas: Vec<f64> = rows.iter().map(|r| r["alpha"].as_f64().unwrap()).collect();
    assert_eq!(alphas, vec![0.0, FRAC_PI_2, PI]);
    assert!(rows.iter().all(|r| r["fidelity"].as_f64().unwrap() >= 1.0 - 1e-8));
    // Target block on the controlled subspace: Z, X, −Z as the axis tilts.
    let z = |v: &Value| (v["re"].as_f64().unwrap(), v["im"].as_f64().unwrap());
    let expected = [
        [[1.0, 0.0], [0.0, -1.0]],
        [[0.0, 1.0], [1.0, 0.0]],
        [[-1.0, 0.0], [0.0, 1.0]],
    ];
    for (alpha, want) in ["0", "pi/2", "pi"].iter().zip(expected) {
        let g = json(&run(&[
            "gate", "--kind", "c1u", "--delta", "pi/2", "--theta", "pi", "--alpha", alpha, "--format", "json",
        ]));
        let t = &g["target"];
        for i in 0..2 {
            for j in 0..2 {
                let (re, im) = z(&t[2 + i][2 + j]);
                assert!(
                    (re - want[i][j]).abs() < 1e-12 && im.abs() < 1e-12,
                    "alpha {alpha} ({i},{j})"
                );
            }
        }
    }
}

#[test]
fn sweep_order_is_lexicographic_and_worker_independent() {
    let base = [
        "sweep", "--kind", "c2u", "--xi", "0,1", "--gamma", "0,0.5", "--alpha", "0:1:3",
    ];
    let one = stdout(&run(&[&base[..], &["--workers", "1"]].concat()));
    let many = stdout(&run(&[&base[..], &["--workers", "4"]].concat()));
    assert_eq!(one, many);
    let rows = csv_rows(&one);
    assert_eq!(rows.len(), 12);
    let (xi, gamma, alpha) = (column(&one, "xi"), column(&one, "gamma"), column(&one, "alpha"));
    let key = |r: &csv::StringRecord| {
        (
            r[xi].to_string(),
            r[gamma].to_string(),
            r[alpha].parse::<f64>().unwrap(),
        )
    };
    assert_eq!(key(&rows[0]), ("0".into(), "0".into(), 0.0));
    assert_eq!(key(&rows[1]), ("0".into(), "0".into(), 0.5));
    assert_eq!(key(&rows[3]), ("0".into(), "0.5".into(), 0.0));
    assert_eq!(key(&rows[6]), ("1".into(), "0".into(), 0.0));
}

#[test]
fn fredkin_sweeps_over_eta() {
    let o = run(&["sweep", "--kind", "fredkin", "--eta", "0.5,1,2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(csv_rows(&stdout(&o)).len(), 3);
}

#[test]
fn noise_protects_the_encoded_gate() {
    let o = run(&["noise", "--kind", "cnot"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    let rows = r["rows"].as_array().unwrap();
    let strengths: Vec<f64> = rows.iter().map(|x| x["strength"].as_f64().unwrap()).collect();
    assert_eq!(strengths, vec![0.0, 0.1, 1.0, 10.0]);
    for x in rows {
        assert!(x["encoded_fidelity"].as_f64().unwrap() >= 1.0 - 1e-6);
    }
    let bare: Vec<f64> = rows.iter().map(|x| x["baseline_fidelity"].as_f64().unwrap()).collect();
    assert!(bare.windows(2).all(|w| w[1] <= w[0]));
    assert!(bare[1] < 1.0 - 1e-3);
    assert_eq!(r["baseline_monotone"], true);
    assert!(r["seed"].is_u64());
}

#[test]
fn noise_with_one_sample_is_bit_identical() {
    let args = [
        "noise",
        "--model",
        "ensemble",
        "--samples",
        "1",
        "--seed",
        "7",
        "--kappa",
        "0.3,3",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&[
        "noise",
        "--model",
        "ensemble",
        "--samples",
        "1",
        "--seed",
        "8",
        "--kappa",
        "0.3,3",
    ]);
    assert_ne!(a.stdout, c.stdout, "seed must reach the baseline");
}

#[test]
fn noise_accepts_basis_inputs_and_csv() {
    let o = run(&["noise", "--kind", "fredkin", "--input", "110", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(csv_rows(&text).len(), 4);
    assert_eq!(run(&["noise", "--input", "1"]).status.code(), Some(2));
}

fn rerun_matches(args: &[&str], dir: &Path, name: &str) {
    let first = dir.join(format!("{name}-1.json"));
    let second = dir.join(format!("{name}-2.json"));
    let cmd = args[0];
    let o = run(&[args, &["--out", first.to_str().unwrap()]].concat());
    assert!(o.stdout.is_empty());
    let mut again = vec![
        cmd,
        "--config",
        first.to_str().unwrap(),
        "--out",
        second.to_str().unwrap(),
    ];
    if let Some(i) = args.iter().position(|a| *a == "--format") {
        again.extend_from_slice(&args[i..i + 2]);
    }
    let o2 = run(&again);
    assert_eq!(code(&o), code(&o2));
    let (a, b) = (std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
    assert_eq!(a, b, "{name} rerun differs");
}

#[test]
fn embedded_config_reruns_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    rerun_matches(
        &[
            "verify",
            "--kind",
            "c2u",
            "--xi",
            "0.123456789",
            "--gamma",
            "-pi/7",
            "--beta",
            "0.3",
        ],
        dir.path(),
        "verify",
    );
    rerun_matches(
        &["gate", "--kind", "fredkin", "--eta", "1.7", "--format", "json"],
        dir.path(),
        "gate",
    );
    rerun_matches(
        &[
            "sweep", "--kind", "c1u", "--delta", "0.3,1.9", "--theta", "pi/3", "--format", "json",
        ],
        dir.path(),
        "sweep",
    );
    rerun_matches(
        &["noise", "--model", "ensemble", "--samples", "16", "--kappa", "0.2,1.3"],
        dir.path(),
        "noise",
    );
}

#[test]
fn config_rejects_extra_physics_flags_and_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("v.json");
    let p = path.to_str().unwrap();
    assert_eq!(code(&run(&["verify", "--out", p])), 0);
    assert_eq!(code(&run(&["verify", "--config", p, "--xi", "1"])), 2);
    assert_eq!(code(&run(&["sweep", "--config", p])), 2);
    assert_eq!(code(&run(&["verify", "--config", "/nonexistent/report.json"])), 2);
    assert_eq!(code(&run(&["verify", "--config", p, "--format", "text"])), 0);
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &["verify", "--xi", "0", "--delta", "0", "--theta", "0"],
        &["verify", "--delta", "1"],
        &["gate", "--kind", "nonsense"],
        &["gate", "--kind", "cnot", "--alpha", "0"],
        &["gate", "--kind", "fredkin", "--xi", "1"],
        &["gate", "--kind", "c1u", "--eta", "1"],
        &["gate", "--xi", "0:1:3"],
        &["gate", "--format", "csv"],
        &["sweep", "--kind", "c1u", "--xi", "0:1:0"],
        &["sweep", "--kind", "c1u", "--xi", "zero"],
        &["verify", "--placement", "1,1"],
        &["verify", "--placement", "1,2,3"],
        &["verify", "--kind", "toffoli", "--placement", "1,2,7"],
        &["verify", "--omega", "-1"],
        &["verify", "--tolerance", "0"],
        &["noise", "--samples", "0"],
        &["noise", "--kappa", "-1"],
        &["sweep", "--workers", "0"],
        &["all", "--kind", "cnot"],
        &["frobnicate"],
        &["verify", "--no-such-flag"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn physics_failures_exit_with_one() {
    assert_eq!(code(&run(&["gate", "--pulse-scale", "0.9"])), 1);
    assert_eq!(code(&run(&["sweep", "--kind", "c1u", "--perturb", "1e-3"])), 1);
    assert_eq!(code(&run(&["all", "--tolerance", "1e-17"])), 1);
}

#[test]
fn all_runs_every_suite() {
    let o = run(&["all"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    let kinds: Vec<&str> = r["verifications"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["gate"]["kind"].as_str().unwrap())
        .collect();
    assert_eq!(kinds, vec!["c1u", "cnot", "c2u", "toffoli", "fredkin"]);
    assert_eq!(r["noise"]["pass"], true);
    assert_eq!(r["pass"], true);
}
