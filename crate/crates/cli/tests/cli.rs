use std::process::{Command, Output};

use serde_json::Value;

fn coaxial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coaxial"))
        .args(args)
        .env_remove("COAXIAL_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\n{}",
            String::from_utf8_lossy(&o.stdout),
            String::from_utf8_lossy(&o.stderr)
        )
    })
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn quadratic_hencky_wetss_holds() {
    let o = coaxial(&[
        "check", "--model", "quadratic-hencky", "--mu", "1", "--lambda", "0", "--checks", "wetss", "--n", "10000",
        "--seed", "7",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn id_minus_b_fails_be_with_witness() {
    let o = coaxial(&["check", "--model", "id-minus-b", "--checks", "be"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("witness 1"));
    let j = json(&coaxial(&["check", "--model", "id-minus-b", "--checks", "be", "--json", "--n", "50"]));
    let w = &j["checks"][0]["witnesses"][0];
    assert_eq!(w["b"].as_array().unwrap().len(), 6);
    assert_eq!(j["all_hold"], false);
}

#[test]
fn dev3_be_plus_and_semi_hold() {
    let o = coaxial(&["check", "--model", "dev3", "--checks", "be+", "semi"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn audit_prints_summary_table() {
    let o = coaxial(&["check", "--model", "neo-hooke", "--checks", "all", "--n", "200", "--audit"]);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("ETSS => WETSS => BEplus => BICOAX <=> SEMI"), "{out}");
    assert!(out.lines().any(|l| l.starts_with("chain") && l.contains("sound")), "{out}");
}

#[test]
fn stress_dev3() {
    let j = json(&coaxial(&["stress", "--model", "dev3", "--b", "4,2,1,0,0,0", "--json"]));
    let s: Vec<f64> = j["sigma"].as_array().unwrap().iter().map(f).collect();
    let expected = [4.0 - 7.0 / 3.0, 2.0 - 7.0 / 3.0, 1.0 - 7.0 / 3.0, 0.0, 0.0, 0.0];
    for (a, b) in s.iter().zip(expected) {
        assert!(close(*a, b, 1e-14), "{s:?}");
    }
    let psi = &j["psi"];
    assert!(close(f(&psi["psi_0"]), 7.0 / 3.0, 1e-12), "{psi}");
    assert!(close(f(&psi["psi_1"]), 1.0, 1e-12), "{psi}");
    assert!(f(&psi["psi_2"]).abs() < 1e-12, "{psi}");
    assert_eq!(j["invariants"]["i3"], 8.0);
}

#[test]
fn stress_mooney_rivlin_beta() {
    let j = json(&coaxial(&[
        "stress", "--model", "mooney-rivlin", "--c1", "1", "--c2", "1", "--volumetric", "zero", "--b", "4,1,1,0,0,0",
        "--json",
    ]));
    assert!(close(f(&j["beta"]["beta_1"]), 1.0, 1e-12), "{}", j["beta"]);
    assert!(close(f(&j["beta"]["beta_m1"]), -4.0, 1e-12), "{}", j["beta"]);
}

#[test]
fn stress_free_at_identity() {
    let j = json(&coaxial(&["stress", "--model", "quadratic-hencky", "--lambdas", "1,1,1", "--json"]));
    assert!(j["sigma"].as_array().unwrap().iter().all(|x| f(x).abs() < 1e-12), "{}", j["sigma"]);
}

#[test]
fn stress_text_has_six_digits() {
    let o = coaxial(&["stress", "--model", "dev3", "--lambdas", "2,1.4142135623730951,1"]);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("ψ0 = 2.33333"), "{out}");
}

#[test]
fn stress_rejects_indefinite_input() {
    assert_eq!(code(&coaxial(&["stress", "--model", "dev3", "--b", "1,1,-1,0,0,0"])), 2);
    assert_eq!(code(&coaxial(&["stress", "--model", "dev3", "--lambdas", "1,0,1"])), 2);
    assert_eq!(code(&coaxial(&["stress", "--model", "dev3", "--b", "1,1,1"])), 2);
}

#[test]
fn invert_marzano_gives_simple_extension() {
    let j = json(&coaxial(&["invert", "--model", "marzano", "--s", "0.5", "--json"]));
    let l: Vec<f64> = j["lambdas"].as_array().unwrap().iter().map(f).collect();
    assert!(close(l[0], 1.5, 1e-10) && close(l[1], 1.0, 1e-10) && close(l[2], 1.0, 1e-10), "{l:?}");
    assert_eq!(j["simple_extension"], true);
    assert!(f(&j["residual"]) <= 1e-10);
}

#[test]
fn invert_zero_load_is_identity() {
    for m in ["neo-hooke", "quadratic-hencky", "marzano", "iso-vol-split"] {
        let j = json(&coaxial(&["invert", "--model", m, "--s", "0", "--json"]));
        assert_eq!(j["lambdas"], serde_json::json!([1.0, 1.0, 1.0]), "{m}");
    }
}

#[test]
fn invert_quadratic_hencky_converges() {
    let o = coaxial(&["invert", "--model", "quadratic-hencky", "--s", "0.3", "--json"]);
    assert_eq!(code(&o), 0);
    assert!(f(&json(&o)["residual"]) <= 1e-10);
}

#[test]
fn invert_rejects_negative_load() {
    assert_eq!(code(&coaxial(&["invert", "--model", "marzano", "--s", "-1"])), 2);
}

#[test]
fn counterexamples_all_pass() {
    let o = coaxial(&["counterexamples"]);
    assert_eq!(code(&o), 0);
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("6 of 6 cases pass"), "{out}");
}

#[test]
fn counterexamples_filter_and_json() {
    let j = json(&coaxial(&["counterexamples", "--only", "marzano", "--json"]));
    assert_eq!(j["cases"].as_array().unwrap().len(), 1);
    assert_eq!(j["cases"][0]["id"], "marzano");
    assert_eq!(j["passed"], true);
    assert_eq!(code(&coaxial(&["counterexamples", "--only", "nothing"])), 2);
}

#[test]
fn ssli_small_run() {
    let o = coaxial(&["ssli", "--n", "2000", "--json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["report"]["conclusion_violations"], 0);
}

#[test]
fn identical_seeds_give_identical_json() {
    let args = ["check", "--model", "exponential-hencky", "--checks", "all", "--n", "300", "--seed", "11", "--json"];
    let (a, b) = (coaxial(&args), coaxial(&args));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let other = coaxial(&["check", "--model", "exponential-hencky", "--checks", "all", "--n", "300", "--seed", "12", "--json"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn flags_override_config_override_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(
        &path,
        r#"{"model": {"model": "neo-hooke", "params": {"mu": 2.0, "f": {"kind": "quadratic-j", "kappa": 3.0}}},
            "checks": ["BE", "semi"], "sample": {"count": 40, "structured": false}, "seed": 5}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let j = json(&coaxial(&["check", "--config", p, "--json"]));
    assert_eq!(j["model"]["params"]["mu"], 2.0);
    assert_eq!(j["model"]["params"]["f"]["kappa"], 3.0);
    assert_eq!(j["sample"]["seed"], 5);
    assert_eq!(j["sample"]["count"], 40);
    assert_eq!(j["checks"].as_array().unwrap().len(), 2);
    // defaults fill what the file leaves out
    assert_eq!(j["sample"]["log_uniform"], true);

    let j = json(&coaxial(&["check", "--config", p, "--json", "--mu", "4", "--kappa", "6", "--seed", "9", "--checks", "wetss"]));
    assert_eq!(j["model"]["params"]["mu"], 4.0);
    assert_eq!(j["model"]["params"]["f"]["kappa"], 6.0);
    assert_eq!(j["sample"]["seed"], 9);
    assert_eq!(j["checks"][0]["inequality"], "WETSS");
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |extra: &[&str]| {
        let mut args = vec!["check", "--model", "dev3", "--checks", "be", "--n", "10", "--json"];
        args.extend_from_slice(extra);
        let o = Command::new(env!("CARGO_BIN_EXE_coaxial"))
            .args(&args)
            .env("COAXIAL_SEED", "123")
            .output()
            .unwrap();
        json(&o)["sample"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(&[]), 123);
    assert_eq!(run(&["--seed", "4"]), 4);
}

#[test]
fn out_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = coaxial(&["counterexamples", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["passed"], true);
}

#[test]
fn configuration_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", "--model", "no-such-model", "--checks", "be"],
        vec!["check", "--model", "dev3"],
        vec!["check", "--model", "dev3", "--checks", "nonsense"],
        vec!["check", "--model", "dev3", "--checks", "be", "--mu", "1"],
        vec!["check", "--model", "neo-hooke", "--checks", "be", "--mu", "-1"],
        vec!["check", "--model", "neo-hooke", "--checks", "be", "--param", "nothing=1"],
        vec!["check", "--config", bad.to_str().unwrap(), "--checks", "be"],
        vec!["stress", "--model", "dev3"],
        vec!["check", "--checks", "be"],
    ];
    for args in cases {
        let o = coaxial(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn dotted_param_paths() {
    let j = json(&coaxial(&[
        "stress", "--model", "hencky-type", "--param", "w.kind=\"quadratic\"", "--param", "w.mu=2", "--lambdas", "1.2,1,1",
        "--json",
    ]));
    assert_eq!(j["model"]["params"]["w"]["kind"], "quadratic");
    assert_eq!(j["model"]["params"]["w"]["mu"], 2.0);
}
