//! `coaxial` command-line front end.
//!
//! Exit status: 0 when everything requested holds, 1 when a check fails or
//! a computation does not go through, 2 on a configuration error.

mod args;
mod config;
mod text;

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Parser;
use coaxial::checks::{
    examples_regression, implication_audit, marzano_uniaxial_demo, run_check, ssli_fuzz, summary_table,
    CheckOptions, ProbeError, Verdict,
};
use coaxial::constitutive::StressResponse;
use coaxial::repr::psi_direct;
use coaxial::{CheckReport, Tolerance};
use serde::Serialize;
use serde_json::json;

use args::{Cli, Command};
use config::{FileConfig, OutputFormat};

const DEFAULT_SEED: u64 = 7;

/// A finished command: its report and exit status.
struct Done {
    report: String,
    status: u8,
}

fn to_json<S: Serialize>(v: &S) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::HoldsOnSample => "holds on sample",
        Verdict::Fails => "FAILS",
        Verdict::Undetermined => "undetermined",
    }
}

fn check_text(out: &mut String, r: &CheckReport) {
    let _ = writeln!(
        out,
        "{:<14} {:<16} tested {}, skipped {}, failures {}",
        r.inequality.label(),
        verdict_text(r.verdict),
        r.samples_tested,
        r.skipped,
        r.failures
    );
    if let Some(u) = r.uniform_strictness {
        let _ = writeln!(out, "  one inequality strict at every sample: {u}");
    }
    for (i, w) in r.witnesses.iter().enumerate() {
        let at = w.sample.map(|k| format!(" (sample {k})")).unwrap_or_default();
        let _ = writeln!(out, "  witness {}{at}", i + 1);
        let _ = writeln!(out, "    B =\n{}", text::matrix(&w.b, "      "));
        let _ = writeln!(out, "    σ =\n{}", text::matrix(&w.sigma, "      "));
        let _ = writeln!(out, "    margins {}", text::vector(&w.margins));
        if let Some(n) = &w.note {
            let _ = writeln!(out, "    {n}");
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "  note: {n}");
    }
}

fn cmd_check(cli: &Cli, file: &FileConfig, model: &args::ModelArgs, checks: &[String], n: Option<usize>, audit: bool, json: bool) -> Result<Done> {
    let model = config::resolve_model(model, file)?;
    let checks = config::resolve_checks(checks, file)?;
    let seed = config::resolve_seed(cli.seed, file)?;
    let spec = config::resolve_sample(n, seed, file)?;
    let samples = spec.generate();
    let options = CheckOptions::default();
    let reports: Vec<CheckReport> = checks.iter().map(|c| run_check(&model, *c, &samples, &options)).collect();
    let audit = audit.then(|| implication_audit(&model, &samples, &options));
    let all_hold = reports.iter().all(CheckReport::holds) && audit.as_ref().is_none_or(|a| a.is_sound());
    let report = if json {
        to_json(&json!({
            "model": model,
            "sample": spec,
            "checks": reports,
            "audit": audit,
            "all_hold": all_hold,
        }))?
    } else {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "model {}  ({} states, seed {})",
            serde_json::to_string(&model)?,
            samples.len(),
            spec.seed
        );
        for r in &reports {
            check_text(&mut out, r);
        }
        if let Some(a) = &audit {
            out.push('\n');
            out.push_str(&summary_table(std::slice::from_ref(a)));
            for v in &a.chain_violations {
                let _ = writeln!(out, "chain violation at sample {}: {} without {}", v.sample, v.premise, v.conclusion);
            }
            for ni in &a.non_implications {
                let _ = writeln!(out, "{}: {}", ni.id, ni.statement);
            }
        }
        let _ = writeln!(out, "{}", if all_hold { "all requested checks hold" } else { "some checks do not hold" });
        out
    };
    Ok(Done { report, status: u8::from(!all_hold) })
}

fn cmd_stress(file: &FileConfig, model: &args::ModelArgs, matrix: &args::MatrixArgs, json: bool) -> Result<Done> {
    let model = config::resolve_model(model, file)?;
    let b = config::resolve_matrix(matrix)?;
    let inv = b.invariants()?;
    let (sigma, beta) = match (model.cauchy_stress(&b), model.beta_coefficients(&b)) {
        (Ok(s), Ok(beta)) => (s, beta),
        (Err(e), _) | (_, Err(e)) => {
            return Ok(Done { report: format!("evaluation failed: {e}\n"), status: 1 });
        }
    };
    let psi = psi_direct(&b, &sigma, &Tolerance::default());
    let report = if json {
        let (psi_v, psi_err) = match &psi {
            Ok(p) => (Some(p), None),
            Err(e) => (None, Some(e.to_string())),
        };
        to_json(&json!({
            "model": model,
            "b": b,
            "invariants": inv,
            "sigma": sigma,
            "beta": beta,
            "psi": psi_v,
            "psi_error": psi_err,
        }))?
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "model {}", serde_json::to_string(&model)?);
        let _ = writeln!(out, "B =\n{}", text::matrix(&b, "  "));
        let _ = writeln!(out, "invariants  I1 = {}  I2 = {}  I3 = {}", text::g6(inv.i1), text::g6(inv.i2), text::g6(inv.i3));
        let _ = writeln!(out, "σ =\n{}", text::matrix(&sigma, "  "));
        let _ = writeln!(
            out,
            "β   β0 = {}  β1 = {}  β-1 = {}",
            text::g6(beta.beta_0),
            text::g6(beta.beta_1),
            text::g6(beta.beta_m1)
        );
        match &psi {
            Ok(p) => {
                let _ = writeln!(
                    out,
                    "ψ   ψ0 = {}  ψ1 = {}  ψ2 = {}",
                    text::g6(p.psi_0),
                    text::g6(p.psi_1),
                    text::g6(p.psi_2)
                );
            }
            Err(e) => {
                let _ = writeln!(out, "ψ   none: {e}");
            }
        }
        out
    };
    Ok(Done { report, status: 0 })
}

fn cmd_invert(file: &FileConfig, model: &args::ModelArgs, s: f64, json: bool) -> Result<Done> {
    let model = config::resolve_model(model, file)?;
    let solution = match marzano_uniaxial_demo(&model, s) {
        Ok(u) => u,
        Err(ProbeError::BadLoad) => anyhow::bail!("--s must be finite and non-negative, got {s}"),
        Err(e) => {
            let report = if json {
                to_json(&json!({ "model": model, "s": s, "converged": false, "error": e.to_string() }))?
            } else {
                format!("inversion failed: {e}\n")
            };
            return Ok(Done { report, status: 1 });
        }
    };
    let v = solution.state.v();
    let report = if json {
        to_json(&json!({
            "model": model,
            "s": s,
            "converged": true,
            "lambdas": solution.state.lambdas,
            "v": v,
            "residual": solution.residual,
            "iterations": solution.iterations,
            "simple_extension": solution.simple_extension,
        }))?
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "model {}", serde_json::to_string(&model)?);
        let _ = writeln!(out, "σ = diag({}, 0, 0)", text::g6(s));
        let _ = writeln!(out, "stretches {}", text::vector(&solution.state.lambdas));
        let _ = writeln!(out, "V =\n{}", text::matrix(&v, "  "));
        let _ = writeln!(
            out,
            "residual {}  after {} Newton steps",
            text::g6(solution.residual),
            solution.iterations
        );
        let _ = writeln!(out, "simple extension (λ2 = λ3): {}", solution.simple_extension);
        out
    };
    Ok(Done { report, status: 0 })
}

fn cmd_counterexamples(only: Option<&str>, json: bool) -> Result<Done> {
    let r = examples_regression(only).map_err(anyhow::Error::msg)?;
    let report = if json {
        to_json(&json!({ "cases": r.cases, "passed": r.passed() }))?
    } else {
        let w = r.cases.iter().map(|c| c.id.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &r.cases {
            let _ = writeln!(out, "{:<w$}  {}  {}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.description);
            for d in &c.details {
                let _ = writeln!(out, "{:<w$}    {d}", "");
            }
        }
        let passed = r.cases.iter().filter(|c| c.passed).count();
        let _ = writeln!(out, "{passed} of {} cases pass", r.cases.len());
        out
    };
    Ok(Done { report, status: u8::from(!r.passed()) })
}

fn cmd_ssli(cli: &Cli, file: &FileConfig, n: usize, json: bool) -> Result<Done> {
    let seed = config::resolve_seed(cli.seed, file)?.unwrap_or(DEFAULT_SEED);
    let r = ssli_fuzz(n, seed);
    let report = if json {
        to_json(&json!({ "report": r, "passed": r.passed() }))?
    } else {
        format!(
            "sum of squared logarithms: {} pairs (seed {}), {} hypothesis failures, {} violations, {} non-strict distinct pairs, smallest relative gap {}\n{}\n",
            r.trials,
            r.seed,
            r.hypothesis_failures,
            r.conclusion_violations,
            r.strictness_failures,
            text::g6(r.min_relative_gap),
            if r.passed() { "inequality holds on every pair" } else { "INEQUALITY VIOLATED" }
        )
    };
    Ok(Done { report, status: u8::from(!r.passed()) })
}

fn run(cli: &Cli) -> Result<Done> {
    let file = FileConfig::load(cli.config.as_deref())?;
    let json = cli.json || file.output == Some(OutputFormat::Json);
    match &cli.command {
        Command::Check { model, checks, n, audit } => cmd_check(cli, &file, model, checks, *n, *audit, json),
        Command::Stress { model, matrix } => cmd_stress(&file, model, matrix, json),
        Command::Invert { model, s } => cmd_invert(&file, model, *s, json),
        Command::Counterexamples { only } => cmd_counterexamples(only.as_deref(), json),
        Command::Ssli { n } => cmd_ssli(cli, &file, *n, json),
    }
}

fn emit(cli: &Cli, report: &str) -> Result<()> {
    let file_out = FileConfig::load(cli.config.as_deref())
        .ok()
        .and_then(|f| f.out_path)
        .map(std::path::PathBuf::from);
    match cli.out.clone().or(file_out) {
        Some(path) => std::fs::write(&path, report).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(report.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(done) => match emit(&cli, &done.report) {
            Ok(()) => ExitCode::from(done.status),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
