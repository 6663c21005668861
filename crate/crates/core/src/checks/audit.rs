use rayon::prelude::*;
use serde::Serialize;

use super::point::{
    check_be_plus, check_bicoax, check_etss_beta, check_semi_pair, check_wetss_beta,
    check_wetss_derivatives, evaluate, injectivity_check, is_spherical, PointCheck, PointVerdict,
    SEMI_RESIDUAL_TOL,
};
use super::{CheckReport, Inequality, Verdict, Witness};
use crate::constitutive::{Invertibility, StressResponse};
use crate::scalar::Scalar;
use crate::symmat::{eigendecompose, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckOptions {
    /// Witnesses kept per report; failures beyond this are only counted.
    pub max_witnesses: usize,
    /// Move witnesses toward the identity while they keep failing.
    pub minimize: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            max_witnesses: 3,
            minimize: true,
        }
    }
}

const BISECTION_STEPS: usize = 40;
const BACK_OFF: f64 = 0.05;

fn cluster_count<T: Scalar>(b: &SymMatrix<T>) -> usize {
    eigendecompose(b, T::default_cluster_tol())
        .map(|s| s.clusters().len())
        .unwrap_or(0)
}

/// Smallest `t ∈ (0, 1]` found by bisection at which `B^t` still fails with
/// the same eigenvalue multiplicity pattern, backed off slightly toward
/// `t = 1` so the failure is not at the sign-band edge.
fn minimize_witness<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    ineq: Inequality,
    b: &SymMatrix<T>,
) -> SymMatrix<T> {
    let clusters = cluster_count(b);
    let at = |t: f64| b.map_spectrum(|x| x.powf(T::c(t))).ok();
    let fails = |m: &SymMatrix<T>| {
        cluster_count(m) == clusters
            && evaluate(model, ineq, m).map(|c| c.fails()).unwrap_or(false)
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        match at(mid) {
            Some(m) if fails(&m) => hi = mid,
            _ => lo = mid,
        }
    }
    let t = hi + BACK_OFF * (1.0 - hi);
    match at(t) {
        Some(m) if fails(&m) => m,
        _ => *b,
    }
}

fn witness_at<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    ineq: Inequality,
    b: SymMatrix<T>,
    sample: Option<usize>,
) -> Option<Witness<T>> {
    let sigma = model.cauchy_stress(&b).ok()?;
    let check = evaluate(model, ineq, &b).ok()?;
    check.fails().then_some(Witness {
        b,
        sigma,
        margins: check.margins,
        sample,
        note: check.note,
    })
}

/// Injectivity is a property of the whole response; it is settled by a
/// stored witness pair, not by sampling.
fn injectivity_report<T: Scalar, R: StressResponse<T> + ?Sized>(model: &R) -> CheckReport<T> {
    let check: PointCheck<T> = injectivity_check(model);
    let mut report = CheckReport {
        model: model.name(),
        inequality: Inequality::InvertWitness,
        verdict: Verdict::Undetermined,
        samples_tested: 0,
        skipped: 0,
        failures: 0,
        witnesses: Vec::new(),
        uniform_strictness: None,
        notes: check.note.iter().cloned().collect(),
    };
    match (check.verdict, model.invertibility()) {
        (PointVerdict::Fails, Invertibility::NonInjective { first, second }) => {
            report.verdict = Verdict::Fails;
            report.failures = 1;
            if let Ok(sigma) = model.cauchy_stress(&first) {
                report.witnesses.push(Witness {
                    b: first,
                    sigma,
                    margins: check.margins,
                    sample: None,
                    note: Some(format!("same stress as B = {:?}", second.components())),
                });
            }
        }
        (PointVerdict::Fails, _) => {
            report.verdict = Verdict::Undetermined;
            report.notes.push("stored injectivity witness did not evaluate".into());
        }
        (PointVerdict::Holds, _) => report.verdict = Verdict::HoldsOnSample,
        (PointVerdict::Skipped, _) => {}
    }
    report
}

/// Evaluates one property on every sample in parallel.
///
/// The verdict is `fails` iff some sample fails; `undetermined` if none
/// fails but some could not be evaluated. Up to `max_witnesses` failing
/// samples are kept, in sample order.
pub fn run_check<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    ineq: Inequality,
    samples: &[SymMatrix<T>],
    options: &CheckOptions,
) -> CheckReport<T> {
    if ineq == Inequality::InvertWitness {
        return injectivity_report(model);
    }
    let results: Vec<_> = samples.par_iter().map(|b| evaluate(model, ineq, b)).collect();
    let mut report = CheckReport {
        model: model.name(),
        inequality: ineq,
        verdict: Verdict::HoldsOnSample,
        samples_tested: samples.len(),
        skipped: 0,
        failures: 0,
        witnesses: Vec::new(),
        uniform_strictness: None,
        notes: Vec::new(),
    };
    let mut errors = 0usize;
    let mut first_error = None;
    let (mut all_neg, mut all_pos) = (true, true);
    for (i, r) in results.iter().enumerate() {
        match r {
            Err(e) => {
                errors += 1;
                first_error.get_or_insert_with(|| format!("sample {i}: {e}"));
            }
            Ok(c) => match c.verdict {
                PointVerdict::Skipped => report.skipped += 1,
                PointVerdict::Fails => report.failures += 1,
                PointVerdict::Holds => {}
            },
        }
        if ineq == Inequality::Wetss {
            if let Ok(c) = r {
                if c.verdict != PointVerdict::Skipped && c.margins.len() == 2 {
                    let scale = c.margins[0].abs().max(c.margins[1].abs());
                    let tol = T::sign_band() * (T::one() + scale);
                    all_neg &= c.margins[0] > tol;
                    all_pos &= c.margins[1] > tol;
                }
            }
        }
    }
    if ineq == Inequality::Wetss {
        report.uniform_strictness = Some(all_neg || all_pos);
    }
    if errors > 0 {
        report
            .notes
            .push(format!("{errors} samples could not be evaluated; first: {}", first_error.unwrap_or_default()));
    }
    if report.skipped > 0 {
        report
            .notes
            .push(format!("{} spherical samples skipped", report.skipped));
    }
    if report.failures > 0 {
        report.verdict = Verdict::Fails;
        let failing = results
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r, Ok(c) if c.fails()))
            .map(|(i, _)| i)
            .take(options.max_witnesses.max(1));
        for i in failing {
            let b = if options.minimize {
                minimize_witness(model, ineq, &samples[i])
            } else {
                samples[i]
            };
            if let Some(w) = witness_at(model, ineq, b, Some(i)) {
                report.witnesses.push(w);
            }
        }
    } else if errors > 0 {
        report.verdict = Verdict::Undetermined;
    }
    report
}

/// A sample at which a link of the implication chain broke.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ChainViolation<T> {
    pub premise: Inequality,
    pub conclusion: Inequality,
    pub sample: usize,
    pub b: SymMatrix<T>,
}

/// A property that holds without another one, with a concrete state.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct NonImplication<T> {
    /// `invertible-not-BEplus` or `BEplus-not-invertible`.
    pub id: String,
    pub statement: String,
    pub witness: Witness<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct AuditReport<T> {
    pub model: String,
    pub samples_tested: usize,
    /// Samples at which some property could not be evaluated.
    pub evaluation_errors: usize,
    /// Links checked: E-TSS ⟹ WE-TSS ⟹ BE⁺ ⟹ bi-coaxial ⟺ semi-invertible.
    pub chain_violations: Vec<ChainViolation<T>>,
    /// Samples where WE-TSS from β disagreed with the sign test on
    /// `(∂W/∂I₁, ∂W/∂I₂)`; hyperelastic responses only.
    pub derivative_mismatches: usize,
    /// Samples where β satisfied WE-TSS yet some `λᵢ > λⱼ` had `σᵢ ≤ σⱼ`.
    pub mechanism_violations: usize,
    pub properties: Vec<CheckReport<T>>,
    pub non_implications: Vec<NonImplication<T>>,
}

impl<T: Scalar> AuditReport<T> {
    pub fn is_sound(&self) -> bool {
        self.chain_violations.is_empty()
            && self.derivative_mismatches == 0
            && self.mechanism_violations == 0
            && self.evaluation_errors == 0
    }

    pub fn property(&self, ineq: Inequality) -> Option<&CheckReport<T>> {
        self.properties.iter().find(|r| r.inequality == ineq)
    }
}

#[derive(Debug, Clone)]
struct SampleAudit {
    etss: PointVerdict,
    wetss: PointVerdict,
    be_plus: PointVerdict,
    bicoax: PointVerdict,
    semi: PointVerdict,
    derivative_mismatch: bool,
}

fn audit_sample<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    b: &SymMatrix<T>,
) -> Option<SampleAudit> {
    let sigma = model.cauchy_stress(b).ok()?;
    let beta = model.beta_coefficients(b).ok()?;
    let spherical = is_spherical(b);
    let wetss = check_wetss_beta(&beta, spherical).verdict;
    let derivative_mismatch = match model.invariant_derivatives(b) {
        Some(Ok(est)) => check_wetss_derivatives(&est.triple, spherical).verdict != wetss,
        Some(Err(_)) => return None,
        None => false,
    };
    Some(SampleAudit {
        etss: check_etss_beta(&beta).verdict,
        wetss,
        be_plus: check_be_plus(model, b).ok()?.verdict,
        bicoax: check_bicoax(b, &sigma).verdict,
        semi: check_semi_pair(b, &sigma, T::c(SEMI_RESIDUAL_TOL)).verdict,
        derivative_mismatch,
    })
}

/// Per-sample evaluation of every property, checking each link of the chain
/// at each sample, and recording the model-level non-implications the
/// sample exhibits.
pub fn implication_audit<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    samples: &[SymMatrix<T>],
    options: &CheckOptions,
) -> AuditReport<T> {
    use Inequality::*;
    use PointVerdict::{Fails, Holds, Skipped};

    let per: Vec<Option<SampleAudit>> = samples.par_iter().map(|b| audit_sample(model, b)).collect();
    let mut chain_violations = Vec::new();
    let mut evaluation_errors = 0;
    let mut derivative_mismatches = 0;
    let mut mechanism_violations = 0;
    for (i, s) in per.iter().enumerate() {
        let Some(s) = s else {
            evaluation_errors += 1;
            continue;
        };
        let mut violate = |premise, conclusion| {
            chain_violations.push(ChainViolation {
                premise,
                conclusion,
                sample: i,
                b: samples[i],
            })
        };
        if s.etss == Holds && s.wetss == Fails {
            violate(Etss, Wetss);
        }
        if s.wetss == Holds && s.be_plus != Holds {
            violate(Wetss, BePlus);
            mechanism_violations += 1;
        }
        if s.be_plus == Holds && s.bicoax != Holds {
            violate(BePlus, Bicoax);
        }
        if s.be_plus == Holds && s.semi != Holds {
            violate(BePlus, Semi);
        }
        if (s.bicoax == Holds) != (s.semi == Holds) {
            violate(Bicoax, Semi);
        }
        if s.derivative_mismatch {
            derivative_mismatches += 1;
        }
        debug_assert!(s.be_plus != Skipped);
    }

    let properties: Vec<CheckReport<T>> = [Etss, Wetss, BePlus, Be, Bicoax, Semi, InvertWitness]
        .into_iter()
        .map(|ineq| run_check(model, ineq, samples, options))
        .collect();

    let mut non_implications = Vec::new();
    let find = |ineq| properties.iter().find(|r: &&CheckReport<T>| r.inequality == ineq);
    let invert = find(InvertWitness).expect("always run");
    let be = find(Be).expect("always run");
    let be_plus = find(BePlus).expect("always run");
    if invert.verdict == Verdict::HoldsOnSample && be.verdict == Verdict::Fails {
        if let Some(w) = be.witnesses.first() {
            non_implications.push(NonImplication {
                id: "invertible-not-BEplus".into(),
                statement: format!("{} is invertible but violates BE, hence BE⁺", model.name()),
                witness: w.clone(),
            });
        }
    }
    if invert.verdict == Verdict::Fails && be_plus.verdict == Verdict::HoldsOnSample {
        if let Some(w) = invert.witnesses.first() {
            non_implications.push(NonImplication {
                id: "BEplus-not-invertible".into(),
                statement: format!(
                    "{} satisfies BE⁺ on {} samples but is not injective",
                    model.name(),
                    be_plus.samples_tested
                ),
                witness: w.clone(),
            });
        }
    }

    AuditReport {
        model: model.name(),
        samples_tested: samples.len(),
        evaluation_errors,
        chain_violations,
        derivative_mismatches,
        mechanism_violations,
        properties,
        non_implications,
    }
}
