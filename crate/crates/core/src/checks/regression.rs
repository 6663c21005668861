use serde::Serialize;

use super::point::{check_be_pair, check_be_plus, check_semi_invertibility, injectivity_check, SEMI_RESIDUAL_TOL};
use super::probes::marzano_uniaxial_demo;
use super::sampling::SampleSpec;
use crate::constitutive::{marzano_h, ResponseModel, StressResponse};
use crate::symmat::{is_coaxial, Matrix, SymMatrix, Tolerance};

/// Identifiers accepted by [`examples_regression`].
pub const REGRESSION_CASES: [&str; 6] = [
    "coaxiality-asymmetry",
    "commuting-not-coaxial",
    "non-isotropic-coaxial-map",
    "dev3",
    "id-minus-b",
    "marzano",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionCase {
    pub id: &'static str,
    pub description: &'static str,
    pub passed: bool,
    /// One line per asserted fact, each prefixed with `ok` or `FAILED`.
    pub details: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegressionReport {
    pub cases: Vec<RegressionCase>,
}

impl RegressionReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed)
    }
}

struct Facts(Vec<String>, bool);

impl Facts {
    fn new() -> Self {
        Facts(Vec::new(), true)
    }

    fn assert(&mut self, ok: bool, what: impl Into<String>) {
        self.0.push(format!("{} {}", if ok { "ok" } else { "FAILED" }, what.into()));
        self.1 &= ok;
    }
}

fn d(v: &[f64]) -> SymMatrix<f64> {
    SymMatrix::diag(v).expect("small diagonal")
}

fn is_eigenvector(a: &SymMatrix<f64>, v: &[f64]) -> bool {
    let av = a.to_dense().mul_vec(v);
    let vv: f64 = v.iter().map(|x| x * x).sum();
    let rq: f64 = av.iter().zip(v).map(|(x, y)| x * y).sum::<f64>() / vv;
    av.iter().zip(v).all(|(x, y)| (x - rq * y).abs() <= 1e-12)
}

fn coaxiality_asymmetry() -> Facts {
    let mut f = Facts::new();
    let t = Tolerance::default();
    let (a, b) = (SymMatrix::<f64>::identity(2), d(&[1.0, 0.0]));
    f.assert(is_eigenvector(&a, &[1.0, 1.0]), "(1,1) is an eigenvector of id");
    f.assert(!is_eigenvector(&b, &[1.0, 1.0]), "(1,1) is not an eigenvector of diag(1,0)");
    f.assert(is_coaxial(&b, &a, &t), "diag(1,0) is coaxial to id");
    f.assert(!is_coaxial(&a, &b, &t), "id is not coaxial to diag(1,0)");
    f
}

fn commuting_not_coaxial() -> Facts {
    let mut f = Facts::new();
    let t = Tolerance::default();
    let (a, b) = (d(&[1.0, 1.0, 0.0]), d(&[0.0, 1.0, 1.0]));
    f.assert(a.commutes(&b, 1e-12).unwrap_or(false), "diag(1,1,0) and diag(0,1,1) commute");
    f.assert(!is_coaxial(&a, &b, &t), "diag(1,1,0) is not coaxial to diag(0,1,1)");
    f.assert(!is_coaxial(&b, &a, &t), "diag(0,1,1) is not coaxial to diag(1,1,0)");
    f
}

fn non_isotropic_coaxial_map() -> Facts {
    let mut f = Facts::new();
    let t = Tolerance::default();
    let phi = |x: &SymMatrix<f64>| SymMatrix::scaled_identity(2, x.get(0, 0));
    let q = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
    let x = d(&[1.0, 2.0]);
    let lhs = phi(&x.congruence(&q.transpose()));
    let rhs = phi(&x).congruence(&q.transpose());
    f.assert(lhs == SymMatrix::scaled_identity(2, 2.0), "Φ(QᵀXQ) = 2·id");
    f.assert(rhs == SymMatrix::identity(2), "QᵀΦ(X)Q = id");
    f.assert(lhs != rhs, "Φ is not isotropic");
    let probes = [x, d(&[3.0, -1.0]), SymMatrix::from_components(&[2.0, 5.0, 1.5]).expect("2x2")];
    f.assert(
        probes.iter().all(|x| is_coaxial(x, &phi(x), &t)),
        "X is coaxial to Φ(X) on every probe",
    );
    f
}

fn probe_states() -> Vec<SymMatrix<f64>> {
    let mut spec = SampleSpec::with_count(64, 3);
    spec.structured = true;
    spec.generate()
}

fn dev3() -> Facts {
    let mut f = Facts::new();
    let m = ResponseModel::DirectDev3;
    let states = probe_states();
    let at = m.cauchy_stress(&d(&[4.0, 2.0, 1.0])).ok();
    let expected = d(&[4.0 - 7.0 / 3.0, 2.0 - 7.0 / 3.0, 1.0 - 7.0 / 3.0]);
    f.assert(
        at.is_some_and(|s| (s - expected).max_abs() < 1e-14),
        "σ(diag(4,2,1)) = diag(4,2,1) − (7/3)·id",
    );
    f.assert(
        states.iter().all(|b| check_be_plus(&m, b).is_ok_and(|c| c.holds())),
        format!("BE⁺ holds on {} states", states.len()),
    );
    f.assert(
        states
            .iter()
            .all(|b| check_semi_invertibility(&m, b, SEMI_RESIDUAL_TOL).is_ok_and(|c| c.holds())),
        format!("semi-invertible on {} states", states.len()),
    );
    let s1 = m.cauchy_stress(&SymMatrix::identity(3));
    let s2 = m.cauchy_stress(&SymMatrix::scaled_identity(3, 2.0));
    f.assert(
        matches!((s1, s2), (Ok(a), Ok(b)) if a.max_abs() == 0.0 && b.max_abs() == 0.0),
        "σ(id) = σ(2·id) = 0",
    );
    f.assert(injectivity_check::<f64, _>(&m).fails(), "not injective");
    f
}

fn id_minus_b() -> Facts {
    let mut f = Facts::new();
    let m = ResponseModel::DirectIdMinusB;
    let states = probe_states();
    f.assert(
        states.iter().all(|b| {
            m.cauchy_stress(b)
                .is_ok_and(|s| (SymMatrix::identity(3) - s - *b).max_abs() <= 1e-12 * b.max_abs())
        }),
        "B = id − σ recovers the stretch",
    );
    f.assert(
        states
            .iter()
            .all(|b| check_semi_invertibility(&m, b, SEMI_RESIDUAL_TOL).is_ok_and(|c| c.holds())),
        format!("semi-invertible on {} states", states.len()),
    );
    let b = d(&[4.0, 1.0, 1.0]);
    let s = m.cauchy_stress(&b);
    f.assert(
        s.as_ref().is_ok_and(|s| s.get(0, 0) == -3.0 && s.get(1, 1) == 0.0),
        "σ(diag(4,1,1)) = diag(−3,0,0)",
    );
    f.assert(
        s.is_ok_and(|s| check_be_pair(&b, &s).fails()),
        "BE fails at diag(4,1,1)",
    );
    f
}

fn marzano() -> Facts {
    let mut f = Facts::new();
    let m = ResponseModel::MarzanoCounterexample;
    let h = marzano_h([3.0, 2.0, 1.0]);
    f.assert(h == 4.0, format!("h(3,2,1) = {h} from the polynomial"));
    let b = d(&[9.0, 4.0, 1.0]);
    match m.cauchy_stress(&b) {
        Ok(s) => {
            f.assert(
                (s - d(&[-10.0, -7.0, -4.0])).max_abs() < 1e-12,
                "σ(V = diag(3,2,1)) = diag(−10,−7,−4)",
            );
            f.assert(s.get(0, 0) < s.get(1, 1), "σ₁ < σ₂ although λ₁ > λ₂");
            f.assert(check_be_pair(&b, &s).fails(), "BE fails with h = 4");
        }
        Err(e) => f.assert(false, format!("stress evaluation: {e}")),
    }
    // alternative value h = 2: σ = −V − id
    let alt = d(&[-4.0, -3.0, -2.0]);
    f.assert(check_be_pair(&b, &alt).fails(), "BE also fails with h = 2, σ = diag(−4,−3,−2)");
    for s in [0.1, 0.5, 2.0] {
        match marzano_uniaxial_demo(&m, s) {
            Ok(u) => {
                let l = u.state.lambdas;
                let ok = u.residual <= 1e-10
                    && (l[0] - (1.0 + s)).abs() <= 1e-10
                    && (l[1] - 1.0).abs() <= 1e-10
                    && (l[2] - 1.0).abs() <= 1e-10;
                f.assert(ok, format!("σ = diag({s},0,0) ⟸ V = diag({},1,1), residual {:.1e}", 1.0 + s, u.residual));
            }
            Err(e) => f.assert(false, format!("uniaxial solve for s = {s}: {e}")),
        }
    }
    f
}

fn run(id: &'static str) -> RegressionCase {
    let (description, facts) = match id {
        "coaxiality-asymmetry" => ("coaxiality is not symmetric: id vs diag(1,0)", coaxiality_asymmetry()),
        "commuting-not-coaxial" => ("commuting matrices need not be coaxial either way", commuting_not_coaxial()),
        "non-isotropic-coaxial-map" => ("Φ(X) = X₁₁·id is coaxial but not isotropic", non_isotropic_coaxial_map()),
        "dev3" => ("σ = dev B: BE⁺ and semi-invertible, not injective", dev3()),
        "id-minus-b" => ("σ = id − B: invertible, violates BE", id_minus_b()),
        "marzano" => ("σ = (1 − h)V − id: uniaxial tension gives simple stretch, BE fails", marzano()),
        _ => unreachable!("ids come from REGRESSION_CASES"),
    };
    RegressionCase {
        id,
        description,
        passed: facts.1,
        details: facts.0,
    }
}

/// Runs every fixed example, or only `only`. Unknown ids are an error.
pub fn examples_regression(only: Option<&str>) -> Result<RegressionReport, String> {
    let ids: Vec<&'static str> = match only {
        None => REGRESSION_CASES.to_vec(),
        Some(key) => match REGRESSION_CASES.iter().find(|c| **c == key) {
            Some(id) => vec![*id],
            None => {
                return Err(format!(
                    "unknown example `{key}`; expected one of {}",
                    REGRESSION_CASES.join(", ")
                ))
            }
        },
    };
    Ok(RegressionReport {
        cases: ids.into_iter().map(run).collect(),
    })
}
