use serde::Serialize;

use super::{Inequality, Witness};
use crate::constitutive::{ConstitutiveError, DerivativeTriple, Invertibility, StressResponse};
use crate::repr::{psi_direct, BetaCoefficients};
use crate::scalar::Scalar;
use crate::symmat::{eigendecompose, is_bicoaxial, simultaneous_diagonalize, SymMatrix, Tolerance};

/// Relative reconstruction residual accepted for semi-inversion.
pub const SEMI_RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointVerdict {
    Holds,
    Fails,
    /// Excluded by definition.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct PointCheck<T> {
    pub verdict: PointVerdict,
    /// Signed quantities whose sign decides the verdict.
    pub margins: Vec<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl<T: Scalar> PointCheck<T> {
    fn new(holds: bool, margins: Vec<T>) -> Self {
        Self {
            verdict: if holds { PointVerdict::Holds } else { PointVerdict::Fails },
            margins,
            note: None,
        }
    }

    fn failed(note: impl Into<String>) -> Self {
        Self {
            verdict: PointVerdict::Fails,
            margins: Vec::new(),
            note: Some(note.into()),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == PointVerdict::Holds
    }

    pub fn fails(&self) -> bool {
        self.verdict == PointVerdict::Fails
    }
}

fn band<T: Scalar>(scale: T) -> T {
    T::sign_band() * (T::one() + scale)
}

/// Whether `B ∈ ℝ₊·id` within the cluster tolerance.
pub fn is_spherical<T: Scalar>(b: &SymMatrix<T>) -> bool {
    eigendecompose(b, T::default_cluster_tol())
        .map(|s| s.clusters().len() == 1)
        .unwrap_or(false)
}

/// `σᵢ − σⱼ` for every pair with `λᵢ > λⱼ` in distinct clusters, using
/// corresponding eigenvalues, together with the stress scale.
fn ordered_stress_gaps<T: Scalar>(
    b: &SymMatrix<T>,
    sigma: &SymMatrix<T>,
) -> Option<(Vec<T>, T)> {
    let sd = simultaneous_diagonalize(b, sigma, &Tolerance::default()).ok()?;
    let scale = sd.b.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let mut gaps = Vec::new();
    for (ci, hi) in sd.a_clusters.iter().enumerate() {
        for lo in &sd.a_clusters[ci + 1..] {
            for &i in hi {
                for &j in lo {
                    gaps.push(sd.b[i] - sd.b[j]);
                }
            }
        }
    }
    Some((gaps, scale))
}

/// `λᵢ ≥ λⱼ ⟹ σᵢ ≥ σⱼ` on a given pair `(B, σ)`.
pub fn check_be_pair<T: Scalar>(b: &SymMatrix<T>, sigma: &SymMatrix<T>) -> PointCheck<T> {
    match ordered_stress_gaps(b, sigma) {
        Some((gaps, scale)) => {
            let tol = band(scale);
            let holds = gaps.iter().all(|g| *g >= -tol);
            PointCheck::new(holds, gaps)
        }
        None => PointCheck::failed("stress does not commute with the stretch"),
    }
}

/// `λᵢ > λⱼ ⟹ σᵢ > σⱼ` on a given pair `(B, σ)`.
pub fn check_be_plus_pair<T: Scalar>(b: &SymMatrix<T>, sigma: &SymMatrix<T>) -> PointCheck<T> {
    match ordered_stress_gaps(b, sigma) {
        Some((gaps, scale)) => {
            let tol = band(scale);
            let holds = gaps.iter().all(|g| *g > tol);
            PointCheck::new(holds, gaps)
        }
        None => PointCheck::failed("stress does not commute with the stretch"),
    }
}

pub fn check_be<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    b: &SymMatrix<T>,
) -> Result<PointCheck<T>, ConstitutiveError> {
    Ok(check_be_pair(b, &model.cauchy_stress(b)?))
}

pub fn check_be_plus<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    b: &SymMatrix<T>,
) -> Result<PointCheck<T>, ConstitutiveError> {
    Ok(check_be_plus_pair(b, &model.cauchy_stress(b)?))
}

/// `β₋₁ ≤ 0, β₀ ≤ 0, β₁ > 0`; margins are `(−β₋₁, −β₀, β₁)`.
pub fn check_etss_beta<T: Scalar>(beta: &BetaCoefficients<T>) -> PointCheck<T> {
    let tol = band(beta.max_abs());
    let holds = beta.beta_m1 <= tol && beta.beta_0 <= tol && beta.beta_1 > tol;
    PointCheck::new(holds, vec![-beta.beta_m1, -beta.beta_0, beta.beta_1])
}

pub fn check_etss<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    b: &SymMatrix<T>,
) -> Result<PointCheck<T>, ConstitutiveError> {
    Ok(check_etss_beta(&model.beta_coefficients(b)?))
}

fn weak_pair<T: Scalar>(neg: T, pos: T) -> bool {
    // neg ≤ 0 and pos ≥ 0, with one of them strict
    let tol = band(neg.abs().max(pos.abs()));
    neg <= tol && pos >= -tol && (neg < -tol || pos > tol)
}

/// `β₋₁ ≤ 0, β₁ ≥ 0`, one strict; margins are `(−β₋₁, β₁)`.
pub fn check_wetss_beta<T: Scalar>(beta: &BetaCoefficients<T>, spherical: bool) -> PointCheck<T> {
    if spherical {
        return PointCheck {
            verdict: PointVerdict::Skipped,
            margins: Vec::new(),
            note: Some("spherical stretch is excluded".into()),
        };
    }
    PointCheck::new(
        weak_pair(beta.beta_m1, beta.beta_1),
        vec![-beta.beta_m1, beta.beta_1],
    )
}

pub fn check_wetss<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    b: &SymMatrix<T>,
) -> Result<PointCheck<T>, ConstitutiveError> {
    if is_spherical(b) {
        return Ok(check_wetss_beta(&BetaCoefficients::new(T::zero(), T::zero(), T::zero()), true));
    }
    Ok(check_wetss_beta(&model.beta_coefficients(b)?, false))
}

/// `∂W/∂I₁ ≥ 0, ∂W/∂I₂ ≥ 0`, one strict; margins are `(W₁, W₂)`.
pub fn check_wetss_derivatives<T: Scalar>(t: &DerivativeTriple<T>, spherical: bool) -> PointCheck<T> {
    if spherical {
        return check_wetss_beta(&BetaCoefficients::new(T::zero(), T::zero(), T::zero()), true);
    }
    PointCheck::new(weak_pair(-t.dw_di2, t.dw_di1), vec![t.dw_di1, t.dw_di2])
}

pub fn check_bicoax<T: Scalar>(b: &SymMatrix<T>, sigma: &SymMatrix<T>) -> PointCheck<T> {
    PointCheck::new(is_bicoaxial(b, sigma, &Tolerance::default()), Vec::new())
}

/// Bi-coaxiality plus a direct semi-inverse reconstructing `B` to `tol`
/// relative; the margin is the residual.
pub fn check_semi_pair<T: Scalar>(b: &SymMatrix<T>, sigma: &SymMatrix<T>, tol: T) -> PointCheck<T> {
    let t = Tolerance::default();
    if !is_bicoaxial(b, sigma, &t) {
        return PointCheck::failed("stress is not bi-coaxial to the stretch");
    }
    match psi_direct(b, sigma, &t) {
        Ok(psi) => {
            let r = psi.relative_residual(b, sigma);
            PointCheck::new(r.is_finite() && r <= tol, vec![r])
        }
        Err(e) => PointCheck::failed(e.to_string()),
    }
}

pub fn check_semi_invertibility<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    b: &SymMatrix<T>,
    tol: T,
) -> Result<PointCheck<T>, ConstitutiveError> {
    Ok(check_semi_pair(b, &model.cauchy_stress(b)?, tol))
}

/// Evaluates one property at `B` for a response.
pub(crate) fn evaluate<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    ineq: Inequality,
    b: &SymMatrix<T>,
) -> Result<PointCheck<T>, ConstitutiveError> {
    match ineq {
        Inequality::Be => check_be(model, b),
        Inequality::BePlus => check_be_plus(model, b),
        Inequality::Etss => check_etss(model, b),
        Inequality::Wetss => check_wetss(model, b),
        Inequality::Bicoax => Ok(check_bicoax(b, &model.cauchy_stress(b)?)),
        Inequality::Semi => check_semi_invertibility(model, b, T::c(SEMI_RESIDUAL_TOL)),
        Inequality::InvertWitness => Ok(injectivity_check(model)),
    }
}

/// Fails when the response carries a verified pair of distinct stretches
/// with equal stress.
pub(crate) fn injectivity_check<T: Scalar, R: StressResponse<T> + ?Sized>(model: &R) -> PointCheck<T> {
    match model.invertibility() {
        Invertibility::NonInjective { first, second } => {
            match (model.cauchy_stress(&first), model.cauchy_stress(&second)) {
                (Ok(s1), Ok(s2)) => {
                    let gap = (s1 - s2).max_abs();
                    let apart = (first - second).max_abs();
                    let collide = gap <= band(s1.max_abs()) && apart > T::zero();
                    PointCheck {
                        verdict: if collide { PointVerdict::Fails } else { PointVerdict::Holds },
                        margins: vec![gap, apart],
                        note: Some("distinct stretches with equal stress".into()),
                    }
                }
                _ => PointCheck::failed("witness could not be evaluated"),
            }
        }
        Invertibility::Invertible => PointCheck {
            verdict: PointVerdict::Holds,
            margins: Vec::new(),
            note: Some("invertible by construction".into()),
        },
        Invertibility::Unknown => PointCheck {
            verdict: PointVerdict::Skipped,
            margins: Vec::new(),
            note: Some("no injectivity witness known".into()),
        },
    }
}

/// Re-evaluates a recorded witness: the stored stress must match the
/// response at the stored stretch, and the property must still fail.
pub fn replay_witness<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    ineq: Inequality,
    witness: &Witness<T>,
) -> bool {
    let Ok(sigma) = model.cauchy_stress(&witness.b) else {
        return false;
    };
    let same = (sigma - witness.sigma).max_abs() <= T::c(1e-10) * (T::one() + sigma.max_abs());
    let pair_fails = match ineq {
        Inequality::Be => check_be_pair(&witness.b, &witness.sigma).fails(),
        Inequality::BePlus => check_be_plus_pair(&witness.b, &witness.sigma).fails(),
        Inequality::Bicoax => check_bicoax(&witness.b, &witness.sigma).fails(),
        Inequality::Semi => {
            check_semi_pair(&witness.b, &witness.sigma, T::c(SEMI_RESIDUAL_TOL)).fails()
        }
        Inequality::Etss | Inequality::Wetss | Inequality::InvertWitness => true,
    };
    let model_fails = evaluate(model, ineq, &witness.b)
        .map(|c| c.fails())
        .unwrap_or(false);
    same && pair_fails && model_fails
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constitutive::ResponseModel;

    fn d3(a: f64, b: f64, c: f64) -> SymMatrix<f64> {
        SymMatrix::diag(&[a, b, c]).unwrap()
    }

    #[test]
    fn be_examples() {
        let c = check_be(&ResponseModel::DirectIdMinusB, &d3(4.0, 1.0, 1.0)).unwrap();
        assert!(c.fails());
        assert_eq!(c.margins, vec![-3.0, -3.0]);
        assert!(check_be(&ResponseModel::DirectDev3, &d3(4.0, 2.0, 1.0)).unwrap().holds());
        assert!(check_be(&ResponseModel::MarzanoCounterexample, &d3(9.0, 4.0, 1.0)).unwrap().fails());
    }

    #[test]
    fn be_plus_examples() {
        assert!(check_be_plus(&ResponseModel::DirectDev3, &d3(4.0, 2.0, 1.0)).unwrap().holds());
        assert!(check_be_plus(&ResponseModel::DirectIdMinusB, &d3(4.0, 2.0, 1.0)).unwrap().fails());
        // Vacuous on a spherical state.
        assert!(check_be_plus(&ResponseModel::DirectIdMinusB, &d3(2.0, 2.0, 2.0)).unwrap().holds());
    }

    #[test]
    fn be_rejects_non_commuting_stress() {
        let b = d3(3.0, 2.0, 1.0);
        let mut s = SymMatrix::zeros(3);
        s.set(0, 1, 1.0);
        assert!(check_be_pair(&b, &s).fails());
    }

    #[test]
    fn etss_signs() {
        assert!(check_etss_beta(&BetaCoefficients::new(-1.0, -1.0, 1.0)).holds());
        assert!(check_etss_beta(&BetaCoefficients::new(0.0, 0.0, 1.0)).holds());
        assert!(check_etss_beta(&BetaCoefficients::new(-1.0, 0.5, 1.0)).fails());
        assert!(check_etss_beta(&BetaCoefficients::new(-1.0, -1.0, 0.0)).fails());
        // Mooney–Rivlin with f ≡ 0 has β₀ = (2/√I₃)·I₂c₂ > 0.
        let mr = ResponseModel::MooneyRivlinCompressible {
            c1: 1.0,
            c2: 1.0,
            f: crate::constitutive::Volumetric::Zero,
        };
        let c = check_etss(&mr, &d3(4.0, 2.0, 1.0)).unwrap();
        assert!(c.fails() && c.margins[1] < 0.0);
    }

    #[test]
    fn wetss_examples() {
        assert!(check_wetss_beta(&BetaCoefficients::new(-1.0, 5.0, 0.0), false).holds());
        assert!(check_wetss_beta(&BetaCoefficients::new(0.0, 5.0, 0.0), false).fails());
        assert!(check_wetss_beta(&BetaCoefficients::new(0.1, 5.0, 1.0), false).fails());
        let qh = ResponseModel::quadratic_hencky(1.0, 0.0);
        assert_eq!(
            check_wetss(&qh, &d3(2.0, 2.0, 2.0)).unwrap().verdict,
            PointVerdict::Skipped
        );
        assert!(check_wetss(&qh, &d3(2.0, 1.0, 0.7)).unwrap().holds());
    }

    #[test]
    fn semi_examples() {
        let b = d3(4.0, 2.0, 1.0);
        assert!(check_semi_invertibility(&ResponseModel::DirectDev3, &b, 1e-8).unwrap().holds());
        assert!(check_semi_invertibility(&ResponseModel::DirectIdMinusB, &b, 1e-8).unwrap().holds());
        let c = check_semi_invertibility(&Collapsing, &d3(1.5, 0.5, 3.0), 1e-8).unwrap();
        assert!(c.fails());
        assert!(check_bicoax(&d3(1.5, 0.5, 3.0), &d3(0.25, 0.25, 4.0)).fails());
    }

    /// `σᵢ = (λᵢ² − 1)²`, which merges the squared stretches 1.5 and 0.5.
    struct Collapsing;

    impl StressResponse<f64> for Collapsing {
        fn name(&self) -> String {
            "collapsing".into()
        }
        fn principal_stresses(&self, l: [f64; 3]) -> Result<[f64; 3], ConstitutiveError> {
            Ok(l.map(|x| (x * x - 1.0).powi(2)))
        }
    }

    #[test]
    fn injectivity_witnesses() {
        assert!(injectivity_check::<f64, _>(&ResponseModel::DirectDev3).fails());
        assert!(injectivity_check::<f64, _>(&ResponseModel::DirectIdMinusB).holds());
        assert_eq!(
            injectivity_check::<f64, _>(&ResponseModel::LogNormSquared).verdict,
            PointVerdict::Skipped
        );
    }
}
