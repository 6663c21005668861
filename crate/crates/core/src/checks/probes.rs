use serde::Serialize;
use thiserror::Error;

use super::audit::{run_check, CheckOptions};
use super::CheckReport;
use super::Inequality;
use crate::constitutive::{
    ConstitutiveError, IsochoricPart, PrincipalState, ResponseModel, StressResponse, Volumetric,
};
use crate::scalar::Scalar;
use crate::symmat::{Invariants, SymMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbeError {
    #[error("model `{0}` is not an isochoric-volumetric split")]
    NotIsoVolSplit(&'static str),
    #[error("stretch grid must be non-empty with every entry above 1")]
    BadGrid,
    #[error("uniaxial load must be finite and non-negative")]
    BadLoad,
    #[error("Newton iteration did not converge in {iterations} steps (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error(transparent)]
    Constitutive(#[from] ConstitutiveError),
}

/// One grid point of the purely volumetric stretch `B = λ·id`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct VolumetricPoint<T> {
    pub lambda: T,
    /// `J₃·∂W̃/∂J₃` at `J₁ = J₂ = 3`, `J₃ = λ³`, from the invariant derivatives.
    pub j3_dw_dj3: T,
    /// `λ³·f′(λ³)` straight from the volumetric function.
    pub volumetric_term: T,
    /// `∂W_iso/∂J₁ + 2·∂W_iso/∂J₂` at `(3, 3)`.
    pub bound: T,
    pub exceeds: bool,
    /// `d/dλ W(√λ·id)` by central differences.
    pub dw_dlambda: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct VolumetricProbe<T> {
    pub model: String,
    pub points: Vec<VolumetricPoint<T>>,
    /// Smallest grid `λ` with `J₃·∂W̃/∂J₃` above the bound. There `∂W/∂I₃ > 0`,
    /// which together with `∂W/∂I₂ ≥ 0` rules out `β₀ ≤ 0`.
    pub first_exceedance: Option<T>,
    /// `dW/dλ > 0` at every grid point.
    pub monotone_pressure: bool,
}

impl<T: Scalar> VolumetricProbe<T> {
    /// 60 geometric steps from 1.05 to about 1e3.
    pub fn default_grid() -> Vec<T> {
        (0..60)
            .map(|k| T::c(1.05 * (1e3f64 / 1.05).powf(k as f64 / 59.0)))
            .collect()
    }
}

fn split_parts<T: Scalar>(
    model: &ResponseModel<T>,
) -> Result<(IsochoricPart<T>, Volumetric<T>), ProbeError> {
    match *model {
        ResponseModel::IsoVolSplit { iso, f } => Ok((iso, f)),
        ResponseModel::NeoHookeCompressible { mu, f } => Ok((IsochoricPart::NeoHooke { mu }, f)),
        _ => Err(ProbeError::NotIsoVolSplit(model.tag())),
    }
}

/// Tests the necessary condition for `β₀ ≤ 0` along `B = λ·id`,
///
/// ```text
/// J₃·∂W̃/∂J₃ ≤ ∂W̃/∂J₁ + 2·∂W̃/∂J₂   at J₁ = J₂ = 3, J₃ = λ³,
/// ```
///
/// whose right side is constant for an isochoric-volumetric split.
pub fn volumetric_etss_probe<T: Scalar>(
    model: &ResponseModel<T>,
    grid: &[T],
) -> Result<VolumetricProbe<T>, ProbeError> {
    let (iso, f) = split_parts(model)?;
    model.validate()?;
    if grid.is_empty() || !grid.iter().all(|l| l.is_finite() && *l > T::one()) {
        return Err(ProbeError::BadGrid);
    }
    let (g1, g2) = iso.gradient();
    let bound = g1 + T::c(2.0) * g2;
    let (third, two_thirds) = (T::c(1.0 / 3.0), T::c(2.0 / 3.0));
    let mut points = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let inv = Invariants::new(T::c(3.0) * lambda, T::c(3.0) * lambda * lambda, lambda.powi(3));
        let t = model.analytic_triple(&inv).expect("split models have invariant form");
        let j3_dw_dj3 = inv.i3 * t.dw_di3 + third * inv.i1 * t.dw_di1 + two_thirds * inv.i2 * t.dw_di2;
        let band = T::sign_band() * (T::one() + j3_dw_dj3.abs().max(bound.abs()));
        let w = |x: T| model.energy_at([x.sqrt(); 3]);
        let h = T::c(1e-6) * lambda;
        let dw_dlambda = (w(lambda + h)? - w(lambda - h)?) / (T::c(2.0) * h);
        points.push(VolumetricPoint {
            lambda,
            j3_dw_dj3,
            volumetric_term: inv.i3 * f.d1(inv.i3),
            bound,
            exceeds: j3_dw_dj3 > bound + band,
            dw_dlambda,
        });
    }
    Ok(VolumetricProbe {
        model: model.tag().to_string(),
        first_exceedance: points.iter().find(|p| p.exceeds).map(|p| p.lambda),
        monotone_pressure: points.iter().all(|p| p.dw_dlambda > T::zero()),
        points,
    })
}

const EXPANSION_STEPS: usize = 40;
const EXPANSION_SHAPE: [f64; 3] = [1.05, 1.0, 0.95];

/// E-TSS along the expansion path `B = λ·diag(1.05, 1, 0.95)`, `λ ∈ (1, 3]`.
///
/// The slight distortion keeps the eigenvalues simple so that β is unique.
/// Witnesses are kept on the path, not minimized.
pub fn expansion_etss_probe<T: Scalar, R: StressResponse<T> + ?Sized>(model: &R) -> CheckReport<T> {
    let states: Vec<SymMatrix<T>> = (1..=EXPANSION_STEPS)
        .map(|k| {
            let lambda = 1.0 + 2.0 * k as f64 / EXPANSION_STEPS as f64;
            SymMatrix::diag(&EXPANSION_SHAPE.map(|d| T::c(lambda * d))).expect("three entries")
        })
        .collect();
    let options = CheckOptions {
        max_witnesses: 1,
        minimize: false,
    };
    let mut report = run_check(model, Inequality::Etss, &states, &options);
    report
        .notes
        .push("states λ·diag(1.05, 1, 0.95) for λ on a uniform grid of (1, 3]".into());
    report
}

/// Stretches solving `σ(V) = diag(s, 0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct UniaxialSolution<T> {
    pub state: PrincipalState<T>,
    /// Max-norm of `σ(V) − diag(s, 0, 0)`.
    pub residual: T,
    pub iterations: usize,
    /// `λ₂ = λ₃ ≠ λ₁`, or `V = id` when `s = 0`.
    pub simple_extension: bool,
}

const NEWTON_CAP: usize = 100;

fn max_abs<T: Scalar>(v: [T; 3]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

/// Newton iteration for the principal stretches under uniaxial Cauchy stress,
/// started at the identity, with a central-difference Jacobian and step
/// halving whenever the residual does not decrease.
pub fn marzano_uniaxial_demo<T: Scalar, R: StressResponse<T> + ?Sized>(
    model: &R,
    s: T,
) -> Result<UniaxialSolution<T>, ProbeError> {
    if !(s.is_finite() && s >= T::zero()) {
        return Err(ProbeError::BadLoad);
    }
    let tol = T::c(1e-10).max(T::c(100.0) * T::epsilon());
    let target = [s, T::zero(), T::zero()];
    let residual = |l: [T; 3]| -> Result<[T; 3], ConstitutiveError> {
        let p = model.principal_stresses(l)?;
        Ok([0, 1, 2].map(|i| p[i] - target[i]))
    };
    let mut l = [T::one(); 3];
    let mut r = residual(l)?;
    let mut norm = max_abs(r);
    let mut iterations = 0;
    while norm > tol {
        if iterations == NEWTON_CAP {
            return Err(ProbeError::NotConverged {
                iterations,
                residual: norm.to_f64_lossy(),
            });
        }
        iterations += 1;
        let mut jac = crate::symmat::Matrix::zeros(3);
        for j in 0..3 {
            let h = T::c(1e-7) * l[j].max(T::one());
            let (mut up, mut down) = (l, l);
            up[j] = up[j] + h;
            down[j] = down[j] - h;
            let (ru, rd) = (residual(up)?, residual(down)?);
            for i in 0..3 {
                jac[(i, j)] = (ru[i] - rd[i]) / (T::c(2.0) * h);
            }
        }
        let step = jac.solve(&r.map(|x| -x)).ok_or(ProbeError::NotConverged {
            iterations,
            residual: norm.to_f64_lossy(),
        })?;
        let mut alpha = T::one();
        loop {
            let trial = [0, 1, 2].map(|i| l[i] + alpha * step[i]);
            if trial.iter().all(|x| *x > T::zero()) {
                if let Ok(rt) = residual(trial) {
                    let nt = max_abs(rt);
                    if nt < norm || alpha < T::c(1e-6) {
                        l = trial;
                        r = rt;
                        norm = nt;
                        break;
                    }
                }
            }
            alpha = alpha * T::c(0.5);
            if alpha < T::c(1e-8) {
                return Err(ProbeError::NotConverged {
                    iterations,
                    residual: norm.to_f64_lossy(),
                });
            }
        }
    }
    let close = |a: T, b: T| (a - b).abs() <= T::c(1e-8) * a.max(b);
    let simple_extension = close(l[1], l[2]) && (s == T::zero() || !close(l[0], l[1]));
    Ok(UniaxialSolution {
        state: PrincipalState::from_lambdas(l)?,
        residual: norm,
        iterations,
        simple_extension,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_squared_volumetric_term_matches_closed_form() {
        let kappa = 1.0f64;
        let m = ResponseModel::NeoHookeCompressible { mu: 1.0, f: Volumetric::LogSquared { kappa } };
        let p = volumetric_etss_probe(&m, &VolumetricProbe::default_grid()).unwrap();
        for pt in &p.points {
            let closed = 0.75 * kappa * pt.lambda.ln();
            assert!((pt.j3_dw_dj3 - closed).abs() <= 1e-10 * closed.max(1.0));
            assert!((pt.volumetric_term - closed).abs() <= 1e-12 * closed.max(1.0));
        }
        // (3/4)·ln λ > 1/2 once λ > e^{2/3}
        let first = p.first_exceedance.unwrap();
        assert!(first > (2.0f64 / 3.0).exp() && first < 2.5);
        assert!(p.monotone_pressure);
    }

    #[test]
    fn zero_volumetric_never_exceeds() {
        let m = ResponseModel::IsoVolSplit { iso: IsochoricPart::NeoHooke { mu: 1.0 }, f: Volumetric::Zero };
        let p = volumetric_etss_probe(&m, &VolumetricProbe::default_grid()).unwrap();
        assert_eq!(p.first_exceedance, None);
    }

    #[test]
    fn probe_rejects_other_models() {
        let m = ResponseModel::<f64>::LogNormSquared;
        assert!(matches!(volumetric_etss_probe(&m, &[2.0]), Err(ProbeError::NotIsoVolSplit(_))));
        let nh = ResponseModel::NeoHookeCompressible { mu: 1.0, f: Volumetric::default() };
        assert_eq!(volumetric_etss_probe(&nh, &[0.5]), Err(ProbeError::BadGrid));
    }

    #[test]
    fn marzano_uniaxial() {
        for s in [0.1f64, 0.5, 2.0] {
            let u = marzano_uniaxial_demo(&ResponseModel::MarzanoCounterexample, s).unwrap();
            assert!(u.residual <= 1e-10);
            assert!((u.state.lambdas[0] - (1.0 + s)).abs() < 1e-10, "{u:?}");
            assert!((u.state.lambdas[1] - 1.0).abs() < 1e-10 && (u.state.lambdas[2] - 1.0).abs() < 1e-10);
            assert!(u.simple_extension);
        }
    }

    #[test]
    fn hencky_uniaxial() {
        let m = ResponseModel::quadratic_hencky(1.0, 0.5);
        let u0 = marzano_uniaxial_demo(&m, 0.0).unwrap();
        assert_eq!(u0.state.lambdas, [1.0; 3]);
        let u = marzano_uniaxial_demo(&m, 0.3).unwrap();
        assert!(u.residual <= 1e-10);
        let l = u.state.lambdas;
        assert!(l[0] > 1.0 && l[1] < 1.0 && u.simple_extension);
        assert!(marzano_uniaxial_demo(&m, -1.0).is_err());
    }
}
