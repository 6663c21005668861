use std::f64::consts::E;

use super::*;

fn d3(a: f64, b: f64, c: f64) -> SymMatrix<f64> {
    SymMatrix::diag(&[a, b, c]).unwrap()
}

fn rotation() -> Matrix<f64> {
    // Rotation about (1, 2, 2)/3 by 0.7 rad, Rodrigues form.
    let (s, c) = 0.7f64.sin_cos();
    let k = [1.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0];
    let mut r = Matrix::identity(3);
    let kx = [[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]];
    for i in 0..3 {
        for j in 0..3 {
            let mut kk = 0.0;
            for m in 0..3 {
                kk += kx[i][m] * kx[m][j];
            }
            r[(i, j)] += s * kx[i][j] + (1.0 - c) * kk;
        }
    }
    r
}

fn rel_diff(a: &SymMatrix<f64>, b: &SymMatrix<f64>) -> f64 {
    (*a - *b).max_abs() / b.max_abs().max(1.0)
}

fn catalog() -> Vec<ResponseModel<f64>> {
    vec![
        ResponseModel::QuadraticHencky { mu: 1.0, lambda: 0.5 },
        ResponseModel::ExponentialHencky { mu: 1.0, k: 0.5, kappa: 2.0, khat: 0.3 },
        ResponseModel::LogNormSquared,
        ResponseModel::MonotoneOfLogNorm { f: LogNormMap::Exp { k: 1.0 } },
        ResponseModel::HenckyType { w: HenckyKernel::Log1pDeviatoric { mu: 1.0, kappa: 3.0 } },
        ResponseModel::NeoHookeCompressible { mu: 1.0, f: Volumetric::LogSquared { kappa: 2.0 } },
        ResponseModel::MooneyRivlinCompressible { c1: 1.0, c2: 0.5, f: Volumetric::QuadraticJ { kappa: 1.0 } },
        ResponseModel::IsoVolSplit {
            iso: IsochoricPart::MooneyRivlin { c1: 0.7, c2: 0.2 },
            f: Volumetric::LogSquared { kappa: 4.0 },
        },
        ResponseModel::DirectDev3,
        ResponseModel::DirectIdMinusB,
        ResponseModel::MarzanoCounterexample,
    ]
}

#[test]
fn energy_examples() {
    let qh = ResponseModel::quadratic_hencky(1.0, 0.0);
    assert_eq!(qh.energy_at([1.0; 3]).unwrap(), 0.0);
    assert!((ResponseModel::LogNormSquared.energy_at([E, 1.0, 1.0]).unwrap() - 1.0).abs() < 1e-15);
    let qh2 = ResponseModel::quadratic_hencky(1.0, 2.0);
    assert!((qh2.energy_at([E; 3]).unwrap() - 12.0).abs() < 1e-13);
    assert!(matches!(
        ResponseModel::<f64>::DirectDev3.energy_at([1.0; 3]),
        Err(ConstitutiveError::NotHyperelastic("dev3"))
    ));
}

#[test]
fn quadratic_hencky_stress() {
    let qh = ResponseModel::quadratic_hencky(1.0, 0.0);
    assert!(qh.cauchy_stress(&SymMatrix::identity(3)).unwrap().max_abs() < 1e-15);
    let s = qh.cauchy_stress(&d3(E * E, 1.0, 1.0)).unwrap();
    // σᵢ = (2μ log λᵢ + Λ tr log U)/J
    assert!(rel_diff(&s, &d3(2.0 / E, 0.0, 0.0)) < 1e-14);
}

#[test]
fn marzano_follows_the_polynomial() {
    let m = ResponseModel::MarzanoCounterexample;
    assert_eq!(marzano_h([3.0, 2.0, 1.0]), 4.0);
    let s = m.cauchy_stress(&d3(9.0, 4.0, 1.0)).unwrap();
    assert!(rel_diff(&s, &d3(-10.0, -7.0, -4.0)) < 1e-13);
}

#[test]
fn mooney_rivlin_triple_and_beta() {
    let f = Volumetric::LogSquared { kappa: 2.0 };
    let m = ResponseModel::MooneyRivlinCompressible { c1: 1.5, c2: 0.25, f };
    let b = d3(4.0, 1.0, 1.0);
    let est = invariant_derivatives(&m, &b, DerivativeScheme::Analytic).unwrap();
    assert_eq!(est.triple.as_array(), [1.5, 0.25, f.d1(4.0)]);
    let beta = m.beta_coefficients(&b).unwrap();
    assert!((beta.beta_1 - 2.0 * 1.5 / 2.0).abs() < 1e-15);
    assert!((beta.beta_m1 + 2.0 * 2.0 * 0.25).abs() < 1e-15);
    assert!(!m.is_stress_free_at_identity());
}

#[test]
fn log_norm_squared_has_positive_invariant_derivatives() {
    let m = ResponseModel::LogNormSquared;
    for b in [d3(4.0, 2.0, 0.5), d3(0.3, 1.7, 9.0), d3(1.1, 1.0, 0.9)] {
        let t = invariant_derivatives(&m, &b, DerivativeScheme::PrincipalAnalytic)
            .unwrap()
            .triple;
        assert!(t.dw_di1 > 0.0 && t.dw_di2 > 0.0, "{t:?}");
    }
}

#[test]
fn analytic_and_finite_difference_agree() {
    for m in catalog().into_iter().filter(|m| m.has_invariant_form()) {
        for b in [d3(4.0, 2.0, 0.5), d3(0.3, 1.7, 9.0), d3(1.3, 0.8, 2.2)] {
            let a = invariant_derivatives(&m, &b, DerivativeScheme::Analytic).unwrap().triple;
            let p = invariant_derivatives(&m, &b, DerivativeScheme::PrincipalAnalytic).unwrap().triple;
            let f = invariant_derivatives(&m, &b, DerivativeScheme::FiniteDifference).unwrap().triple;
            let s = invariant_derivatives(&m, &b, DerivativeScheme::StretchFiniteDifference).unwrap().triple;
            let scale = a.as_array().iter().fold(0.0f64, |s, x| s.max(x.abs()));
            for k in 0..3 {
                assert!((a.as_array()[k] - f.as_array()[k]).abs() <= 1e-6 * scale, "{m:?}");
                assert!((a.as_array()[k] - s.as_array()[k]).abs() <= 1e-6 * scale, "{m:?}");
                assert!((a.as_array()[k] - p.as_array()[k]).abs() <= 1e-10 * scale, "{m:?}");
            }
        }
    }
    let hencky = ResponseModel::quadratic_hencky(1.0, 1.0);
    assert!(matches!(
        invariant_derivatives(&hencky, &d3(2.0, 1.0, 0.5), DerivativeScheme::Analytic),
        Err(ConstitutiveError::UnsupportedScheme { .. })
    ));
}

#[test]
fn beta_of_dev3() {
    let b = d3(4.0, 2.0, 1.0).congruence(&rotation());
    let beta = ResponseModel::DirectDev3.beta_coefficients(&b).unwrap();
    assert!(beta.beta_m1.abs() < 1e-12);
    assert!((beta.beta_0 + 7.0 / 3.0).abs() < 1e-12);
    assert!((beta.beta_1 - 1.0).abs() < 1e-12);
}

#[test]
fn beta_reconstructs_stress() {
    let b = d3(4.0, 0.25, 1.0).congruence(&rotation());
    for m in catalog() {
        let sigma = m.cauchy_stress(&b).unwrap();
        let beta = m.beta_coefficients(&b).unwrap();
        let r = (sigma - beta.evaluate(&b).unwrap()).frobenius_norm();
        assert!(r <= 1e-8 * (1.0 + sigma.frobenius_norm()), "{}: {r}", m.tag());
    }
}

#[test]
fn isotropy_under_rotation() {
    let q = rotation();
    let b = d3(2.5, 0.6, 1.2);
    for m in catalog() {
        let rotated = m.cauchy_stress(&b.congruence(&q)).unwrap();
        let expected = m.cauchy_stress(&b).unwrap().congruence(&q);
        assert!(rel_diff(&rotated, &expected) < 1e-10, "{}", m.tag());
    }
}

#[test]
fn stress_free_reference() {
    for m in catalog().into_iter().filter(|m| m.is_stress_free_at_identity()) {
        let s = m.cauchy_stress(&SymMatrix::identity(3)).unwrap();
        assert!(s.max_abs() < 1e-14, "{}", m.tag());
    }
}

#[test]
fn repeated_stretches_fall_back_to_a_split() {
    let m = ResponseModel::NeoHookeCompressible { mu: 1.0, f: Volumetric::default() };
    for b in [d3(4.0, 1.0, 1.0), d3(2.0, 2.0, 2.0), d3(3.0, 3.0, 0.5)] {
        let exact = invariant_derivatives(&m, &b, DerivativeScheme::Analytic).unwrap();
        for (scheme, tol) in [
            (DerivativeScheme::PrincipalAnalytic, 1e-7),
            (DerivativeScheme::StretchFiniteDifference, 1e-4),
        ] {
            let est = invariant_derivatives(&m, &b, scheme).unwrap();
            assert!(est.reduced_accuracy);
            for k in 0..3 {
                let (x, y) = (est.triple.as_array()[k], exact.triple.as_array()[k]);
                assert!((x - y).abs() <= tol * y.abs().max(1.0), "{scheme:?} {b:?}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn average_length() {
    assert_eq!(average_deformed_length(&SymMatrix::<f64>::identity(3)), 1.0);
    assert!((average_deformed_length(&d3(4.0, 1.0, 1.0)) - 2f64.sqrt()).abs() < 1e-15);
    let b = d3(3.0, 0.2, 1.4);
    assert!(average_deformed_length(&b).powi(2) > b.determinant().cbrt());
}

#[test]
fn json_shape() {
    let m = ResponseModel::quadratic_hencky(1.0, 0.0);
    let v = serde_json::to_value(&m).unwrap();
    assert_eq!(v, serde_json::json!({"model": "quadratic-hencky", "params": {"mu": 1.0, "lambda": 0.0}}));
    for m in catalog() {
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<ResponseModel<f64>>(&s).unwrap(), m, "{s}");
    }
    let dev: ResponseModel<f64> = serde_json::from_str(r#"{"model":"dev3"}"#).unwrap();
    assert_eq!(dev, ResponseModel::DirectDev3);
    let nh: ResponseModel<f64> =
        serde_json::from_str(r#"{"model":"NeoHookeCompressible","params":{"mu":2}}"#).unwrap();
    assert_eq!(nh, ResponseModel::NeoHookeCompressible { mu: 2.0, f: Volumetric::LogSquared { kappa: 1.0 } });
    assert!(serde_json::from_str::<ResponseModel<f64>>(r#"{"model":"nope"}"#).is_err());
}

#[test]
fn parameter_validation() {
    assert!(ResponseModel::quadratic_hencky(1.0, -0.7).validate().is_err());
    assert!(ResponseModel::quadratic_hencky(1.0, -0.6).validate().is_ok());
    assert!(ResponseModel::quadratic_hencky(0.0, 1.0).validate().is_err());
    assert!(ResponseModel::ExponentialHencky { mu: 1.0, k: 0.0, kappa: 1.0, khat: 1.0 }
        .validate()
        .is_err());
    for m in catalog() {
        assert!(m.validate().is_ok(), "{}", m.tag());
    }
}

#[test]
fn non_spd_input_rejected() {
    let m = ResponseModel::quadratic_hencky(1.0, 0.0);
    assert_eq!(
        m.cauchy_stress(&d3(1.0, 0.0, 1.0)),
        Err(ConstitutiveError::NotPositiveDefinite)
    );
    assert!(matches!(
        m.cauchy_stress(&SymMatrix::identity(2)),
        Err(ConstitutiveError::Dimension(2))
    ));
}

#[test]
fn single_precision() {
    let m = ResponseModel::<f32>::quadratic_hencky(1.0, 0.0);
    let s = m.cauchy_stress(&SymMatrix::<f32>::diag(&[E as f32 * E as f32, 1.0, 1.0]).unwrap()).unwrap();
    assert!((s.get(0, 0) - 2.0 / E as f32).abs() < 1e-5);
}
