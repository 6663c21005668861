//! Catalog of isotropic Cauchy stress responses `σ = σ̂(B)` on `PSym(3)`.
//!
//! Hyperelastic models are evaluated along principal stretches:
//! `σᵢ = (λᵢ/J)·∂W/∂λᵢ = (1/J)·∂W/∂ℓᵢ` with `ℓᵢ = log λᵢ` and `J = λ₁λ₂λ₃`,
//! assembled in the eigenbasis of `B`. The coefficients of
//! `σ = β₀·id + β₁·B + β₋₁·B⁻¹` follow from the invariant derivatives
//! `Wₖ = ∂W/∂Iₖ`:
//!
//! ```text
//! β₁  = (2/√I₃)·W₁
//! β₀  = (2/√I₃)·(I₂W₂ + I₃W₃)
//! β₋₁ = −2√I₃·W₂
//! ```

mod parts;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use parts::{HenckyKernel, IsochoricPart, LogNormMap, Volumetric};

use crate::repr::{beta_from_gamma, gamma_coefficients, BetaCoefficients, ReprError};
use crate::scalar::Scalar;
use crate::symmat::{eigendecompose, Invariants, Matrix, SymMatError, SymMatrix, Tolerance};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstitutiveError {
    #[error("model `{0}` has no energy function")]
    NotHyperelastic(&'static str),
    #[error("invalid parameters for `{model}`: {reason}")]
    InvalidParameter {
        model: &'static str,
        reason: &'static str,
    },
    #[error("derivative scheme {scheme:?} is not available for `{model}`")]
    UnsupportedScheme {
        model: &'static str,
        scheme: DerivativeScheme,
    },
    #[error("stress responses are defined on 3×3 tensors, got dimension {0}")]
    Dimension(usize),
    #[error("stretch tensor is not positive definite")]
    NotPositiveDefinite,
    #[error("non-finite stress or energy")]
    NonFinite,
    #[error(transparent)]
    Matrix(#[from] SymMatError),
    #[error(transparent)]
    Repr(#[from] ReprError),
}

/// Principal stretches `λᵢ` (eigenvalues of `V`) with the eigenbasis of `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct PrincipalState<T> {
    pub lambdas: [T; 3],
    /// Columns are the principal directions.
    pub basis: Matrix<T>,
}

impl<T: Scalar> PrincipalState<T> {
    pub fn from_lambdas(lambdas: [T; 3]) -> Result<Self, ConstitutiveError> {
        if !lambdas.iter().all(|l| l.is_finite() && *l > T::zero()) {
            return Err(ConstitutiveError::NotPositiveDefinite);
        }
        Ok(Self {
            lambdas,
            basis: Matrix::identity(3),
        })
    }

    /// Principal stretches of `B`, descending.
    pub fn from_b(b: &SymMatrix<T>) -> Result<Self, ConstitutiveError> {
        if b.dim() != 3 {
            return Err(ConstitutiveError::Dimension(b.dim()));
        }
        let spec = eigendecompose(b, T::default_cluster_tol())?;
        let ev = spec.eigenvalues();
        if !(ev[2] > T::zero()) {
            return Err(ConstitutiveError::NotPositiveDefinite);
        }
        Ok(Self {
            lambdas: [ev[0].sqrt(), ev[1].sqrt(), ev[2].sqrt()],
            basis: *spec.basis(),
        })
    }

    /// `Q·diag(values)·Qᵀ`.
    pub fn assemble(&self, values: [T; 3]) -> SymMatrix<T> {
        SymMatrix::diag(&values)
            .expect("three diagonal entries")
            .congruence(&self.basis)
    }

    pub fn b(&self) -> SymMatrix<T> {
        self.assemble(self.lambdas.map(|l| l * l))
    }

    pub fn v(&self) -> SymMatrix<T> {
        self.assemble(self.lambdas)
    }

    pub fn invariants(&self) -> Invariants<T> {
        invariants_of_squares(self.lambdas.map(|l| l * l))
    }
}

fn invariants_of_squares<T: Scalar>(b: [T; 3]) -> Invariants<T> {
    Invariants::new(
        b[0] + b[1] + b[2],
        b[0] * b[1] + b[0] * b[2] + b[1] * b[2],
        b[0] * b[1] * b[2],
    )
}

/// `(∂W/∂I₁, ∂W/∂I₂, ∂W/∂I₃)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DerivativeTriple<T> {
    #[serde(rename = "dW_dI1")]
    pub dw_di1: T,
    #[serde(rename = "dW_dI2")]
    pub dw_di2: T,
    #[serde(rename = "dW_dI3")]
    pub dw_di3: T,
}

impl<T: Scalar> DerivativeTriple<T> {
    pub fn new(dw_di1: T, dw_di2: T, dw_di3: T) -> Self {
        Self {
            dw_di1,
            dw_di2,
            dw_di3,
        }
    }

    pub fn beta(&self, inv: &Invariants<T>) -> BetaCoefficients<T> {
        let two = T::c(2.0);
        let j = inv.i3.sqrt();
        BetaCoefficients {
            beta_m1: -two * j * self.dw_di2,
            beta_0: two / j * (inv.i2 * self.dw_di2 + inv.i3 * self.dw_di3),
            beta_1: two / j * self.dw_di1,
        }
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.dw_di1, self.dw_di2, self.dw_di3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeScheme {
    /// Closed form in the invariants.
    Analytic,
    /// Closed-form `∂W/∂λᵢ`, then the linear map to `∂W/∂Iₖ`.
    PrincipalAnalytic,
    /// Central differences of `W` directly in the invariants when `W` has an
    /// invariant form, otherwise as [`DerivativeScheme::StretchFiniteDifference`].
    FiniteDifference,
    /// Central differences of `W` in the stretches, then the linear map used
    /// by [`DerivativeScheme::PrincipalAnalytic`]. Noise is amplified by the
    /// inverse relative gap between squared stretches.
    StretchFiniteDifference,
}

/// Invariant derivatives together with an accuracy note.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct DerivativeEstimate<T> {
    pub triple: DerivativeTriple<T>,
    /// Invariants of the state at which `triple` was evaluated.
    pub invariants: Invariants<T>,
    /// Set when repeated stretches forced a symmetric split of the state.
    pub reduced_accuracy: bool,
}

/// What is known about injectivity of a response.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar", rename_all = "kebab-case")]
pub enum Invertibility<T> {
    Invertible,
    /// Two distinct stretches with equal stress.
    NonInjective {
        first: SymMatrix<T>,
        second: SymMatrix<T>,
    },
    Unknown,
}

/// An isotropic stress response given through its principal values.
pub trait StressResponse<T: Scalar>: Sync {
    fn name(&self) -> String;

    /// Principal stresses paired index-wise with the principal stretches.
    fn principal_stresses(&self, lambdas: [T; 3]) -> Result<[T; 3], ConstitutiveError>;

    fn cauchy_stress(&self, b: &SymMatrix<T>) -> Result<SymMatrix<T>, ConstitutiveError> {
        let state = PrincipalState::from_b(b)?;
        let s = self.principal_stresses(state.lambdas)?;
        if !s.iter().all(|x| x.is_finite()) {
            return Err(ConstitutiveError::NonFinite);
        }
        Ok(state.assemble(s))
    }

    fn beta_coefficients(&self, b: &SymMatrix<T>) -> Result<BetaCoefficients<T>, ConstitutiveError> {
        beta_from_stress(self, b)
    }

    /// `None` when the response has no energy.
    fn invariant_derivatives(
        &self,
        _b: &SymMatrix<T>,
    ) -> Option<Result<DerivativeEstimate<T>, ConstitutiveError>> {
        None
    }

    fn invertibility(&self) -> Invertibility<T> {
        Invertibility::Unknown
    }
}

/// β from the stress itself: Vandermonde fit of `σ` on the eigenvalues of
/// `B`, reduced with Cayley–Hamilton.
pub fn beta_from_stress<T: Scalar, R: StressResponse<T> + ?Sized>(
    response: &R,
    b: &SymMatrix<T>,
) -> Result<BetaCoefficients<T>, ConstitutiveError> {
    let sigma = response.cauchy_stress(b)?;
    let g = gamma_coefficients(b, &sigma, &Tolerance::default())?;
    Ok(beta_from_gamma(&g, &b.invariants()?)?)
}

/// Catalog entry. Serialized as `{"model": "<tag>", "params": {…}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "model",
    content = "params",
    rename_all = "kebab-case",
    bound = "T: Scalar"
)]
pub enum ResponseModel<T> {
    /// `μ‖log U‖² + (Λ/2)(tr log U)²`
    #[serde(alias = "QuadraticHencky")]
    QuadraticHencky { mu: T, lambda: T },
    /// `(μ/k)·exp(k‖dev log U‖²) + (κ/(2k̂))·exp(k̂(tr log U)²)`
    #[serde(alias = "ExponentialHencky")]
    ExponentialHencky { mu: T, k: T, kappa: T, khat: T },
    /// `‖log U‖²`
    #[serde(alias = "LogNormSquared")]
    LogNormSquared,
    /// `f(‖log U‖²)` with `f′ > 0`
    #[serde(alias = "MonotoneOfLogNorm")]
    MonotoneOfLogNorm { f: LogNormMap<T> },
    /// `𝒲(‖dev log U‖², (tr log U)²)`
    #[serde(alias = "HenckyType")]
    HenckyType { w: HenckyKernel<T> },
    /// `(μ/2)(I₁I₃^{-1/3} − 3) + f(I₃)`
    #[serde(
        rename = "neo-hooke",
        alias = "NeoHookeCompressible",
        alias = "neo-hooke-compressible"
    )]
    NeoHookeCompressible {
        mu: T,
        #[serde(default, alias = "volumetric")]
        f: Volumetric<T>,
    },
    /// `c₁(I₁ − 3) + c₂(I₂ − 3) + f(I₃)`; stressed at `B = id` unless
    /// `c₁ + 2c₂ = 0`.
    #[serde(
        rename = "mooney-rivlin",
        alias = "MooneyRivlinCompressible",
        alias = "mooney-rivlin-compressible"
    )]
    MooneyRivlinCompressible {
        c1: T,
        c2: T,
        #[serde(default, alias = "volumetric")]
        f: Volumetric<T>,
    },
    /// `W_iso(I₁I₃^{-1/3}, I₂I₃^{-2/3}) + f(I₃)`
    #[serde(alias = "IsoVolSplit")]
    IsoVolSplit {
        iso: IsochoricPart<T>,
        #[serde(default, alias = "volumetric")]
        f: Volumetric<T>,
    },
    /// `σ = dev B`
    #[serde(rename = "dev3", alias = "DirectDev3", alias = "direct-dev3")]
    DirectDev3,
    /// `σ = id − B`
    #[serde(rename = "id-minus-b", alias = "DirectIdMinusB", alias = "direct-id-minus-b")]
    DirectIdMinusB,
    /// `σ = (1 − h)·V − id`, `h = (λ₁−λ₂)²(λ₁−λ₃)²(λ₂−λ₃)²`
    #[serde(
        rename = "marzano",
        alias = "MarzanoCounterexample",
        alias = "marzano-counterexample"
    )]
    MarzanoCounterexample,
}

/// Logarithmic stretch data shared by the Hencky family.
struct LogStretch<T> {
    l: [T; 3],
    dev: [T; 3],
    tr: T,
    /// `‖dev ℓ‖²`
    x1: T,
}

impl<T: Scalar> LogStretch<T> {
    fn new(lambdas: [T; 3]) -> Self {
        let l = lambdas.map(|x| x.ln());
        let tr = l[0] + l[1] + l[2];
        let m = tr / T::c(3.0);
        let dev = l.map(|x| x - m);
        let x1 = dev.iter().fold(T::zero(), |s, d| s + *d * *d);
        Self { l, dev, tr, x1 }
    }

    fn norm2(&self) -> T {
        self.l.iter().fold(T::zero(), |s, x| s + *x * *x)
    }
}

/// `h(λ) = (λ₁−λ₂)²(λ₁−λ₃)²(λ₂−λ₃)²`.
pub fn marzano_h<T: Scalar>(l: [T; 3]) -> T {
    ((l[0] - l[1]) * (l[0] - l[2]) * (l[1] - l[2])).powi(2)
}

impl<T: Scalar> ResponseModel<T> {
    pub fn quadratic_hencky(mu: T, lambda: T) -> Self {
        ResponseModel::QuadraticHencky { mu, lambda }
    }

    /// One representative of every variant, with unit-scale parameters.
    pub fn catalog() -> Vec<Self> {
        let c = T::c;
        vec![
            ResponseModel::QuadraticHencky { mu: c(1.0), lambda: c(0.0) },
            ResponseModel::ExponentialHencky { mu: c(1.0), k: c(0.5), kappa: c(1.0), khat: c(0.25) },
            ResponseModel::LogNormSquared,
            ResponseModel::MonotoneOfLogNorm { f: LogNormMap::Exp { k: c(1.0) } },
            ResponseModel::HenckyType {
                w: HenckyKernel::Log1pDeviatoric { mu: c(1.0), kappa: c(2.0) },
            },
            ResponseModel::NeoHookeCompressible { mu: c(1.0), f: Volumetric::default() },
            ResponseModel::MooneyRivlinCompressible { c1: c(1.0), c2: c(0.5), f: Volumetric::default() },
            ResponseModel::IsoVolSplit {
                iso: IsochoricPart::MooneyRivlin { c1: c(0.5), c2: c(0.25) },
                f: Volumetric::QuadraticJ { kappa: c(2.0) },
            },
            ResponseModel::DirectDev3,
            ResponseModel::DirectIdMinusB,
            ResponseModel::MarzanoCounterexample,
        ]
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ResponseModel::QuadraticHencky { .. } => "quadratic-hencky",
            ResponseModel::ExponentialHencky { .. } => "exponential-hencky",
            ResponseModel::LogNormSquared => "log-norm-squared",
            ResponseModel::MonotoneOfLogNorm { .. } => "monotone-of-log-norm",
            ResponseModel::HenckyType { .. } => "hencky-type",
            ResponseModel::NeoHookeCompressible { .. } => "neo-hooke",
            ResponseModel::MooneyRivlinCompressible { .. } => "mooney-rivlin",
            ResponseModel::IsoVolSplit { .. } => "iso-vol-split",
            ResponseModel::DirectDev3 => "dev3",
            ResponseModel::DirectIdMinusB => "id-minus-b",
            ResponseModel::MarzanoCounterexample => "marzano",
        }
    }

    pub fn validate(&self) -> Result<(), ConstitutiveError> {
        let model = self.tag();
        let bad = |reason| Err(ConstitutiveError::InvalidParameter { model, reason });
        let pos = |x: T| x.is_finite() && x > T::zero();
        let wrap = |r: Result<(), &'static str>| r.map_err(|reason| ConstitutiveError::InvalidParameter { model, reason });
        match self {
            ResponseModel::QuadraticHencky { mu, lambda } => {
                if !pos(*mu) {
                    return bad("mu must be positive");
                }
                if !(lambda.is_finite() && T::c(3.0) * *lambda + T::c(2.0) * *mu >= T::zero()) {
                    return bad("3·lambda + 2·mu must be non-negative");
                }
                Ok(())
            }
            ResponseModel::ExponentialHencky { mu, k, kappa, khat } => {
                if [*mu, *k, *kappa, *khat].iter().all(|x| pos(*x)) {
                    Ok(())
                } else {
                    bad("mu, k, kappa and khat must be positive")
                }
            }
            ResponseModel::MonotoneOfLogNorm { f } => wrap(f.validate()),
            ResponseModel::HenckyType { w } => wrap(w.validate()),
            ResponseModel::NeoHookeCompressible { mu, f } => {
                if !pos(*mu) {
                    return bad("mu must be positive");
                }
                wrap(f.validate())
            }
            ResponseModel::MooneyRivlinCompressible { c1, c2, f } => {
                if !(c1.is_finite() && c2.is_finite()) {
                    return bad("c1 and c2 must be finite");
                }
                wrap(f.validate())
            }
            ResponseModel::IsoVolSplit { iso, f } => {
                wrap(iso.validate())?;
                wrap(f.validate())
            }
            ResponseModel::LogNormSquared
            | ResponseModel::DirectDev3
            | ResponseModel::DirectIdMinusB
            | ResponseModel::MarzanoCounterexample => Ok(()),
        }
    }

    pub fn is_hyperelastic(&self) -> bool {
        !matches!(
            self,
            ResponseModel::DirectDev3
                | ResponseModel::DirectIdMinusB
                | ResponseModel::MarzanoCounterexample
        )
    }

    /// Models whose energy is written in the invariants.
    pub fn has_invariant_form(&self) -> bool {
        matches!(
            self,
            ResponseModel::NeoHookeCompressible { .. }
                | ResponseModel::MooneyRivlinCompressible { .. }
                | ResponseModel::IsoVolSplit { .. }
        )
    }

    /// Whether `σ̂(id) = 0`. Only Mooney–Rivlin in the plain invariants
    /// carries a reference stress `2(c₁ + 2c₂)·id`.
    pub fn is_stress_free_at_identity(&self) -> bool {
        match self {
            ResponseModel::MooneyRivlinCompressible { c1, c2, .. } => {
                *c1 + T::c(2.0) * *c2 == T::zero()
            }
            _ => true,
        }
    }

    fn require_energy(&self) -> Result<(), ConstitutiveError> {
        if self.is_hyperelastic() {
            Ok(())
        } else {
            Err(ConstitutiveError::NotHyperelastic(self.tag()))
        }
    }

    /// `W` at the given principal stretches.
    pub fn energy_at(&self, lambdas: [T; 3]) -> Result<T, ConstitutiveError> {
        self.require_energy()?;
        let half = T::c(0.5);
        let w = match self {
            ResponseModel::QuadraticHencky { mu, lambda } => {
                let s = LogStretch::new(lambdas);
                *mu * s.norm2() + half * *lambda * s.tr * s.tr
            }
            ResponseModel::ExponentialHencky { mu, k, kappa, khat } => {
                let s = LogStretch::new(lambdas);
                *mu / *k * (*k * s.x1).exp() + *kappa / (T::c(2.0) * *khat) * (*khat * s.tr * s.tr).exp()
            }
            ResponseModel::LogNormSquared => LogStretch::new(lambdas).norm2(),
            ResponseModel::MonotoneOfLogNorm { f } => f.value(LogStretch::new(lambdas).norm2()),
            ResponseModel::HenckyType { w } => {
                let s = LogStretch::new(lambdas);
                w.value(s.x1, s.tr * s.tr)
            }
            _ => {
                let inv = invariants_of_squares(lambdas.map(|l| l * l));
                self.energy_from_invariants(&inv)
            }
        };
        if w.is_finite() {
            Ok(w)
        } else {
            Err(ConstitutiveError::NonFinite)
        }
    }

    fn energy_from_invariants(&self, inv: &Invariants<T>) -> T {
        let three = T::c(3.0);
        match self {
            ResponseModel::NeoHookeCompressible { mu, f } => {
                *mu / T::c(2.0) * (inv.i1 * inv.i3.powf(-T::one() / three) - three) + f.value(inv.i3)
            }
            ResponseModel::MooneyRivlinCompressible { c1, c2, f } => {
                *c1 * (inv.i1 - three) + *c2 * (inv.i2 - three) + f.value(inv.i3)
            }
            ResponseModel::IsoVolSplit { iso, f } => {
                let (j1, j2) = isochoric_invariants(inv);
                iso.value(j1, j2) + f.value(inv.i3)
            }
            _ => unreachable!("only invariant models"),
        }
    }

    /// Closed-form `∂W/∂Iₖ` for models written in the invariants.
    pub fn analytic_triple(&self, inv: &Invariants<T>) -> Option<DerivativeTriple<T>> {
        let three = T::c(3.0);
        let i3 = inv.i3;
        let p13 = i3.powf(-T::one() / three);
        match self {
            ResponseModel::NeoHookeCompressible { mu, f } => Some(DerivativeTriple::new(
                *mu / T::c(2.0) * p13,
                T::zero(),
                -*mu / T::c(6.0) * inv.i1 * p13 / i3 + f.d1(i3),
            )),
            ResponseModel::MooneyRivlinCompressible { c1, c2, f } => {
                Some(DerivativeTriple::new(*c1, *c2, f.d1(i3)))
            }
            ResponseModel::IsoVolSplit { iso, f } => {
                let (w1, w2) = iso.gradient();
                let p23 = p13 * p13;
                Some(DerivativeTriple::new(
                    w1 * p13,
                    w2 * p23,
                    -(inv.i1 * w1 * p13 + T::c(2.0) * inv.i2 * w2 * p23) / (three * i3) + f.d1(i3),
                ))
            }
            _ => None,
        }
    }

    /// `∂W/∂ℓᵢ` with `ℓᵢ = log λᵢ`.
    pub fn log_gradient(&self, lambdas: [T; 3]) -> Result<[T; 3], ConstitutiveError> {
        self.require_energy()?;
        let two = T::c(2.0);
        let g = match self {
            ResponseModel::QuadraticHencky { mu, lambda } => {
                let s = LogStretch::new(lambdas);
                s.l.map(|l| two * *mu * l + *lambda * s.tr)
            }
            ResponseModel::ExponentialHencky { mu, k, kappa, khat } => {
                let s = LogStretch::new(lambdas);
                let e_dev = two * *mu * (*k * s.x1).exp();
                let e_vol = *kappa * (*khat * s.tr * s.tr).exp() * s.tr;
                s.dev.map(|d| e_dev * d + e_vol)
            }
            ResponseModel::LogNormSquared => LogStretch::new(lambdas).l.map(|l| two * l),
            ResponseModel::MonotoneOfLogNorm { f } => {
                let s = LogStretch::new(lambdas);
                let d = f.d1(s.norm2());
                s.l.map(|l| two * d * l)
            }
            ResponseModel::HenckyType { w } => {
                let s = LogStretch::new(lambdas);
                let (w1, w2) = w.gradient(s.x1, s.tr * s.tr);
                s.dev.map(|d| two * w1 * d + two * w2 * s.tr)
            }
            _ => {
                let b = lambdas.map(|l| l * l);
                let inv = invariants_of_squares(b);
                let t = self.analytic_triple(&inv).expect("invariant model");
                log_gradient_from_triple(&t, b)
            }
        };
        if g.iter().all(|x| x.is_finite()) {
            Ok(g)
        } else {
            Err(ConstitutiveError::NonFinite)
        }
    }

    /// How an injectivity question about this model is settled.
    pub fn known_invertibility(&self) -> Invertibility<T> {
        match self {
            ResponseModel::DirectIdMinusB => Invertibility::Invertible,
            ResponseModel::DirectDev3 => Invertibility::NonInjective {
                first: SymMatrix::identity(3),
                second: SymMatrix::scaled_identity(3, T::c(2.0)),
            },
            _ => Invertibility::Unknown,
        }
    }
}

fn isochoric_invariants<T: Scalar>(inv: &Invariants<T>) -> (T, T) {
    let p13 = inv.i3.powf(-T::one() / T::c(3.0));
    (inv.i1 * p13, inv.i2 * p13 * p13)
}

/// `∂W/∂ℓᵢ = 2bᵢ·(W₁ + W₂(bⱼ + bₖ) + W₃bⱼbₖ)`.
fn log_gradient_from_triple<T: Scalar>(t: &DerivativeTriple<T>, b: [T; 3]) -> [T; 3] {
    let two = T::c(2.0);
    [0, 1, 2].map(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        two * b[i] * (t.dw_di1 + t.dw_di2 * (b[j] + b[k]) + t.dw_di3 * b[j] * b[k])
    })
}

/// Inverts [`log_gradient_from_triple`] for distinct `bᵢ`.
///
/// With `pᵢ = ½∂W/∂ℓᵢ = I₃W₃ + (W₁ + I₁W₂)·bᵢ − W₂·bᵢ²`, the quadratic through
/// `(bᵢ, pᵢ)` is found by divided differences.
fn triple_from_log_gradient<T: Scalar>(b: [T; 3], g: [T; 3]) -> DerivativeTriple<T> {
    let half = T::c(0.5);
    let p = g.map(|x| half * x);
    let inv = invariants_of_squares(b);
    let d01 = (p[1] - p[0]) / (b[1] - b[0]);
    let d12 = (p[2] - p[1]) / (b[2] - b[1]);
    let c2 = (d12 - d01) / (b[2] - b[0]);
    let c1 = d01 - c2 * (b[0] + b[1]);
    let c0 = p[0] - b[0] * d01 + c2 * b[0] * b[1];
    let w2 = -c2;
    DerivativeTriple::new(c1 - inv.i1 * w2, w2, c0 / inv.i3)
}

/// Separates (near-)repeated squared stretches symmetrically about their mean
/// so that the map to invariant derivatives is well posed.
///
/// `noise` is the relative error of the stretch gradient. A pair is split by
/// `±noise^{1/3}` and a triple by `±noise^{1/4}`, which balances the `O(d²)`
/// perturbation against the `noise/d` (pair) or `noise/d²` (triple)
/// amplification of the solve.
fn split_repeated<T: Scalar>(lambdas: [T; 3], noise: T) -> ([T; 3], bool) {
    let dp = noise.cbrt();
    let dt = noise.sqrt().sqrt();
    let b = lambdas.map(|l| l * l);
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&i, &j| b[j].partial_cmp(&b[i]).unwrap());
    let near = |x: T, y: T, d: T| (x - y).abs() <= d * x.abs().max(y.abs());
    let (s0, s1, s2) = (b[idx[0]], b[idx[1]], b[idx[2]]);
    let close01 = near(s0, s1, dp);
    let close12 = near(s1, s2, dp);
    let mut out = b;
    let three = T::c(3.0);
    let triple = |out: &mut [T; 3]| {
        let a = (s0 + s1 + s2) / three;
        out[idx[0]] = a * (T::one() + dt);
        out[idx[1]] = a;
        out[idx[2]] = a * (T::one() - dt);
    };
    match (close01, close12) {
        (false, false) => return (lambdas, false),
        (true, true) => triple(&mut out),
        (true, false) => {
            let a = (s0 + s1) / T::c(2.0);
            if near(a, s2, three * dp) {
                triple(&mut out);
            } else {
                out[idx[0]] = a * (T::one() + dp);
                out[idx[1]] = a * (T::one() - dp);
            }
        }
        (false, true) => {
            let a = (s1 + s2) / T::c(2.0);
            if near(a, s0, three * dp) {
                triple(&mut out);
            } else {
                out[idx[1]] = a * (T::one() + dp);
                out[idx[2]] = a * (T::one() - dp);
            }
        }
    }
    (out.map(|x| x.sqrt()), true)
}

/// Relative accuracy assumed for central-difference stretch gradients.
const FD_NOISE: f64 = 1e-10;

/// Central differences of `W` in the stretches, scaled to `∂W/∂ℓᵢ`.
fn fd_log_gradient<T: Scalar>(
    model: &ResponseModel<T>,
    lambdas: [T; 3],
) -> Result<[T; 3], ConstitutiveError> {
    let mut g = [T::zero(); 3];
    for i in 0..3 {
        let h = T::c(1e-6).max(T::c(1e-6) * lambdas[i]);
        let mut up = lambdas;
        let mut down = lambdas;
        up[i] = up[i] + h;
        down[i] = down[i] - h;
        let d = (model.energy_at(up)? - model.energy_at(down)?) / (T::c(2.0) * h);
        g[i] = lambdas[i] * d;
    }
    Ok(g)
}

/// `∂W/∂Iₖ` at given principal stretches.
pub fn derivatives_at<T: Scalar>(
    model: &ResponseModel<T>,
    lambdas: [T; 3],
    scheme: DerivativeScheme,
) -> Result<DerivativeEstimate<T>, ConstitutiveError> {
    model.require_energy()?;
    match scheme {
        DerivativeScheme::Analytic => {
            let inv = invariants_of_squares(lambdas.map(|l| l * l));
            let triple = model
                .analytic_triple(&inv)
                .ok_or(ConstitutiveError::UnsupportedScheme {
                    model: model.tag(),
                    scheme,
                })?;
            Ok(DerivativeEstimate {
                triple,
                invariants: inv,
                reduced_accuracy: false,
            })
        }
        DerivativeScheme::FiniteDifference if model.has_invariant_form() => {
            let inv = invariants_of_squares(lambdas.map(|l| l * l));
            let x = [inv.i1, inv.i2, inv.i3];
            let mut d = [T::zero(); 3];
            for k in 0..3 {
                // purely relative: Iₖ > 0 for SPD B, and an absolute floor
                // would swamp I₃ when it is far below one
                let h = T::c(1e-6) * x[k];
                let (mut up, mut down) = (x, x);
                up[k] = up[k] + h;
                down[k] = down[k] - h;
                let w = |v: [T; 3]| model.energy_from_invariants(&Invariants::new(v[0], v[1], v[2]));
                d[k] = (w(up) - w(down)) / (T::c(2.0) * h);
            }
            if !d.iter().all(|v| v.is_finite()) {
                return Err(ConstitutiveError::NonFinite);
            }
            Ok(DerivativeEstimate {
                triple: DerivativeTriple::new(d[0], d[1], d[2]),
                invariants: inv,
                reduced_accuracy: false,
            })
        }
        DerivativeScheme::PrincipalAnalytic
        | DerivativeScheme::FiniteDifference
        | DerivativeScheme::StretchFiniteDifference => {
            let fd = scheme != DerivativeScheme::PrincipalAnalytic;
            let noise = if fd {
                T::c(FD_NOISE).max(T::epsilon())
            } else {
                T::epsilon()
            };
            let (l, reduced_accuracy) = split_repeated(lambdas, noise);
            let g = if fd {
                fd_log_gradient(model, l)?
            } else {
                model.log_gradient(l)?
            };
            let b = l.map(|x| x * x);
            let triple = triple_from_log_gradient(b, g);
            if !triple.as_array().iter().all(|x| x.is_finite()) {
                return Err(ConstitutiveError::NonFinite);
            }
            Ok(DerivativeEstimate {
                triple,
                invariants: invariants_of_squares(b),
                reduced_accuracy,
            })
        }
    }
}

/// Scheme used when none is requested.
pub fn default_scheme<T: Scalar>(model: &ResponseModel<T>) -> DerivativeScheme {
    if model.has_invariant_form() {
        DerivativeScheme::Analytic
    } else {
        DerivativeScheme::PrincipalAnalytic
    }
}

impl<T: Scalar> StressResponse<T> for ResponseModel<T> {
    fn name(&self) -> String {
        self.tag().to_string()
    }

    fn principal_stresses(&self, l: [T; 3]) -> Result<[T; 3], ConstitutiveError> {
        if !l.iter().all(|x| x.is_finite() && *x > T::zero()) {
            return Err(ConstitutiveError::NotPositiveDefinite);
        }
        let s = match self {
            ResponseModel::DirectDev3 => {
                let b = l.map(|x| x * x);
                let m = (b[0] + b[1] + b[2]) / T::c(3.0);
                b.map(|x| x - m)
            }
            ResponseModel::DirectIdMinusB => l.map(|x| T::one() - x * x),
            ResponseModel::MarzanoCounterexample => {
                let f = T::one() - marzano_h(l);
                l.map(|x| f * x - T::one())
            }
            _ => {
                let j = l[0] * l[1] * l[2];
                self.log_gradient(l)?.map(|g| g / j)
            }
        };
        if s.iter().all(|x| x.is_finite()) {
            Ok(s)
        } else {
            Err(ConstitutiveError::NonFinite)
        }
    }

    fn beta_coefficients(&self, b: &SymMatrix<T>) -> Result<BetaCoefficients<T>, ConstitutiveError> {
        if self.is_hyperelastic() {
            let est = invariant_derivatives(self, b, default_scheme(self))?;
            Ok(est.triple.beta(&est.invariants))
        } else {
            beta_from_stress(self, b)
        }
    }

    fn invariant_derivatives(
        &self,
        b: &SymMatrix<T>,
    ) -> Option<Result<DerivativeEstimate<T>, ConstitutiveError>> {
        self.is_hyperelastic()
            .then(|| invariant_derivatives(self, b, default_scheme(self)))
    }

    fn invertibility(&self) -> Invertibility<T> {
        self.known_invertibility()
    }
}

/// `W` at a principal state.
pub fn energy<T: Scalar>(
    model: &ResponseModel<T>,
    state: &PrincipalState<T>,
) -> Result<T, ConstitutiveError> {
    model.energy_at(state.lambdas)
}

/// `σ̂(B)`.
pub fn cauchy_stress<T: Scalar>(
    model: &ResponseModel<T>,
    b: &SymMatrix<T>,
) -> Result<SymMatrix<T>, ConstitutiveError> {
    model.cauchy_stress(b)
}

/// `∂W/∂Iₖ` at `B`.
pub fn invariant_derivatives<T: Scalar>(
    model: &ResponseModel<T>,
    b: &SymMatrix<T>,
    scheme: DerivativeScheme,
) -> Result<DerivativeEstimate<T>, ConstitutiveError> {
    let state = PrincipalState::from_b(b)?;
    derivatives_at(model, state.lambdas, scheme)
}

/// β at `B`: from invariant derivatives for hyperelastic models, from the
/// Vandermonde fit of the stress otherwise.
pub fn beta_coefficients<T: Scalar>(
    model: &ResponseModel<T>,
    b: &SymMatrix<T>,
) -> Result<BetaCoefficients<T>, ConstitutiveError> {
    model.beta_coefficients(b)
}

/// β from invariant derivatives obtained with an explicit scheme.
pub fn beta_coefficients_with<T: Scalar>(
    model: &ResponseModel<T>,
    b: &SymMatrix<T>,
    scheme: DerivativeScheme,
) -> Result<BetaCoefficients<T>, ConstitutiveError> {
    let est = invariant_derivatives(model, b, scheme)?;
    Ok(est.triple.beta(&est.invariants))
}

/// Root mean square length of deformed unit vectors, `√(tr B / 3)`.
pub fn average_deformed_length<T: Scalar>(b: &SymMatrix<T>) -> T {
    (b.trace() / T::c(b.dim() as f64)).sqrt()
}

#[cfg(test)]
mod tests;
