//! Coaxiality, bi-coaxiality and semi-invertibility of isotropic
//! stress–stretch relations, together with numerical verifiers for the
//! Baker–Ericksen, empirical and weak empirical inequalities.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the checks and the CLI use.
//!
//! * [`symmat`]: symmetric matrices, Jacobi eigensolver, coaxiality tests.
//! * [`repr`]: Vandermonde representations `B = Σ γₖAᵏ`, the
//!   `β₀·id + β₁·B + β₋₁·B⁻¹` form, and semi-inversion coefficients ψ.
//! * [`constitutive`]: catalog of response models and their Cauchy stress.
//! * [`checks`]: inequality verifiers, sampled implication audits and the
//!   reproduction of known examples and counterexamples.

pub mod checks;
pub mod constitutive;
pub mod repr;
pub mod scalar;
pub mod symmat;

pub use scalar::Scalar;

pub type SymMatrix = symmat::SymMatrix<f64>;
pub type SymMatrix32 = symmat::SymMatrix<f32>;
pub type Matrix = symmat::Matrix<f64>;
pub type SpectralDecomposition = symmat::SpectralDecomposition<f64>;
pub type Invariants = symmat::Invariants<f64>;
pub type Tolerance = symmat::Tolerance<f64>;
pub type GammaCoefficients = repr::GammaCoefficients<f64>;
pub type BetaCoefficients = repr::BetaCoefficients<f64>;
pub type PsiCoefficients = repr::PsiCoefficients<f64>;
pub type ResponseModel = constitutive::ResponseModel<f64>;
pub type PrincipalState = constitutive::PrincipalState<f64>;
pub type DerivativeTriple = constitutive::DerivativeTriple<f64>;
pub type CheckReport = checks::CheckReport<f64>;
pub type SampleSpec = checks::SampleSpec<f64>;
