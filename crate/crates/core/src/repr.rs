//! Polynomial representations of coaxial pairs.
//!
//! If `A` is coaxial to `B`, then `B = Σₖ γₖ·Aᵏ`, with the coefficients
//! obtained from a Vandermonde system on the distinct eigenvalues of `A`.
//! For `B ∈ PSym(3)` Cayley–Hamilton turns this into
//! `σ = β₀·id + β₁·B + β₋₁·B⁻¹`, and if `σ` is coaxial to `B` the same
//! construction gives the semi-inverse `B = ψ₀·id + ψ₁·σ + ψ₂·σ²`.
//!
//! Repeated eigenvalues make the coefficients non-unique; the minimal degree
//! solution is returned and higher coefficients are zero.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::symmat::{
    simultaneous_diagonalize, Invariants, Matrix, SimultaneousDiagonalization, SymMatError,
    SymMatrix, Tolerance,
};

/// Vandermonde condition estimates above this value are flagged.
pub const ILL_CONDITIONED: f64 = 1e12;

/// Relative reconstruction residual accepted when validating ψ.
pub const PSI_VALIDATION_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReprError {
    #[error("first matrix is not coaxial to the second")]
    NotCoaxial,
    #[error("degenerate coefficients ({0}); use the direct Vandermonde route")]
    Degenerate(&'static str),
    #[error("Cayley–Hamilton reduction needs n = 3, got {0}")]
    UnsupportedDimension(usize),
    #[error("singular Vandermonde system")]
    SingularVandermonde,
    #[error(transparent)]
    Matrix(#[from] SymMatError),
}

/// Power-basis coefficients with `B = Σₖ γₖ·Aᵏ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GammaCoefficients<T> {
    pub gamma: Vec<T>,
    /// 1-norm condition estimate of the Vandermonde matrix that was solved.
    pub condition: T,
}

impl<T: Scalar> GammaCoefficients<T> {
    pub fn is_ill_conditioned(&self) -> bool {
        self.condition > T::c(ILL_CONDITIONED)
    }

    /// `Σₖ γₖ·Aᵏ`.
    pub fn evaluate(&self, a: &SymMatrix<T>) -> SymMatrix<T> {
        let mut acc = SymMatrix::zeros(a.dim());
        let mut power = SymMatrix::identity(a.dim());
        for (k, g) in self.gamma.iter().enumerate() {
            if k > 0 {
                power = SymMatrix::symmetric_part(&power.matmul(a));
            }
            acc = acc + power * *g;
        }
        acc
    }
}

/// Coefficients of `σ = β₀·id + β₁·B + β₋₁·B⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BetaCoefficients<T> {
    #[serde(rename = "beta_m1")]
    pub beta_m1: T,
    #[serde(rename = "beta_0")]
    pub beta_0: T,
    #[serde(rename = "beta_1")]
    pub beta_1: T,
}

impl<T: Scalar> BetaCoefficients<T> {
    pub fn new(beta_m1: T, beta_0: T, beta_1: T) -> Self {
        Self {
            beta_m1,
            beta_0,
            beta_1,
        }
    }

    pub fn evaluate(&self, b: &SymMatrix<T>) -> Result<SymMatrix<T>, SymMatError> {
        let n = b.dim();
        Ok(SymMatrix::scaled_identity(n, self.beta_0)
            + *b * self.beta_1
            + b.inverse()? * self.beta_m1)
    }

    pub fn max_abs(&self) -> T {
        self.beta_m1.abs().max(self.beta_0.abs()).max(self.beta_1.abs())
    }
}

/// Coefficients of the semi-inverse `B = ψ₀·id + ψ₁·σ + ψ₂·σ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PsiCoefficients<T> {
    pub psi_0: T,
    pub psi_1: T,
    pub psi_2: T,
}

impl<T: Scalar> PsiCoefficients<T> {
    pub fn new(psi_0: T, psi_1: T, psi_2: T) -> Self {
        Self {
            psi_0,
            psi_1,
            psi_2,
        }
    }

    pub fn evaluate(&self, sigma: &SymMatrix<T>) -> SymMatrix<T> {
        SymMatrix::scaled_identity(sigma.dim(), self.psi_0)
            + *sigma * self.psi_1
            + sigma.square() * self.psi_2
    }

    /// `‖B − (ψ₀·id + ψ₁·σ + ψ₂·σ²)‖ / ‖B‖` (Frobenius).
    pub fn relative_residual(&self, b: &SymMatrix<T>, sigma: &SymMatrix<T>) -> T {
        let norm = b.frobenius_norm();
        let r = (*b - self.evaluate(sigma)).frobenius_norm();
        if norm > T::zero() {
            r / norm
        } else {
            r
        }
    }

    fn max_abs_diff(&self, other: &Self) -> T {
        (self.psi_0 - other.psi_0)
            .abs()
            .max((self.psi_1 - other.psi_1).abs())
            .max((self.psi_2 - other.psi_2).abs())
    }

    fn max_abs(&self) -> T {
        self.psi_0.abs().max(self.psi_1.abs()).max(self.psi_2.abs())
    }
}

/// Fits `b = Σₖ γₖ·aᵏ` on the clusters of `a`, zero-padding to `pad`
/// coefficients.
fn fit_on_clusters<T: Scalar>(
    sd: &SimultaneousDiagonalization<T>,
    pad: usize,
) -> Result<GammaCoefficients<T>, ReprError> {
    let mean = |idx: &Vec<usize>, v: &[T]| {
        idx.iter().fold(T::zero(), |s, &i| s + v[i]) / T::c(idx.len() as f64)
    };
    let nodes: Vec<T> = sd.a_clusters.iter().map(|c| mean(c, &sd.a)).collect();
    let targets: Vec<T> = sd.a_clusters.iter().map(|c| mean(c, &sd.b)).collect();
    let m = nodes.len();
    let rows: Vec<Vec<T>> = nodes
        .iter()
        .map(|&x| (0..m).map(|k| x.powi(k as i32)).collect())
        .collect();
    let v = Matrix::from_rows(&rows);
    // Newton divided differences are more accurate than an LU solve of the
    // Vandermonde matrix when nodes are large and close together.
    let mut c = targets.clone();
    for j in 1..m {
        for i in (j..m).rev() {
            let dx = nodes[i] - nodes[i - j];
            if dx == T::zero() {
                return Err(ReprError::SingularVandermonde);
            }
            c[i] = (c[i] - c[i - 1]) / dx;
        }
    }
    // expand c₀ + c₁(x − x₀) + c₂(x − x₀)(x − x₁) + … into monomials
    let mut gamma = vec![c[m - 1]];
    for k in (0..m - 1).rev() {
        let mut next = vec![T::zero(); gamma.len() + 1];
        for (d, g) in gamma.iter().enumerate() {
            next[d + 1] = next[d + 1] + *g;
            next[d] = next[d] - nodes[k] * *g;
        }
        next[0] = next[0] + c[k];
        gamma = next;
    }
    if !gamma.iter().all(|g| g.is_finite()) {
        return Err(ReprError::SingularVandermonde);
    }
    gamma.resize(pad.max(m), T::zero());
    Ok(GammaCoefficients {
        gamma,
        condition: v.condition_1(),
    })
}

fn coaxial_pair<T: Scalar>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<SimultaneousDiagonalization<T>, ReprError> {
    let sd = match simultaneous_diagonalize(a, b, tol) {
        Ok(sd) => sd,
        Err(SymMatError::NotCommuting { .. }) => return Err(ReprError::NotCoaxial),
        Err(e) => return Err(e.into()),
    };
    if sd.b_constant_on_a_clusters(tol) {
        Ok(sd)
    } else {
        Err(ReprError::NotCoaxial)
    }
}

/// Coefficients `γ₀, …, γₙ₋₁` with `B = Σₖ γₖ·Aᵏ`, for `A` coaxial to `B`.
pub fn gamma_coefficients<T: Scalar>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<GammaCoefficients<T>, ReprError> {
    let sd = coaxial_pair(a, b, tol)?;
    fit_on_clusters(&sd, a.dim())
}

/// Rewrites `γ₀ + γ₁B + γ₂B²` as `β₀ + β₁B + β₋₁B⁻¹` using
/// `B² = I₁B − I₂·id + I₃B⁻¹`.
pub fn beta_from_gamma<T: Scalar>(
    g: &GammaCoefficients<T>,
    inv: &Invariants<T>,
) -> Result<BetaCoefficients<T>, ReprError> {
    if g.gamma.len() != 3 {
        return Err(ReprError::UnsupportedDimension(g.gamma.len()));
    }
    if inv.i3 == T::zero() {
        return Err(ReprError::Matrix(SymMatError::Singular));
    }
    let (g0, g1, g2) = (g.gamma[0], g.gamma[1], g.gamma[2]);
    Ok(BetaCoefficients {
        beta_m1: g2 * inv.i3,
        beta_0: g0 - g2 * inv.i2,
        beta_1: g1 + g2 * inv.i1,
    })
}

/// The classical closed-form ψ expressions in β and the invariants, taken
/// verbatim and read in order as `(ψ₀, ψ₁, ψ₂)`.
///
/// The `ψ₀` numerator carries `I₁β₋₁²`; the exact coefficient is
/// `(I₁/I₃)β₋₁²`, so the result is exact only when `I₃ = 1`. Not validated;
/// see [`psi_from_beta`].
pub fn psi_closed_form<T: Scalar>(
    beta: &BetaCoefficients<T>,
    inv: &Invariants<T>,
) -> Result<PsiCoefficients<T>, ReprError> {
    let (bm, b0, b1) = (beta.beta_m1, beta.beta_0, beta.beta_1);
    let (i1, i2, i3) = (inv.i1, inv.i2, inv.i3);
    let scale = beta.max_abs();
    if scale == T::zero() || bm.abs() <= T::epsilon() * scale {
        return Err(ReprError::Degenerate("beta_m1 = 0"));
    }
    let two = T::c(2.0);
    let a = i1 * b1 * b1 - i3 * b1 * b1 * b1 / bm + bm * bm / i3 - i2 / i3 * b1 * bm;
    let a_scale = (i1 * b1 * b1).abs()
        + (i3 * b1 * b1 * b1 / bm).abs()
        + (bm * bm / i3).abs()
        + (i2 / i3 * b1 * bm).abs();
    if !a.is_finite() || a.abs() <= T::c(64.0) * T::epsilon() * a_scale {
        return Err(ReprError::Degenerate("A = 0"));
    }
    let psi_0 = (b0 * b0 - two * bm * b1
        + i2 * b1 * b1
        + i3 * b0 * b1 * b1 / bm
        + i1 * bm * bm
        + i2 / i3 * b0 * bm)
        / a;
    let psi_1 = -(two * b0 + i3 * b1 * b1 / bm + i2 / i3 * bm) / a;
    let psi_2 = T::one() / a;
    Ok(PsiCoefficients::new(psi_0, psi_1, psi_2))
}

/// Outcome of [`psi_from_beta`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct PsiFromBeta<T> {
    /// Validated coefficients: the closed-form values if they reconstruct
    /// `B`, otherwise the direct Vandermonde solution.
    pub psi: PsiCoefficients<T>,
    /// Raw output of the closed form.
    pub closed_form: PsiCoefficients<T>,
    /// Relative reconstruction residual of `closed_form`.
    pub closed_form_residual: T,
    /// Max-norm difference `closed_form − direct`, relative to `max(1, |direct|)`.
    pub deviation_from_direct: Option<T>,
    /// Set when the closed form failed validation.
    pub formula_discrepancy: bool,
}

/// ψ from β via the closed-form expressions, validated against
/// [`psi_direct`] before being returned.
pub fn psi_from_beta<T: Scalar>(
    beta: &BetaCoefficients<T>,
    b: &SymMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<PsiFromBeta<T>, ReprError> {
    let inv = b.invariants()?;
    let closed_form = psi_closed_form(beta, &inv)?;
    let sigma = beta.evaluate(b)?;
    let closed_form_residual = closed_form.relative_residual(b, &sigma);
    let direct = psi_direct(b, &sigma, tol).ok();
    let deviation_from_direct = direct
        .as_ref()
        .map(|d| closed_form.max_abs_diff(d) / d.max_abs().max(T::one()));
    let closed_form_ok = closed_form_residual.is_finite() && closed_form_residual <= T::c(PSI_VALIDATION_TOL);
    let (psi, formula_discrepancy) = match (closed_form_ok, direct) {
        (true, _) => (closed_form, false),
        (false, Some(d)) => (d, true),
        (false, None) => return Err(ReprError::NotCoaxial),
    };
    Ok(PsiFromBeta {
        psi,
        closed_form,
        closed_form_residual,
        deviation_from_direct,
        formula_discrepancy,
    })
}

/// ψ by solving the Vandermonde system of `B`'s eigenvalues on the distinct
/// eigenvalues of `σ`. Fails exactly when `σ` is not coaxial to `B`.
pub fn psi_direct<T: Scalar>(
    b: &SymMatrix<T>,
    sigma: &SymMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<PsiCoefficients<T>, ReprError> {
    let sd = coaxial_pair(sigma, b, tol)?;
    let g = fit_on_clusters(&sd, 3)?;
    if g.gamma.len() > 3 {
        return Err(ReprError::UnsupportedDimension(g.gamma.len()));
    }
    Ok(PsiCoefficients::new(g.gamma[0], g.gamma[1], g.gamma[2]))
}
