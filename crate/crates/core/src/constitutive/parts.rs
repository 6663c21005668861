use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Volumetric energy `f(I₃)`. Every variant satisfies `f′(1) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound = "T: Scalar")]
pub enum Volumetric<T> {
    Zero,
    /// `(κ/8)·(log I₃)²`, i.e. `(κ/2)·(log J)²`.
    LogSquared { kappa: T },
    /// `(κ/2)·(J − 1)²` with `J = √I₃`.
    QuadraticJ { kappa: T },
}

impl<T: Scalar> Default for Volumetric<T> {
    fn default() -> Self {
        Volumetric::LogSquared { kappa: T::one() }
    }
}

impl<T: Scalar> Volumetric<T> {
    pub fn validate(&self) -> Result<(), &'static str> {
        match *self {
            Volumetric::Zero => Ok(()),
            Volumetric::LogSquared { kappa } | Volumetric::QuadraticJ { kappa } => {
                if kappa.is_finite() && kappa >= T::zero() {
                    Ok(())
                } else {
                    Err("volumetric kappa must be finite and non-negative")
                }
            }
        }
    }

    pub fn value(&self, i3: T) -> T {
        match *self {
            Volumetric::Zero => T::zero(),
            Volumetric::LogSquared { kappa } => kappa / T::c(8.0) * i3.ln().powi(2),
            Volumetric::QuadraticJ { kappa } => kappa / T::c(2.0) * (i3.sqrt() - T::one()).powi(2),
        }
    }

    /// `f′(I₃)`.
    pub fn d1(&self, i3: T) -> T {
        match *self {
            Volumetric::Zero => T::zero(),
            Volumetric::LogSquared { kappa } => kappa / T::c(4.0) * i3.ln() / i3,
            Volumetric::QuadraticJ { kappa } => {
                let j = i3.sqrt();
                kappa / T::c(2.0) * (j - T::one()) / j
            }
        }
    }
}

/// Strictly increasing scalar map applied to `‖log U‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound = "T: Scalar")]
pub enum LogNormMap<T> {
    /// `c·s`
    Linear { c: T },
    /// `exp(k·s)`
    Exp { k: T },
    /// `log(1 + c·s)`
    Log1p { c: T },
}

impl<T: Scalar> LogNormMap<T> {
    pub fn validate(&self) -> Result<(), &'static str> {
        let p = match *self {
            LogNormMap::Linear { c } | LogNormMap::Log1p { c } => c,
            LogNormMap::Exp { k } => k,
        };
        if p.is_finite() && p > T::zero() {
            Ok(())
        } else {
            Err("log-norm map parameter must be positive")
        }
    }

    pub fn value(&self, s: T) -> T {
        match *self {
            LogNormMap::Linear { c } => c * s,
            LogNormMap::Exp { k } => (k * s).exp(),
            LogNormMap::Log1p { c } => (c * s).ln_1p(),
        }
    }

    pub fn d1(&self, s: T) -> T {
        match *self {
            LogNormMap::Linear { c } => c,
            LogNormMap::Exp { k } => k * (k * s).exp(),
            LogNormMap::Log1p { c } => c / (T::one() + c * s),
        }
    }
}

/// Kernel `𝒲(x₁, x₂)` of a Hencky-type energy, with
/// `x₁ = ‖dev log U‖²` and `x₂ = (tr log U)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound = "T: Scalar")]
pub enum HenckyKernel<T> {
    /// `μ·x₁ + (κ/2)·x₂`
    Quadratic { mu: T, kappa: T },
    /// `(μ/k)·exp(k·x₁) + (κ/2)·x₂`
    ExpDeviatoric { mu: T, k: T, kappa: T },
    /// `μ·log(1 + x₁) + (κ/2)·x₂`
    Log1pDeviatoric { mu: T, kappa: T },
}

impl<T: Scalar> HenckyKernel<T> {
    pub fn validate(&self) -> Result<(), &'static str> {
        let (mu, k, kappa) = match *self {
            HenckyKernel::Quadratic { mu, kappa } | HenckyKernel::Log1pDeviatoric { mu, kappa } => {
                (mu, T::one(), kappa)
            }
            HenckyKernel::ExpDeviatoric { mu, k, kappa } => (mu, k, kappa),
        };
        if !(mu.is_finite() && mu > T::zero()) {
            return Err("kernel mu must be positive");
        }
        if !(k.is_finite() && k > T::zero()) {
            return Err("kernel k must be positive");
        }
        if !(kappa.is_finite() && kappa >= T::zero()) {
            return Err("kernel kappa must be non-negative");
        }
        Ok(())
    }

    pub fn value(&self, x1: T, x2: T) -> T {
        let half = T::c(0.5);
        match *self {
            HenckyKernel::Quadratic { mu, kappa } => mu * x1 + half * kappa * x2,
            HenckyKernel::ExpDeviatoric { mu, k, kappa } => mu / k * (k * x1).exp() + half * kappa * x2,
            HenckyKernel::Log1pDeviatoric { mu, kappa } => mu * x1.ln_1p() + half * kappa * x2,
        }
    }

    /// `(∂𝒲/∂x₁, ∂𝒲/∂x₂)`
    pub fn gradient(&self, x1: T, _x2: T) -> (T, T) {
        let half = T::c(0.5);
        match *self {
            HenckyKernel::Quadratic { mu, kappa } => (mu, half * kappa),
            HenckyKernel::ExpDeviatoric { mu, k, kappa } => (mu * (k * x1).exp(), half * kappa),
            HenckyKernel::Log1pDeviatoric { mu, kappa } => (mu / (T::one() + x1), half * kappa),
        }
    }
}

/// Isochoric energy in `J₁ = I₁·I₃^{-1/3}` and `J₂ = I₂·I₃^{-2/3}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound = "T: Scalar")]
pub enum IsochoricPart<T> {
    /// `(μ/2)·(J₁ − 3)`
    NeoHooke { mu: T },
    /// `c₁·(J₁ − 3) + c₂·(J₂ − 3)`
    MooneyRivlin { c1: T, c2: T },
}

impl<T: Scalar> IsochoricPart<T> {
    pub fn validate(&self) -> Result<(), &'static str> {
        match *self {
            IsochoricPart::NeoHooke { mu } if mu.is_finite() && mu > T::zero() => Ok(()),
            IsochoricPart::NeoHooke { .. } => Err("iso mu must be positive"),
            IsochoricPart::MooneyRivlin { c1, c2 }
                if c1.is_finite() && c2.is_finite() && c1 >= T::zero() && c2 >= T::zero() && c1 + c2 > T::zero() =>
            {
                Ok(())
            }
            IsochoricPart::MooneyRivlin { .. } => Err("iso c1, c2 must be non-negative and not both zero"),
        }
    }

    pub fn value(&self, j1: T, j2: T) -> T {
        let three = T::c(3.0);
        match *self {
            IsochoricPart::NeoHooke { mu } => mu / T::c(2.0) * (j1 - three),
            IsochoricPart::MooneyRivlin { c1, c2 } => c1 * (j1 - three) + c2 * (j2 - three),
        }
    }

    /// `(∂W_iso/∂J₁, ∂W_iso/∂J₂)`
    pub fn gradient(&self) -> (T, T) {
        match *self {
            IsochoricPart::NeoHooke { mu } => (mu / T::c(2.0), T::zero()),
            IsochoricPart::MooneyRivlin { c1, c2 } => (c1, c2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
        let h = 1e-6 * x.abs().max(1.0);
        (f(x + h) - f(x - h)) / (2.0 * h)
    }

    #[test]
    fn volumetric_stress_free_and_derivative() {
        for v in [
            Volumetric::Zero,
            Volumetric::LogSquared { kappa: 2.0 },
            Volumetric::QuadraticJ { kappa: 3.0 },
        ] {
            assert_eq!(v.d1(1.0), 0.0);
            for x in [0.3, 1.7, 8.0] {
                assert!((v.d1(x) - fd(|y| v.value(y), x)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn scalar_maps_increasing() {
        for f in [
            LogNormMap::Linear { c: 2.0 },
            LogNormMap::Exp { k: 0.5 },
            LogNormMap::Log1p { c: 1.5 },
        ] {
            assert!(f.d1(0.0) > 0.0);
            for s in [0.4, 3.0] {
                assert!(f.d1(s) > 0.0);
                assert!((f.d1(s) - fd(|y| f.value(y), s)).abs() < 1e-6);
            }
        }
        assert!(LogNormMap::Exp { k: 0.0 }.validate().is_err());
    }

    #[test]
    fn kernel_gradients() {
        for w in [
            HenckyKernel::Quadratic { mu: 1.0, kappa: 2.0 },
            HenckyKernel::ExpDeviatoric { mu: 1.0, k: 0.7, kappa: 2.0 },
            HenckyKernel::Log1pDeviatoric { mu: 1.0, kappa: 2.0 },
        ] {
            let (x1, x2) = (0.4, 0.9);
            let (g1, g2) = w.gradient(x1, x2);
            assert!((g1 - fd(|y| w.value(y, x2), x1)).abs() < 1e-8);
            assert!((g2 - fd(|y| w.value(x1, y), x2)).abs() < 1e-8);
        }
    }
}
