//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type usable by the crate: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts a literal. Panics only if `x` is not representable, which
    /// cannot happen for the finite constants used in this crate.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("constant representable in scalar type")
    }

    /// Relative tolerance below which two eigenvalues are treated as equal.
    fn default_cluster_tol() -> Self {
        Self::c(1e-8).max(Self::epsilon() * Self::c(100.0))
    }

    /// Absolute floor for eigenvalue clustering.
    fn cluster_abs_floor() -> Self {
        Self::c(1e-12).max(Self::epsilon() * Self::c(10.0))
    }

    /// Relative commutator tolerance.
    fn default_commutator_tol() -> Self {
        Self::c(1e-10).max(Self::epsilon() * Self::c(1000.0))
    }

    /// Off-diagonal threshold for the Jacobi eigensolver, relative to ‖A‖.
    fn jacobi_threshold() -> Self {
        Self::c(1e-14).max(Self::epsilon() * Self::c(4.0))
    }

    /// Width of the sign-test band used by the inequality checks.
    fn sign_band() -> Self {
        Self::c(1e-10).max(Self::epsilon() * Self::c(1000.0))
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
