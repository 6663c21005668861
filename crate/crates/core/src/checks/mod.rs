//! Verifiers for the constitutive inequalities and the sampled audit of
//!
//! ```text
//! E-TSS ⟹ WE-TSS ⟹ BE⁺ ⟹ bi-coaxial ⟺ semi-invertible
//! ```
//!
//! Universal statements over `PSym(3)` are approximated by seeded sampling
//! (see [`SampleSpec`]); every report states how many states were tested.
//! Sign tests use the band `b·(1 + scale)` with `b = 1e-10`: "non-strict"
//! allows `margin ≥ −b·(1 + scale)`, "strict" demands `margin > b·(1 + scale)`.

mod audit;
mod point;
mod probes;
mod regression;
mod sampling;
mod ssli;
mod summary;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::symmat::SymMatrix;

pub use audit::{
    implication_audit, run_check, ChainViolation, NonImplication, AuditReport, CheckOptions,
};
pub use point::{
    check_be, check_be_pair, check_be_plus, check_be_plus_pair, check_bicoax, check_etss,
    check_etss_beta, check_semi_invertibility, check_semi_pair, check_wetss, check_wetss_beta,
    check_wetss_derivatives, is_spherical, replay_witness, PointCheck, PointVerdict,
    SEMI_RESIDUAL_TOL,
};
pub use probes::{
    ProbeError,
    expansion_etss_probe, marzano_uniaxial_demo, volumetric_etss_probe, UniaxialSolution,
    VolumetricPoint, VolumetricProbe,
};
pub use regression::{examples_regression, RegressionCase, RegressionReport, REGRESSION_CASES};
pub use sampling::{random_rotation, SampleSpec};
pub use ssli::{ssli_check, ssli_fuzz, SsliFuzzReport, SsliOutcome};
pub use summary::summary_table;

/// Properties a response can be tested for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Inequality {
    #[serde(rename = "BE")]
    Be,
    #[serde(rename = "BEplus")]
    BePlus,
    #[serde(rename = "ETSS")]
    Etss,
    #[serde(rename = "WETSS")]
    Wetss,
    #[serde(rename = "BICOAX")]
    Bicoax,
    #[serde(rename = "SEMI")]
    Semi,
    #[serde(rename = "INVERT-witness")]
    InvertWitness,
}

impl Inequality {
    pub const ALL: [Inequality; 7] = [
        Inequality::Etss,
        Inequality::Wetss,
        Inequality::BePlus,
        Inequality::Be,
        Inequality::Bicoax,
        Inequality::Semi,
        Inequality::InvertWitness,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Inequality::Be => "BE",
            Inequality::BePlus => "BEplus",
            Inequality::Etss => "ETSS",
            Inequality::Wetss => "WETSS",
            Inequality::Bicoax => "BICOAX",
            Inequality::Semi => "SEMI",
            Inequality::InvertWitness => "INVERT-witness",
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Inequality {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "be" => Inequality::Be,
            "be+" | "beplus" => Inequality::BePlus,
            "etss" => Inequality::Etss,
            "wetss" => Inequality::Wetss,
            "bicoax" | "bicoaxial" => Inequality::Bicoax,
            "semi" | "semiinvertible" => Inequality::Semi,
            "invert" | "invertwitness" | "invertible" => Inequality::InvertWitness,
            _ => return Err(format!("unknown check `{s}`")),
        })
    }
}

/// Outcome of a sampled check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnSample,
    Fails,
    /// Nothing could be decided, e.g. injectivity of a model with no known
    /// witness either way.
    Undetermined,
}

/// A state at which a check failed, with the data needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Witness<T> {
    pub b: SymMatrix<T>,
    pub sigma: SymMatrix<T>,
    pub margins: Vec<T>,
    /// Index in the sample list, if the state came from a sample.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct CheckReport<T> {
    pub model: String,
    pub inequality: Inequality,
    pub verdict: Verdict,
    pub samples_tested: usize,
    /// Samples excluded by definition (spherical states for WE-TSS).
    pub skipped: usize,
    pub failures: usize,
    pub witnesses: Vec<Witness<T>>,
    /// WE-TSS only: whether one fixed inequality was strict at every
    /// non-spherical sample.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub uniform_strictness: Option<bool>,
    pub notes: Vec<String>,
}

impl<T: Scalar> CheckReport<T> {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnSample
    }
}
