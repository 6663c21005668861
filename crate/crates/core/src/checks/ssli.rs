//! Sum-of-squared-logarithms inequality: for positive triples with
//! `a₁+a₂+a₃ ≤ b₁+b₂+b₃`, `a₁a₂+a₁a₃+a₂a₃ ≤ b₁b₂+b₁b₃+b₂b₃` and
//! `a₁a₂a₃ = b₁b₂b₃`,
//!
//! ```text
//! (log a₁)² + (log a₂)² + (log a₃)² ≤ (log b₁)² + (log b₂)² + (log b₃)²
//! ```
//!
//! with equality only if the sorted triples coincide.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::scalar::Scalar;

/// Relative tolerance of the product constraint and of the sum comparisons.
const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SsliOutcome<T> {
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    /// `Σ(log aᵢ)² < Σ(log bᵢ)²` beyond rounding.
    pub strict: bool,
    /// Sorted triples differ beyond rounding.
    pub distinct: bool,
    pub lhs: T,
    pub rhs: T,
}

fn elementary<T: Scalar>(x: [T; 3]) -> (T, T, T) {
    (
        x[0] + x[1] + x[2],
        x[0] * x[1] + x[0] * x[2] + x[1] * x[2],
        x[0] * x[1] * x[2],
    )
}

fn sorted<T: Scalar>(mut x: [T; 3]) -> [T; 3] {
    x.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    x
}

/// Evaluates hypotheses and conclusion. Entries must be positive and finite.
pub fn ssli_check<T: Scalar>(a: [T; 3], b: [T; 3]) -> SsliOutcome<T> {
    assert!(
        a.iter().chain(&b).all(|x| x.is_finite() && *x > T::zero()),
        "entries must be positive"
    );
    let tol = T::c(REL_TOL);
    let le = |x: T, y: T| x <= y + tol * x.abs().max(y.abs());
    let (sa, pa, da) = elementary(a);
    let (sb, pb, db) = elementary(b);
    let hypotheses_hold = le(sa, sb) && le(pa, pb) && (da - db).abs() <= tol * da.max(db);
    let sq = |x: [T; 3]| x.iter().fold(T::zero(), |s, v| s + v.ln().powi(2));
    let (lhs, rhs) = (sq(a), sq(b));
    let band = tol * (T::one() + rhs);
    let (sa3, sb3) = (sorted(a), sorted(b));
    let distinct = (0..3).any(|i| (sa3[i] - sb3[i]).abs() > tol * sa3[i].max(sb3[i]));
    SsliOutcome {
        hypotheses_hold,
        conclusion_holds: lhs <= rhs + band,
        strict: lhs < rhs - band,
        distinct,
        lhs,
        rhs,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SsliFuzzReport {
    pub seed: u64,
    pub trials: usize,
    /// Generated pairs that failed the hypotheses (the generator should
    /// never produce one).
    pub hypothesis_failures: usize,
    pub conclusion_violations: usize,
    /// Pairs with distinct sorted triples where the inequality was not strict.
    pub strictness_failures: usize,
    /// Smallest `(rhs − lhs)/(1 + rhs)` observed.
    pub min_relative_gap: f64,
}

impl SsliFuzzReport {
    pub fn passed(&self) -> bool {
        self.hypothesis_failures == 0 && self.conclusion_violations == 0 && self.strictness_failures == 0
    }
}

const LOG_RANGE: f64 = 3.0;
const MAX_SHRINK: f64 = 1.0 - 1e-6;

/// A hypothesis-satisfying pair.
///
/// `log b` is uniform in `[−3, 3]³`. `log a` is `log b` pulled toward its
/// mean by a factor `t < 1`, then averaged pairwise by random T-transforms.
/// Both moves keep the mean of the logarithms and make `log a` majorized by
/// `log b`; since `Σ eˣⁱ` and `Σ e^{−xᵢ}` are Schur-convex, the sum and the
/// pairwise-product sum can only decrease while the product is preserved.
fn generate_pair(rng: &mut ChaCha8Rng) -> ([f64; 3], [f64; 3]) {
    let lb: [f64; 3] = std::array::from_fn(|_| rng.random_range(-LOG_RANGE..LOG_RANGE));
    let m = (lb[0] + lb[1] + lb[2]) / 3.0;
    let t = rng.random_range(0.0..MAX_SHRINK);
    let mut la = lb.map(|l| m + t * (l - m));
    let transforms = rng.random_range(0..3usize);
    for _ in 0..transforms {
        let i = rng.random_range(0..3usize);
        let j = (i + rng.random_range(1..3usize)) % 3;
        let w = rng.random_range(0.0..0.5);
        let (x, y) = (la[i], la[j]);
        la[i] = (1.0 - w) * x + w * y;
        la[j] = w * x + (1.0 - w) * y;
    }
    // restore the exact mean lost to rounding
    let shift = m - (la[0] + la[1] + la[2]) / 3.0;
    (la.map(|l| (l + shift).exp()), lb.map(f64::exp))
}

/// Runs the inequality on `trials` generated pairs.
pub fn ssli_fuzz(trials: usize, seed: u64) -> SsliFuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SsliFuzzReport {
        seed,
        trials,
        hypothesis_failures: 0,
        conclusion_violations: 0,
        strictness_failures: 0,
        min_relative_gap: f64::INFINITY,
    };
    for _ in 0..trials {
        let (a, b) = generate_pair(&mut rng);
        let o = ssli_check(a, b);
        if !o.hypotheses_hold {
            report.hypothesis_failures += 1;
            continue;
        }
        if !o.conclusion_holds {
            report.conclusion_violations += 1;
        }
        if o.distinct && !o.strict {
            report.strictness_failures += 1;
        }
        report.min_relative_gap = report.min_relative_gap.min((o.rhs - o.lhs) / (1.0 + o.rhs));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_against_spread() {
        let o = ssli_check([1.0, 1.0, 1.0], [2.0, 1.0, 0.5]);
        assert!(o.hypotheses_hold && o.conclusion_holds && o.strict && o.distinct);
        assert_eq!(o.lhs, 0.0);
        assert!((o.rhs - 2.0 * 2f64.ln().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn equal_triples_give_equality() {
        let o = ssli_check([3.0, 0.5, 2.0], [2.0, 3.0, 0.5]);
        assert!(o.hypotheses_hold && o.conclusion_holds);
        assert!(!o.strict && !o.distinct);
    }

    #[test]
    fn product_mismatch_breaks_hypotheses() {
        assert!(!ssli_check([1.0, 1.0, 1.0], [2.0, 1.0, 1.0]).hypotheses_hold);
    }

    #[test]
    fn fuzz_small() {
        let r = ssli_fuzz(2000, 9);
        assert!(r.passed(), "{r:?}");
        assert!(r.min_relative_gap > 0.0);
        assert_eq!(r, ssli_fuzz(2000, 9));
    }
}
