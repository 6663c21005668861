use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::symmat::{Matrix, SymMatrix};

/// How stretch states `B = Q·diag(λ²)·Qᵀ` are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", default)]
pub struct SampleSpec<T> {
    /// Number of random states.
    pub count: usize,
    /// Range of the principal stretches `λᵢ`.
    pub lambda_range: (T, T),
    pub log_uniform: bool,
    pub seed: u64,
    /// Drop states in `ℝ₊·id`.
    pub exclude_spherical: bool,
    /// Prepend the uniaxial, equibiaxial, volumetric and simple-shear
    /// families.
    pub structured: bool,
}

impl<T: Scalar> Default for SampleSpec<T> {
    fn default() -> Self {
        Self {
            count: 10_000,
            lambda_range: (T::c(0.2), T::c(5.0)),
            log_uniform: true,
            seed: 7,
            exclude_spherical: true,
            structured: true,
        }
    }
}

const FAMILY_POINTS: usize = 8;
const SHEARS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

/// Uniformly distributed rotation: Gram–Schmidt on Gaussian columns, with
/// the last column flipped if needed so that `det Q = +1`.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Matrix<f64> {
    loop {
        let mut cols: Vec<Vec<f64>> = (0..3)
            .map(|_| (0..3).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        let mut ok = true;
        for j in 0..3 {
            // two projection passes keep orthogonality at rounding level
            for _ in 0..2 {
                for k in 0..j {
                    let d: f64 = (0..3).map(|i| cols[j][i] * cols[k][i]).sum();
                    for i in 0..3 {
                        cols[j][i] -= d * cols[k][i];
                    }
                }
            }
            let n = cols[j].iter().map(|x| x * x).sum::<f64>().sqrt();
            if n < 1e-8 {
                ok = false;
                break;
            }
            cols[j].iter_mut().for_each(|x| *x /= n);
        }
        if !ok {
            continue;
        }
        let mut q = Matrix::from_columns(&cols);
        if q.determinant() < 0.0 {
            for i in 0..3 {
                q[(i, 2)] = -q[(i, 2)];
            }
        }
        return q;
    }
}

fn state<T: Scalar>(lambdas: [f64; 3], q: &Matrix<f64>) -> SymMatrix<T> {
    SymMatrix::diag(&lambdas.map(|l| l * l))
        .expect("three entries")
        .congruence(q)
        .cast()
}

impl<T: Scalar> SampleSpec<T> {
    pub fn with_count(count: usize, seed: u64) -> Self {
        Self {
            count,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let (lo, hi) = self.lambda_range;
        if !(lo > T::zero() && lo < hi && hi.is_finite()) {
            return Err(format!("lambda range must satisfy 0 < low < high, got ({lo}, {hi})"));
        }
        if self.count == 0 {
            return Err("sample count must be at least 1".into());
        }
        Ok(())
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> f64 {
        let (lo, hi) = (self.lambda_range.0.to_f64_lossy(), self.lambda_range.1.to_f64_lossy());
        if self.log_uniform {
            rng.random_range(lo.ln()..hi.ln()).exp()
        } else {
            rng.random_range(lo..hi)
        }
    }

    /// Structured states: each family on a geometric grid of the stretch
    /// range, once axis-aligned and once randomly rotated.
    fn families(&self, rng: &mut ChaCha8Rng) -> Vec<SymMatrix<T>> {
        let (lo, hi) = (self.lambda_range.0.to_f64_lossy(), self.lambda_range.1.to_f64_lossy());
        let grid: Vec<f64> = (0..FAMILY_POINTS)
            .map(|k| lo * (hi / lo).powf((k as f64 + 0.5) / FAMILY_POINTS as f64))
            .filter(|g| (g - 1.0).abs() > 1e-6)
            .collect();
        let mut shapes: Vec<[f64; 3]> = Vec::new();
        for &g in &grid {
            shapes.push([g, 1.0, 1.0]);
            shapes.push([g, g, 1.0]);
            if !self.exclude_spherical {
                shapes.push([g, g, g]);
            }
        }
        let mut out = Vec::new();
        let id = Matrix::identity(3);
        for s in shapes {
            out.push(state(s, &id));
            out.push(state(s, &random_rotation(rng)));
        }
        for gamma in SHEARS {
            // F = id + γ e₁⊗e₂, B = F·Fᵀ; principal stretches are √(1 + γ²/4) ± γ/2
            let top = (1.0 + 0.25 * gamma * gamma).sqrt() + 0.5 * gamma;
            if top > hi || 1.0 / top < lo {
                continue;
            }
            let b = SymMatrix::from_components(&[1.0 + gamma * gamma, 1.0, 1.0, gamma, 0.0, 0.0])
                .expect("six components");
            out.push(b.cast());
        }
        out
    }

    /// Deterministic list of states for this spec.
    pub fn generate(&self) -> Vec<SymMatrix<T>> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = if self.structured {
            self.families(&mut rng)
        } else {
            Vec::new()
        };
        out.reserve(self.count);
        for _ in 0..self.count {
            let l = [self.draw(&mut rng), self.draw(&mut rng), self.draw(&mut rng)];
            let q = random_rotation(&mut rng);
            out.push(state(l, &q));
        }
        out
    }
}
