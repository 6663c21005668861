use super::{Invariants, SymMatError};
use crate::scalar::Scalar;

fn invalid<T: Scalar>(inv: Invariants<T>, reason: &'static str) -> SymMatError {
    SymMatError::InvalidInvariants {
        i1: inv.i1.to_f64_lossy(),
        i2: inv.i2.to_f64_lossy(),
        i3: inv.i3.to_f64_lossy(),
        reason,
    }
}

/// Roots of `x³ − I₁x² + I₂x − I₃`, i.e. the eigenvalues of the SPD matrix
/// with the given principal invariants, sorted descending.
///
/// Uses the trigonometric form of the depressed cubic with the `acos`
/// argument clamped to `[−1, 1]`, followed by a guarded Newton polish.
pub fn eigenvalues_from_invariants<T: Scalar>(inv: Invariants<T>) -> Result<[T; 3], SymMatError> {
    let (i1, i2, i3) = (inv.i1, inv.i2, inv.i3);
    if !(i1.is_finite() && i2.is_finite() && i3.is_finite()) {
        return Err(invalid(inv, "non-finite invariants"));
    }
    let three = T::c(3.0);
    let shift = i1 / three;
    // x = t + I₁/3 gives t³ + p·t + q = 0.
    let p = i2 - i1 * i1 / three;
    let q = -T::c(2.0) * i1 * i1 * i1 / T::c(27.0) + i1 * i2 / three - i3;

    let scale = T::one().max(i1.abs()).max(i2.abs().sqrt()).max(i3.abs().cbrt());
    let slack = T::c(1e-10).max(T::epsilon() * T::c(1e3));
    if p > slack * scale * scale {
        return Err(invalid(inv, "characteristic cubic has complex roots"));
    }

    let mut roots = if p >= -T::epsilon() * scale * scale {
        // Triple root.
        if q.abs() > slack * scale * scale * scale {
            return Err(invalid(inv, "characteristic cubic has complex roots"));
        }
        [shift; 3]
    } else {
        let m = T::c(2.0) * (-p / three).sqrt();
        let arg = three * q / (p * m);
        if arg.abs() > T::one() + slack.sqrt() {
            return Err(invalid(inv, "characteristic cubic has complex roots"));
        }
        let phi = arg.max(-T::one()).min(T::one()).acos() / three;
        let two_pi_3 = T::c(2.0 * std::f64::consts::PI / 3.0);
        [
            shift + m * phi.cos(),
            shift + m * (phi - two_pi_3).cos(),
            shift + m * (phi - T::c(2.0) * two_pi_3).cos(),
        ]
    };

    let poly = |x: T| ((x - i1) * x + i2) * x - i3;
    let dpoly = |x: T| (three * x - T::c(2.0) * i1) * x + i2;
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let d = dpoly(*r);
            if d.abs() <= T::epsilon() * scale * scale {
                break;
            }
            let candidate = *r - poly(*r) / d;
            if poly(candidate).abs() < poly(*r).abs() {
                *r = candidate;
            } else {
                break;
            }
        }
    }
    roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if roots[2] <= T::zero() {
        return Err(invalid(inv, "characteristic cubic has non-positive roots"));
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= tol * y.abs().max(1.0))
    }

    #[test]
    fn identity() {
        let r = eigenvalues_from_invariants(Invariants::new(3.0, 3.0, 1.0)).unwrap();
        assert!(close(r, [1.0; 3], 1e-14));
    }

    #[test]
    fn spherical() {
        let r = eigenvalues_from_invariants(Invariants::new(6.0, 12.0, 8.0)).unwrap();
        assert!(close(r, [2.0; 3], 1e-14));
    }

    #[test]
    fn double_root() {
        let r = eigenvalues_from_invariants(Invariants::new(6.0, 9.0, 4.0)).unwrap();
        assert!(close(r, [4.0, 1.0, 1.0], 1e-8));
    }

    #[test]
    fn complex_roots_rejected() {
        // x³ − x² + x − 1 = (x − 1)(x² + 1)
        assert!(eigenvalues_from_invariants(Invariants::new(1.0, 1.0, 1.0)).is_err());
    }

    #[test]
    fn non_positive_roots_rejected() {
        // roots 2, 1, −1: I₁ = 2, I₂ = 2 − 2 − 1 = −1, I₃ = −2
        assert!(eigenvalues_from_invariants(Invariants::new(2.0, -1.0, -2.0)).is_err());
    }
}
