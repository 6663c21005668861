use serde::Serialize;

use super::{Matrix, SymMatError, SymMatrix};
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 100;

/// Numerical thresholds for eigenvalue equality and commutation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance<T> {
    /// Relative tolerance `|λᵢ − λⱼ| ≤ cluster·max(1, |λᵢ|, |λⱼ|)`.
    pub cluster: T,
    /// Relative tolerance on the commutator, see [`SymMatrix::commutes`].
    pub commutator: T,
}

impl<T: Scalar> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            cluster: T::default_cluster_tol(),
            commutator: T::default_commutator_tol(),
        }
    }
}

impl<T: Scalar> Tolerance<T> {
    pub fn with_cluster(cluster: T) -> Self {
        Self {
            cluster,
            ..Self::default()
        }
    }

    /// Whether two eigenvalues count as equal.
    pub fn same(&self, a: T, b: T) -> bool {
        values_equal(a, b, self.cluster)
    }
}

pub(crate) fn values_equal<T: Scalar>(a: T, b: T, rel: T) -> bool {
    let scale = T::one().max(a.abs()).max(b.abs());
    (a - b).abs() <= (rel * scale).max(T::cluster_abs_floor())
}

/// Orthogonal eigenbasis, descending eigenvalues and their clustering.
///
/// The columns of `basis` are unit eigenvectors, so the input is
/// reconstructed as `Q·diag(λ)·Qᵀ`. Each eigenvector is oriented so that its
/// first non-negligible component is positive.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SpectralDecomposition<T> {
    basis: Matrix<T>,
    eigenvalues: Vec<T>,
    clusters: Vec<Vec<usize>>,
}

impl<T: Scalar> SpectralDecomposition<T> {
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Groups of indices into [`Self::eigenvalues`] that are equal within
    /// the cluster tolerance, in descending order.
    pub fn clusters(&self) -> &[Vec<usize>] {
        &self.clusters
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> Vec<T> {
        self.basis.column(i)
    }

    /// True when every eigenvalue is simple.
    pub fn is_simple(&self) -> bool {
        self.clusters.len() == self.eigenvalues.len()
    }

    /// Mean eigenvalue of each cluster.
    pub fn distinct_values(&self) -> Vec<T> {
        self.clusters
            .iter()
            .map(|c| mean(c.iter().map(|&i| self.eigenvalues[i])))
            .collect()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues
            .iter()
            .copied()
            .fold(T::infinity(), T::min)
    }

    /// `Q·diag(f(λ))·Qᵀ`.
    pub fn map(&self, f: impl Fn(T) -> T) -> SymMatrix<T> {
        let n = self.dim();
        let mapped: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = T::zero();
                for k in 0..n {
                    s = s + self.basis[(i, k)] * mapped[k] * self.basis[(j, k)];
                }
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn reconstruct(&self) -> SymMatrix<T> {
        self.map(|l| l)
    }
}

fn mean<T: Scalar>(values: impl Iterator<Item = T>) -> T {
    let (sum, n) = values.fold((T::zero(), 0usize), |(s, n), v| (s + v, n + 1));
    sum / T::c(n as f64)
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s = s + a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi on a symmetric dense matrix. Returns unsorted eigenvalues
/// and the accumulated rotation (columns = eigenvectors).
fn jacobi<T: Scalar>(
    input: &Matrix<T>,
    max_sweeps: usize,
) -> Result<(Vec<T>, Matrix<T>), SymMatError> {
    let n = input.dim();
    let mut a = *input;
    let mut v = Matrix::identity(n);
    let threshold = T::jacobi_threshold() * input.frobenius_norm();
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == max_sweeps {
            return Err(SymMatError::NoConvergence {
                sweeps,
                off_norm: off.to_f64_lossy(),
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (T::c(2.0) * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                // A ← JᵀAJ with J the (p, q) plane rotation.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)]).collect();
    Ok((values, v))
}

/// Jacobi followed by descending sort and the sign convention.
fn jacobi_sorted<T: Scalar>(
    input: &Matrix<T>,
    max_sweeps: usize,
) -> Result<(Vec<T>, Matrix<T>), SymMatError> {
    let (values, vectors) = jacobi(input, max_sweeps)?;
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
    let negligible = T::epsilon().sqrt();
    let mut basis = Matrix::zeros(n);
    let mut sorted = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = vectors.column(src);
        if let Some(first) = col.iter().find(|x| x.abs() > negligible) {
            if *first < T::zero() {
                col.iter_mut().for_each(|x| *x = -*x);
            }
        }
        basis.set_column(dst, &col);
        sorted.push(values[src]);
    }
    Ok((sorted, basis))
}

fn cluster_sorted<T: Scalar>(values: &[T], rel: T) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in values.iter().enumerate() {
        match clusters.last_mut() {
            Some(c) if values_equal(values[c[0]], v, rel) => c.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    clusters
}

/// Eigendecomposition by cyclic Jacobi rotations.
pub fn eigendecompose<T: Scalar>(
    a: &SymMatrix<T>,
    cluster_tol: T,
) -> Result<SpectralDecomposition<T>, SymMatError> {
    eigendecompose_with(a, cluster_tol, MAX_SWEEPS)
}

/// [`eigendecompose`] with an explicit sweep cap.
pub fn eigendecompose_with<T: Scalar>(
    a: &SymMatrix<T>,
    cluster_tol: T,
    max_sweeps: usize,
) -> Result<SpectralDecomposition<T>, SymMatError> {
    if !a.is_finite() {
        return Err(SymMatError::NonFinite);
    }
    let (eigenvalues, basis) = jacobi_sorted(&a.to_dense(), max_sweeps)?;
    let clusters = cluster_sorted(&eigenvalues, cluster_tol);
    Ok(SpectralDecomposition {
        basis,
        eigenvalues,
        clusters,
    })
}

/// A common orthogonal eigenbasis of two commuting matrices together with
/// corresponding eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct SimultaneousDiagonalization<T> {
    /// Columns are common eigenvectors.
    pub basis: Matrix<T>,
    /// Eigenvalues of the first matrix, descending.
    pub a: Vec<T>,
    /// Eigenvalues of the second matrix, paired index-wise with `a`.
    pub b: Vec<T>,
    /// Clusters of equal values in `a`.
    pub a_clusters: Vec<Vec<usize>>,
}

impl<T: Scalar> SimultaneousDiagonalization<T> {
    /// Whether `b` is constant on every cluster of `a`.
    pub fn b_constant_on_a_clusters(&self, tol: &Tolerance<T>) -> bool {
        self.a_clusters.iter().all(|c| {
            c.iter()
                .all(|&i| c.iter().all(|&j| tol.same(self.b[i], self.b[j])))
        })
    }
}

fn rayleigh<T: Scalar>(m: &SymMatrix<T>, v: &[T]) -> T {
    let n = m.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            s = s + v[i] * m.get(i, j) * v[j];
        }
    }
    s
}

/// Diagonalizes two commuting symmetric matrices in one orthogonal basis.
///
/// `A` is decomposed first; inside every eigenspace of `A` the projection of
/// `B` is diagonalized, so `b[i]` is the eigenvalue of `B` corresponding to
/// `a[i]`.
pub fn simultaneous_diagonalize<T: Scalar>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    tol: &Tolerance<T>,
) -> Result<SimultaneousDiagonalization<T>, SymMatError> {
    a.same_dim(b)?;
    if !a.commutes(b, tol.commutator)? {
        let scale = T::one() + a.frobenius_norm() * b.frobenius_norm();
        return Err(SymMatError::NotCommuting {
            residual: (a.commutator_norm(b)? / scale).to_f64_lossy(),
        });
    }
    let spec = eigendecompose(a, tol.cluster)?;
    let n = a.dim();
    let mut basis = *spec.basis();
    for cluster in spec.clusters().iter().filter(|c| c.len() > 1) {
        let k = cluster.len();
        let cols: Vec<Vec<T>> = cluster.iter().map(|&i| spec.eigenvector(i)).collect();
        let mut block = Matrix::zeros(k);
        for r in 0..k {
            for s in 0..k {
                let mut acc = T::zero();
                for i in 0..n {
                    for j in 0..n {
                        acc = acc + cols[r][i] * b.get(i, j) * cols[s][j];
                    }
                }
                block[(r, s)] = acc;
            }
        }
        let sym = SymMatrix::<T>::symmetric_part(&block);
        let (_, w) = jacobi_sorted(&sym.to_dense(), MAX_SWEEPS)?;
        for (r, &dst) in cluster.iter().enumerate() {
            let mut col = vec![T::zero(); n];
            for (s, c) in cols.iter().enumerate() {
                for i in 0..n {
                    col[i] = col[i] + c[i] * w[(s, r)];
                }
            }
            basis.set_column(dst, &col);
        }
    }
    let av = (0..n).map(|i| rayleigh(a, &basis.column(i))).collect();
    let bv = (0..n).map(|i| rayleigh(b, &basis.column(i))).collect();
    Ok(SimultaneousDiagonalization {
        basis,
        a: av,
        b: bv,
        a_clusters: spec.clusters().to_vec(),
    })
}

/// `A` is coaxial to `B`: they commute and every eigenspace of `A` lies in an
/// eigenspace of `B`. Matrices of different dimension are never coaxial.
pub fn is_coaxial<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>, tol: &Tolerance<T>) -> bool {
    match simultaneous_diagonalize(a, b, tol) {
        Ok(sd) => sd.b_constant_on_a_clusters(tol),
        Err(_) => false,
    }
}

pub fn is_bicoaxial<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>, tol: &Tolerance<T>) -> bool {
    is_coaxial(a, b, tol) && is_coaxial(b, a, tol)
}

impl<T: Scalar> SymMatrix<T> {
    /// `Q·diag(f(λᵢ))·Qᵀ` for an arbitrary scalar function.
    pub fn map_spectrum(&self, f: impl Fn(T) -> T) -> Result<SymMatrix<T>, SymMatError> {
        Ok(eigendecompose(self, T::default_cluster_tol())?.map(f))
    }

    fn spd_spectrum(&self) -> Result<SpectralDecomposition<T>, SymMatError> {
        let spec = eigendecompose(self, T::default_cluster_tol())?;
        let min = spec.min_eigenvalue();
        if min > T::zero() {
            Ok(spec)
        } else {
            Err(SymMatError::NotPositiveDefinite {
                min_eigenvalue: min.to_f64_lossy(),
            })
        }
    }

    pub fn is_positive_definite(&self) -> bool {
        self.spd_spectrum().is_ok()
    }

    /// Principal logarithm of an SPD matrix.
    pub fn log(&self) -> Result<SymMatrix<T>, SymMatError> {
        Ok(self.spd_spectrum()?.map(T::ln))
    }

    /// Principal square root of an SPD matrix.
    pub fn sqrt(&self) -> Result<SymMatrix<T>, SymMatError> {
        Ok(self.spd_spectrum()?.map(T::sqrt))
    }

    /// Inverse of an SPD matrix through its spectrum.
    pub fn spd_inverse(&self) -> Result<SymMatrix<T>, SymMatError> {
        Ok(self.spd_spectrum()?.map(T::recip))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rotation(axis: [f64; 3], angle: f64) -> Matrix<f64> {
        let n = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        let (x, y, z) = (axis[0] / n, axis[1] / n, axis[2] / n);
        let (s, c) = angle.sin_cos();
        let t = 1.0 - c;
        Matrix::from_rows(&[
            vec![t * x * x + c, t * x * y - s * z, t * x * z + s * y],
            vec![t * x * y + s * z, t * y * y + c, t * y * z - s * x],
            vec![t * x * z - s * y, t * y * z + s * x, t * z * z + c],
        ])
    }

    #[test]
    fn identity_is_one_cluster() {
        let spec = eigendecompose(&SymMatrix::<f64>::identity(3), 1e-8).unwrap();
        assert_eq!(spec.eigenvalues(), &[1.0, 1.0, 1.0]);
        assert_eq!(spec.clusters(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn diagonal_input() {
        let spec = eigendecompose(&SymMatrix::diag(&[1.0, 3.0, 2.0]).unwrap(), 1e-8).unwrap();
        assert_eq!(spec.eigenvalues(), &[3.0, 2.0, 1.0]);
        assert_eq!(spec.clusters().len(), 3);
        assert_eq!(spec.eigenvector(0), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn rotated_known_spectrum() {
        let q = rotation([1.0, 2.0, -0.5], 0.7);
        let a = SymMatrix::diag(&[4.0, 1.0, 1.0]).unwrap().congruence(&q);
        let spec = eigendecompose(&a, 1e-8).unwrap();
        for (got, want) in spec.eigenvalues().iter().zip([4.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-13);
        }
        assert_eq!(spec.clusters(), &[vec![0], vec![1, 2]]);
        assert!((spec.reconstruct() - a).frobenius_norm() < 1e-13);
        let qtq = spec.basis().transpose() * *spec.basis();
        assert!((qtq - Matrix::identity(3)).frobenius_norm() < 1e-14);
    }

    #[test]
    fn sign_convention() {
        let a = SymMatrix::from_components(&[2.0, 2.0, 1.0]).unwrap();
        let spec = eigendecompose(&a, 1e-8).unwrap();
        for i in 0..2 {
            let v = spec.eigenvector(i);
            assert!(v[0] > 0.0);
        }
    }

    #[test]
    fn sweep_cap_reports_non_convergence() {
        let a = SymMatrix::from_components(&[1.0, 2.0, 3.0, 0.5, 0.2, 0.1]).unwrap();
        assert!(matches!(
            eigendecompose_with(&a, 1e-8, 0),
            Err(SymMatError::NoConvergence { sweeps: 0, .. })
        ));
        assert!(eigendecompose_with(&a, 1e-8, 100).is_ok());
    }

    #[test]
    fn f32_decomposition() {
        let a = SymMatrix::<f32>::from_components(&[2.0, 3.0, 4.0, 0.5, 0.25, -0.5]).unwrap();
        let spec = eigendecompose(&a, f32::default_cluster_tol()).unwrap();
        assert!((spec.reconstruct() - a).frobenius_norm() < 1e-5);
    }

    #[test]
    fn simultaneous_commuting_pair() {
        let a = SymMatrix::diag(&[1.0, 1.0, 0.0]).unwrap();
        let b = SymMatrix::diag(&[0.0, 1.0, 1.0]).unwrap();
        let sd = simultaneous_diagonalize(&a, &b, &Tolerance::default()).unwrap();
        assert_eq!(sd.a, vec![1.0, 1.0, 0.0]);
        // Within the double eigenspace of A the B-values are sorted.
        assert_eq!(sd.b, vec![1.0, 0.0, 1.0]);
        let mut sorted_b = sd.b.clone();
        sorted_b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert_eq!(sorted_b, vec![0.0, 1.0, 1.0]);
    }

    #[test]
    fn simultaneous_shared_block() {
        // A = diag(2,2,1); B rotated only in the (1,2)-plane, so the pair
        // shares the block structure and b₃ = 7 must pair with a₃ = 1.
        let a = SymMatrix::diag(&[2.0, 2.0, 1.0]).unwrap();
        let qr = rotation([0.0, 0.0, 1.0], 0.4);
        let b = SymMatrix::diag(&[5.0, 3.0, 7.0]).unwrap().congruence(&qr);
        let sd = simultaneous_diagonalize(&a, &b, &Tolerance::default()).unwrap();
        assert!((sd.a[2] - 1.0).abs() < 1e-14);
        assert!((sd.b[2] - 7.0).abs() < 1e-13);
        assert!((sd.b[0] - 5.0).abs() < 1e-13 && (sd.b[1] - 3.0).abs() < 1e-13);
        for (m, vals) in [(a, &sd.a), (b, &sd.b)] {
            let rebuilt = SymMatrix::diag(vals).unwrap();
            let back = rebuilt.congruence(&sd.basis);
            assert!((back - m).frobenius_norm() < 1e-12);
        }
    }

    #[test]
    fn simultaneous_refuses_non_commuting() {
        let a = SymMatrix::diag(&[1.0, 2.0]).unwrap();
        let b = SymMatrix::from_components(&[0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            simultaneous_diagonalize(&a, &b, &Tolerance::default()),
            Err(SymMatError::NotCommuting { .. })
        ));
    }

    #[test]
    fn coaxiality_examples() {
        let tol = Tolerance::default();
        let id2 = SymMatrix::<f64>::identity(2);
        let d10 = SymMatrix::diag(&[1.0, 0.0]).unwrap();
        assert!(!is_coaxial(&id2, &d10, &tol));
        assert!(is_coaxial(&d10, &id2, &tol));

        let a = SymMatrix::diag(&[1.0, 1.0, 0.0]).unwrap();
        let b = SymMatrix::diag(&[0.0, 1.0, 1.0]).unwrap();
        assert!(!is_coaxial(&a, &b, &tol));
        assert!(!is_coaxial(&b, &a, &tol));

        let q = rotation([0.3, -1.0, 0.2], 1.1);
        let a = SymMatrix::diag(&[3.0, 2.0, 1.0]).unwrap().congruence(&q);
        let b = SymMatrix::diag(&[1.0, 1.0, 9.0]).unwrap().congruence(&q);
        assert!(is_coaxial(&a, &b, &tol));
        assert!(!is_coaxial(&b, &a, &tol));
    }

    #[test]
    fn bicoaxiality_examples() {
        let tol = Tolerance::default();
        let a = SymMatrix::diag(&[3.0, 2.0, 1.0]).unwrap();
        assert!(is_bicoaxial(&a, &SymMatrix::diag(&[6.0, 5.0, 4.0]).unwrap(), &tol));
        let q = rotation([1.0, 1.0, 1.0], 0.3);
        let ar = a.congruence(&q);
        assert!(is_bicoaxial(&ar, &ar.square(), &tol));
        let id2 = SymMatrix::<f64>::identity(2);
        assert!(!is_bicoaxial(&id2, &SymMatrix::diag(&[1.0, 0.0]).unwrap(), &tol));
        assert!(is_bicoaxial(&id2, &SymMatrix::scaled_identity(2, 5.0), &tol));
    }

    #[test]
    fn matrix_functions() {
        let id = SymMatrix::<f64>::identity(3);
        assert!(id.log().unwrap().frobenius_norm() < 1e-15);
        let s = SymMatrix::diag(&[4.0, 9.0, 16.0]).unwrap().sqrt().unwrap();
        assert!((s - SymMatrix::diag(&[2.0, 3.0, 4.0]).unwrap()).frobenius_norm() < 1e-14);
        let bad = SymMatrix::diag(&[1.0, -1.0, 2.0]).unwrap();
        assert!(matches!(bad.log(), Err(SymMatError::NotPositiveDefinite { .. })));
        assert!(matches!(bad.sqrt(), Err(SymMatError::NotPositiveDefinite { .. })));
        assert!(matches!(
            bad.spd_inverse(),
            Err(SymMatError::NotPositiveDefinite { .. })
        ));
        let q = rotation([1.0, 0.0, 1.0], 0.9);
        let b = SymMatrix::diag(&[2.0, 0.5, 3.0]).unwrap().congruence(&q);
        let exp_log = b.log().unwrap().map_spectrum(f64::exp).unwrap();
        assert!((exp_log - b).frobenius_norm() < 1e-13);
        let inv = b.spd_inverse().unwrap();
        assert!((inv - b.inverse().unwrap()).frobenius_norm() < 1e-13);
    }
}
