//! Dense symmetric 2×2 / 3×3 matrices and the spectral machinery behind
//! commutation, coaxiality and bi-coaxiality.
//!
//! Only the upper triangle of a [`SymMatrix`] is stored, in the wire order
//! `(xx, yy, zz, xy, xz, yz)` for n = 3 and `(xx, yy, xy)` for n = 2. General
//! (non-symmetric) square matrices such as eigenvector bases and products
//! `A·B` are represented by [`Matrix`].

mod cubic;
mod dense;
mod eigen;

use std::ops::{Add, Mul, Neg, Sub};

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

pub use cubic::eigenvalues_from_invariants;
pub use dense::Matrix;
pub use eigen::{
    eigendecompose, eigendecompose_with, is_bicoaxial, is_coaxial, simultaneous_diagonalize,
    SimultaneousDiagonalization, SpectralDecomposition, Tolerance,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymMatError {
    #[error("unsupported matrix dimension {0} (expected 2 or 3)")]
    UnsupportedDimension(usize),
    #[error("expected 3 (n=2) or 6 (n=3) symmetric components, got {0}")]
    WrongComponentCount(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("matrices do not commute (relative commutator {residual:e})")]
    NotCommuting { residual: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("invariants ({i1}, {i2}, {i3}) do not belong to a positive definite matrix: {reason}")]
    InvalidInvariants {
        i1: f64,
        i2: f64,
        i3: f64,
        reason: &'static str,
    },
}

/// Principal invariants `(tr B, tr Cof B, det B)` of a 3×3 symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Invariants<T> {
    pub i1: T,
    pub i2: T,
    pub i3: T,
}

impl<T: Scalar> Invariants<T> {
    pub fn new(i1: T, i2: T, i3: T) -> Self {
        Self { i1, i2, i3 }
    }

    /// True if all three invariants are positive and the characteristic
    /// cubic has three real roots (non-negative discriminant up to rounding).
    pub fn is_positive_definite(&self) -> bool {
        self.i1 > T::zero()
            && self.i2 > T::zero()
            && self.i3 > T::zero()
            && eigenvalues_from_invariants(*self).is_ok()
    }
}

/// Symmetric n×n matrix, n ∈ {2, 3}.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct SymMatrix<T> {
    dim: usize,
    upper: [T; 6],
}

#[inline]
fn slot(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if i == j {
        return i;
    }
    match (dim, i, j) {
        (2, 0, 1) => 2,
        (3, 0, 1) => 3,
        (3, 0, 2) => 4,
        (3, 1, 2) => 5,
        _ => unreachable!("index ({i},{j}) out of range for dim {dim}"),
    }
}

fn check_dim(dim: usize) -> Result<(), SymMatError> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(SymMatError::UnsupportedDimension(dim))
    }
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        check_dim(dim).expect("dimension must be 2 or 3");
        Self {
            dim,
            upper: [T::zero(); 6],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scaled_identity(dim, T::one())
    }

    pub fn scaled_identity(dim: usize, value: T) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.upper[i] = value;
        }
        m
    }

    /// Diagonal matrix; `diagonal.len()` fixes the dimension.
    pub fn diag(diagonal: &[T]) -> Result<Self, SymMatError> {
        check_dim(diagonal.len())?;
        let mut m = Self::zeros(diagonal.len());
        m.upper[..diagonal.len()].copy_from_slice(diagonal);
        m.ensure_finite()?;
        Ok(m)
    }

    /// Builds a matrix from its wire components: `(xx, yy, xy)` or
    /// `(xx, yy, zz, xy, xz, yz)`.
    pub fn from_components(components: &[T]) -> Result<Self, SymMatError> {
        let dim = match components.len() {
            3 => 2,
            6 => 3,
            n => return Err(SymMatError::WrongComponentCount(n)),
        };
        let mut m = Self::zeros(dim);
        m.upper[..components.len()].copy_from_slice(components);
        m.ensure_finite()?;
        Ok(m)
    }

    /// Builds a symmetric matrix from a full row-major array, using the
    /// upper triangle. Returns an error if the input is not symmetric
    /// within `tol` (relative to its largest entry).
    pub fn from_rows(rows: &[Vec<T>], tol: T) -> Result<Self, SymMatError> {
        let dim = rows.len();
        check_dim(dim)?;
        let mut dense = Matrix::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(SymMatError::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            for (j, v) in row.iter().enumerate() {
                dense[(i, j)] = *v;
            }
        }
        let scale = dense.max_abs().max(T::one());
        for i in 0..dim {
            for j in (i + 1)..dim {
                if (dense[(i, j)] - dense[(j, i)]).abs() > tol * scale {
                    return Err(SymMatError::NotSymmetric { row: i, col: j });
                }
            }
        }
        let m = Self::from_dense_upper(&dense);
        m.ensure_finite()?;
        Ok(m)
    }

    /// Takes the upper triangle of a dense matrix without any check.
    pub(crate) fn from_dense_upper(dense: &Matrix<T>) -> Self {
        let dim = dense.dim();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.upper[slot(dim, i, j)] = dense[(i, j)];
            }
        }
        m
    }

    /// Symmetric part `(M + Mᵀ)/2` of a dense matrix.
    pub fn symmetric_part(dense: &Matrix<T>) -> Self {
        let dim = dense.dim();
        let half = T::c(0.5);
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                m.upper[slot(dim, i, j)] = half * (dense[(i, j)] + dense[(j, i)]);
            }
        }
        m
    }

    fn ensure_finite(&self) -> Result<(), SymMatError> {
        if self.upper.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(SymMatError::NonFinite)
        }
    }

    pub fn is_finite(&self) -> bool {
        self.ensure_finite().is_ok()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i < self.dim && j < self.dim, "index out of range");
        self.upper[slot(self.dim, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i < self.dim && j < self.dim, "index out of range");
        self.upper[slot(self.dim, i, j)] = value;
    }

    /// Wire components, see the module docs for the ordering.
    pub fn components(&self) -> Vec<T> {
        let n = if self.dim == 2 { 3 } else { 6 };
        self.upper[..n].to_vec()
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut d = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                d[(i, j)] = self.get(i, j);
            }
        }
        d
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> T {
        (0..self.dim).fold(T::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn determinant(&self) -> T {
        self.to_dense().determinant()
    }

    pub fn frobenius_norm(&self) -> T {
        self.to_dense().frobenius_norm()
    }

    /// General product `self · other` (not symmetric in general).
    pub fn matmul(&self, other: &SymMatrix<T>) -> Matrix<T> {
        self.to_dense() * other.to_dense()
    }

    /// `A²`, which is again symmetric.
    pub fn square(&self) -> Self {
        Self::symmetric_part(&self.matmul(self))
    }

    /// Integer power by repeated multiplication (`A⁰ = id`).
    pub fn powi(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..k {
            acc = Self::symmetric_part(&acc.matmul(self));
        }
        acc
    }

    /// Inverse via the adjugate.
    pub fn inverse(&self) -> Result<Self, SymMatError> {
        let dense = self.to_dense();
        let det = dense.determinant();
        let scale = self.frobenius_norm().powi(self.dim as i32);
        if det == T::zero() || det.abs() <= T::epsilon() * scale {
            return Err(SymMatError::Singular);
        }
        let adj = dense.adjugate();
        Ok(Self::symmetric_part(&adj) * (T::one() / det))
    }

    /// `A − (tr A / n)·id`.
    pub fn deviatoric(&self) -> Self {
        let mean = self.trace() / T::c(self.dim as f64);
        *self - Self::scaled_identity(self.dim, mean)
    }

    /// `Q·A·Qᵀ`.
    pub fn congruence(&self, q: &Matrix<T>) -> Self {
        Self::symmetric_part(&(*q * self.to_dense() * q.transpose()))
    }

    /// Frobenius norm of the commutator `AB − BA`.
    pub fn commutator_norm(&self, other: &SymMatrix<T>) -> Result<T, SymMatError> {
        self.same_dim(other)?;
        let ab = self.matmul(other);
        let ba = other.matmul(self);
        Ok((ab - ba).frobenius_norm())
    }

    pub(crate) fn same_dim(&self, other: &SymMatrix<T>) -> Result<(), SymMatError> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(SymMatError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    /// `‖AB − BA‖ ≤ tol·(1 + ‖A‖·‖B‖)` in the Frobenius norm.
    pub fn commutes(&self, other: &SymMatrix<T>, tol: T) -> Result<bool, SymMatError> {
        let c = self.commutator_norm(other)?;
        Ok(c <= tol * (T::one() + self.frobenius_norm() * other.frobenius_norm()))
    }

    /// `(tr B, tr Cof B, det B)`; only defined for n = 3.
    pub fn invariants(&self) -> Result<Invariants<T>, SymMatError> {
        if self.dim != 3 {
            return Err(SymMatError::UnsupportedDimension(self.dim));
        }
        let g = |i, j| self.get(i, j);
        let i1 = self.trace();
        let i2 = g(0, 0) * g(1, 1) + g(0, 0) * g(2, 2) + g(1, 1) * g(2, 2)
            - g(0, 1) * g(0, 1)
            - g(0, 2) * g(0, 2)
            - g(1, 2) * g(1, 2);
        let i3 = self.determinant();
        Ok(Invariants { i1, i2, i3 })
    }

    pub fn max_abs(&self) -> T {
        self.upper.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }

    /// Entrywise conversion to another scalar type.
    pub fn cast<U: Scalar>(&self) -> SymMatrix<U> {
        let mut upper = [U::zero(); 6];
        for (dst, src) in upper.iter_mut().zip(self.upper.iter()) {
            *dst = U::c(src.to_f64_lossy());
        }
        SymMatrix {
            dim: self.dim,
            upper,
        }
    }
}

impl<T: Scalar> Add for SymMatrix<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self;
        for (o, r) in out.upper.iter_mut().zip(rhs.upper.iter()) {
            *o = *o + *r;
        }
        out
    }
}

impl<T: Scalar> Sub for SymMatrix<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self;
        for (o, r) in out.upper.iter_mut().zip(rhs.upper.iter()) {
            *o = *o - *r;
        }
        out
    }
}

impl<T: Scalar> Neg for SymMatrix<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self * (-T::one())
    }
}

impl<T: Scalar> Mul<T> for SymMatrix<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        let mut out = self;
        for o in out.upper.iter_mut() {
            *o = *o * rhs;
        }
        out
    }
}

impl<T: Scalar> Serialize for SymMatrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let comps = self.components();
        let mut seq = serializer.serialize_seq(Some(comps.len()))?;
        for c in &comps {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl<'de, T: Scalar> Deserialize<'de> for SymMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ComponentsVisitor<T>(std::marker::PhantomData<T>);

        impl<'de, T: Scalar> Visitor<'de> for ComponentsVisitor<T> {
            type Value = SymMatrix<T>;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an array of 3 or 6 symmetric matrix components")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut comps = Vec::with_capacity(6);
                while let Some(v) = seq.next_element::<T>()? {
                    comps.push(v);
                }
                SymMatrix::from_components(&comps).map_err(de::Error::custom)
            }
        }

        deserializer.deserialize_seq(ComponentsVisitor(std::marker::PhantomData))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_of_identity() {
        let inv = SymMatrix::<f64>::identity(3).invariants().unwrap();
        assert_eq!((inv.i1, inv.i2, inv.i3), (3.0, 3.0, 1.0));
    }

    #[test]
    fn invariants_of_spherical_stretch() {
        let inv = SymMatrix::scaled_identity(3, 2.0).invariants().unwrap();
        assert_eq!((inv.i1, inv.i2, inv.i3), (6.0, 12.0, 8.0));
    }

    #[test]
    fn invariants_of_diag_411() {
        // e1 = 4+1+1, e2 = 4·1 + 4·1 + 1·1, e3 = 4·1·1
        let inv = SymMatrix::diag(&[4.0, 1.0, 1.0]).unwrap().invariants().unwrap();
        assert_eq!((inv.i1, inv.i2, inv.i3), (6.0, 9.0, 4.0));
    }

    #[test]
    fn invariants_reject_2x2() {
        let a = SymMatrix::<f64>::identity(2);
        assert_eq!(a.invariants(), Err(SymMatError::UnsupportedDimension(2)));
    }

    #[test]
    fn wire_order() {
        let a = SymMatrix::from_components(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        assert_eq!(a.get(0, 1), 4.0);
        assert_eq!(a.get(2, 0), 5.0);
        assert_eq!(a.get(2, 1), 6.0);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[1.0,2.0,3.0,4.0,5.0,6.0]");
        let back: SymMatrix<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);

        let b = SymMatrix::from_components(&[1.0, 2.0, 0.5]).unwrap();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.get(1, 0), 0.5);
    }

    #[test]
    fn bad_component_counts() {
        assert_eq!(
            SymMatrix::<f64>::from_components(&[1.0; 4]),
            Err(SymMatError::WrongComponentCount(4))
        );
        assert!(serde_json::from_str::<SymMatrix<f64>>("[1,2]").is_err());
        assert_eq!(
            SymMatrix::from_components(&[1.0, f64::NAN, 0.0]),
            Err(SymMatError::NonFinite)
        );
    }

    #[test]
    fn commutation_examples() {
        let a = SymMatrix::diag(&[1.0, 1.0, 0.0]).unwrap();
        let b = SymMatrix::diag(&[0.0, 1.0, 1.0]).unwrap();
        assert!(a.commutes(&b, 1e-10).unwrap());
        assert!(a.commutes(&a, 1e-10).unwrap());

        let c = SymMatrix::diag(&[1.0, 2.0]).unwrap();
        let d = SymMatrix::from_components(&[0.0, 0.0, 1.0]).unwrap();
        // AB − BA = [[0, −1], [1, 0]]
        assert!((c.commutator_norm(&d).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!(!c.commutes(&d, 1e-10).unwrap());
        assert!(matches!(
            c.commutes(&a, 1e-10),
            Err(SymMatError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn inverse_and_deviator() {
        let a = SymMatrix::from_components(&[4.0, 3.0, 2.0, 1.0, 0.5, 0.25]).unwrap();
        let inv = a.inverse().unwrap();
        let prod = a.matmul(&inv);
        assert!((prod - Matrix::identity(3)).frobenius_norm() < 1e-14);
        let dev = SymMatrix::scaled_identity(3, 2.0).deviatoric();
        assert_eq!(dev, SymMatrix::zeros(3));
        assert!(SymMatrix::<f64>::zeros(3).inverse().is_err());
    }

    #[test]
    fn powers() {
        let a = SymMatrix::diag(&[1.0, 2.0, 4.0]).unwrap();
        assert_eq!(a.powi(0), SymMatrix::identity(3));
        assert_eq!(a.powi(2), SymMatrix::diag(&[1.0, 4.0, 16.0]).unwrap());
        assert_eq!(a.square(), a.powi(2));
    }
}
