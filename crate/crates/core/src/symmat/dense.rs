use std::ops::{Index, IndexMut, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Dense square matrix of dimension at most 3, stored row-major.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Matrix<T> {
    dim: usize,
    rows: [[T; 3]; 3],
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!((1..=3).contains(&dim), "dimension must be 1, 2 or 3");
        Self {
            dim,
            rows: [[T::zero(); 3]; 3],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.rows[i][i] = T::one();
        }
        m
    }

    /// Builds a matrix whose j-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<T>]) -> Self {
        let dim = columns.len();
        let mut m = Self::zeros(dim);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), dim, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m.rows[i][j] = *v;
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row length mismatch");
            m.rows[i][..dim].copy_from_slice(row);
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.dim).map(|i| self.rows[i][j]).collect()
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.rows[i][..self.dim].to_vec()
    }

    pub fn set_column(&mut self, j: usize, col: &[T]) {
        for (i, v) in col.iter().enumerate().take(self.dim) {
            self.rows[i][j] = *v;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.rows[j][i] = self.rows[i][j];
            }
        }
        t
    }

    pub fn frobenius_norm(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                s = s + self.rows[i][j] * self.rows[i][j];
            }
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                m = m.max(self.rows[i][j].abs());
            }
        }
        m
    }

    pub fn determinant(&self) -> T {
        let a = &self.rows;
        match self.dim {
            1 => a[0][0],
            2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
            _ => {
                a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
                    - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
                    + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
            }
        }
    }

    /// Transposed cofactor matrix, so that `A·adj(A) = det(A)·id`.
    pub fn adjugate(&self) -> Self {
        let a = &self.rows;
        let mut adj = Self::zeros(self.dim);
        match self.dim {
            1 => adj.rows[0][0] = T::one(),
            2 => {
                adj.rows[0][0] = a[1][1];
                adj.rows[0][1] = -a[0][1];
                adj.rows[1][0] = -a[1][0];
                adj.rows[1][1] = a[0][0];
            }
            _ => {
                for i in 0..3 {
                    for j in 0..3 {
                        let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
                        let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
                        adj.rows[i][j] = a[r0][c0] * a[r1][c1] - a[r0][c1] * a[r1][c0];
                    }
                }
            }
        }
        adj
    }

    /// Solves `A·x = rhs` by Gaussian elimination with partial pivoting.
    /// Returns `None` for a (numerically) singular system.
    pub fn solve(&self, rhs: &[T]) -> Option<Vec<T>> {
        let n = self.dim;
        assert_eq!(rhs.len(), n, "rhs length mismatch");
        let mut a = self.rows;
        let mut b = [T::zero(); 3];
        b[..n].copy_from_slice(rhs);
        let scale = self.max_abs();
        if scale == T::zero() {
            return None;
        }
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
                .unwrap();
            if a[p][k].abs() <= T::epsilon() * scale * T::c(1e-3) {
                return None;
            }
            a.swap(k, p);
            b.swap(k, p);
            for i in (k + 1)..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] = a[i][j] - f * a[k][j];
                }
                b[i] = b[i] - f * b[k];
            }
        }
        let mut x = vec![T::zero(); n];
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in (i + 1)..n {
                s = s - a[i][j] * x[j];
            }
            x[i] = s / a[i][i];
        }
        if x.iter().all(|v| v.is_finite()) {
            Some(x)
        } else {
            None
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut inv = Self::zeros(n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            let col = self.solve(&e)?;
            inv.set_column(j, &col);
        }
        Some(inv)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        (0..self.dim)
            .map(|j| (0..self.dim).fold(T::zero(), |s, i| s + self.rows[i][j].abs()))
            .fold(T::zero(), T::max)
    }

    /// 1-norm condition number `‖A‖₁·‖A⁻¹‖₁`; infinite when singular.
    pub fn condition_1(&self) -> T {
        match self.inverse() {
            Some(inv) => self.norm_1() * inv.norm_1(),
            None => T::infinity(),
        }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        (0..self.dim)
            .map(|i| (0..self.dim).fold(T::zero(), |s, j| s + self.rows[i][j] * v[j]))
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.dim && j < self.dim, "index out of range");
        &self.rows[i][j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.dim && j < self.dim, "index out of range");
        &mut self.rows[i][j]
    }
}

impl<T: Scalar> Mul for Matrix<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut s = T::zero();
                for k in 0..n {
                    s = s + self.rows[i][k] * rhs.rows[k][j];
                }
                out.rows[i][j] = s;
            }
        }
        out
    }
}

impl<T: Scalar> Sub for Matrix<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let mut out = self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.rows[i][j] = self.rows[i][j] - rhs.rows[i][j];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_matches_hand_computation() {
        // γ₀ + γ₁ = 5, γ₀ + 2γ₁ = 7  ⇒  γ = (3, 2)
        let v: Matrix<f64> = Matrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 2.0]]);
        let x = v.solve(&[5.0, 7.0]).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-15 && (x[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn singular_system() {
        let v: Matrix<f64> = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(v.solve(&[1.0, 1.0]).is_none());
        assert!(v.condition_1().is_infinite());
    }

    #[test]
    fn adjugate_identity() {
        let a: Matrix<f64> = Matrix::from_rows(&[
            vec![2.0, -1.0, 0.5],
            vec![0.3, 4.0, 1.0],
            vec![-2.0, 0.0, 3.0],
        ]);
        let prod = a * a.adjugate();
        let expect: Matrix<f64> = Matrix::identity(3);
        let det = a.determinant();
        for i in 0..3 {
            for j in 0..3 {
                assert!((prod[(i, j)] - det * expect[(i, j)]).abs() < 1e-12);
            }
        }
    }
}
