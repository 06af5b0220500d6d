//! Dense complex Hermitian matrices and the norms used throughout the crate.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance on `|M[i][j] - conj(M[j][i])|` accepted at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// A square complex matrix equal to its conjugate transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: DMatrix<Complex64>,
}

/// Eigenvalues in ascending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Validates squareness and Hermiticity within [`HERMITIAN_TOL`].
    pub fn new(inner: DMatrix<Complex64>) -> Result<Self> {
        let residual = hermitian_residual(&inner)?;
        if residual > HERMITIAN_TOL {
            return Err(Error::NotHermitian { residual });
        }
        Ok(Self { inner })
    }

    /// Replaces `m` by `(m + m^H) / 2`. For matrices that are Hermitian up to
    /// rounding, e.g. results of arithmetic on Hermitian operands.
    pub fn symmetrized(m: DMatrix<Complex64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let adj = m.adjoint();
        Ok(Self {
            inner: (m + adj).scale(0.5),
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            inner: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            inner: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = diag.len();
        let mut inner = DMatrix::zeros(d, d);
        for (i, &v) in diag.iter().enumerate() {
            inner[(i, i)] = Complex64::new(v, 0.0);
        }
        Self { inner }
    }

    /// Builds `Σ wᵢ vᵢ vᵢ^H` from real weights and the columns of `vectors`.
    pub fn from_spectrum(weights: &[f64], vectors: &DMatrix<Complex64>) -> Self {
        let dim = vectors.nrows();
        let mut inner = DMatrix::zeros(dim, dim);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let v = vectors.column(k);
            for j in 0..dim {
                let vj = v[j].conj() * w;
                for i in 0..dim {
                    inner[(i, j)] += v[i] * vj;
                }
            }
        }
        // exact Hermitian symmetry, rounding aside
        let adj = inner.adjoint();
        Self {
            inner: (inner + adj).scale(0.5),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    /// `log2(dim)`, when the dimension is a power of two.
    pub fn qubits(&self) -> Result<usize> {
        let d = self.dim();
        if d == 0 || !d.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(d));
        }
        Ok(d.trailing_zeros() as usize)
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    /// Real part of the trace (the imaginary part of a Hermitian trace is zero).
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.inner[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> Result<f64> {
        let e = self.eigen()?;
        Ok(e.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())))
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> Result<f64> {
        let e = self.eigen()?;
        Ok(e.values.iter().map(|v| v.abs()).sum())
    }

    /// Hermitian eigendecomposition, eigenvalues ascending.
    pub fn eigen(&self) -> Result<Eigen> {
        let dim = self.dim();
        let dec = SymmetricEigen::try_new(self.inner.clone(), f64::EPSILON, 0)
            .ok_or(Error::Eigen(dim))?;
        let mut order: Vec<usize> = (0..dim).collect();
        order.sort_by(|&a, &b| dec.eigenvalues[a].total_cmp(&dec.eigenvalues[b]));
        let values = order.iter().map(|&i| dec.eigenvalues[i]).collect();
        let mut vectors = DMatrix::zeros(dim, dim);
        for (dst, &src) in order.iter().enumerate() {
            vectors.set_column(dst, &dec.eigenvectors.column(src));
        }
        Ok(Eigen { values, vectors })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            inner: &self.inner - &other.inner,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            inner: &self.inner + &other.inner,
        })
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            inner: self.inner.scale(s),
        }
    }

    /// `Tr(self · other)`, real for a pair of Hermitian matrices.
    pub fn trace_product(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let d = self.dim();
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                acc += self.inner[(i, k)] * other.inner[(k, i)];
            }
        }
        Ok(acc.re)
    }

    pub fn frobenius_distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.frobenius_norm())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

fn hermitian_residual(m: &DMatrix<Complex64>) -> Result<f64> {
    let (rows, cols) = m.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let mut worst = 0.0_f64;
    for i in 0..rows {
        for j in i..cols {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_non_hermitian() {
        let m =
            DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_rectangular() {
        let m = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn norms_of_diagonal() {
        let h = HermitianMatrix::from_real_diagonal(&[0.3, -0.1, 0.0, 0.0]);
        assert!((h.operator_norm().unwrap() - 0.3).abs() < 1e-14);
        assert!((h.trace_norm().unwrap() - 0.4).abs() < 1e-14);
        assert!((h.frobenius_norm_sq() - 0.1).abs() < 1e-14);
        assert!((h.trace() - 0.2).abs() < 1e-14);
    }

    #[test]
    fn eigen_reconstructs() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(2.0, 0.0), c(0.5, -0.25), c(0.5, 0.25), c(-1.0, 0.0)],
        );
        let h = HermitianMatrix::new(m).unwrap();
        let e = h.eigen().unwrap();
        assert!(e.values[0] <= e.values[1]);
        let back = HermitianMatrix::from_spectrum(&e.values, &e.vectors);
        assert!(back.frobenius_distance(&h).unwrap() < 1e-12);
    }

    #[test]
    fn qubits_requires_power_of_two() {
        assert_eq!(HermitianMatrix::identity(8).qubits().unwrap(), 3);
        assert!(HermitianMatrix::identity(6).qubits().is_err());
    }
}
