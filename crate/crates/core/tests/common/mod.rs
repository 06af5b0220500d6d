#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use tomorank::{DensityMatrix, HermitianMatrix};

pub fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `(G + G^H)/2` with complex Gaussian `G`.
pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> HermitianMatrix {
    HermitianMatrix::symmetrized(gaussian_matrix(dim, dim, rng)).unwrap()
}

/// `G G^H / tr` with complex Gaussian `G` of size dim×rank.
pub fn random_density<R: Rng>(dim: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = gaussian_matrix(dim, rank, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(HermitianMatrix::symmetrized(m / Complex64::new(tr, 0.0)).unwrap()).unwrap()
}

/// Rank-`k` Hermitian matrix `V diag(w) V^H` with Gaussian `V` and `w`.
pub fn random_rank_k<R: Rng>(dim: usize, k: usize, rng: &mut R) -> HermitianMatrix {
    let v = gaussian_matrix(dim, k, rng);
    let w = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            Complex64::new(rng.sample::<f64, _>(StandardNormal), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    HermitianMatrix::symmetrized(&v * w * v.adjoint()).unwrap()
}
