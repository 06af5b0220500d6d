//! Rank-penalized spectral estimator.
//!
//! For a Hermitian estimate `ρ̂` with eigenpairs `(μⱼ, vⱼ)` ordered by
//! decreasing `λⱼ = |μⱼ|`, the best rank-k Frobenius approximation is
//! `R̂_k = Σ_{j≤k} μⱼ vⱼvⱼ^H` and `‖R̂_k − ρ̂‖_F² = Σ_{j>k} λⱼ²`.
//! Minimizing `‖R̂_k − ρ̂‖_F² + ν·k` over k is then a hard threshold of the
//! singular values at `√ν`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::inversion::LinearEstimate;
use crate::states::{nearest_density, DensityMatrix};

/// Eigendecomposition of a Hermitian matrix ordered by decreasing `|eigenvalue|`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// `λ_k`, non-negative, decreasing.
    pub singular_values: Vec<f64>,
    /// Signed eigenvalues in the same order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, same order.
    pub vectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.singular_values.len()
    }

    /// `‖R̂_k − input‖_F²` for every `k = 0..=dim`.
    pub fn tail_energies(&self) -> Vec<f64> {
        let d = self.dim();
        let mut tail = vec![0.0; d + 1];
        for k in (0..d).rev() {
            tail[k] = tail[k + 1] + self.singular_values[k] * self.singular_values[k];
        }
        tail
    }
}

/// Result of the rank-penalized fit.
#[derive(Debug, Clone)]
pub struct RankPenalizedFit {
    pub nu: f64,
    pub k_hat: usize,
    /// `R̂_{k̂}`.
    pub estimate: HermitianMatrix,
    /// Nearest density matrix supported on the top `max(k̂, 1)` eigenvectors.
    pub physical_estimate: DensityMatrix,
    /// True when `k̂ = 0` and the physical estimate was forced to rank one.
    pub rank_floor_applied: bool,
    pub singular_values: Vec<f64>,
    /// `‖R̂_k − ρ̂‖_F² + ν·k` for `k = 0..=2ⁿ`.
    pub objective: Vec<f64>,
}

/// Spectral decomposition of a Hermitian matrix.
pub fn spectral_of(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let eig = h.eigen()?;
    let dim = h.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    // stable: equal magnitudes keep the lower eigen-index first
    order.sort_by(|&a, &b| eig.values[b].abs().total_cmp(&eig.values[a].abs()));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.values[i]).collect();
    let singular_values = eigenvalues.iter().map(|v| v.abs()).collect();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.vectors.column(src));
    }
    Ok(SpectralDecomposition {
        singular_values,
        eigenvalues,
        vectors,
    })
}

/// Spectral decomposition of the linear estimate.
pub fn spectral(est: &LinearEstimate) -> Result<SpectralDecomposition> {
    spectral_of(&est.matrix)
}

/// Best rank-`k` approximation `Σ_{j≤k} μⱼ vⱼvⱼ^H`.
pub fn truncate(dec: &SpectralDecomposition, k: usize) -> Result<HermitianMatrix> {
    let d = dec.dim();
    if k > d {
        return Err(Error::Range(format!("rank k = {k} outside 0..={d}")));
    }
    let weights: Vec<f64> = dec
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &mu)| if j < k { mu } else { 0.0 })
        .collect();
    Ok(HermitianMatrix::from_spectrum(&weights, &dec.vectors))
}

fn check_nu(nu: f64) -> Result<()> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(Error::Range(format!(
            "penalty nu = {nu} must be finite and >= 0"
        )));
    }
    Ok(())
}

/// `k̂ = max{k : λ_k ≥ √ν}`, or 0 when no singular value reaches `√ν`.
pub fn select_rank_threshold(dec: &SpectralDecomposition, nu: f64) -> Result<usize> {
    check_nu(nu)?;
    let t = nu.sqrt();
    Ok(dec
        .singular_values
        .iter()
        .rposition(|&l| l >= t)
        .map_or(0, |j| j + 1))
}

/// Index of the smallest objective value, scanning upward in k.
///
/// Equal values move the choice to the larger k: adjacent objectives can
/// only tie when `λ_k² = ν`, and the threshold rule counts that singular
/// value as selected.
fn scan_argmin(objective: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in objective.iter().enumerate().skip(1) {
        if v <= objective[best] {
            best = k;
        }
    }
    best
}

/// Penalized objective over all ranks, the minimizing rank and its estimate.
pub fn penalized_fit_of(h: &HermitianMatrix, nu: f64) -> Result<RankPenalizedFit> {
    check_nu(nu)?;
    let dec = spectral_of(h)?;
    let objective: Vec<f64> = dec
        .tail_energies()
        .into_iter()
        .enumerate()
        .map(|(k, tail)| tail + nu * k as f64)
        .collect();
    let k_hat = scan_argmin(&objective);
    let estimate = truncate(&dec, k_hat)?;
    let physical_estimate =
        nearest_density(estimate_or_input(&estimate, h, k_hat), Some(k_hat.max(1)))?;
    Ok(RankPenalizedFit {
        nu,
        k_hat,
        estimate,
        physical_estimate,
        rank_floor_applied: k_hat == 0,
        singular_values: dec.singular_values,
        objective,
    })
}

// With k̂ = 0 the truncation is the zero matrix, which carries no direction;
// the rank-one floor then uses the leading eigenvector of the input.
fn estimate_or_input<'a>(
    estimate: &'a HermitianMatrix,
    input: &'a HermitianMatrix,
    k_hat: usize,
) -> &'a HermitianMatrix {
    if k_hat == 0 {
        input
    } else {
        estimate
    }
}

/// Rank-penalized fit of a linear estimate.
pub fn penalized_fit(est: &LinearEstimate, nu: f64) -> Result<RankPenalizedFit> {
    penalized_fit_of(&est.matrix, nu)
}

/// `c(θ) = 1 + 2/θ`.
pub fn c_theta(theta: f64) -> f64 {
    1.0 + 2.0 / theta
}

/// `min_k { c(θ)²·Σ_{j>k} λⱼ(ρ)² + 2c(θ)·ν·k }` over `k = 0..=2ⁿ`.
pub fn theorem_bound(rho: &DensityMatrix, nu: f64, theta: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::Range(format!("theta = {theta} must be > 0")));
    }
    let c = c_theta(theta);
    let dec = spectral_of(rho.matrix())?;
    Ok(dec
        .tail_energies()
        .into_iter()
        .enumerate()
        .map(|(k, tail)| c * c * tail + 2.0 * c * nu * k as f64)
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::QubitCount;
    use crate::states::diag_state;
    use proptest::prelude::*;

    fn diag(v: &[f64]) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(v)
    }

    fn dec_with_values(values: &[f64]) -> SpectralDecomposition {
        spectral_of(&diag(values)).unwrap()
    }

    #[test]
    fn spectral_diagonal() {
        let d = dec_with_values(&[0.5, 0.3, 0.2, 0.0]);
        assert_eq!(d.singular_values, vec![0.5, 0.3, 0.2, 0.0]);
        let d = dec_with_values(&[0.6, -0.1, 0.5, 0.0]);
        assert_eq!(d.singular_values, vec![0.6, 0.5, 0.1, 0.0]);
        assert_eq!(d.eigenvalues, vec![0.6, 0.5, -0.1, 0.0]);
    }

    #[test]
    fn truncate_examples() {
        let h = diag(&[0.5, 0.3, 0.2, 0.0]);
        let d = spectral_of(&h).unwrap();
        assert!(truncate(&d, 4).unwrap().frobenius_distance(&h).unwrap() < 1e-14);
        let t2 = truncate(&d, 2).unwrap();
        assert!(t2.frobenius_distance(&diag(&[0.5, 0.3, 0.0, 0.0])).unwrap() < 1e-14);
        assert_eq!(truncate(&d, 0).unwrap().frobenius_norm(), 0.0);
        assert!(truncate(&d, 5).is_err());
    }

    #[test]
    fn threshold_examples() {
        let d = dec_with_values(&[0.9, 0.1, 0.0, 0.0]);
        assert_eq!(select_rank_threshold(&d, 0.04).unwrap(), 1);
        assert_eq!(select_rank_threshold(&d, 0.0025).unwrap(), 2);
        assert_eq!(select_rank_threshold(&d, 1.0).unwrap(), 0);
        assert!(select_rank_threshold(&d, -1.0).is_err());
    }

    #[test]
    fn threshold_tie_is_selected() {
        let d = dec_with_values(&[0.5, 0.25, 0.0, 0.0]);
        assert_eq!(select_rank_threshold(&d, 0.0625).unwrap(), 2);
        let fit = penalized_fit_of(&diag(&[0.5, 0.25, 0.0, 0.0]), 0.0625).unwrap();
        assert_eq!(fit.k_hat, 2);
    }

    #[test]
    fn fit_on_exact_diag_state() {
        let rho = diag_state(QubitCount::new(2).unwrap(), 2).unwrap();
        let fit = penalized_fit_of(rho.matrix(), 0.01).unwrap();
        assert_eq!(fit.k_hat, 2);
        assert!(fit.estimate.frobenius_distance(rho.matrix()).unwrap() < 1e-14);
        // objective: [0.5, 0.26, 0.02, 0.03, 0.04]
        let want = [0.5, 0.26, 0.02, 0.03, 0.04];
        for (o, w) in fit.objective.iter().zip(want) {
            assert!((o - w).abs() < 1e-14);
        }
        assert!(!fit.rank_floor_applied);
    }

    #[test]
    fn large_penalty_gives_zero_rank() {
        let h = diag(&[0.6, 0.3, 0.1, 0.0]);
        let fit = penalized_fit_of(&h, 0.5).unwrap();
        assert_eq!(fit.k_hat, 0);
        assert_eq!(fit.estimate.frobenius_norm(), 0.0);
        assert!(fit.rank_floor_applied);
        assert_eq!(fit.physical_estimate.rank(1e-9).unwrap(), 1);
    }

    #[test]
    fn theorem_bound_examples() {
        let rho = diag_state(QubitCount::new(2).unwrap(), 2).unwrap();
        let b = theorem_bound(&rho, 0.01, 2.0).unwrap();
        assert!((b - 0.08).abs() < 1e-14, "{b}");
        // rank-d state: bound ≤ 2 c ν d
        for theta in [0.5, 1.0, 4.0] {
            let b = theorem_bound(&rho, 0.01, theta).unwrap();
            assert!(b <= 2.0 * c_theta(theta) * 0.01 * 2.0 + 1e-15);
        }
        assert!((c_theta(1e12) - 1.0).abs() < 1e-11);
        assert!(theorem_bound(&rho, 0.01, 0.0).is_err());
    }

    fn hermitian_from(dim: usize, vals: &[f64]) -> HermitianMatrix {
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        let mut it = vals.iter().cycle();
        for i in 0..dim {
            for j in i..dim {
                let re = *it.next().unwrap();
                let im = if i == j { 0.0 } else { *it.next().unwrap() };
                m[(i, j)] = Complex64::new(re, im);
                m[(j, i)] = Complex64::new(re, -im);
            }
        }
        HermitianMatrix::new(m).unwrap()
    }

    proptest! {
        #[test]
        fn scan_matches_threshold(dim_pow in 1u32..=3, vals in prop::collection::vec(-1.0f64..1.0, 64), nu in 0.0f64..1.0) {
            let h = hermitian_from(1 << dim_pow, &vals);
            let fit = penalized_fit_of(&h, nu).unwrap();
            let dec = spectral_of(&h).unwrap();
            prop_assert_eq!(fit.k_hat, select_rank_threshold(&dec, nu).unwrap());
            let min = fit.objective.iter().cloned().fold(f64::INFINITY, f64::min);
            prop_assert!(fit.objective[fit.k_hat] <= min + 1e-12);
        }

        #[test]
        fn eckart_young_tail(dim_pow in 1u32..=3, vals in prop::collection::vec(-1.0f64..1.0, 64)) {
            let h = hermitian_from(1 << dim_pow, &vals);
            let dec = spectral_of(&h).unwrap();
            let tail = dec.tail_energies();
            for (k, t) in tail.iter().enumerate() {
                let r = truncate(&dec, k).unwrap();
                let err = r.sub(&h).unwrap().frobenius_norm_sq();
                prop_assert!((err - t).abs() < 1e-9);
            }
            let back = truncate(&dec, dec.dim()).unwrap();
            prop_assert!(back.frobenius_distance(&h).unwrap() < 1e-10);
        }
    }
}
