//! Closed-form linear inversion of Pauli measurement frequencies, and the
//! analytic error quantities that come with it.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::measurement::EmpiricalFrequencies;
use crate::pauli::{labels, BasisLabel, Pauli, QubitCount};
use crate::states::{pauli_assemble, PauliCoefficients};

/// The linear (inversion) estimate: coefficients and the assembled matrix.
///
/// The matrix is Hermitian with unit trace but need not be positive.
#[derive(Debug, Clone)]
pub struct LinearEstimate {
    pub coeffs: PauliCoefficients,
    pub matrix: HermitianMatrix,
}

impl LinearEstimate {
    pub fn qubits(&self) -> QubitCount {
        self.coeffs.qubits()
    }
}

/// Setting indices that agree with `b` off its identity positions.
fn compatible_settings(b: &BasisLabel) -> Vec<usize> {
    let mut out = vec![0usize];
    for p in b.paulis() {
        out = match p {
            Pauli::I => out
                .iter()
                .flat_map(|&acc| (0..3).map(move |d| acc * 3 + d))
                .collect(),
            _ => {
                let d = p.axis().expect("non-identity") as usize;
                out.iter().map(|&acc| acc * 3 + d).collect()
            }
        };
    }
    out
}

/// `ρ̂_b = (3^{d(b)}·2ⁿ)⁻¹ Σ_{(r,a)} p̂_{(r,a)} P_{(r,a),b}` for every label.
///
/// Only the 3^{d(b)} settings matching `b` outside its identity positions
/// have nonzero design entries, so only those are visited.
pub fn invert_coefficients(p_hat: &EmpiricalFrequencies) -> Result<PauliCoefficients> {
    let n = p_hat.qubits();
    let dim = n.dim();
    let freqs = p_hat.as_slice();
    let all: Vec<BasisLabel> = labels(n).collect();
    let coeffs: Vec<f64> = all
        .par_iter()
        .map(|b| {
            let mask = b.support_mask();
            let norm = 3f64.powi(b.degree() as i32) * dim as f64;
            let mut acc = 0.0;
            for ai in compatible_settings(b) {
                let block = &freqs[ai * dim..(ai + 1) * dim];
                for (ri, p) in block.iter().enumerate() {
                    // product of r_j over the support = parity of −1 signs there
                    if (!ri & mask).count_ones() % 2 == 0 {
                        acc += p;
                    } else {
                        acc -= p;
                    }
                }
            }
            acc / norm
        })
        .collect();
    PauliCoefficients::new(coeffs)
}

/// `ρ̂ = Σ_b ρ̂_b σ_b`.
pub fn linear_estimator(p_hat: &EmpiricalFrequencies) -> Result<LinearEstimate> {
    let coeffs = invert_coefficients(p_hat)?;
    let matrix = pauli_assemble(&coeffs)?;
    Ok(LinearEstimate { coeffs, matrix })
}

/// Upper bound `1 / (3^{d(b)}·4ⁿ·m)` on the variance of `ρ̂_b`.
pub fn variance_bound(b: &BasisLabel, m: u64) -> f64 {
    let n = b.len() as i32;
    1.0 / (3f64.powi(b.degree() as i32) * 4f64.powi(n) * m as f64)
}

/// `4·√(2·(4/3)ⁿ·(n·ln2 − ln ε)/m)`: with probability at least `1 − ε`,
/// `‖ρ̂ − ρ‖` stays below this value.
pub fn hoeffding_radius(n: QubitCount, m: u64, eps: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Range("m must be at least 1".into()));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Range(format!("eps = {eps} outside (0, 1]")));
    }
    let nq = n.get() as f64;
    let inner = 2.0 * (4.0f64 / 3.0).powf(nq) * (nq * std::f64::consts::LN_2 - eps.ln()) / m as f64;
    Ok(4.0 * inner.sqrt())
}

/// `2^{n/2}`, the factor in `‖M‖₁ ≤ 2^{n/2}‖M‖_F` for 2ⁿ×2ⁿ matrices.
pub fn trace_norm_factor(n: QubitCount) -> f64 {
    2f64.powf(n.get() as f64 / 2.0)
}
