//! Choices of the rank penalty ν: the oracle value `‖ρ̂ − ρ‖²`, the
//! closed-form theoretical value, and a parametric-bootstrap estimate of the
//! oracle value for real data.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inversion::{linear_estimator, LinearEstimate};
use crate::measurement::{empirical_frequencies, simulate_dataset};
use crate::pauli::QubitCount;
use crate::seed::derive_seed;
use crate::states::{nearest_density, DensityMatrix};

/// `‖ρ̂ − ρ‖²` (squared operator norm).
pub fn nu_oracle(est: &LinearEstimate, rho_true: &DensityMatrix) -> Result<f64> {
    let op = est.matrix.sub(rho_true.matrix())?.operator_norm()?;
    Ok(op * op)
}

/// `32·(1+θ)·(4/3)ⁿ·(n·ln2 − ln ε)/m`.
///
/// `ε = 1` drops the `ln ε` term.
pub fn nu_theory(n: QubitCount, m: u64, theta: f64, eps: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Range("m must be at least 1".into()));
    }
    if !(theta.is_finite() && theta >= 0.0) {
        return Err(Error::Range(format!(
            "theta = {theta} must be finite and >= 0"
        )));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Range(format!("eps = {eps} outside (0, 1]")));
    }
    let nq = n.get() as f64;
    Ok(
        32.0 * (1.0 + theta) * (4.0f64 / 3.0).powf(nq) * (nq * std::f64::consts::LN_2 - eps.ln())
            / m as f64,
    )
}

/// How bootstrap operator norms are turned into a penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Aggregation {
    /// `(mean ‖ρ̂ⱼ* − σ̂‖)²`
    #[default]
    SquaredMeanNorm,
    /// `mean ‖ρ̂ⱼ* − σ̂‖²`
    MeanSquaredNorm,
}

/// Bootstrap penalty together with the per-repetition operator norms.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapPenalty {
    pub value: f64,
    pub norms: Vec<f64>,
}

/// Parametric bootstrap of `‖ρ̂ − ρ‖²`.
///
/// The estimate is first projected to the nearest density matrix `σ̂`; each
/// repetition simulates `m` shots per setting from `σ̂`, inverts them and
/// records `‖ρ̂ⱼ* − σ̂‖`. Repetition `j` uses `derive_seed(seed, j)`.
pub fn nu_bootstrap(
    est: &LinearEstimate,
    m: u64,
    reps: usize,
    seed: u64,
) -> Result<BootstrapPenalty> {
    nu_bootstrap_with(est, m, reps, seed, Aggregation::default())
}

pub fn nu_bootstrap_with(
    est: &LinearEstimate,
    m: u64,
    reps: usize,
    seed: u64,
    aggregation: Aggregation,
) -> Result<BootstrapPenalty> {
    if reps < 2 {
        return Err(Error::Range(format!(
            "bootstrap needs reps >= 2, got {reps}"
        )));
    }
    let sigma = nearest_density(&est.matrix, None)?;
    let norms = (0..reps)
        .into_par_iter()
        .map(|j| {
            let data = simulate_dataset(&sigma, m, derive_seed(seed, j as u64))?;
            let synth = linear_estimator(&empirical_frequencies(&data)?)?;
            synth.matrix.sub(sigma.matrix())?.operator_norm()
        })
        .collect::<Result<Vec<f64>>>()?;
    let k = norms.len() as f64;
    let value = match aggregation {
        Aggregation::SquaredMeanNorm => {
            let mean = norms.iter().sum::<f64>() / k;
            mean * mean
        }
        Aggregation::MeanSquaredNorm => norms.iter().map(|v| v * v).sum::<f64>() / k,
    };
    Ok(BootstrapPenalty { value, norms })
}

/// Which calibration produced a penalty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PenaltyMode {
    Oracle,
    Theory,
    Bootstrap,
    Fixed,
}

impl fmt::Display for PenaltyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PenaltyMode::Oracle => "oracle",
            PenaltyMode::Theory => "theory",
            PenaltyMode::Bootstrap => "bootstrap",
            PenaltyMode::Fixed => "fixed",
        })
    }
}

/// A requested calibration, before it is evaluated on data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Penalty {
    Oracle,
    Theory {
        theta: f64,
        eps: f64,
    },
    Bootstrap {
        reps: usize,
        seed: u64,
        aggregation: Aggregation,
    },
    Fixed(f64),
}

impl Penalty {
    pub fn mode(&self) -> PenaltyMode {
        match self {
            Penalty::Oracle => PenaltyMode::Oracle,
            Penalty::Theory { .. } => PenaltyMode::Theory,
            Penalty::Bootstrap { .. } => PenaltyMode::Bootstrap,
            Penalty::Fixed(_) => PenaltyMode::Fixed,
        }
    }

    /// Evaluates the penalty. `truth` is required for [`Penalty::Oracle`].
    pub fn resolve(
        &self,
        est: &LinearEstimate,
        m: u64,
        truth: Option<&DensityMatrix>,
    ) -> Result<PenaltyChoice> {
        let mut choice = PenaltyChoice {
            mode: self.mode(),
            value: 0.0,
            theta: None,
            eps: None,
            reps: None,
            seed: None,
            details: Vec::new(),
        };
        match *self {
            Penalty::Oracle => {
                let rho = truth
                    .ok_or_else(|| Error::Range("oracle penalty needs the true state".into()))?;
                choice.value = nu_oracle(est, rho)?;
            }
            Penalty::Theory { theta, eps } => {
                choice.value = nu_theory(est.qubits(), m, theta, eps)?;
                choice.theta = Some(theta);
                choice.eps = Some(eps);
            }
            Penalty::Bootstrap {
                reps,
                seed,
                aggregation,
            } => {
                let b = nu_bootstrap_with(est, m, reps, seed, aggregation)?;
                choice.value = b.value;
                choice.reps = Some(reps);
                choice.seed = Some(seed);
                choice.details = b.norms;
            }
            Penalty::Fixed(v) => {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::Range(format!("fixed penalty {v} must be >= 0")));
                }
                choice.value = v;
            }
        }
        Ok(choice)
    }
}

/// A penalty value together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PenaltyChoice {
    pub mode: PenaltyMode,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Per-repetition operator norms for the bootstrap mode.
    pub details: Vec<f64>,
}

impl FromStr for PenaltyMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(PenaltyMode::Oracle),
            "theory" => Ok(PenaltyMode::Theory),
            "bootstrap" => Ok(PenaltyMode::Bootstrap),
            "fixed" => Ok(PenaltyMode::Fixed),
            other => Err(Error::Parse(format!("unknown penalty mode {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::HermitianMatrix;
    use crate::states::{diag_state, pauli_expand};

    fn q(n: usize) -> QubitCount {
        QubitCount::new(n).unwrap()
    }

    fn estimate_of(h: HermitianMatrix) -> LinearEstimate {
        LinearEstimate {
            coeffs: pauli_expand(&h).unwrap(),
            matrix: h,
        }
    }

    #[test]
    fn oracle_examples() {
        let rho = diag_state(q(2), 2).unwrap();
        let same = estimate_of(rho.matrix().clone());
        assert_eq!(nu_oracle(&same, &rho).unwrap(), 0.0);
        let shifted = estimate_of(
            rho.matrix()
                .add(&HermitianMatrix::from_real_diagonal(&[0.3, -0.1, 0.0, 0.0]))
                .unwrap(),
        );
        assert!((nu_oracle(&shifted, &rho).unwrap() - 0.09).abs() < 1e-14);
    }

    #[test]
    fn theory_examples() {
        let v50 = nu_theory(q(4), 50, 0.0, 1.0).unwrap();
        let v100 = nu_theory(q(4), 100, 0.0, 1.0).unwrap();
        assert!((v50 - 5.608_16).abs() < 1e-4, "{v50}");
        assert!((v100 - 2.804_08).abs() < 1e-4, "{v100}");
        assert_eq!(v50, 2.0 * v100);
        assert!(nu_theory(q(4), 50, 1.0, 1.0).unwrap() > v50);
        assert!(nu_theory(q(4), 50, 0.0, 0.1).unwrap() > v50);
        assert!(nu_theory(q(4), 50, -1.0, 1.0).is_err());
        assert!(nu_theory(q(4), 50, 0.0, 0.0).is_err());
    }

    #[test]
    fn bootstrap_is_deterministic_and_consistent() {
        let rho = DensityMatrix::maximally_mixed(q(2));
        let est = estimate_of(rho.matrix().clone());
        let a = nu_bootstrap(&est, 200, 6, 42).unwrap();
        let b = nu_bootstrap(&est, 200, 6, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.norms.len(), 6);
        let big = nu_bootstrap(&est, 200_000, 4, 42).unwrap();
        assert!(big.value < a.value);
        assert!(big.value < 1e-3);
        assert!(nu_bootstrap(&est, 10, 1, 0).is_err());
    }

    #[test]
    fn bootstrap_aggregations_differ_by_jensen() {
        let rho = diag_state(q(2), 1).unwrap();
        let est = estimate_of(rho.matrix().clone());
        let sq = nu_bootstrap_with(&est, 50, 8, 3, Aggregation::SquaredMeanNorm).unwrap();
        let ms = nu_bootstrap_with(&est, 50, 8, 3, Aggregation::MeanSquaredNorm).unwrap();
        assert_eq!(sq.norms, ms.norms);
        assert!(ms.value >= sq.value);
    }

    #[test]
    fn resolve_requires_truth_for_oracle() {
        let rho = diag_state(q(1), 1).unwrap();
        let est = estimate_of(rho.matrix().clone());
        assert!(Penalty::Oracle.resolve(&est, 10, None).is_err());
        let c = Penalty::Fixed(0.2).resolve(&est, 10, None).unwrap();
        assert_eq!(c.value, 0.2);
        assert!(Penalty::Fixed(-0.2).resolve(&est, 10, None).is_err());
    }
}
