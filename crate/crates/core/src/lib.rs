//! Quantum state tomography from Pauli measurements with rank selection.
//!
//! The pipeline reconstructs an n-qubit density matrix from repeated
//! measurements of all 3ⁿ Pauli settings:
//!
//! 1. [`measurement`]: outcome probabilities, simulated counts, frequencies.
//! 2. [`inversion`]: closed-form linear inversion `p̂ ↦ ρ̂`, exploiting the
//!    diagonal Gram matrix of the measurement design.
//! 3. [`rank`]: rank-penalized least squares on the spectrum of `ρ̂`,
//!    which reduces to thresholding singular values at `√ν`.
//! 4. [`calibration`]: oracle, theoretical and bootstrap choices of `ν`.
//!
//! [`experiments`] reproduces the simulation studies and [`io`] holds the
//! JSON/CSV formats used by the `tomorank` binary.
//!
//! ```
//! use tomorank::{measurement, inversion, rank, states, pauli::QubitCount};
//!
//! let n = QubitCount::new(3).unwrap();
//! let rho = states::diag_state(n, 2).unwrap();
//! let data = measurement::simulate_dataset(&rho, 2000, 1).unwrap();
//! let freqs = measurement::empirical_frequencies(&data).unwrap();
//! let est = inversion::linear_estimator(&freqs).unwrap();
//! let fit = rank::penalized_fit(&est, 0.04).unwrap();
//! assert_eq!(fit.k_hat, 2);
//! ```

pub mod calibration;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod hermitian;
pub mod inversion;
pub mod io;
pub mod measurement;
pub mod pauli;
pub mod rank;
pub mod seed;
pub mod states;

pub use error::{Error, Result};
pub use hermitian::HermitianMatrix;
pub use inversion::LinearEstimate;
pub use measurement::{Dataset, EmpiricalFrequencies};
pub use pauli::{BasisLabel, Outcome, QubitCount, Setting};
pub use rank::{RankPenalizedFit, SpectralDecomposition};
pub use states::{DensityMatrix, PauliCoefficients};
