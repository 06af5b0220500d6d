//! Forward model: outcome probabilities, simulated count data and empirical
//! frequencies.
//!
//! Tables over `(setting, outcome)` pairs are flat vectors of length 6ⁿ with
//! index `setting.index() * 2ⁿ + outcome.index()`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{design_entry, labels, Outcome, QubitCount, Setting};
use crate::states::{pauli_expand, DensityMatrix, PauliCoefficients};

/// Probabilities within this distance of `[0, 1]` are clipped before sampling.
pub const PROBABILITY_CLIP_TOL: f64 = 1e-12;
/// Tolerance on per-setting normalization of frequencies.
pub const NORMALIZATION_TOL: f64 = 1e-12;

fn check_qubits(n: QubitCount, a: &Setting, r: &Outcome) -> Result<()> {
    for len in [a.len(), r.len()] {
        if len != n.get() {
            return Err(Error::DimensionMismatch {
                left: n.get(),
                right: len,
            });
        }
    }
    Ok(())
}

/// `Tr(ρ · P_r^a)`, computed from the tensor-product projector.
pub fn outcome_probability(rho: &DensityMatrix, a: &Setting, r: &Outcome) -> Result<f64> {
    check_qubits(rho.qubits(), a, r)?;
    let p = crate::pauli::projector(a, r)?;
    rho.matrix().trace_product(&p)
}

/// `Σ_b ρ_b ∏_{j∉E_b} r_j 𝟙(a_j = b_j)`, summed literally over all 4ⁿ labels.
pub fn outcome_probability_from_coefficients(
    c: &PauliCoefficients,
    a: &Setting,
    r: &Outcome,
) -> Result<f64> {
    check_qubits(c.qubits(), a, r)?;
    let mut acc = 0.0;
    for (b, &rho_b) in labels(c.qubits()).zip(c.as_slice()) {
        let e = design_entry(r, a, &b)?;
        if e != 0 {
            acc += rho_b * f64::from(e);
        }
    }
    Ok(acc)
}

/// Label index of the label equal to `a` on the bits of `subset` and `I`
/// elsewhere (bit `n-1-j` is qubit `j`).
fn subset_label_index(a: &Setting, subset: usize) -> usize {
    let n = a.len();
    a.axes().iter().enumerate().fold(0, |acc, (j, axis)| {
        let digit = if subset >> (n - 1 - j) & 1 == 1 {
            *axis as usize + 1
        } else {
            0
        };
        acc * 4 + digit
    })
}

/// The full 6ⁿ probability vector, via the Pauli coefficients of `rho`.
///
/// Only the 2ⁿ labels supported on the measured axes contribute to a given
/// setting, so each setting costs 4ⁿ operations.
pub fn probability_table(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let c = pauli_expand(rho.matrix())?;
    Ok(table_from_coefficients(&c))
}

pub(crate) fn table_from_coefficients(c: &PauliCoefficients) -> Vec<f64> {
    let n = c.qubits();
    let dim = n.dim();
    let coeffs = c.as_slice();
    let mut table = vec![0.0; n.num_settings() * dim];
    table
        .par_chunks_mut(dim)
        .enumerate()
        .for_each(|(ai, block)| {
            let a = Setting::from_index(n.get(), ai);
            let sub: Vec<f64> = (0..dim)
                .map(|s| coeffs[subset_label_index(&a, s)])
                .collect();
            for (ri, slot) in block.iter_mut().enumerate() {
                // sign = (−1)^{number of −1 outcomes inside the subset}
                let minus = !ri & (dim - 1);
                *slot = sub
                    .iter()
                    .enumerate()
                    .map(|(s, v)| {
                        if (s & minus).count_ones().is_multiple_of(2) {
                            *v
                        } else {
                            -*v
                        }
                    })
                    .sum();
            }
        });
    table
}

/// Counts `(setting, outcome) → k` from `m` repetitions of every setting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    n: QubitCount,
    m: u64,
    counts: Vec<u64>,
}

impl Dataset {
    /// Validates that every setting's counts sum to `m`.
    pub fn new(n: QubitCount, m: u64, counts: Vec<u64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Dataset("m must be at least 1".into()));
        }
        let dim = n.dim();
        if counts.len() != n.num_settings() * dim {
            return Err(Error::Dataset(format!(
                "expected {} count cells, got {}",
                n.num_settings() * dim,
                counts.len()
            )));
        }
        for (ai, block) in counts.chunks(dim).enumerate() {
            let total: u64 = block.iter().sum();
            if total != m {
                return Err(Error::Dataset(format!(
                    "counts of setting {} sum to {total}, expected m = {m}",
                    Setting::from_index(n.get(), ai)
                )));
            }
        }
        Ok(Self { n, m, counts })
    }

    /// Builds a dataset from sparse entries; duplicates are rejected and
    /// missing pairs are zero.
    pub fn from_entries<I>(n: QubitCount, m: u64, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Setting, Outcome, u64)>,
    {
        let dim = n.dim();
        let mut counts = vec![0u64; n.num_settings() * dim];
        let mut seen = vec![false; counts.len()];
        for (a, r, k) in entries {
            if a.len() != n.get() || r.len() != n.get() {
                return Err(Error::Dataset(format!(
                    "entry ({a}, {r}) does not have {n} qubits"
                )));
            }
            let idx = a.index() * dim + r.index();
            if seen[idx] {
                return Err(Error::Dataset(format!("duplicate entry ({a}, {r})")));
            }
            seen[idx] = true;
            counts[idx] = k;
        }
        Self::new(n, m, counts)
    }

    pub fn qubits(&self) -> QubitCount {
        self.n
    }

    pub fn repetitions(&self) -> u64 {
        self.m
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, a: &Setting, r: &Outcome) -> u64 {
        self.counts[a.index() * self.n.dim() + r.index()]
    }

    /// Nonzero cells as `(setting, outcome, count)` in enumeration order.
    pub fn nonzero(&self) -> impl Iterator<Item = (Setting, Outcome, u64)> + '_ {
        let n = self.n.get();
        let dim = self.n.dim();
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, k)| **k > 0)
            .map(move |(i, k)| {
                (
                    Setting::from_index(n, i / dim),
                    Outcome::from_index(n, i % dim),
                    *k,
                )
            })
    }
}

/// Per-setting outcome frequencies `p̂_{(r,a)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalFrequencies {
    n: QubitCount,
    values: Vec<f64>,
}

impl EmpiricalFrequencies {
    /// Wraps a 6ⁿ table, checking range and per-setting normalization.
    pub fn from_table(n: QubitCount, values: Vec<f64>) -> Result<Self> {
        let dim = n.dim();
        if values.len() != n.num_settings() * dim {
            return Err(Error::Dataset(format!(
                "expected {} frequencies, got {}",
                n.num_settings() * dim,
                values.len()
            )));
        }
        for (ai, block) in values.chunks(dim).enumerate() {
            if let Some((ri, v)) = block
                .iter()
                .enumerate()
                .find(|(_, v)| !(-PROBABILITY_CLIP_TOL..=1.0 + PROBABILITY_CLIP_TOL).contains(*v))
            {
                return Err(Error::InvalidProbability {
                    value: *v,
                    setting: Setting::from_index(n.get(), ai).to_string(),
                    outcome: Outcome::from_index(n.get(), ri).to_string(),
                });
            }
            let s: f64 = block.iter().sum();
            if (s - 1.0).abs() > NORMALIZATION_TOL {
                return Err(Error::Dataset(format!(
                    "frequencies of setting {} sum to {s}",
                    Setting::from_index(n.get(), ai)
                )));
            }
        }
        Ok(Self { n, values })
    }

    pub fn qubits(&self) -> QubitCount {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, a: &Setting, r: &Outcome) -> f64 {
        self.values[a.index() * self.n.dim() + r.index()]
    }
}

/// `p̂ = counts / m`.
pub fn empirical_frequencies(d: &Dataset) -> Result<EmpiricalFrequencies> {
    // re-check: a Dataset built through `new` always satisfies this
    let d = Dataset::new(d.n, d.m, d.counts.clone())?;
    let m = d.m as f64;
    let values = d.counts.iter().map(|&k| k as f64 / m).collect();
    EmpiricalFrequencies::from_table(d.n, values)
}

/// Draws `m` outcomes for every setting from the exact distribution of `rho`.
///
/// Each setting uses its own ChaCha stream (`seed`, stream = setting index),
/// so the result does not depend on iteration order or thread scheduling.
pub fn simulate_dataset(rho: &DensityMatrix, m: u64, seed: u64) -> Result<Dataset> {
    if m == 0 {
        return Err(Error::Range("m must be at least 1".into()));
    }
    let n = rho.qubits();
    let dim = n.dim();
    let mut table = probability_table(rho)?;
    clip_probabilities(n, &mut table)?;
    let mut counts = vec![0u64; table.len()];
    counts
        .par_chunks_mut(dim)
        .zip(table.par_chunks(dim))
        .enumerate()
        .try_for_each(|(ai, (out, probs))| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(ai as u64);
            sample_multinomial(&mut rng, m, probs, out)
        })?;
    Dataset::new(n, m, counts)
}

fn clip_probabilities(n: QubitCount, table: &mut [f64]) -> Result<()> {
    let dim = n.dim();
    for (i, p) in table.iter_mut().enumerate() {
        if *p < 0.0 || *p > 1.0 {
            if *p < -PROBABILITY_CLIP_TOL || *p > 1.0 + PROBABILITY_CLIP_TOL {
                return Err(Error::InvalidProbability {
                    value: *p,
                    setting: Setting::from_index(n.get(), i / dim).to_string(),
                    outcome: Outcome::from_index(n.get(), i % dim).to_string(),
                });
            }
            *p = p.clamp(0.0, 1.0);
        }
    }
    Ok(())
}

/// Multinomial draw as a chain of conditional binomials.
fn sample_multinomial(rng: &mut ChaCha8Rng, m: u64, probs: &[f64], out: &mut [u64]) -> Result<()> {
    let mut remaining = m;
    let mut mass: f64 = probs.iter().sum();
    let last = probs.len() - 1;
    for (i, &p) in probs.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if i == last {
            out[i] = remaining;
            break;
        }
        let q = if mass > 0.0 {
            (p / mass).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let k = if q >= 1.0 {
            remaining
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining, q)
                .map_err(|e| Error::Range(format!("binomial({remaining}, {q}): {e}")))?
                .sample(rng)
        };
        out[i] = k;
        remaining -= k;
        mass -= p;
    }
    Ok(())
}
