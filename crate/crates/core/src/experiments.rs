//! Simulation studies: rank-selection frequency, linear-estimator error, and
//! the spectrum/threshold table of a single dataset.
//!
//! Every repetition draws its data from `derive_seed_path(seed, [d, m, rep])`,
//! so all penalty modes in a study see the same datasets and results do not
//! depend on thread scheduling.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::calibration::{Aggregation, Penalty, PenaltyMode};
use crate::error::{Error, Result};
use crate::inversion::{linear_estimator, LinearEstimate};
use crate::measurement::{empirical_frequencies, simulate_dataset};
use crate::pauli::QubitCount;
use crate::rank::{penalized_fit, spectral};
use crate::seed::{derive_seed, derive_seed_path};
use crate::states::{diag_state, ghz, mixture, w_state, DensityMatrix};

/// Default number of repetitions per study cell.
pub const DEFAULT_REPETITIONS: usize = 20;

/// Which state to simulate.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Diag { d: usize },
    Ghz,
    W,
    Mixture { d: usize, p: f64 },
    File(PathBuf),
}

impl StateSpec {
    pub fn build(&self, n: QubitCount) -> Result<DensityMatrix> {
        match self {
            StateSpec::Diag { d } => diag_state(n, *d),
            StateSpec::Ghz => ghz(n),
            StateSpec::W => w_state(n),
            StateSpec::Mixture { d, p } => mixture(n, *d, *p),
            StateSpec::File(path) => {
                let h = crate::io::read_state(path)?;
                if h.dim() != n.dim() {
                    return Err(Error::DimensionMismatch {
                        left: n.dim(),
                        right: h.dim(),
                    });
                }
                DensityMatrix::new(h)
            }
        }
    }

    /// Rank of the state when it is known by construction.
    pub fn nominal_rank(&self) -> Option<usize> {
        match self {
            StateSpec::Diag { d } => Some(*d),
            StateSpec::Ghz | StateSpec::W => Some(1),
            StateSpec::Mixture { d, .. } => Some(*d + 1),
            StateSpec::File(_) => None,
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Diag { d } => write!(f, "diag(d={d})"),
            StateSpec::Ghz => write!(f, "ghz"),
            StateSpec::W => write!(f, "w"),
            StateSpec::Mixture { d, p } => write!(f, "mixture(d={d}, p={p})"),
            StateSpec::File(p) => write!(f, "file({})", p.display()),
        }
    }
}

/// Penalty mode as requested on a study sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PenaltySpec {
    Oracle,
    Theory,
    Bootstrap,
    Fixed(f64),
}

impl FromStr for PenaltySpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(PenaltySpec::Oracle),
            "theory" => Ok(PenaltySpec::Theory),
            "bootstrap" => Ok(PenaltySpec::Bootstrap),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 0.0)
                .map(PenaltySpec::Fixed)
                .ok_or_else(|| {
                    Error::Parse(format!(
                        "penalty {other:?}: expected oracle, theory, bootstrap or a non-negative number"
                    ))
                }),
        }
    }
}

impl fmt::Display for PenaltySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PenaltySpec::Oracle => f.write_str("oracle"),
            PenaltySpec::Theory => f.write_str("theory"),
            PenaltySpec::Bootstrap => f.write_str("bootstrap"),
            PenaltySpec::Fixed(v) => write!(f, "{v}"),
        }
    }
}

/// Parameters shared by the penalty modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    pub theta: f64,
    pub eps: f64,
    pub bootstrap_reps: usize,
    pub aggregation: Aggregation,
}

impl Default for PenaltyParams {
    fn default() -> Self {
        Self {
            theta: 0.0,
            eps: 1.0,
            bootstrap_reps: DEFAULT_REPETITIONS,
            aggregation: Aggregation::default(),
        }
    }
}

impl PenaltySpec {
    pub fn to_penalty(self, params: &PenaltyParams, seed: u64) -> Penalty {
        match self {
            PenaltySpec::Oracle => Penalty::Oracle,
            PenaltySpec::Theory => Penalty::Theory {
                theta: params.theta,
                eps: params.eps,
            },
            PenaltySpec::Bootstrap => Penalty::Bootstrap {
                reps: params.bootstrap_reps,
                seed,
                aggregation: params.aggregation,
            },
            PenaltySpec::Fixed(v) => Penalty::Fixed(v),
        }
    }
}

/// One simulated estimation run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub d: usize,
    pub m: u64,
    pub mode: PenaltyMode,
    pub rep: usize,
    pub k_hat: usize,
    pub nu: f64,
    /// `‖ρ̂ − ρ‖` of the linear estimate.
    pub op_error: f64,
    /// `‖R̂_{k̂} − ρ‖_F`.
    pub frobenius_error: f64,
    pub runtime: Duration,
}

/// Simulates a dataset from `rho` and returns its linear estimate.
pub fn simulate_estimate(rho: &DensityMatrix, m: u64, seed: u64) -> Result<LinearEstimate> {
    let data = simulate_dataset(rho, m, seed)?;
    linear_estimator(&empirical_frequencies(&data)?)
}

/// Aggregate row of the rank-selection study.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RankStudyRow {
    pub d: usize,
    pub m: u64,
    pub mode: String,
    pub frequency: f64,
    pub mean_nu: f64,
    pub mean_error: f64,
}

/// Records and aggregates of a study.
#[derive(Debug, Clone)]
pub struct StudyResult {
    pub records: Vec<RunRecord>,
    pub rows: Vec<RankStudyRow>,
}

/// Sweep of the rank-selection study over `D_d` states.
#[derive(Debug, Clone)]
pub struct RankStudyConfig {
    pub n: QubitCount,
    pub ms: Vec<u64>,
    pub ds: Vec<usize>,
    pub penalties: Vec<PenaltySpec>,
    pub params: PenaltyParams,
    pub reps: usize,
    pub seed: u64,
}

fn check_sweep(n: QubitCount, ms: &[u64], ds: &[usize], reps: usize) -> Result<()> {
    if ms.is_empty() || ds.is_empty() {
        return Err(Error::Range("empty sweep".into()));
    }
    if reps == 0 {
        return Err(Error::Range("repetitions must be at least 1".into()));
    }
    if let Some(m) = ms.iter().find(|m| **m == 0) {
        return Err(Error::Range(format!("m = {m} must be at least 1")));
    }
    if let Some(d) = ds.iter().find(|d| **d == 0 || **d > n.dim()) {
        return Err(Error::Range(format!(
            "rank d = {d} outside 1..={}",
            n.dim()
        )));
    }
    Ok(())
}

/// For each `(d, m)` and penalty mode: simulate, estimate, and record whether
/// the selected rank equals `d`.
pub fn rank_study(cfg: &RankStudyConfig) -> Result<StudyResult> {
    check_sweep(cfg.n, &cfg.ms, &cfg.ds, cfg.reps)?;
    if cfg.penalties.is_empty() {
        return Err(Error::Range("no penalty mode given".into()));
    }
    let mut cells = Vec::new();
    for &d in &cfg.ds {
        for &m in &cfg.ms {
            cells.push((d, m));
        }
    }
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for &(d, m) in &cells {
        let rho = diag_state(cfg.n, d)?;
        let runs: Vec<Vec<RunRecord>> = (0..cfg.reps)
            .into_par_iter()
            .map(|rep| {
                let path = [d as u64, m, rep as u64];
                let data_seed = derive_seed_path(cfg.seed, &path);
                let t0 = Instant::now();
                let est = simulate_estimate(&rho, m, data_seed)?;
                let op_error = est.matrix.sub(rho.matrix())?.operator_norm()?;
                let base = t0.elapsed();
                cfg.penalties
                    .iter()
                    .map(|spec| {
                        let t1 = Instant::now();
                        let penalty = spec.to_penalty(&cfg.params, derive_seed(data_seed, 1));
                        let choice = penalty.resolve(&est, m, Some(&rho))?;
                        let fit = penalized_fit(&est, choice.value)?;
                        Ok(RunRecord {
                            d,
                            m,
                            mode: choice.mode,
                            rep,
                            k_hat: fit.k_hat,
                            nu: choice.value,
                            op_error,
                            frobenius_error: fit.estimate.frobenius_distance(rho.matrix())?,
                            runtime: base + t1.elapsed(),
                        })
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        for (pi, spec) in cfg.penalties.iter().enumerate() {
            let cell: Vec<&RunRecord> = runs.iter().map(|r| &r[pi]).collect();
            let k = cell.len() as f64;
            rows.push(RankStudyRow {
                d,
                m,
                mode: spec.to_string(),
                frequency: cell.iter().filter(|r| r.k_hat == d).count() as f64 / k,
                mean_nu: cell.iter().map(|r| r.nu).sum::<f64>() / k,
                mean_error: cell.iter().map(|r| r.frobenius_error).sum::<f64>() / k,
            });
        }
        records.extend(runs.into_iter().flatten());
    }
    Ok(StudyResult { records, rows })
}

/// Row of the linear-estimator error study.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ErrorStudyRow {
    pub d: usize,
    pub m: u64,
    pub mean_op_error: f64,
    pub max_op_error: f64,
    /// Largest `‖ρ̂ − ρ‖²`, i.e. the largest oracle penalty.
    pub max_nu: f64,
}

#[derive(Debug, Clone)]
pub struct ErrorStudyConfig {
    pub n: QubitCount,
    pub ms: Vec<u64>,
    pub ds: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
}

/// Operator-norm errors `‖ρ̂ − ρ‖` for each `(d, m)`.
pub fn error_study(cfg: &ErrorStudyConfig) -> Result<Vec<ErrorStudyRow>> {
    check_sweep(cfg.n, &cfg.ms, &cfg.ds, cfg.reps)?;
    let mut rows = Vec::new();
    for &d in &cfg.ds {
        let rho = diag_state(cfg.n, d)?;
        for &m in &cfg.ms {
            let errs = oracle_errors(
                &rho,
                m,
                cfg.reps,
                derive_seed_path(cfg.seed, &[d as u64, m]),
            )?;
            let max = errs.iter().cloned().fold(0.0, f64::max);
            rows.push(ErrorStudyRow {
                d,
                m,
                mean_op_error: errs.iter().sum::<f64>() / errs.len() as f64,
                max_op_error: max,
                max_nu: max * max,
            });
        }
    }
    Ok(rows)
}

/// `‖ρ̂ − ρ‖` over `reps` simulated datasets.
pub fn oracle_errors(rho: &DensityMatrix, m: u64, reps: usize, seed: u64) -> Result<Vec<f64>> {
    (0..reps)
        .into_par_iter()
        .map(|rep| {
            let est = simulate_estimate(rho, m, derive_seed(seed, rep as u64))?;
            est.matrix.sub(rho.matrix())?.operator_norm()
        })
        .collect()
}

/// Row of the spectrum table.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SpectrumRow {
    pub index: usize,
    pub singular_value: f64,
    pub threshold: f64,
}

/// Singular values of the linear estimate in increasing order beside the
/// constant threshold `√ν`.
pub fn spectrum_table(est: &LinearEstimate, nu: f64) -> Result<Vec<SpectrumRow>> {
    if !(nu.is_finite() && nu >= 0.0) {
        return Err(Error::Range(format!("penalty nu = {nu} must be >= 0")));
    }
    let dec = spectral(est)?;
    let threshold = nu.sqrt();
    Ok(dec
        .singular_values
        .iter()
        .rev()
        .enumerate()
        .map(|(index, &singular_value)| SpectrumRow {
            index: index + 1,
            singular_value,
            threshold,
        })
        .collect())
}

/// Serializes rows as comma-separated values with a header row.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
