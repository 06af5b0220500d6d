//! Command-line front end used by the `tomorank` binary.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 invalid
//! input data, 1 anything else.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::calibration::{Aggregation, PenaltyChoice};
use crate::error::Error;
use crate::experiments::{
    error_study, rank_study, spectrum_table, to_csv, ErrorStudyConfig, PenaltyParams, PenaltySpec,
    RankStudyConfig, StateSpec, DEFAULT_REPETITIONS,
};
use crate::inversion::{linear_estimator, LinearEstimate};
use crate::io::{calibration_to_json, read_dataset, write_dataset, write_state, FitReport};
use crate::measurement::{empirical_frequencies, simulate_dataset, Dataset};
use crate::pauli::QubitCount;
use crate::rank::penalized_fit;
use crate::states::DensityMatrix;

const CSV_SCHEMAS: &str = "\
CSV outputs (comma separator, header row):
  rank-study   d,m,mode,frequency,mean_nu,mean_error
  error-study  d,m,mean_op_error,max_op_error,max_nu
  spectrum     index,singular_value,threshold   (singular values increasing)

Exit codes: 0 ok, 2 configuration error, 3 I/O error, 4 invalid data.";

#[derive(Debug, Parser)]
#[command(
    name = "tomorank",
    version,
    about = "Pauli-measurement state tomography with rank-penalized estimation",
    after_help = CSV_SCHEMAS
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a dataset from a known state and write it as JSON.
    Simulate(SimulateArgs),
    /// Linear estimate, penalty calibration and rank-penalized fit of a dataset.
    Estimate(EstimateArgs),
    /// Compute the rank penalty for a dataset and write a calibration report.
    Calibrate(CalibrateArgs),
    /// Frequency of selecting the true rank of D_d over a sweep of d and m.
    RankStudy(RankStudyArgs),
    /// Operator-norm error of the linear estimator over a sweep of d and m.
    ErrorStudy(ErrorStudyArgs),
    /// Singular values of the linear estimate beside the sqrt(nu) threshold.
    Spectrum(CalibrateArgs),
}

#[derive(Debug, Args)]
struct StateArgs {
    /// diag, ghz, w, mixture, or a path to a state JSON file.
    #[arg(long, default_value = "diag")]
    state: String,
    /// Rank of the diagonal state (diag, mixture).
    #[arg(long)]
    d: Option<usize>,
    /// GHZ weight of the mixture.
    #[arg(long)]
    p: Option<f64>,
}

#[derive(Debug, Args)]
struct PenaltyArgs {
    /// oracle, theory, bootstrap, or a fixed non-negative value.
    #[arg(long, default_value = "bootstrap")]
    penalty: String,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// Bootstrap repetitions.
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: usize,
    /// Aggregate bootstrap norms as mean of squares instead of squared mean.
    #[arg(long)]
    mean_squared: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: u64,
    #[command(flatten)]
    state: StateArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output dataset JSON file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Dataset JSON file.
    dataset: PathBuf,
    #[command(flatten)]
    penalty: PenaltyArgs,
    /// True state, required by the oracle penalty.
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Output directory for fit.json, estimate.json and physical.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    /// Dataset JSON file.
    dataset: PathBuf,
    #[command(flatten)]
    penalty: PenaltyArgs,
    /// True state, required by the oracle penalty.
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RankStudyArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated repetition counts.
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u64>,
    /// Comma-separated ranks.
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    /// Comma-separated penalty modes.
    #[arg(long, value_delimiter = ',', default_value = "oracle,theory")]
    penalty: Vec<String>,
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    eps: f64,
    /// Repetitions per (d, m) cell.
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: usize,
    /// Bootstrap repetitions inside each run.
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    boot_reps: usize,
    #[arg(long)]
    mean_squared: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ErrorStudyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u64>,
    #[arg(long, value_delimiter = ',', required = true)]
    d: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed command: message and process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

type CliResult<T> = std::result::Result<T, CliError>;

fn fail(code: i32, e: impl std::fmt::Display) -> CliError {
    CliError {
        code,
        message: e.to_string(),
    }
}

fn config<T>(r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        Error::Io(_) => fail(3, e),
        _ => fail(2, e),
    })
}

fn input<T>(r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        Error::Io(_) => fail(3, e),
        _ => fail(4, e),
    })
}

fn compute<T>(r: crate::Result<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        Error::Io(_) => fail(3, e),
        Error::Dataset(_) | Error::InvalidProbability { .. } | Error::Parse(_) => fail(4, e),
        Error::Range(_) | Error::QubitLimit { .. } => fail(2, e),
        _ => fail(1, e),
    })
}

fn io_out<T>(r: std::io::Result<T>) -> CliResult<T> {
    r.map_err(|e| fail(3, e))
}

/// Parses `args` (including the program name) and runs the command, writing
/// human-readable output to `stdout`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> CliResult<()>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            io_out(write!(stdout, "{e}"))?;
            return Ok(());
        }
        Err(e) => return Err(fail(2, e.render())),
    };
    match cli.command {
        Command::Simulate(a) => cmd_simulate(&a, stdout),
        Command::Estimate(a) => cmd_estimate(&a, stdout),
        Command::Calibrate(a) => cmd_calibrate(&a, stdout),
        Command::RankStudy(a) => cmd_rank_study(&a, stdout),
        Command::ErrorStudy(a) => cmd_error_study(&a, stdout),
        Command::Spectrum(a) => cmd_spectrum(&a, stdout),
    }
}

fn parse_state(name: &str, d: Option<usize>, p: Option<f64>) -> CliResult<StateSpec> {
    let need_d = || d.ok_or_else(|| fail(2, format!("--state {name} requires --d")));
    Ok(match name {
        "diag" => StateSpec::Diag { d: need_d()? },
        "ghz" => StateSpec::Ghz,
        "w" => StateSpec::W,
        "mixture" => StateSpec::Mixture {
            d: need_d()?,
            p: p.ok_or_else(|| fail(2, "--state mixture requires --p"))?,
        },
        path => StateSpec::File(PathBuf::from(path)),
    })
}

fn build_state(spec: &StateSpec, n: QubitCount) -> CliResult<DensityMatrix> {
    match spec {
        StateSpec::File(_) => input(spec.build(n)),
        _ => config(spec.build(n)),
    }
}

fn write_text(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => io_out(fs::write(p, text)),
        None => io_out(stdout.write_all(text.as_bytes())),
    }
}

fn cmd_simulate(a: &SimulateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let n = config(QubitCount::new(a.n))?;
    if a.m == 0 {
        return Err(fail(2, "--m must be at least 1"));
    }
    let spec = parse_state(&a.state.state, a.state.d, a.state.p)?;
    let rho = build_state(&spec, n)?;
    let data = compute(simulate_dataset(&rho, a.m, a.seed))?;
    config(write_dataset(&a.out, &data))?;
    io_out(writeln!(
        stdout,
        "simulated {spec}: n = {}, m = {}, nonzero cells = {}, written to {}",
        n,
        a.m,
        data.nonzero().count(),
        a.out.display()
    ))
}

struct Prepared {
    data: Dataset,
    est: LinearEstimate,
    penalty: PenaltyChoice,
}

fn prepare(
    dataset: &Path,
    pa: &PenaltyArgs,
    state: Option<&str>,
    d: Option<usize>,
    p: Option<f64>,
) -> CliResult<Prepared> {
    let spec: PenaltySpec = config(pa.penalty.parse())?;
    let truth_spec = state.map(|s| parse_state(s, d, p)).transpose()?;
    if spec == PenaltySpec::Oracle && truth_spec.is_none() {
        return Err(fail(2, "the oracle penalty needs the true state (--state)"));
    }
    let data = input(read_dataset(dataset))?;
    let truth = truth_spec
        .map(|s| build_state(&s, data.qubits()))
        .transpose()?;
    let est = input(empirical_frequencies(&data).and_then(|f| linear_estimator(&f)))?;
    let params = PenaltyParams {
        theta: pa.theta,
        eps: pa.eps,
        bootstrap_reps: pa.reps,
        aggregation: if pa.mean_squared {
            Aggregation::MeanSquaredNorm
        } else {
            Aggregation::SquaredMeanNorm
        },
    };
    let penalty = compute(spec.to_penalty(&params, pa.seed).resolve(
        &est,
        data.repetitions(),
        truth.as_ref(),
    ))?;
    Ok(Prepared { data, est, penalty })
}

fn cmd_estimate(a: &EstimateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let prep = prepare(&a.dataset, &a.penalty, a.state.as_deref(), a.d, a.p)?;
    let fit = compute(penalized_fit(&prep.est, prep.penalty.value))?;
    io_out(fs::create_dir_all(&a.out))?;
    let report = FitReport::new(&fit, prep.penalty);
    io_out(fs::write(a.out.join("fit.json"), report.to_json()))?;
    config(write_state(&a.out.join("estimate.json"), &fit.estimate))?;
    config(write_state(
        &a.out.join("physical.json"),
        fit.physical_estimate.matrix(),
    ))?;

    let threshold = fit.nu.sqrt();
    io_out(writeln!(
        stdout,
        "n = {}, m = {}, penalty = {} (nu = {:.6}, sqrt(nu) = {:.6})",
        prep.data.qubits(),
        prep.data.repetitions(),
        report.penalty.mode,
        fit.nu,
        threshold
    ))?;
    io_out(writeln!(stdout, "k_hat = {}", fit.k_hat))?;
    for (i, s) in fit.singular_values.iter().enumerate() {
        let mark = if *s >= threshold { "*" } else { " " };
        io_out(writeln!(stdout, "{mark} lambda_{:<3} = {s:.6}", i + 1))?;
    }
    Ok(())
}

fn cmd_calibrate(a: &CalibrateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let prep = prepare(&a.dataset, &a.penalty, a.state.as_deref(), a.d, a.p)?;
    write_text(
        a.out.as_deref(),
        &calibration_to_json(&prep.penalty),
        stdout,
    )
}

fn cmd_spectrum(a: &CalibrateArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let prep = prepare(&a.dataset, &a.penalty, a.state.as_deref(), a.d, a.p)?;
    let rows = compute(spectrum_table(&prep.est, prep.penalty.value))?;
    write_text(a.out.as_deref(), &compute(to_csv(&rows))?, stdout)
}

fn cmd_rank_study(a: &RankStudyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let penalties = a
        .penalty
        .iter()
        .map(|s| config(s.parse::<PenaltySpec>()))
        .collect::<CliResult<Vec<_>>>()?;
    let cfg = RankStudyConfig {
        n: config(QubitCount::new(a.n))?,
        ms: a.m.clone(),
        ds: a.d.clone(),
        penalties,
        params: PenaltyParams {
            theta: a.theta,
            eps: a.eps,
            bootstrap_reps: a.boot_reps,
            aggregation: if a.mean_squared {
                Aggregation::MeanSquaredNorm
            } else {
                Aggregation::SquaredMeanNorm
            },
        },
        reps: a.reps,
        seed: a.seed,
    };
    let result = compute(rank_study(&cfg))?;
    write_text(a.out.as_deref(), &compute(to_csv(&result.rows))?, stdout)
}

fn cmd_error_study(a: &ErrorStudyArgs, stdout: &mut dyn Write) -> CliResult<()> {
    let cfg = ErrorStudyConfig {
        n: config(QubitCount::new(a.n))?,
        ms: a.m.clone(),
        ds: a.d.clone(),
        reps: a.reps,
        seed: a.seed,
    };
    let rows = compute(error_study(&cfg))?;
    write_text(a.out.as_deref(), &compute(to_csv(&rows))?, stdout)
}
