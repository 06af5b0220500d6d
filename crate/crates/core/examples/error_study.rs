//! Operator-norm error of the linear estimator across ranks and sample sizes.

use tomorank::experiments::{error_study, to_csv, ErrorStudyConfig};
use tomorank::QubitCount;

fn main() -> tomorank::Result<()> {
    let rows = error_study(&ErrorStudyConfig {
        n: QubitCount::new(4)?,
        ms: vec![50, 100],
        ds: (1..=6).collect(),
        reps: 20,
        seed: 2,
    })?;
    print!("{}", to_csv(&rows)?);
    Ok(())
}
