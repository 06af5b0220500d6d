//! Singular values of a linear estimate next to the bootstrap threshold.

use tomorank::calibration::nu_bootstrap;
use tomorank::experiments::{simulate_estimate, spectrum_table, to_csv};
use tomorank::states::mixture;
use tomorank::QubitCount;

fn main() -> tomorank::Result<()> {
    let n = QubitCount::new(4)?;
    let rho = mixture(n, 3, 0.2)?;
    let est = simulate_estimate(&rho, 100, 5)?;
    let nu = nu_bootstrap(&est, 100, 20, 6)?.value;
    print!("{}", to_csv(&spectrum_table(&est, nu)?)?);
    Ok(())
}
