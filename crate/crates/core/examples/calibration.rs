//! The three penalty calibrations: oracle, theoretical and bootstrap.

use tomorank::calibration::{nu_bootstrap, nu_oracle, nu_theory};
use tomorank::experiments::simulate_estimate;
use tomorank::inversion::hoeffding_radius;
use tomorank::rank::penalized_fit;
use tomorank::states::diag_state;
use tomorank::QubitCount;

fn main() -> tomorank::Result<()> {
    let n = QubitCount::new(3)?;
    let m = 200;
    let rho = diag_state(n, 2)?;
    let est = simulate_estimate(&rho, m, 11)?;

    let oracle = nu_oracle(&est, &rho)?;
    let theory = nu_theory(n, m, 0.0, 1.0)?;
    let boot = nu_bootstrap(&est, m, 20, 12)?;
    println!(
        "hoeffding radius (eps = 0.05): {:.4}",
        hoeffding_radius(n, m, 0.05)?
    );

    for (name, nu) in [
        ("oracle", oracle),
        ("theory", theory),
        ("bootstrap", boot.value),
    ] {
        let k = penalized_fit(&est, nu)?.k_hat;
        println!("{name:<9} nu = {nu:.5}  k_hat = {k}");
    }
    Ok(())
}
