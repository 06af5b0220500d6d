//! Simulate measurement counts from a GHZ state and reconstruct it with the
//! closed-form linear estimator.

use tomorank::inversion::linear_estimator;
use tomorank::measurement::{empirical_frequencies, probability_table, simulate_dataset};
use tomorank::states::ghz;
use tomorank::{EmpiricalFrequencies, QubitCount};

fn main() -> tomorank::Result<()> {
    let n = QubitCount::new(3)?;
    let rho = ghz(n)?;

    let exact = EmpiricalFrequencies::from_table(n, probability_table(&rho)?)?;
    let est = linear_estimator(&exact)?;
    println!(
        "exact probabilities: error {:.2e}",
        est.matrix.frobenius_distance(rho.matrix())?
    );

    for m in [50, 500, 5000] {
        let data = simulate_dataset(&rho, m, 1)?;
        let est = linear_estimator(&empirical_frequencies(&data)?)?;
        let err = est.matrix.sub(rho.matrix())?.operator_norm()?;
        println!("m = {m:>4}: operator-norm error {err:.4}");
    }
    Ok(())
}
