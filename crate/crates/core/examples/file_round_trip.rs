//! Dataset and state JSON files: write, read back and estimate.

use tomorank::calibration::nu_theory;
use tomorank::inversion::linear_estimator;
use tomorank::io::{dataset_to_json, read_dataset, read_state, write_dataset, write_state};
use tomorank::measurement::{empirical_frequencies, simulate_dataset};
use tomorank::rank::penalized_fit;
use tomorank::states::diag_state;
use tomorank::QubitCount;

fn main() -> tomorank::Result<()> {
    let dir = std::env::temp_dir().join("tomorank-round-trip");
    std::fs::create_dir_all(&dir)?;
    let n = QubitCount::new(2)?;
    let rho = diag_state(n, 1)?;

    let data = simulate_dataset(&rho, 100, 42)?;
    let data_path = dir.join("dataset.json");
    write_dataset(&data_path, &data)?;
    let back = read_dataset(&data_path)?;
    assert_eq!(back, data);
    println!(
        "{}",
        dataset_to_json(&back)
            .lines()
            .take(8)
            .collect::<Vec<_>>()
            .join("\n")
    );

    let est = linear_estimator(&empirical_frequencies(&back)?)?;
    let fit = penalized_fit(&est, nu_theory(n, 100, 0.0, 1.0)?)?;
    let state_path = dir.join("physical.json");
    write_state(&state_path, fit.physical_estimate.matrix())?;
    let state = read_state(&state_path)?;
    println!(
        "...\nk_hat = {}, physical estimate trace {:.6}",
        fit.k_hat,
        state.trace()
    );
    println!("files in {}", dir.display());
    Ok(())
}
