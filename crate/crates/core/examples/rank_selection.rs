//! Rank-penalized spectral estimation: the objective over k, the selected
//! rank and the threshold √ν.

use tomorank::experiments::simulate_estimate;
use tomorank::rank::penalized_fit;
use tomorank::states::diag_state;
use tomorank::QubitCount;

fn main() -> tomorank::Result<()> {
    let n = QubitCount::new(4)?;
    let rho = diag_state(n, 3)?;
    let est = simulate_estimate(&rho, 100, 7)?;

    for nu in [0.01, 0.05, 0.2] {
        let fit = penalized_fit(&est, nu)?;
        println!(
            "nu = {nu:<5} sqrt(nu) = {:.3}  k_hat = {}",
            nu.sqrt(),
            fit.k_hat
        );
    }

    let fit = penalized_fit(&est, 0.05)?;
    println!("\n k  lambda_k  objective");
    println!(" 0            {:.4}", fit.objective[0]);
    for (k, (l, obj)) in fit
        .singular_values
        .iter()
        .zip(&fit.objective[1..])
        .enumerate()
        .take(6)
    {
        println!("{:>2}  {l:.4}    {obj:.4}", k + 1);
    }
    Ok(())
}
