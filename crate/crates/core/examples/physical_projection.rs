//! Projecting a non-physical estimate onto density matrices, with and
//! without a rank cap.

use tomorank::experiments::simulate_estimate;
use tomorank::states::{nearest_density, w_state};
use tomorank::QubitCount;

fn main() -> tomorank::Result<()> {
    let n = QubitCount::new(3)?;
    let rho = w_state(n)?;
    let est = simulate_estimate(&rho, 40, 3)?;

    let eig = est.matrix.eigen()?;
    println!("linear estimate eigenvalues: {:.3?}", eig.values);

    for cap in [None, Some(1), Some(2)] {
        let sigma = nearest_density(&est.matrix, cap)?;
        println!(
            "cap {cap:?}: rank {}, purity {:.3}, distance to truth {:.4}",
            sigma.rank(1e-9)?,
            sigma.purity(),
            sigma.matrix().frobenius_distance(rho.matrix())?
        );
    }
    Ok(())
}
