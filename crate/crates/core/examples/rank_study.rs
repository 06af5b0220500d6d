//! Frequency of selecting the true rank over a sweep of ranks and sample
//! sizes, printed as CSV.

use tomorank::experiments::{rank_study, to_csv, PenaltyParams, PenaltySpec, RankStudyConfig};
use tomorank::QubitCount;

fn main() -> tomorank::Result<()> {
    let cfg = RankStudyConfig {
        n: QubitCount::new(4)?,
        ms: vec![50, 100],
        ds: (1..=6).collect(),
        penalties: vec![
            PenaltySpec::Oracle,
            PenaltySpec::Theory,
            PenaltySpec::Bootstrap,
        ],
        params: PenaltyParams::default(),
        reps: 20,
        seed: 1,
    };
    let result = rank_study(&cfg)?;
    print!("{}", to_csv(&result.rows)?);
    Ok(())
}
