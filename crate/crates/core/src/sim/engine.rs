use rayon::prelude::*;

use super::report::MonteCarloReport;
use super::scenario::Scenario;
use crate::detect::{decide, ClutterRangeProfile, DetectorSpec};
use crate::error::{Error, Result};
use crate::stat::RngStream;

/// Trials per chunk. Chunk `c` of a run draws from `root.substream(c)`, so
/// results depend only on the root stream and the trial count, never on how
/// many workers process the chunks.
pub const CHUNK_TRIALS: u64 = 1 << 14;

fn run_chunk(spec: &DetectorSpec, scenario: &Scenario, trials: u64, mut rng: RngStream) -> Result<u64> {
    let mut cells = vec![0.0; scenario.n_cells];
    let mut declared = 0;
    for _ in 0..trials {
        let z0 = scenario.draw_into(&mut rng, &mut cells);
        let crp = ClutterRangeProfile::new(cells)?;
        if decide(z0, spec, &crp)?.target_declared {
            declared += 1;
        }
        cells = crp.into_cells();
    }
    Ok(declared)
}

/// Runs `trials` independent trials of `spec` against `scenario` and counts
/// declarations. Chunks run on the current rayon pool; counts are merged by
/// integer addition.
pub fn run_trials(
    spec: &DetectorSpec,
    scenario: &Scenario,
    trials: u64,
    root: &RngStream,
) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(Error::param("trial count must be at least 1"));
    }
    scenario.validate()?;
    spec.validate_for(scenario.n_cells)?;

    let chunks = trials.div_ceil(CHUNK_TRIALS);
    let declared = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK_TRIALS.min(trials - c * CHUNK_TRIALS);
            run_chunk(spec, scenario, count, root.substream(c))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;

    Ok(MonteCarloReport::new(
        trials,
        declared,
        root.master_seed(),
        root.stream_id(),
        scenario.clone(),
        spec.clone(),
    ))
}
