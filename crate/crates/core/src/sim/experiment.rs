use super::engine::run_trials;
use super::report::MonteCarloReport;
use super::scenario::Scenario;
use crate::detect::DetectorSpec;
use crate::error::{Error, Result};
use crate::stat::RngStream;

/// False-alarm estimates over a grid of clutter-only scenarios.
///
/// Grid point `g` runs on stream `(master_seed, g)`, so points are mutually
/// independent and each is reproducible on its own.
pub fn run_pfa_sweep(
    spec: &DetectorSpec,
    grid: &[Scenario],
    trials: u64,
    master_seed: u64,
) -> Result<Vec<MonteCarloReport>> {
    if let Some(s) = grid.iter().find(|s| s.target_present) {
        return Err(Error::param(format!(
            "Pfa sweep scenarios must be target-free (N = {}, lambda = {})",
            s.n_cells, s.clutter_rate
        )));
    }
    grid.iter()
        .enumerate()
        .map(|(g, scenario)| run_trials(spec, scenario, trials, &RngStream::new(master_seed, g as u64)))
        .collect()
}

/// Detection-probability estimates along an SCR grid (dB).
///
/// SCR point `k` runs on stream `(master_seed, k)`. Two curves computed with
/// the same seed therefore share their random draws point by point.
pub fn run_pd_curve(
    spec: &DetectorSpec,
    base: &Scenario,
    scr_grid_db: &[f64],
    trials: u64,
    master_seed: u64,
) -> Result<Vec<MonteCarloReport>> {
    if scr_grid_db.is_empty() {
        return Err(Error::param("SCR grid is empty"));
    }
    scr_grid_db
        .iter()
        .enumerate()
        .map(|(k, &scr)| {
            let scenario = base.clone().with_target(scr)?;
            run_trials(spec, &scenario, trials, &RngStream::new(master_seed, k as u64))
        })
        .collect()
}

/// `lambdas x interferer settings` grid of clutter-only scenarios; `None`
/// entries in `interferers` mean no interferer.
pub fn pfa_grid(
    n_cells: usize,
    lambdas: &[f64],
    interferers: &[Option<(usize, f64)>],
) -> Result<Vec<Scenario>> {
    let mut grid = Vec::with_capacity(lambdas.len() * interferers.len().max(1));
    for &lambda in lambdas {
        let base = Scenario::clutter_only(n_cells, lambda)?;
        if interferers.is_empty() {
            grid.push(base);
            continue;
        }
        for setting in interferers {
            grid.push(match *setting {
                Some((cell, icr_db)) => base.clone().with_interferer(cell, icr_db)?,
                None => base.clone(),
            });
        }
    }
    Ok(grid)
}
