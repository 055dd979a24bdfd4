use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use bayescfar::detect::{variant_pfa, variant_threshold, ClutterRangeProfile};
use bayescfar::oracle::crosscheck::{run_validation, ValidationConfig};
use bayescfar::oracle::QuadratureSettings;
use bayescfar::sim::{pfa_grid, run_pd_curve, run_pfa_sweep, MonteCarloReport, Scenario};

use crate::config::{parse_reals, Config, DEFAULT_N_CELLS};
use crate::error::CliError;
use crate::output::{write_rows, Field, PD_COLUMNS, PFA_COLUMNS};

pub const DEFAULT_PFA_TRIALS: u64 = 1_000_000;
pub const DEFAULT_PD_TRIALS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 1;

fn crp_from_config(cfg: &Config) -> Result<ClutterRangeProfile, CliError> {
    let cells = match (cfg.get("crp"), cfg.get("crp_file")) {
        (Some(inline), _) => parse_reals("crp", inline)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read crp_file {path}: {e}")))?;
            parse_reals("crp_file", &text)?
        }
        (None, None) => return Err(CliError::Config("threshold needs crp or crp_file".into())),
    };
    Ok(ClutterRangeProfile::new(cells)?)
}

fn with_output<F>(cfg: &Config, body: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> io::Result<()>,
{
    match cfg.get("out") {
        None | Some("-") => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)?;
        }
        Some(path) => {
            let mut w = BufWriter::new(File::create(Path::new(path))?);
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

/// Runs `f` on a rayon pool sized by `workers` (all cores when unset).
fn with_workers<T: Send>(cfg: &Config, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let workers = cfg.usize_or("workers", 0)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

pub fn threshold(cfg: &Config) -> Result<(), CliError> {
    let crp = crp_from_config(cfg)?;
    let spec = cfg.detector(crp.len())?;
    let alpha = spec.alpha();
    let tau = variant_threshold(alpha, &spec.variant, &crp).map_err(|e| CliError::Failed(e.to_string()))?;
    let pfa = variant_pfa(tau, &spec.variant, &crp).map_err(|e| CliError::Failed(e.to_string()))?;
    with_output(cfg, |w| {
        writeln!(w, "variant = {}", spec.kind())?;
        writeln!(w, "N = {}", crp.len())?;
        writeln!(w, "design_pfa = {alpha:.16e}")?;
        writeln!(w, "tau = {tau:.16e}")?;
        writeln!(w, "pfa_at_tau = {pfa:.16e}")
    })
}

fn interferer_cell(cfg: &Config, n: usize) -> Result<usize, CliError> {
    let default = cfg.usize_or("interferer_index", n)?;
    cfg.usize_or("interferer_cell", default)
}

/// `icr_db` entries; `none` stands for "no interferer".
fn icr_settings(cfg: &Config) -> Result<Vec<Option<f64>>, CliError> {
    let Some(text) = cfg.get("icr_db") else {
        return Ok(vec![None]);
    };
    let settings: Vec<Option<f64>> = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            if t.eq_ignore_ascii_case("none") {
                Ok(None)
            } else {
                parse_reals("icr_db", t).map(|v| Some(v[0]))
            }
        })
        .collect::<Result<_, _>>()?;
    if settings.is_empty() {
        return Ok(vec![None]);
    }
    Ok(settings)
}

fn icr_field(s: &Scenario) -> (Field, Field) {
    match s.interferer {
        Some(i) => (Field::Real(i.icr_db), Field::Int(i.cell as u64)),
        None => (Field::Missing, Field::Missing),
    }
}

fn pfa_row(r: &MonteCarloReport) -> Vec<Field> {
    let (icr, cell) = icr_field(&r.scenario);
    vec![
        Field::Text(r.spec.kind().to_string()),
        Field::Int(r.scenario.n_cells as u64),
        Field::Real(r.scenario.clutter_rate),
        icr,
        cell,
        Field::Int(r.trials),
        Field::Int(r.declared),
        Field::Real(r.estimate),
        Field::Real(r.ci_low),
        Field::Real(r.ci_high),
        Field::Int(r.master_seed),
    ]
}

fn pd_row(r: &MonteCarloReport) -> Vec<Field> {
    let (icr, _) = icr_field(&r.scenario);
    vec![
        Field::Text(r.spec.kind().to_string()),
        Field::Int(r.scenario.n_cells as u64),
        Field::Real(r.scenario.scr_db),
        icr,
        Field::Int(r.trials),
        Field::Real(r.estimate),
        Field::Real(r.ci_low),
        Field::Real(r.ci_high),
        Field::Int(r.master_seed),
    ]
}

pub fn pfa_sweep(cfg: &Config) -> Result<(), CliError> {
    let n = cfg.usize_or("n_cells", DEFAULT_N_CELLS)?;
    let spec = cfg.detector(n)?;
    let lambdas = cfg.f64_list("lambda_grid")?.unwrap_or_else(|| vec![1.0]);
    if lambdas.is_empty() {
        return Err(CliError::Config("lambda_grid is empty".into()));
    }
    let cell = interferer_cell(cfg, n)?;
    let interferers: Vec<Option<(usize, f64)>> =
        icr_settings(cfg)?.into_iter().map(|icr| icr.map(|db| (cell, db))).collect();
    let grid = pfa_grid(n, &lambdas, &interferers)?;
    let trials = cfg.trials(DEFAULT_PFA_TRIALS)?;
    let seed = cfg.u64_or("seed", DEFAULT_SEED)?;
    let format = cfg.format()?;

    let reports = with_workers(cfg, || run_pfa_sweep(&spec, &grid, trials, seed))?
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let rows: Vec<Vec<Field>> = reports.iter().map(pfa_row).collect();
    with_output(cfg, |w| write_rows(w, format, PFA_COLUMNS, &rows))
}

pub fn pd_curve(cfg: &Config) -> Result<(), CliError> {
    let n = cfg.usize_or("n_cells", DEFAULT_N_CELLS)?;
    let spec = cfg.detector(n)?;
    let lambda = cfg
        .f64_list("lambda_grid")?
        .and_then(|l| l.first().copied())
        .unwrap_or(1.0);
    let scr_grid = cfg
        .f64_list("scr_grid_db")?
        .unwrap_or_else(|| (0..=10).map(|k| 2.0 * k as f64).collect());
    if scr_grid.is_empty() {
        return Err(CliError::Config("scr_grid_db is empty".into()));
    }
    let mut base = Scenario::clutter_only(n, lambda)?;
    let icr = icr_settings(cfg)?;
    if icr.len() > 1 {
        return Err(CliError::Config("pd-curve takes a single icr_db value".into()));
    }
    if let Some(db) = icr[0] {
        base = base.with_interferer(interferer_cell(cfg, n)?, db)?;
    }
    let trials = cfg.trials(DEFAULT_PD_TRIALS)?;
    let seed = cfg.u64_or("seed", DEFAULT_SEED)?;
    let format = cfg.format()?;

    let reports = with_workers(cfg, || run_pd_curve(&spec, &base, &scr_grid, trials, seed))?
        .map_err(|e| CliError::Failed(e.to_string()))?;
    let rows: Vec<Vec<Field>> = reports.iter().map(pd_row).collect();
    with_output(cfg, |w| write_rows(w, format, PD_COLUMNS, &rows))
}

pub fn validate(cfg: &Config, perturbation: f64) -> Result<(), CliError> {
    let defaults = ValidationConfig::default();
    let quadrature = QuadratureSettings::new(
        cfg.f64_opt("rel_tol")?.unwrap_or(defaults.quadrature.rel_tol),
        cfg.usize_or("max_subdivisions", defaults.quadrature.max_subdivisions)?,
    )?;
    let vcfg = ValidationConfig {
        instances: cfg.usize_or("instances", defaults.instances)?,
        reduction_triples: cfg.usize_or("reduction_triples", defaults.reduction_triples)?,
        seed: cfg.u64_or("seed", defaults.seed)?,
        quadrature,
        perturbation,
    };
    let results = run_validation(&vcfg).map_err(|e| CliError::Failed(e.to_string()))?;
    let all_pass = results.iter().all(|r| r.passed());
    with_output(cfg, |w| {
        writeln!(w, "rel_tol = {:e}", vcfg.quadrature.rel_tol)?;
        writeln!(w, "{:<42} {:>6} {:>9} {:>14} {:>10}  result", "check", "cases", "failures", "max rel err", "tolerance")?;
        for r in &results {
            writeln!(
                w,
                "{:<42} {:>6} {:>9} {:>14.3e} {:>10.0e}  {}",
                r.name,
                r.instances,
                r.failures,
                r.max_rel_error,
                r.tolerance,
                if r.passed() { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    })?;
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Failed("validation failed".into()))
    }
}
