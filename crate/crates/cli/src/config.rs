//! Flat `key = value` experiment configuration.
//!
//! A config file holds one `key = value` pair per line; `#` starts a comment.
//! Command-line flags are applied on top and win over the file.

use std::collections::BTreeMap;
use std::path::Path;

use bayescfar::detect::{DetectorSpec, InterferencePrior, Variant, VariantKind};

use crate::error::CliError;

pub const KEYS: &[&str] = &[
    "variant",
    "n_cells",
    "design_pfa",
    "interferer_index",
    "interferer_cell",
    "prior",
    "lambda_grid",
    "scr_grid_db",
    "icr_db",
    "trials",
    "seed",
    "out",
    "format",
    "crp",
    "crp_file",
    "workers",
    "instances",
    "reduction_triples",
    "rel_tol",
    "max_subdivisions",
];

pub const DEFAULT_N_CELLS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

#[derive(Debug, Default, Clone)]
pub struct Config {
    values: BTreeMap<String, String>,
}

fn bad(key: &str, value: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{key} = '{value}': {why}"))
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", lineno + 1)))?;
            cfg.set(key.trim(), value.trim())?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("unknown config key '{key}'")));
        }
        self.values.insert(key, value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| bad(key, v, e)))
            .transpose()
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, CliError> {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, CliError> {
        Ok(self.parsed(key)?.unwrap_or(default))
    }

    pub fn f64_opt(&self, key: &str) -> Result<Option<f64>, CliError> {
        self.parsed(key)
    }

    /// Comma-separated reals. `None` when the key is absent; an empty value
    /// gives an empty list.
    pub fn f64_list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.get(key).map(|v| parse_reals(key, v)).transpose()
    }

    pub fn format(&self) -> Result<Format, CliError> {
        match self.get("format").unwrap_or("csv") {
            "csv" => Ok(Format::Csv),
            "json-lines" | "jsonl" | "json" => Ok(Format::JsonLines),
            other => Err(bad("format", other, "expected csv or json-lines")),
        }
    }

    pub fn trials(&self, default: u64) -> Result<u64, CliError> {
        let trials = self.u64_or("trials", default)?;
        if trials == 0 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        Ok(trials)
    }

    pub fn variant_kind(&self) -> Result<VariantKind, CliError> {
        let v = self.get("variant").unwrap_or("case3");
        v.parse().map_err(|e| bad("variant", v, e))
    }

    /// Detector for a window of `n` cells.
    pub fn detector(&self, n: usize) -> Result<DetectorSpec, CliError> {
        let alpha = self.f64_opt("design_pfa")?.unwrap_or(1e-2);
        let kind = self.variant_kind()?;
        let variant = match kind {
            VariantKind::CaCfar => Variant::CaCfar,
            VariantKind::Case1 => Variant::Case1 {
                interferer_index: self.usize_or("interferer_index", n)?,
            },
            VariantKind::Case2 => Variant::Case2 {
                prior: parse_prior(self.get("prior").unwrap_or("uniform"), n, false)?,
            },
            VariantKind::Case3 => Variant::Case3 {
                prior: parse_prior(self.get("prior").unwrap_or("absent:0.5,uniform"), n, true)?,
            },
        };
        let spec = DetectorSpec::new(variant, alpha)?;
        spec.validate_for(n)?;
        Ok(spec)
    }
}

pub fn parse_reals(key: &str, text: &str) -> Result<Vec<f64>, CliError> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| {
            let x: f64 = t.parse().map_err(|e| bad(key, t, e))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(bad(key, t, "not a finite number"))
            }
        })
        .collect()
}

fn cell_part(text: &str, n: usize) -> Result<InterferencePrior, CliError> {
    let text = text.trim();
    if text == "uniform" {
        return Ok(InterferencePrior::uniform(n)?);
    }
    if let Some(r) = text.strip_prefix("geometric:") {
        let ratio = r.trim().parse::<f64>().map_err(|e| bad("prior", text, e))?;
        return Ok(InterferencePrior::geometric_decay(n, ratio)?);
    }
    Err(bad("prior", text, "expected 'uniform' or 'geometric:<ratio>'"))
}

/// Prior syntax:
///
/// - `uniform`, `geometric:<ratio>`: location priors over the N cells
///   (read with `pi_0 = 0` for case3);
/// - `absent:<p0>,uniform`, `absent:<p0>,geometric:<ratio>`: `pi_0 = p0`
///   and the rest spread by the named shape;
/// - a comma list: N weights (case2) or N+1 weights starting with `pi_0` (case3).
pub fn parse_prior(text: &str, n: usize, with_absence: bool) -> Result<InterferencePrior, CliError> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("absent:") {
        if !with_absence {
            return Err(bad("prior", text, "absence mass only applies to case3"));
        }
        let (p0, shape) = rest
            .split_once(',')
            .ok_or_else(|| bad("prior", text, "expected absent:<p0>,<shape>"))?;
        let p0: f64 = p0.trim().parse().map_err(|e| bad("prior", text, e))?;
        if !(0.0..=1.0).contains(&p0) {
            return Err(bad("prior", text, "p0 must lie in [0, 1]"));
        }
        let cells = cell_part(shape, n)?;
        let mut weights: Vec<f64> = cells.weights().iter().map(|w| w * (1.0 - p0)).collect();
        weights.insert(0, p0);
        return Ok(InterferencePrior::with_absence(weights)?);
    }
    if text.starts_with(|c: char| c.is_ascii_alphabetic()) {
        let cells = cell_part(text, n)?;
        if with_absence {
            let mut weights = cells.weights().to_vec();
            weights.insert(0, 0.0);
            return Ok(InterferencePrior::with_absence(weights)?);
        }
        return Ok(cells);
    }
    let weights = parse_reals("prior", text)?;
    let expected = if with_absence { n + 1 } else { n };
    if weights.len() != expected {
        return Err(bad(
            "prior",
            text,
            format!("expected {expected} weights for a {n}-cell window, got {}", weights.len()),
        ));
    }
    Ok(if with_absence {
        InterferencePrior::with_absence(weights)?
    } else {
        InterferencePrior::location(weights)?
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_comments() {
        let cfg = Config::parse("# sweep\nvariant = case2\nn_cells=8 # window\n\nlambda_grid = 0.1, 1, 10\n").unwrap();
        assert_eq!(cfg.get("variant"), Some("case2"));
        assert_eq!(cfg.usize_or("n_cells", 16).unwrap(), 8);
        assert_eq!(cfg.f64_list("lambda_grid").unwrap().unwrap(), vec![0.1, 1.0, 10.0]);
        assert!(Config::parse("bogus = 1").is_err());
        assert!(Config::parse("variant case2").is_err());
    }

    #[test]
    fn prior_forms() {
        let p = parse_prior("absent:0.5,uniform", 4, true).unwrap();
        assert_eq!(p.weights(), &[0.5, 0.125, 0.125, 0.125, 0.125]);
        assert!(parse_prior("0.5,0.4", 2, false).is_err());
        assert!(parse_prior("0.5,0.5", 2, false).is_ok());
        assert!(parse_prior("0.2,0.4,0.4", 2, true).is_ok());
        assert!(parse_prior("absent:0.2,uniform", 2, false).is_err());
        assert!(parse_prior("geometric:0.5", 6, false).is_ok());
        assert_eq!(parse_prior("uniform", 3, true).unwrap().absence(), 0.0);
        assert!(parse_prior("sideways", 3, false).is_err());
    }

    #[test]
    fn detector_defaults() {
        let mut cfg = Config::default();
        cfg.set("variant", "case1").unwrap();
        let spec = cfg.detector(16).unwrap();
        assert_eq!(spec.variant, Variant::Case1 { interferer_index: 16 });
        cfg.set("variant", "case9").unwrap();
        assert!(cfg.detector(16).is_err());
    }
}
