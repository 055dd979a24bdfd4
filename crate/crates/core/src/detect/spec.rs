use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::prior::InterferencePrior;
use crate::error::{Error, Result};

/// Design false-alarm probability, strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct DesignPfa(f64);

impl DesignPfa {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self(alpha))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("design Pfa must lie in (0, 1), got {alpha}")))
    }
}

/// Which detector to run, with the structure each one needs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
pub enum Variant {
    /// Cell averaging over the whole window.
    CaCfar,
    /// Interferer known to occupy `interferer_index` (1-based).
    Case1 { interferer_index: usize },
    /// Exactly one interferer at an unknown cell.
    Case2 { prior: InterferencePrior },
    /// At most one interferer; `prior` carries the absence mass.
    Case3 { prior: InterferencePrior },
}

/// Bare variant tag, as used on the command line and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariantKind {
    CaCfar,
    Case1,
    Case2,
    Case3,
}

impl VariantKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VariantKind::CaCfar => "ca-cfar",
            VariantKind::Case1 => "case1",
            VariantKind::Case2 => "case2",
            VariantKind::Case3 => "case3",
        }
    }
}

impl fmt::Display for VariantKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for VariantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ca-cfar" | "cacfar" | "ca" => Ok(VariantKind::CaCfar),
            "case1" => Ok(VariantKind::Case1),
            "case2" => Ok(VariantKind::Case2),
            "case3" => Ok(VariantKind::Case3),
            other => Err(Error::param(format!("unknown detector variant '{other}'"))),
        }
    }
}

impl Variant {
    pub fn kind(&self) -> VariantKind {
        match self {
            Variant::CaCfar => VariantKind::CaCfar,
            Variant::Case1 { .. } => VariantKind::Case1,
            Variant::Case2 { .. } => VariantKind::Case2,
            Variant::Case3 { .. } => VariantKind::Case3,
        }
    }

    /// Whether the decision is a Pfa-at-the-CUT comparison rather than a
    /// closed-form threshold.
    pub fn is_mixture(&self) -> bool {
        matches!(self, Variant::Case2 { .. } | Variant::Case3 { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorSpec {
    #[serde(flatten)]
    pub variant: Variant,
    pub design_pfa: DesignPfa,
}

impl DetectorSpec {
    pub fn new(variant: Variant, design_pfa: f64) -> Result<Self> {
        let spec = Self {
            variant,
            design_pfa: DesignPfa::new(design_pfa)?,
        };
        if let Variant::Case2 { prior } = &spec.variant {
            if prior.has_absence() {
                return Err(Error::param("case2 takes a location-only prior (no pi_0)"));
            }
        }
        if let Variant::Case3 { prior } = &spec.variant {
            if !prior.has_absence() {
                return Err(Error::param("case3 takes a prior with an absence mass pi_0"));
            }
        }
        if let Variant::Case1 { interferer_index: 0 } = spec.variant {
            return Err(Error::param("interferer index is 1-based"));
        }
        Ok(spec)
    }

    pub fn ca_cfar(design_pfa: f64) -> Result<Self> {
        Self::new(Variant::CaCfar, design_pfa)
    }

    pub fn case1(design_pfa: f64, interferer_index: usize) -> Result<Self> {
        Self::new(Variant::Case1 { interferer_index }, design_pfa)
    }

    pub fn case2(design_pfa: f64, prior: InterferencePrior) -> Result<Self> {
        Self::new(Variant::Case2 { prior }, design_pfa)
    }

    pub fn case3(design_pfa: f64, prior: InterferencePrior) -> Result<Self> {
        Self::new(Variant::Case3 { prior }, design_pfa)
    }

    pub fn alpha(&self) -> f64 {
        self.design_pfa.get()
    }

    pub fn kind(&self) -> VariantKind {
        self.variant.kind()
    }

    /// Checks the spec against a window of `n` cells.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::param(format!("window needs at least 2 cells, got {n}")));
        }
        match &self.variant {
            Variant::CaCfar => Ok(()),
            Variant::Case1 { interferer_index } => {
                if (1..=n).contains(interferer_index) {
                    Ok(())
                } else {
                    Err(Error::param(format!(
                        "interferer index {interferer_index} out of range 1..={n}"
                    )))
                }
            }
            Variant::Case2 { prior } | Variant::Case3 { prior } => {
                if prior.n_cells() == n {
                    Ok(())
                } else {
                    Err(Error::param(format!(
                        "prior covers {} cells but the window has {n}",
                        prior.n_cells()
                    )))
                }
            }
        }
    }
}

/// Outcome of testing one cell under test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decision {
    pub target_declared: bool,
    /// `P_FA(z_0)`: the Pfa a threshold placed exactly at the CUT would have.
    pub pfa_at_cut: f64,
    /// Threshold on `z_0`, for variants with a closed-form inverse.
    pub threshold: Option<f64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn design_pfa_bounds() {
        assert!(DesignPfa::new(0.0).is_err());
        assert!(DesignPfa::new(1.0).is_err());
        assert!(DesignPfa::new(f64::NAN).is_err());
        assert!(DesignPfa::new(1e-6).is_ok());
    }

    #[test]
    fn variant_prior_shape_enforced() {
        let loc = InterferencePrior::uniform(3).unwrap();
        let abs = InterferencePrior::absent_uniform(0.2, 3).unwrap();
        assert!(DetectorSpec::case2(0.1, abs.clone()).is_err());
        assert!(DetectorSpec::case3(0.1, loc.clone()).is_err());
        assert!(DetectorSpec::case2(0.1, loc).unwrap().validate_for(3).is_ok());
        assert!(DetectorSpec::case3(0.1, abs).unwrap().validate_for(4).is_err());
        assert!(DetectorSpec::case1(0.1, 5).unwrap().validate_for(4).is_err());
        assert!(DetectorSpec::case1(0.1, 0).is_err());
    }

    #[test]
    fn variant_names_round_trip() {
        for kind in [VariantKind::CaCfar, VariantKind::Case1, VariantKind::Case2, VariantKind::Case3] {
            assert_eq!(kind.as_str().parse::<VariantKind>().unwrap(), kind);
        }
        assert!("case4".parse::<VariantKind>().is_err());
    }
}
