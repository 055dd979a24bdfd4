//! Independent checks of the closed-form detectors.

pub mod crosscheck;
mod density;
mod montecarlo;
mod quadrature;

pub use density::{
    predictive_density_ca_cfar, predictive_density_case1, predictive_density_case2,
    predictive_density_case3, quadrature_pfa, CaCfarDensity, Case1Density, MixtureDensity,
    PredictiveDensity,
};
pub use montecarlo::{ca_cfar_unconditional_pfa, case1_unconditional_pfa, consistent_with, mc_pfa};
pub use quadrature::{gauss_kronrod_21, integrate_power_tail, QuadratureSettings};
