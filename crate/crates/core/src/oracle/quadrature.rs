//! Adaptive Gauss-Kronrod (10/21) quadrature on `[a, inf)` for integrands
//! with power-law tails.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_067_618_966,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_subdivisions: 10_000,
        }
    }
}

impl QuadratureSettings {
    pub fn new(rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let s = Self {
            rel_tol,
            max_subdivisions,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::param(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::param("max_subdivisions must be at least 1"));
        }
        Ok(())
    }
}

/// Kronrod estimate and |Kronrod - Gauss| on `[a, b]`.
pub fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (i, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += w * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integral of a nonnegative `f` over `[start, inf)` where
/// `f(z) ~ C z^-tail_power` for `z` well beyond `scale_max`.
///
/// The finite part is split into geometrically growing panels starting at
/// `start` with first width `scale_min`, extended until the panel end `T`
/// exceeds `start + 64 * scale_max` and the analytic tail
/// `T f(T) / (tail_power - 1)` is below `rel_tol` times the running total.
/// The panels are then refined by global adaptive bisection (largest error
/// first) and the tail estimate is added.
pub fn integrate_power_tail<F: Fn(f64) -> f64>(
    f: F,
    start: f64,
    scale_min: f64,
    scale_max: f64,
    tail_power: f64,
    settings: &QuadratureSettings,
) -> Result<f64> {
    settings.validate()?;
    if !(tail_power > 1.0) {
        return Err(Error::param(format!("tail power must exceed 1, got {tail_power}")));
    }
    if !(scale_min > 0.0 && scale_max >= scale_min && start >= 0.0) {
        return Err(Error::param("integration scales must be positive"));
    }

    let mut heap = BinaryHeap::new();
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut a = start;
    let mut width = scale_min;
    let tail = loop {
        let b = a + width;
        let (value, error) = gauss_kronrod_21(&f, a, b);
        heap.push(Segment { a, b, value, error });
        total += value;
        total_err += error;
        if heap.len() > settings.max_subdivisions {
            return Err(Error::Convergence(format!(
                "subdivision budget {} exhausted building panels",
                settings.max_subdivisions
            )));
        }
        a = b;
        width *= 2.0;
        if a - start >= 64.0 * scale_max {
            let tail = a * f(a) / (tail_power - 1.0);
            if tail <= settings.rel_tol * total {
                break tail;
            }
        }
    };

    // the tail was budgeted a full rel_tol; the finite part gets half of it
    while total_err > 0.5 * settings.rel_tol * total.abs() {
        if heap.len() >= settings.max_subdivisions {
            return Err(Error::Convergence(format!(
                "subdivision budget {} exhausted (error estimate {total_err:e}, integral {total:e})",
                settings.max_subdivisions
            )));
        }
        let worst = heap.pop().expect("heap holds the initial panels");
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gauss_kronrod_21(&f, worst.a, mid);
        let (rv, re) = gauss_kronrod_21(&f, mid, worst.b);
        total += lv + rv - worst.value;
        total_err += le + re - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: lv, error: le });
        heap.push(Segment { a: mid, b: worst.b, value: rv, error: re });
    }

    // re-sum to shed the drift accumulated by the incremental updates
    let finite: f64 = heap.iter().map(|s| s.value).sum();
    Ok(finite + tail)
}
