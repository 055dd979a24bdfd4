//! Random streams, exponential sampling and log-domain arithmetic.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// SplitMix64 finalizer. Used to expand seeds and to mix stream indices.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// A reproducible random stream identified by `(master_seed, stream_id)`.
///
/// The ChaCha8 key is the master seed expanded through four rounds of
/// SplitMix64; the stream id selects the ChaCha stream (nonce). Streams with
/// different ids therefore share a key but never overlap, and the sequence of
/// any one stream does not depend on what other streams exist or on which
/// thread consumes it.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

/// Builds the stream `(master_seed, stream_id)`.
pub fn derive_stream(master_seed: u64, stream_id: u64) -> RngStream {
    let mut key = [0u8; 32];
    let mut state = master_seed;
    for chunk in key.chunks_exact_mut(8) {
        state = splitmix64(state);
        chunk.copy_from_slice(&state.to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(stream_id);
    RngStream {
        master_seed,
        stream_id,
        rng,
    }
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        derive_stream(master_seed, stream_id)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Child stream `index` of this stream, under the same master seed.
    ///
    /// The child id is `splitmix64(stream_id ^ splitmix64(index))`: a fixed
    /// bijective mix, so distinct indices under one parent never collide.
    pub fn substream(&self, index: u64) -> RngStream {
        derive_stream(self.master_seed, splitmix64(self.stream_id ^ splitmix64(index)))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform draw on (0, 1] with 53 bits of resolution.
    pub fn uniform_open_closed(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        ((self.rng.next_u64() >> 11) + 1) as f64 * SCALE
    }
}

/// Inverse-CDF map from a uniform draw `u` in (0, 1] to Exponential(rate).
#[inline]
pub fn exponential_from_uniform(rate: f64, u: f64) -> f64 {
    -u.ln() / rate
}

fn check_rate(rate: f64) -> Result<()> {
    if rate.is_finite() && rate > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("exponential rate must be positive and finite, got {rate}")))
    }
}

/// Draws one Exponential(rate) sample, `-ln(U)/rate` with `U` on (0, 1].
pub fn sample_exponential(rate: f64, rng: &mut RngStream) -> Result<f64> {
    check_rate(rate)?;
    Ok(exponential_from_uniform(rate, rng.uniform_open_closed()))
}

/// Fills `out` with Exponential(rate) samples.
pub fn fill_exponential(rate: f64, rng: &mut RngStream, out: &mut [f64]) -> Result<()> {
    check_rate(rate)?;
    for x in out.iter_mut() {
        *x = exponential_from_uniform(rate, rng.uniform_open_closed());
    }
    Ok(())
}

/// A strictly positive mixture term stored by its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogWeightedTerm(f64);

impl LogWeightedTerm {
    /// Wraps a positive linear-domain value. Zero and negative values are
    /// rejected; there is no signed log arithmetic here.
    pub fn from_value(value: f64) -> Result<Self> {
        if value > 0.0 && value.is_finite() {
            Ok(Self(value.ln()))
        } else {
            Err(Error::domain(format!("mixture term must be positive and finite, got {value}")))
        }
    }

    pub fn from_log(log_magnitude: f64) -> Result<Self> {
        if log_magnitude.is_nan() || log_magnitude == f64::INFINITY {
            return Err(Error::domain(format!("invalid log magnitude {log_magnitude}")));
        }
        Ok(Self(log_magnitude))
    }

    pub fn log_magnitude(self) -> f64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.exp()
    }
}

/// `ln(sum(exp(terms)))`, shifted by the maximum so that neither overflow
/// nor underflow occurs for terms of magnitude up to ~1e4 and beyond.
pub fn log_sum_exp(terms: &[f64]) -> Result<f64> {
    if terms.is_empty() {
        return Err(Error::Usage("log_sum_exp of an empty list".into()));
    }
    if let Some(bad) = terms.iter().find(|t| t.is_nan() || **t == f64::INFINITY) {
        return Err(Error::param(format!("log_sum_exp term must be finite or -inf, got {bad}")));
    }
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Ok(f64::NEG_INFINITY);
    }
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    Ok(max + sum.ln())
}

/// Single-pass log-sum-exp accumulator (running maximum with rescaling).
///
/// Used on hot paths where the terms are produced on the fly and collecting
/// them would allocate.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    scaled_sum: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub fn new() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            scaled_sum: 0.0,
        }
    }

    #[inline]
    pub fn push(&mut self, term: f64) {
        if term == f64::NEG_INFINITY {
            return;
        }
        if term > self.max {
            self.scaled_sum = self.scaled_sum * (self.max - term).exp() + 1.0;
            self.max = term;
        } else {
            self.scaled_sum += (term - self.max).exp();
        }
    }

    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + self.scaled_sum.ln()
        }
    }
}

impl FromIterator<f64> for LogSumExp {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = LogSumExp::new();
        for t in iter {
            acc.push(t);
        }
        acc
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Wilson score interval for `successes` out of `trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let low = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (low.min(p), high.max(p))
}

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

/// Standard error of the difference of two proportions under the pooled
/// (common-proportion) estimate.
pub fn pooled_standard_error(k1: u64, n1: u64, k2: u64, n2: u64) -> f64 {
    let p = (k1 + k2) as f64 / (n1 + n2) as f64;
    (p * (1.0 - p) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt()
}

/// True when `|p1 - p2|` is within `k` pooled standard errors.
pub fn within_pooled_se(k1: u64, n1: u64, k2: u64, n2: u64, k: f64) -> bool {
    let diff = (k1 as f64 / n1 as f64 - k2 as f64 / n2 as f64).abs();
    diff <= k * pooled_standard_error(k1, n1, k2, n2)
}
