//! Bootstrap exploration with pseudo rewards.
//!
//! After `s` pulls an arm's virtual history holds its `s` observed rewards
//! plus `k` pseudo zeros and `k` pseudo ones (`k = a s` for integer `a`).
//! Its value is the mean of `s + 2k` draws with replacement from that
//! history. For binary histories this is exactly one binomial draw
//! `U ~ B(s + 2k, (ones + k) / (s + 2k))`.

use super::{ArmRecord, ArmSet, Policy, TieRule};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampling::{bernoulli, binomial_sample, uniform_index};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GiroDraw {
    /// `2a + 1`, or `(s + 2k) / s` for a realized fractional count.
    pub alpha: f64,
    /// Ones in the bootstrap sample (binary path only).
    pub ones: Option<u64>,
    /// Bootstrap sample size `s + 2k`.
    pub size: u64,
    pub mu_hat: f64,
}

fn require_pulled(record: &ArmRecord) -> Result<u64> {
    match record.pulls() {
        0 => Err(Error::Contract(
            "bootstrap value requested for an unpulled arm; use the sentinel".into(),
        )),
        s => Ok(s),
    }
}

/// Binomial draw for a binary history with `k` pseudo rewards of each kind.
pub fn bootstrap_binary(ones: u64, pulls: u64, k: u64, rng: &mut RngStream) -> GiroDraw {
    let size = pulls + 2 * k;
    let v = ones + k;
    let u = binomial_sample(size, v as f64 / size as f64, rng);
    GiroDraw {
        alpha: size as f64 / pulls as f64,
        ones: Some(u),
        size,
        mu_hat: u as f64 / size as f64,
    }
}

/// Literal resampling of the virtual augmented history.
///
/// The `s + 2k` draws are split multinomially among the stored region
/// (probability `s / N`), pseudo zeros and pseudo ones (`k / N` each); the
/// stored-region draws then pick stored rewards uniformly.
fn bootstrap_general(record: &ArmRecord, k: u64, rng: &mut RngStream) -> GiroDraw {
    let s = record.pulls();
    let size = s + 2 * k;
    let stored = binomial_sample(size, s as f64 / size as f64, rng);
    let pseudo_ones = binomial_sample(size - stored, 0.5, rng);
    let mut total = pseudo_ones as f64;
    for _ in 0..stored {
        total += record.reward(uniform_index(s as usize, rng));
    }
    GiroDraw {
        alpha: size as f64 / s as f64,
        ones: None,
        size,
        mu_hat: total / size as f64,
    }
}

/// Fast path for binary histories and integer `a`.
pub fn giro_value_binary(record: &ArmRecord, a: u32, rng: &mut RngStream) -> Result<GiroDraw> {
    let s = require_pulled(record)?;
    if !record.is_binary() {
        return Err(Error::Contract(
            "binomial fast path needs a binary history".into(),
        ));
    }
    Ok(bootstrap_binary(record.ones(), s, a as u64 * s, rng))
}

/// Resampling path for arbitrary `[0, 1]` histories and integer `a`.
pub fn giro_value_general(record: &ArmRecord, a: u32, rng: &mut RngStream) -> Result<GiroDraw> {
    let s = require_pulled(record)?;
    Ok(bootstrap_general(record, a as u64 * s, rng))
}

/// Realizes the pseudo count for real `a`: `ceil(a s)` with probability
/// `a s - floor(a s)`, else `floor(a s)`.
pub fn giro_fractional_record(record: &ArmRecord, a: f64, rng: &mut RngStream) -> Result<u64> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "pseudo reward rate {a} must be >= 0"
        )));
    }
    Ok(realize_pseudo_count(a, record.pulls(), rng))
}

fn realize_pseudo_count(a: f64, pulls: u64, rng: &mut RngStream) -> u64 {
    let target = a * pulls as f64;
    let nearest = target.round();
    // a s that is integral up to rounding, e.g. (1/3) * 3
    if (target - nearest).abs() < 1e-9 {
        return nearest as u64;
    }
    let floor = target.floor();
    if bernoulli(target - floor, rng) {
        floor as u64 + 1
    } else {
        floor as u64
    }
}

/// Bootstrap mean of the observed rewards alone.
pub fn naive_bootstrap_value(record: &ArmRecord, rng: &mut RngStream) -> Result<f64> {
    let s = require_pulled(record)?;
    let draw = if record.is_binary() {
        bootstrap_binary(record.ones(), s, 0, rng)
    } else {
        bootstrap_general(record, 0, rng)
    };
    Ok(draw.mu_hat)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GiroPath {
    /// Binomial draw while the history is binary, resampling otherwise.
    Auto,
    /// Always resample the augmented history.
    Resample,
}

/// The bootstrap policy. `a = 0` is the naive bootstrap without pseudo
/// rewards.
#[derive(Debug, Clone)]
pub struct Giro {
    name: String,
    a: f64,
    path: GiroPath,
    set: ArmSet,
}

impl Giro {
    pub fn new(name: impl Into<String>, arms: usize, a: f64, tie: TieRule) -> Result<Self> {
        if !(a.is_finite() && a >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "pseudo reward rate {a} must be >= 0"
            )));
        }
        Ok(Self {
            name: name.into(),
            a,
            path: GiroPath::Auto,
            set: ArmSet::new(arms, tie)?,
        })
    }

    pub fn naive(name: impl Into<String>, arms: usize, tie: TieRule) -> Result<Self> {
        Self::new(name, arms, 0.0, tie)
    }

    pub fn with_path(mut self, path: GiroPath) -> Self {
        self.path = path;
        self
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

impl Policy for Giro {
    fn name(&self) -> &str {
        &self.name
    }

    fn arms(&self) -> usize {
        self.set.records.len()
    }

    fn select(&mut self, _t: u64, rng: &mut RngStream) -> Result<usize> {
        let (a, path) = (self.a, self.path);
        self.set.select_with(rng, |record, rng| {
            let k = realize_pseudo_count(a, record.pulls(), rng);
            let draw = if path == GiroPath::Auto && record.is_binary() {
                bootstrap_binary(record.ones(), record.pulls(), k, rng)
            } else {
                bootstrap_general(record, k, rng)
            };
            Ok(draw.mu_hat)
        })
    }

    fn update(&mut self, arm: usize, reward: f64, _rng: &mut RngStream) -> Result<()> {
        self.set.record_mut(arm)?.push(reward)
    }

    fn records(&self) -> &[ArmRecord] {
        &self.set.records
    }
}
