//! Optimistic index policies: UCB1 and KL-UCB.

use super::{bernoulli_round, ArmRecord, ArmSet, Policy, TieRule};
use crate::analysis::kl_bernoulli;
use crate::error::Result;
use crate::rng::RngStream;

/// Absolute bisection tolerance of the KL-UCB index.
pub const KLUCB_TOL: f64 = 1e-9;
pub const KLUCB_MAX_ITER: usize = 64;

/// `mean + sqrt(2 ln t / s)`.
pub fn ucb1_value(record: &ArmRecord, t: u64) -> f64 {
    let s = record.pulls().max(1) as f64;
    record.mean() + (2.0 * (t.max(1) as f64).ln() / s).sqrt()
}

/// Largest `q` in `[p_hat, 1]` with `pulls * d(p_hat, q) <= budget`.
pub fn klucb_index(p_hat: f64, pulls: u64, budget: f64) -> f64 {
    if p_hat >= 1.0 {
        return 1.0;
    }
    let s = pulls as f64;
    let (mut lo, mut hi) = (p_hat, 1.0);
    for _ in 0..KLUCB_MAX_ITER {
        if hi - lo <= KLUCB_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if s * kl_bernoulli(p_hat, mid) <= budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// KL-UCB index with exploration budget `ln t`.
pub fn klucb_value(record: &ArmRecord, t: u64) -> f64 {
    klucb_index(record.mean(), record.pulls(), (t.max(1) as f64).ln())
}

#[derive(Debug, Clone)]
pub struct Ucb1 {
    name: String,
    set: ArmSet,
}

impl Ucb1 {
    pub fn new(name: impl Into<String>, arms: usize, tie: TieRule) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            set: ArmSet::new(arms, tie)?,
        })
    }
}

impl Policy for Ucb1 {
    fn name(&self) -> &str {
        &self.name
    }

    fn arms(&self) -> usize {
        self.set.records.len()
    }

    fn select(&mut self, t: u64, rng: &mut RngStream) -> Result<usize> {
        self.set
            .select_with(rng, |record, _| Ok(ucb1_value(record, t)))
    }

    fn update(&mut self, arm: usize, reward: f64, _rng: &mut RngStream) -> Result<()> {
        self.set.record_mut(arm)?.push(reward)
    }

    fn records(&self) -> &[ArmRecord] {
        &self.set.records
    }
}

/// KL-UCB on Bernoulli-rounded rewards.
#[derive(Debug, Clone)]
pub struct KlUcb {
    name: String,
    set: ArmSet,
}

impl KlUcb {
    pub fn new(name: impl Into<String>, arms: usize, tie: TieRule) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            set: ArmSet::new(arms, tie)?,
        })
    }
}

impl Policy for KlUcb {
    fn name(&self) -> &str {
        &self.name
    }

    fn arms(&self) -> usize {
        self.set.records.len()
    }

    fn select(&mut self, t: u64, rng: &mut RngStream) -> Result<usize> {
        self.set
            .select_with(rng, |record, _| Ok(klucb_value(record, t)))
    }

    fn update(&mut self, arm: usize, reward: f64, rng: &mut RngStream) -> Result<()> {
        let bit = bernoulli_round(reward, rng)?;
        self.set.record_mut(arm)?.push(if bit { 1.0 } else { 0.0 })
    }

    fn records(&self) -> &[ArmRecord] {
        &self.set.records
    }
}
