//! Multi-armed bandit policies behind one select/update interface.
//!
//! Every policy keeps one [`ArmRecord`] per arm, turns the records into one
//! value per arm each round and pulls the argmax. Arms that were never pulled
//! carry an infinite sentinel and are pulled first, in ascending index order,
//! so no policy ever evaluates a value on an empty history.

mod giro;
mod greedy;
mod index;
mod thompson;

pub use giro::{
    bootstrap_binary, giro_fractional_record, giro_value_binary, giro_value_general,
    naive_bootstrap_value, Giro, GiroDraw, GiroPath,
};
pub use greedy::{calibrate_schedule, eg_select, exploration_budget, EpsilonGreedy};
pub use index::{klucb_index, klucb_value, ucb1_value, KlUcb, Ucb1, KLUCB_MAX_ITER, KLUCB_TOL};
pub use thompson::{bernoulli_round, ts_value, Thompson};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampling::{bernoulli, uniform_index};

/// Value carried by arms that have not been pulled yet.
pub const UNPULLED: f64 = f64::INFINITY;

/// How ties among equal finite values are broken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieRule {
    UniformRandom,
    /// Fixed before round 1: `Z = 1` prefers the highest tied index, `Z = 0`
    /// the lowest. With two arms this is `I_t = 1{Z = 1} + 1`.
    FixedPreference {
        z: bool,
    },
}

impl TieRule {
    /// Draws `Z ~ Ber(1/2)` once for a run.
    pub fn fixed_random(rng: &mut RngStream) -> Self {
        TieRule::FixedPreference {
            z: bernoulli(0.5, rng),
        }
    }
}

/// Argmax over per-arm values.
///
/// Any [`UNPULLED`] arm wins outright, lowest index first. Exact ties among
/// finite values go to `tie`.
pub fn select_arm(values: &[f64], tie: TieRule, rng: &mut RngStream) -> usize {
    if let Some(i) = values.iter().position(|&v| v == UNPULLED) {
        return i;
    }
    let best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let first = values.iter().position(|&v| v == best).unwrap_or(0);
    let tied = values.iter().filter(|&&v| v == best).count();
    if tied <= 1 {
        return first;
    }
    match tie {
        TieRule::UniformRandom => {
            let pick = uniform_index(tied, rng);
            values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v == best)
                .nth(pick)
                .map(|(i, _)| i)
                .unwrap_or(first)
        }
        TieRule::FixedPreference { z: false } => first,
        TieRule::FixedPreference { z: true } => {
            values.iter().rposition(|&v| v == best).unwrap_or(first)
        }
    }
}

/// Observed rewards of one arm.
///
/// While every reward is 0 or 1 only `(s, ones)` is kept; the full vector is
/// materialized on the first fractional reward. Pseudo rewards are never
/// stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ArmRecord {
    pulls: u64,
    ones: u64,
    sum: f64,
    rewards: Option<Vec<f64>>,
}

impl ArmRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rewards(rewards: &[f64]) -> Result<Self> {
        let mut record = Self::new();
        for &r in rewards {
            record.push(r)?;
        }
        Ok(record)
    }

    pub fn from_counts(pulls: u64, ones: u64) -> Result<Self> {
        if ones > pulls {
            return Err(Error::InvalidArgument(format!(
                "{ones} ones in {pulls} pulls"
            )));
        }
        Ok(Self {
            pulls,
            ones,
            sum: ones as f64,
            rewards: None,
        })
    }

    pub fn push(&mut self, reward: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::InvalidArgument(format!(
                "reward {reward} outside [0, 1]"
            )));
        }
        let binary = reward == 0.0 || reward == 1.0;
        if !binary && self.rewards.is_none() {
            let mut all = vec![1.0; self.ones as usize];
            all.resize(self.pulls as usize, 0.0);
            self.rewards = Some(all);
        }
        if let Some(all) = self.rewards.as_mut() {
            all.push(reward);
        }
        if reward == 1.0 {
            self.ones += 1;
        }
        self.pulls += 1;
        self.sum += reward;
        Ok(())
    }

    /// Number of pulls `s`.
    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn ones(&self) -> u64 {
        self.ones
    }

    pub fn is_binary(&self) -> bool {
        self.rewards.is_none()
    }

    pub fn mean(&self) -> f64 {
        if self.pulls == 0 {
            0.0
        } else {
            self.sum / self.pulls as f64
        }
    }

    /// The `j`-th stored reward. Binary histories are presented with their
    /// ones first; resampling is order-free.
    #[inline]
    pub fn reward(&self, j: usize) -> f64 {
        match &self.rewards {
            Some(all) => all[j],
            None if (j as u64) < self.ones => 1.0,
            None => 0.0,
        }
    }
}

/// Uniform interface consumed by the experiment runner.
pub trait Policy: Send {
    fn name(&self) -> &str;
    fn arms(&self) -> usize;
    /// Chooses the arm to pull in round `t` (1-based).
    fn select(&mut self, t: u64, rng: &mut RngStream) -> Result<usize>;
    /// Feeds back the reward of the arm pulled this round.
    fn update(&mut self, arm: usize, reward: f64, rng: &mut RngStream) -> Result<()>;
    /// Records in arm order, for inspection.
    fn records(&self) -> &[ArmRecord];
}

/// Records plus tie rule shared by the value-based policies.
#[derive(Debug, Clone)]
pub(crate) struct ArmSet {
    pub records: Vec<ArmRecord>,
    pub tie: TieRule,
    values: Vec<f64>,
}

impl ArmSet {
    pub fn new(arms: usize, tie: TieRule) -> Result<Self> {
        if arms == 0 {
            return Err(Error::InvalidArgument(
                "policy needs at least one arm".into(),
            ));
        }
        Ok(Self {
            records: vec![ArmRecord::new(); arms],
            tie,
            values: vec![0.0; arms],
        })
    }

    /// Evaluates `value` on every pulled arm and returns the argmax.
    pub fn select_with<F>(&mut self, rng: &mut RngStream, mut value: F) -> Result<usize>
    where
        F: FnMut(&ArmRecord, &mut RngStream) -> Result<f64>,
    {
        for (slot, record) in self.values.iter_mut().zip(&self.records) {
            *slot = if record.pulls() == 0 {
                UNPULLED
            } else {
                value(record, rng)?
            };
        }
        Ok(select_arm(&self.values, self.tie, rng))
    }

    pub fn record_mut(&mut self, arm: usize) -> Result<&mut ArmRecord> {
        let arms = self.records.len();
        self.records
            .get_mut(arm)
            .ok_or(Error::ArmOutOfRange { arm, arms })
    }
}
