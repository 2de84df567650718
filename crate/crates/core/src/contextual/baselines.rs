//! Contextual epsilon-greedy and the uniform random reference policy.

use super::giro::check_dim;
use super::history::{BootstrapSample, ContextHistory};
use super::model::{fit_reward_model, ModelKind, RewardModel};
use super::ContextualPolicy;
use crate::error::{Error, Result};
use crate::policies::{select_arm, TieRule, UNPULLED};
use crate::rng::RngStream;
use crate::sampling::{bernoulli, uniform_index};

/// Greedy on per-arm models fitted to the raw history, exploring uniformly
/// with probability `min(1, b / t)`.
#[derive(Debug, Clone)]
pub struct ContextualEpsilonGreedy {
    name: String,
    b: f64,
    kind: ModelKind,
    tie: TieRule,
    histories: Vec<ContextHistory>,
    models: Vec<Option<RewardModel>>,
    values: Vec<f64>,
}

impl ContextualEpsilonGreedy {
    pub fn new(
        name: impl Into<String>,
        arms: usize,
        dim: usize,
        b: f64,
        kind: ModelKind,
        tie: TieRule,
    ) -> Result<Self> {
        if arms == 0 || dim == 0 {
            return Err(Error::InvalidArgument(
                "contextual policy needs arms and features".into(),
            ));
        }
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "schedule constant {b} must be >= 0"
            )));
        }
        Ok(Self {
            name: name.into(),
            b,
            kind,
            tie,
            histories: vec![ContextHistory::new(dim); arms],
            models: vec![None; arms],
            values: vec![0.0; arms],
        })
    }
}

impl ContextualPolicy for ContextualEpsilonGreedy {
    fn name(&self) -> &str {
        &self.name
    }

    fn arms(&self) -> usize {
        self.histories.len()
    }

    fn select(&mut self, t: u64, x: &[f64], rng: &mut RngStream) -> Result<usize> {
        check_dim(self.histories[0].dim(), x)?;
        if let Some(i) = self.histories.iter().position(|h| h.is_empty()) {
            return Ok(i);
        }
        let eps = (self.b / t.max(1) as f64).min(1.0);
        if eps > 0.0 && bernoulli(eps, rng) {
            return Ok(uniform_index(self.histories.len(), rng));
        }
        for (v, m) in self.values.iter_mut().zip(&self.models) {
            *v = m.as_ref().map_or(UNPULLED, |m| m.predict(x));
        }
        Ok(select_arm(&self.values, self.tie, rng))
    }

    fn update(&mut self, arm: usize, x: &[f64], reward: f64, _rng: &mut RngStream) -> Result<()> {
        let arms = self.histories.len();
        let h = self
            .histories
            .get_mut(arm)
            .ok_or(Error::ArmOutOfRange { arm, arms })?;
        h.push(x, reward)?;
        let data = BootstrapSample::identity(h, 0).weighted(h);
        self.models[arm] = Some(fit_reward_model(
            &data,
            self.kind,
            self.models[arm].as_ref(),
        )?);
        Ok(())
    }
}

/// Pulls a uniformly random arm every round.
#[derive(Debug, Clone)]
pub struct UniformRandomPolicy {
    name: String,
    arms: usize,
    dim: usize,
}

impl UniformRandomPolicy {
    pub fn new(name: impl Into<String>, arms: usize, dim: usize) -> Result<Self> {
        if arms == 0 {
            return Err(Error::InvalidArgument(
                "policy needs at least one arm".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            arms,
            dim,
        })
    }
}

impl ContextualPolicy for UniformRandomPolicy {
    fn name(&self) -> &str {
        &self.name
    }

    fn arms(&self) -> usize {
        self.arms
    }

    fn select(&mut self, _t: u64, x: &[f64], rng: &mut RngStream) -> Result<usize> {
        check_dim(self.dim, x)?;
        Ok(uniform_index(self.arms, rng))
    }

    fn update(&mut self, arm: usize, x: &[f64], _reward: f64, _rng: &mut RngStream) -> Result<()> {
        check_dim(self.dim, x)?;
        if arm >= self.arms {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: self.arms,
            });
        }
        Ok(())
    }
}
