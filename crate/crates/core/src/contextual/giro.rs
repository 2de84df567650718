//! Contextual bootstrap exploration: refit a reward model to a resample of
//! each arm's augmented history and act greedily on the fitted values.

use super::history::{BootstrapSample, ContextHistory, EntryKind, WeightedData};
use super::model::{fit_reward_model, ModelKind, RewardModel};
use super::ContextualPolicy;
use crate::error::{Error, Result};
use crate::policies::{select_arm, TieRule, UNPULLED};
use crate::rng::RngStream;

/// Where each round's training sample comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resampling {
    /// With-replacement resample of the augmented history.
    Bootstrap,
    /// The augmented history itself; deterministic, for regression checks.
    Identity,
}

/// Running tallies of per-round invariant checks on the drawn samples.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Audit {
    pub samples_checked: u64,
    pub pairing_violations: u64,
    /// Largest `|f_shift(x) - f(x) - c|` over linear refits with shifted targets.
    pub max_bias_shift_error: f64,
}

/// Shift used by the bias-shift check.
pub const AUDIT_SHIFT: f64 = 0.25;

impl Audit {
    fn check(
        &mut self,
        history: &ContextHistory,
        sample: &BootstrapSample,
        x: &[f64],
    ) -> Result<()> {
        self.samples_checked += 1;
        for e in &sample.entries {
            if e.kind == EntryKind::Observed {
                continue;
            }
            // the pseudo entry's context must be one of the arm's observed contexts
            let ctx = history.context(e.source);
            if !(0..history.len()).any(|j| history.context(j) == ctx) {
                self.pairing_violations += 1;
            }
        }
        let data = sample.weighted(history);
        let base = fit_reward_model(&data, ModelKind::Linear, None)?;
        let mut shifted = data;
        shifted.shift_targets(AUDIT_SHIFT);
        let moved = fit_reward_model(&shifted, ModelKind::Linear, None)?;
        let err = (moved.predict_raw(x) - base.predict_raw(x) - AUDIT_SHIFT).abs();
        self.max_bias_shift_error = self.max_bias_shift_error.max(err);
        Ok(())
    }
}

/// Training data for one arm: its augmented history, resampled or not.
pub fn contextual_sample(
    history: &ContextHistory,
    a: u32,
    resampling: Resampling,
    rng: &mut RngStream,
) -> BootstrapSample {
    match resampling {
        Resampling::Bootstrap => BootstrapSample::draw(history, a, rng),
        Resampling::Identity => BootstrapSample::identity(history, a),
    }
}

/// Value of one pulled arm at `x`: fit to a fresh sample, predict, clamp.
pub fn contextual_giro_value(
    history: &ContextHistory,
    x: &[f64],
    a: u32,
    kind: ModelKind,
    resampling: Resampling,
    warm_start: Option<&RewardModel>,
    rng: &mut RngStream,
) -> Result<(f64, RewardModel)> {
    if history.is_empty() {
        return Err(Error::Contract(
            "contextual value requested for an unpulled arm".into(),
        ));
    }
    let sample = contextual_sample(history, a, resampling, rng);
    let model = fit_reward_model(&sample.weighted(history), kind, warm_start)?;
    Ok((model.predict(x), model))
}

/// One stateless selection over `histories`; unpulled arms take the sentinel.
pub fn contextual_giro_select(
    histories: &[ContextHistory],
    x: &[f64],
    a: u32,
    kind: ModelKind,
    tie: TieRule,
    rng: &mut RngStream,
) -> Result<usize> {
    let mut values = Vec::with_capacity(histories.len());
    for h in histories {
        check_dim(h.dim(), x)?;
        values.push(if h.is_empty() {
            UNPULLED
        } else {
            contextual_giro_value(h, x, a, kind, Resampling::Bootstrap, None, rng)?.0
        });
    }
    Ok(select_arm(&values, tie, rng))
}

pub(crate) fn check_dim(dim: usize, x: &[f64]) -> Result<()> {
    if x.len() != dim {
        return Err(Error::InvalidArgument(format!(
            "context has dimension {}, expected {dim}",
            x.len()
        )));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ContextualGiro {
    name: String,
    a: u32,
    kind: ModelKind,
    tie: TieRule,
    refit_every: u64,
    resampling: Resampling,
    histories: Vec<ContextHistory>,
    models: Vec<Option<RewardModel>>,
    values: Vec<f64>,
    audit: Option<Audit>,
    audit_every: u64,
}

impl ContextualGiro {
    pub fn new(
        name: impl Into<String>,
        arms: usize,
        dim: usize,
        a: u32,
        kind: ModelKind,
        tie: TieRule,
    ) -> Result<Self> {
        if arms == 0 || dim == 0 {
            return Err(Error::InvalidArgument(
                "contextual policy needs arms and features".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            a,
            kind,
            tie,
            refit_every: 1,
            resampling: Resampling::Bootstrap,
            histories: vec![ContextHistory::new(dim); arms],
            models: vec![None; arms],
            values: vec![0.0; arms],
            audit: None,
            audit_every: 1,
        })
    }

    /// Refit models only every `r` rounds and reuse them in between.
    pub fn with_refit_every(mut self, r: u64) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidArgument("refit period must be >= 1".into()));
        }
        self.refit_every = r;
        Ok(self)
    }

    pub fn with_resampling(mut self, resampling: Resampling) -> Self {
        self.resampling = resampling;
        self
    }

    /// Checks pairing and bias shift on the samples of every `every`-th round.
    pub fn with_audit(mut self, every: u64) -> Self {
        self.audit = Some(Audit::default());
        self.audit_every = every.max(1);
        self
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn histories(&self) -> &[ContextHistory] {
        &self.histories
    }

    pub fn models(&self) -> &[Option<RewardModel>] {
        &self.models
    }
}

impl ContextualPolicy for ContextualGiro {
    fn name(&self) -> &str {
        &self.name
    }

    fn arms(&self) -> usize {
        self.histories.len()
    }

    fn select(&mut self, t: u64, x: &[f64], rng: &mut RngStream) -> Result<usize> {
        check_dim(self.histories[0].dim(), x)?;
        let refit = (t.max(1) - 1).is_multiple_of(self.refit_every);
        let audit_now = self.audit.is_some() && (t.max(1) - 1).is_multiple_of(self.audit_every);
        for i in 0..self.histories.len() {
            let h = &self.histories[i];
            if h.is_empty() {
                self.values[i] = UNPULLED;
                continue;
            }
            if refit || self.models[i].is_none() {
                let sample = contextual_sample(h, self.a, self.resampling, rng);
                if audit_now {
                    if let Some(audit) = self.audit.as_mut() {
                        audit.check(h, &sample, x)?;
                    }
                }
                let data: WeightedData = sample.weighted(h);
                let model = fit_reward_model(&data, self.kind, self.models[i].as_ref())?;
                self.models[i] = Some(model);
            }
            self.values[i] = self.models[i].as_ref().map_or(UNPULLED, |m| m.predict(x));
        }
        Ok(select_arm(&self.values, self.tie, rng))
    }

    fn update(&mut self, arm: usize, x: &[f64], reward: f64, _rng: &mut RngStream) -> Result<()> {
        let arms = self.histories.len();
        self.histories
            .get_mut(arm)
            .ok_or(Error::ArmOutOfRange { arm, arms })?
            .push(x, reward)
    }

    fn audit(&self) -> Option<Audit> {
        self.audit
    }
}
