//! Contextual bootstrap exploration with pluggable reward models, linear
//! baselines and contextual environments.
//!
//! Each arm's history holds `(x, Y)` pairs. The pseudo rewards attached to
//! an observation share its context, so after `s` pulls the augmented
//! history has `(2a + 1) s` entries.

mod baselines;
mod env;
mod giro;
mod history;
mod linear;
mod model;

pub use baselines::{ContextualEpsilonGreedy, UniformRandomPolicy};
pub use env::{
    load_classification_env, read_classification_env, ClassificationBanditEnv, ContextRound,
    ContextualEnv, SyntheticLogisticEnv,
};
pub use giro::{
    contextual_giro_select, contextual_giro_value, contextual_sample, Audit, ContextualGiro,
    Resampling, AUDIT_SHIFT,
};
pub use history::{BootstrapSample, ContextHistory, EntryKind, SampleEntry, WeightedData};
pub use linear::{
    lints_value, linucb_value, LinearBandit, LinearDesign, LINTS_SCALE, LINUCB_ALPHA,
};
pub use model::{
    fit_reward_model, FitMeta, ModelKind, RewardModel, FALLBACK_RIDGE, LOGISTIC_MAX_ITER,
    LOGISTIC_TOL, RIDGE,
};

use crate::error::Result;
use crate::rng::RngStream;

/// Select/update interface of the contextual policies.
pub trait ContextualPolicy: Send {
    fn name(&self) -> &str;
    fn arms(&self) -> usize;
    fn select(&mut self, t: u64, x: &[f64], rng: &mut RngStream) -> Result<usize>;
    fn update(&mut self, arm: usize, x: &[f64], reward: f64, rng: &mut RngStream) -> Result<()>;
    /// Invariant tallies, for policies that keep them.
    fn audit(&self) -> Option<Audit> {
        None
    }
}
