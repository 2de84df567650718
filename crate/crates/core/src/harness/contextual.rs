//! Seeded multi-run simulation of the contextual policies.

use super::config::{ExperimentConfig, Mode, PolicyKind, Redraw};
use super::run::{schedule_b, tie_rule};
use crate::contextual::{
    Audit, ClassificationBanditEnv, ContextualEnv, ContextualEpsilonGreedy, ContextualGiro,
    ContextualPolicy, LinearBandit, SyntheticLogisticEnv, UniformRandomPolicy,
};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::policies::TieRule;
use crate::rng::{mix64, split_seed, TAG_CONTEXTS, TAG_MEANS, TAG_POLICY_BASE, TAG_REWARDS_BASE};

/// Instantiates a contextual policy from its spec.
pub fn build_contextual_policy(
    kind: &PolicyKind,
    name: &str,
    arms: usize,
    dim: usize,
    n: u64,
    tie: TieRule,
    audit_every: u64,
) -> Result<Box<dyn ContextualPolicy>> {
    Ok(match kind {
        PolicyKind::ContextualGiro { a, model, refit } => {
            let mut p =
                ContextualGiro::new(name, arms, dim, *a, *model, tie)?.with_refit_every(*refit)?;
            if audit_every > 0 {
                p = p.with_audit(audit_every);
            }
            Box::new(p)
        }
        PolicyKind::LinUcb { alpha } => {
            Box::new(LinearBandit::linucb(name, arms, dim, *alpha, tie)?)
        }
        PolicyKind::LinTs { scale } => Box::new(LinearBandit::lints(name, arms, dim, *scale, tie)?),
        PolicyKind::ContextualEpsGreedy { schedule, model } => Box::new(
            ContextualEpsilonGreedy::new(name, arms, dim, schedule_b(*schedule, n)?, *model, tie)?,
        ),
        PolicyKind::Random => Box::new(UniformRandomPolicy::new(name, arms, dim)?),
        other => {
            return Err(Error::InvalidArgument(format!(
                "{} is not a contextual policy",
                other.keyword()
            )))
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextualRun {
    /// Realized reward, `[policy][round - 1]`.
    pub rewards: Vec<Vec<f64>>,
    /// Expected reward of the pulled arm, `[policy][round - 1]`.
    pub expected: Vec<Vec<f64>>,
    /// Best expected reward per round on the shared round sequence.
    pub oracle: Vec<f64>,
    /// Mean expected reward over arms per round on the shared sequence.
    pub uniform: Vec<f64>,
    pub audits: Vec<Option<Audit>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextualLogs {
    pub policy_names: Vec<String>,
    pub runs: Vec<ContextualRun>,
}

fn running_mean(xs: &[f64]) -> Vec<f64> {
    let mut sum = 0.0;
    xs.iter()
        .enumerate()
        .map(|(i, x)| {
            sum += x;
            sum / (i + 1) as f64
        })
        .collect()
}

impl ContextualLogs {
    /// Mean reward so far, `(1/t) sum_{s <= t} Y_s`, as `[run][policy][round - 1]`.
    pub fn mean_reward_curves(&self) -> Vec<Vec<Vec<f64>>> {
        self.runs
            .iter()
            .map(|r| r.rewards.iter().map(|p| running_mean(p)).collect())
            .collect()
    }

    /// Per-round mean of the pulled arms' expected rewards, `[policy][run]`.
    pub fn mean_expected_reward(&self) -> Vec<Vec<f64>> {
        (0..self.policy_names.len())
            .map(|p| {
                self.runs
                    .iter()
                    .map(|r| r.expected[p].iter().sum::<f64>() / r.expected[p].len() as f64)
                    .collect()
            })
            .collect()
    }
}

fn synthetic_env(config: &ExperimentConfig, run: u64) -> Result<SyntheticLogisticEnv> {
    let stream_run = match config.redraw {
        Redraw::PerRun => run,
        Redraw::Fixed => 0,
    };
    let mut rng = split_seed(config.seed, stream_run, TAG_MEANS);
    SyntheticLogisticEnv::random(
        config.contextual.dim,
        config.arms,
        config.contextual.theta_scale,
        &mut rng,
    )
}

/// Runs one contextual run on `env`.
pub fn run_contextual_once(
    config: &ExperimentConfig,
    env: &dyn ContextualEnv,
    run: u64,
) -> Result<ContextualRun> {
    let n = config.n;
    let mut shared = split_seed(config.seed, run, TAG_CONTEXTS);
    let mut oracle = Vec::with_capacity(n as usize);
    let mut uniform = Vec::with_capacity(n as usize);
    for t in 1..=n {
        let round = env.round(t, &mut shared)?;
        oracle.push(round.best_expected());
        uniform.push(round.mean_expected());
    }
    let mut out = ContextualRun {
        rewards: Vec::new(),
        expected: Vec::new(),
        oracle,
        uniform,
        audits: Vec::new(),
    };
    for (i, spec) in config.policies.iter().enumerate() {
        let mut rng = split_seed(config.seed, run, TAG_POLICY_BASE + i as u64);
        let tie = tie_rule(config.tie, &mut rng);
        let mut policy = build_contextual_policy(
            &spec.kind,
            &spec.name,
            env.arms(),
            env.dim(),
            n,
            tie,
            config.contextual.audit_every,
        )?;
        let mut env_rng = if config.independent_draws {
            split_seed(config.seed, run, TAG_REWARDS_BASE + i as u64)
        } else {
            split_seed(config.seed, run, TAG_CONTEXTS)
        };
        let mut rewards = Vec::with_capacity(n as usize);
        let mut expected = Vec::with_capacity(n as usize);
        for t in 1..=n {
            let round = env.round(t, &mut env_rng)?;
            let arm = policy.select(t, &round.context, &mut rng)?;
            let y = *round.rewards.get(arm).ok_or(Error::ArmOutOfRange {
                arm,
                arms: env.arms(),
            })?;
            policy.update(arm, &round.context, y, &mut rng)?;
            rewards.push(y);
            expected.push(round.expected[arm]);
        }
        out.rewards.push(rewards);
        out.expected.push(expected);
        out.audits.push(policy.audit());
    }
    Ok(out)
}

/// Runs every configured contextual run. With `dataset`, run `r` presents
/// the rows in its own shuffled order; otherwise each run plays a synthetic
/// logistic environment.
pub fn run_contextual(
    config: &ExperimentConfig,
    dataset: Option<&ClassificationBanditEnv>,
    exec: Execution,
) -> Result<ContextualLogs> {
    if config.mode != Mode::Contextual {
        return Err(Error::InvalidArgument(
            "run_contextual needs mode = contextual".into(),
        ));
    }
    config.validate()?;
    let (arms, dim) = match dataset {
        Some(d) => (d.arms(), d.dim()),
        None => (config.arms, config.contextual.dim),
    };
    for spec in &config.policies {
        build_contextual_policy(
            &spec.kind,
            &spec.name,
            arms,
            dim,
            config.n,
            TieRule::UniformRandom,
            0,
        )?;
    }
    let runs = map_indexed(config.runs as usize, exec, |r| {
        let run = r as u64;
        match dataset {
            Some(d) => {
                let env = d.reshuffled(mix64(config.seed ^ mix64(run)));
                run_contextual_once(config, &env, run)
            }
            None => run_contextual_once(config, &synthetic_env(config, run)?, run),
        }
    });
    Ok(ContextualLogs {
        policy_names: config.policies.iter().map(|p| p.name.clone()).collect(),
        runs: runs.into_iter().collect::<Result<_>>()?,
    })
}
