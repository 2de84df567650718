//! Seeded multi-run simulation of the multi-armed policies.

use rand::Rng;

use super::config::{ExperimentConfig, MeanRule, Mode, PolicyKind, Redraw, Schedule, TieMode};
use crate::env::{BanditInstance, Family};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::policies::{
    calibrate_schedule, EpsilonGreedy, Giro, KlUcb, Policy, Thompson, TieRule, Ucb1,
};
use crate::regret::{RegretAccumulator, RoundLog};
use crate::rng::{
    split_seed, RngStream, TAG_MEANS, TAG_POLICY_BASE, TAG_REWARDS, TAG_REWARDS_BASE,
};

/// Logs of one run: the instance played and one log sequence per policy.
#[derive(Debug, Clone, PartialEq)]
pub struct RunLogs {
    pub means: Vec<f64>,
    pub gaps: Vec<f64>,
    pub policies: Vec<Vec<RoundLog>>,
}

impl RunLogs {
    /// Final cumulative regret of each policy.
    pub fn final_regrets(&self) -> Vec<f64> {
        self.policies
            .iter()
            .map(|logs| logs.last().map_or(0.0, |l| l.cumulative_regret))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentLogs {
    pub policy_names: Vec<String>,
    pub runs: Vec<RunLogs>,
}

impl ExperimentLogs {
    /// Cumulative regret curves indexed `[run][policy][round - 1]`.
    pub fn regret_curves(&self) -> Vec<Vec<Vec<f64>>> {
        self.runs
            .iter()
            .map(|r| {
                r.policies
                    .iter()
                    .map(|logs| logs.iter().map(|l| l.cumulative_regret).collect())
                    .collect()
            })
            .collect()
    }

    /// Final regrets indexed `[policy][run]`.
    pub fn final_regrets(&self) -> Vec<Vec<f64>> {
        let per_run: Vec<Vec<f64>> = self.runs.iter().map(RunLogs::final_regrets).collect();
        (0..self.policy_names.len())
            .map(|p| per_run.iter().map(|r| r[p]).collect())
            .collect()
    }
}

/// Draws or copies the arm means of run `run`.
pub fn run_means(config: &ExperimentConfig, run: u64) -> Vec<f64> {
    match &config.means {
        MeanRule::Explicit(m) => m.clone(),
        MeanRule::Uniform { lo, hi } => {
            let stream_run = match config.redraw {
                Redraw::PerRun => run,
                Redraw::Fixed => 0,
            };
            let mut rng = split_seed(config.seed, stream_run, TAG_MEANS);
            (0..config.arms)
                .map(|_| lo + (hi - lo) * rng.random::<f64>())
                .collect()
        }
    }
}

pub(crate) fn tie_rule(mode: TieMode, rng: &mut RngStream) -> TieRule {
    match mode {
        TieMode::Uniform => TieRule::UniformRandom,
        TieMode::Fixed => TieRule::fixed_random(rng),
    }
}

pub(crate) fn schedule_b(schedule: Schedule, n: u64) -> Result<f64> {
    match schedule {
        Schedule::B(b) => Ok(b),
        Schedule::Explore(fraction) => calibrate_schedule(n, fraction),
    }
}

/// Instantiates a multi-armed policy from its spec.
pub fn build_policy(
    kind: &PolicyKind,
    name: &str,
    arms: usize,
    n: u64,
    tie: TieRule,
) -> Result<Box<dyn Policy>> {
    Ok(match kind {
        PolicyKind::Giro { a } if *a == 0.0 => Box::new(Giro::naive(name, arms, tie)?),
        PolicyKind::Giro { a } => Box::new(Giro::new(name, arms, *a, tie)?),
        PolicyKind::Ucb1 => Box::new(Ucb1::new(name, arms, tie)?),
        PolicyKind::KlUcb => Box::new(KlUcb::new(name, arms, tie)?),
        PolicyKind::Ts => Box::new(Thompson::new(name, arms, tie)?),
        PolicyKind::EpsGreedy { schedule } => Box::new(EpsilonGreedy::new(
            name,
            arms,
            schedule_b(*schedule, n)?,
            tie,
        )?),
        other => {
            return Err(Error::InvalidArgument(format!(
                "{} is a contextual policy",
                other.keyword()
            )))
        }
    })
}

/// Plays `policy` for `n` rounds, reading rewards from `reward(t, arm)`.
pub fn play(
    policy: &mut dyn Policy,
    gaps: &[f64],
    n: u64,
    rng: &mut RngStream,
    mut reward: impl FnMut(u64, usize) -> f64,
) -> Result<Vec<RoundLog>> {
    let mut acc = RegretAccumulator::new(gaps);
    let mut logs = Vec::with_capacity(n as usize);
    for t in 1..=n {
        let arm = policy.select(t, rng)?;
        if arm >= gaps.len() {
            return Err(Error::ArmOutOfRange {
                arm,
                arms: gaps.len(),
            });
        }
        let y = reward(t, arm);
        policy.update(arm, y, rng)?;
        logs.push(acc.record(arm, y));
    }
    Ok(logs)
}

/// One run of every configured policy on one instance.
pub fn run_once(config: &ExperimentConfig, run: u64) -> Result<RunLogs> {
    let instance = BanditInstance::new(run_means(config, run), config.family)?;
    let n = config.n;
    let shared = if config.independent_draws {
        None
    } else {
        Some(instance.reward_tape(n as usize, &mut split_seed(config.seed, run, TAG_REWARDS))?)
    };
    let mut policies = Vec::with_capacity(config.policies.len());
    for (i, spec) in config.policies.iter().enumerate() {
        let mut rng = split_seed(config.seed, run, TAG_POLICY_BASE + i as u64);
        let tie = tie_rule(config.tie, &mut rng);
        let mut policy = build_policy(&spec.kind, &spec.name, instance.arms(), n, tie)?;
        let own;
        let tape = match &shared {
            Some(tape) => tape,
            None => {
                let mut r = split_seed(config.seed, run, TAG_REWARDS_BASE + i as u64);
                own = instance.reward_tape(n as usize, &mut r)?;
                &own
            }
        };
        let logs = play(policy.as_mut(), instance.gaps(), n, &mut rng, |t, arm| {
            tape.reward(t as usize, arm)
        })?;
        policies.push(logs);
    }
    Ok(RunLogs {
        means: instance.means().to_vec(),
        gaps: instance.gaps().to_vec(),
        policies,
    })
}

/// Runs every configured run, concurrently under [`Execution::Parallel`].
/// Results are ordered by run index.
pub fn run_experiment(config: &ExperimentConfig, exec: Execution) -> Result<ExperimentLogs> {
    if config.mode != Mode::Mab {
        return Err(Error::InvalidArgument(
            "run_experiment needs mode = mab".into(),
        ));
    }
    config.validate()?;
    // surface bad parameters before any round is played
    for spec in &config.policies {
        build_policy(
            &spec.kind,
            &spec.name,
            config.arm_count(),
            config.n,
            TieRule::UniformRandom,
        )?;
    }
    if let Family::Beta { .. } = config.family {
        BanditInstance::new(run_means(config, 0), config.family)?;
    }
    let runs = map_indexed(config.runs as usize, exec, |r| run_once(config, r as u64));
    Ok(ExperimentLogs {
        policy_names: config.policies.iter().map(|p| p.name.clone()).collect(),
        runs: runs.into_iter().collect::<Result<_>>()?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Report {
    pub runs: u64,
    /// Runs with `Z = 1` whose first reward of arm 1 was 0.
    pub lock_events: u64,
    pub lock_frequency: f64,
    /// Lock runs in which arm 1 was pulled again after round 1.
    pub lock_violations: u64,
    pub mean_regret: f64,
    pub regret_stderr: f64,
}

/// Naive bootstrap with a fixed tie preference on two Bernoulli arms.
pub fn lemma1_experiment(
    mu1: f64,
    mu2: f64,
    n: u64,
    runs: u64,
    master_seed: u64,
    exec: Execution,
) -> Result<Lemma1Report> {
    if !(mu1 > mu2) || !(0.0..=1.0).contains(&mu1) || !(0.0..=1.0).contains(&mu2) {
        return Err(Error::InvalidArgument(format!(
            "need 1 >= mu1 > mu2 >= 0, got mu1 = {mu1}, mu2 = {mu2}"
        )));
    }
    if n == 0 || runs == 0 {
        return Err(Error::InvalidArgument("n and runs must be >= 1".into()));
    }
    let instance = BanditInstance::new(vec![mu1, mu2], Family::Bernoulli)?;
    let results = map_indexed(runs as usize, exec, |r| -> Result<(bool, bool, f64)> {
        let run = r as u64;
        let mut rng = split_seed(master_seed, run, TAG_POLICY_BASE);
        let tie = TieRule::fixed_random(&mut rng);
        let tape =
            instance.reward_tape(n as usize, &mut split_seed(master_seed, run, TAG_REWARDS))?;
        let mut policy = Giro::naive("naive-bootstrap", 2, tie)?;
        let logs = play(&mut policy, instance.gaps(), n, &mut rng, |t, arm| {
            tape.reward(t as usize, arm)
        })?;
        let z = matches!(tie, TieRule::FixedPreference { z: true });
        let lock = z && logs[0].pulled == 0 && logs[0].reward == 0.0;
        let violated = lock && logs.iter().skip(1).any(|l| l.pulled == 0);
        Ok((
            lock,
            violated,
            logs.last().map_or(0.0, |l| l.cumulative_regret),
        ))
    });
    let results: Vec<(bool, bool, f64)> = results.into_iter().collect::<Result<_>>()?;
    let lock_events = results.iter().filter(|r| r.0).count() as u64;
    let lock_violations = results.iter().filter(|r| r.1).count() as u64;
    let regrets: Vec<f64> = results.iter().map(|r| r.2).collect();
    let (mean, stderr) = super::aggregate::mean_stderr(&regrets);
    Ok(Lemma1Report {
        runs,
        lock_events,
        lock_frequency: lock_events as f64 / runs as f64,
        lock_violations,
        mean_regret: mean,
        regret_stderr: stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::PolicySpec;

    fn config(n: u64, runs: u64) -> ExperimentConfig {
        ExperimentConfig {
            n,
            runs,
            arms: 3,
            policies: vec![
                PolicySpec::new("giro", PolicyKind::Giro { a: 1.0 }),
                PolicySpec::new("ucb1", PolicyKind::Ucb1),
                PolicySpec::new("ts", PolicyKind::Ts),
            ],
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn one_round_is_one_forced_pull() {
        let logs = run_experiment(&config(1, 1), Execution::Sequential).unwrap();
        for p in &logs.runs[0].policies {
            assert_eq!(p.len(), 1);
            assert_eq!(p[0].pulled, 0);
        }
    }

    #[test]
    fn policies_share_reward_draws() {
        let c = config(300, 2);
        let logs = run_experiment(&c, Execution::Sequential).unwrap();
        for (r, run) in logs.runs.iter().enumerate() {
            let instance = BanditInstance::new(run.means.clone(), c.family).unwrap();
            let tape = instance
                .reward_tape(c.n as usize, &mut split_seed(c.seed, r as u64, TAG_REWARDS))
                .unwrap();
            for p in &run.policies {
                for l in p {
                    assert_eq!(l.reward, tape.reward(l.t as usize, l.pulled));
                }
            }
        }
    }

    #[test]
    fn independent_draws_differ() {
        let mut c = config(400, 1);
        c.independent_draws = true;
        let logs = run_experiment(&c, Execution::Sequential).unwrap();
        let (a, b) = (&logs.runs[0].policies[0], &logs.runs[0].policies[1]);
        let differs = a
            .iter()
            .zip(b)
            .any(|(x, y)| x.pulled == y.pulled && x.reward != y.reward);
        assert!(differs);
    }

    #[test]
    fn parallel_matches_sequential() {
        let c = config(500, 6);
        assert_eq!(
            run_experiment(&c, Execution::Sequential).unwrap(),
            run_experiment(&c, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn redraw_rule_controls_means() {
        let mut c = config(1, 3);
        let per_run: Vec<_> = (0..3).map(|r| run_means(&c, r)).collect();
        assert_ne!(per_run[0], per_run[1]);
        assert!(per_run.iter().flatten().all(|m| (0.25..=0.75).contains(m)));
        c.redraw = Redraw::Fixed;
        let fixed: Vec<_> = (0..3).map(|r| run_means(&c, r)).collect();
        assert_eq!(fixed[0], fixed[2]);
    }

    #[test]
    fn invalid_policy_surfaces_before_play() {
        let mut c = config(10, 1);
        c.policies
            .push(PolicySpec::new("bad", PolicyKind::Giro { a: -2.0 }));
        assert!(run_experiment(&c, Execution::Sequential).is_err());
    }

    #[test]
    fn lemma1_certain_first_reward_never_locks() {
        let rep = lemma1_experiment(1.0, 0.5, 50, 200, 3, Execution::Sequential).unwrap();
        assert_eq!(rep.lock_events, 0);
        assert_eq!(rep.lock_frequency, 0.0);
    }

    #[test]
    fn lemma1_lock_is_absorbing() {
        let rep = lemma1_experiment(0.6, 0.2, 200, 500, 4, Execution::Parallel).unwrap();
        assert!(rep.lock_events > 0);
        assert_eq!(rep.lock_violations, 0);
        assert!(lemma1_experiment(0.2, 0.6, 10, 10, 0, Execution::Sequential).is_err());
    }
}
