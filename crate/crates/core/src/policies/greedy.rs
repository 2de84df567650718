//! Epsilon-greedy with the decaying schedule `eps_t = min(1, b / t)`.

use super::{select_arm, ArmRecord, ArmSet, Policy, TieRule, UNPULLED};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampling::{bernoulli, uniform_index};

/// Expected number of exploration rounds, `sum_{t=1}^n min(1, b / t)`.
pub fn exploration_budget(b: f64, n: u64) -> f64 {
    (1..=n).map(|t| (b / t as f64).min(1.0)).sum()
}

/// Schedule constant `b` that explores a `fraction` of `n` rounds.
///
/// Solves `b (1 + ln(n / b)) = fraction * n` by bisection; the left side
/// approximates [`exploration_budget`] and is increasing on `(0, n]`.
pub fn calibrate_schedule(n: u64, fraction: f64) -> Result<f64> {
    if n == 0 || !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "cannot calibrate exploration fraction {fraction} over {n} rounds"
        )));
    }
    let n = n as f64;
    let target = fraction * n;
    let g = |b: f64| b * (1.0 + (n / b).ln());
    let (mut lo, mut hi) = (0.0f64, n);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * n {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// One epsilon-greedy decision over `records` in round `t`.
pub fn eg_select(
    records: &[ArmRecord],
    t: u64,
    b: f64,
    tie: TieRule,
    rng: &mut RngStream,
) -> usize {
    if let Some(i) = records.iter().position(|r| r.pulls() == 0) {
        return i;
    }
    let eps = (b / t.max(1) as f64).min(1.0);
    if eps > 0.0 && bernoulli(eps, rng) {
        return uniform_index(records.len(), rng);
    }
    let means: Vec<f64> = records
        .iter()
        .map(|r| if r.pulls() == 0 { UNPULLED } else { r.mean() })
        .collect();
    select_arm(&means, tie, rng)
}

#[derive(Debug, Clone)]
pub struct EpsilonGreedy {
    name: String,
    b: f64,
    set: ArmSet,
}

impl EpsilonGreedy {
    pub fn new(name: impl Into<String>, arms: usize, b: f64, tie: TieRule) -> Result<Self> {
        if !(b.is_finite() && b >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "schedule constant {b} must be >= 0"
            )));
        }
        Ok(Self {
            name: name.into(),
            b,
            set: ArmSet::new(arms, tie)?,
        })
    }

    pub fn b(&self) -> f64 {
        self.b
    }
}

impl Policy for EpsilonGreedy {
    fn name(&self) -> &str {
        &self.name
    }

    fn arms(&self) -> usize {
        self.set.records.len()
    }

    fn select(&mut self, t: u64, rng: &mut RngStream) -> Result<usize> {
        Ok(eg_select(&self.set.records, t, self.b, self.set.tie, rng))
    }

    fn update(&mut self, arm: usize, reward: f64, _rng: &mut RngStream) -> Result<()> {
        self.set.record_mut(arm)?.push(reward)
    }

    fn records(&self) -> &[ArmRecord] {
        &self.set.records
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::split_seed;

    #[test]
    fn zero_schedule_is_greedy() {
        let mut rng = split_seed(0, 0, 0);
        let records = vec![
            ArmRecord::from_counts(10, 3).unwrap(),
            ArmRecord::from_counts(10, 7).unwrap(),
        ];
        for t in 1..1000 {
            assert_eq!(
                eg_select(&records, t, 0.0, TieRule::UniformRandom, &mut rng),
                1
            );
        }
    }

    #[test]
    fn calibration_for_fifty_thousand_rounds() {
        let n = 50_000;
        let b = calibrate_schedule(n, 0.01).unwrap();
        let lhs = b * (1.0 + (n as f64 / b).ln());
        assert!((lhs - 500.0).abs() < 1e-6);
        // direct summation agrees with the closed-form approximation
        let direct = exploration_budget(b, n);
        assert!(
            (direct - 500.0).abs() / 500.0 < 0.01,
            "b = {b}, direct = {direct}"
        );
    }

    #[test]
    fn empirical_exploration_rate() {
        let n = 50_000u64;
        let b = calibrate_schedule(n, 0.01).unwrap();
        let mut rng = split_seed(8, 0, 0);
        let mut explored = 0u64;
        for t in 1..=n {
            if bernoulli((b / t as f64).min(1.0), &mut rng) {
                explored += 1;
            }
        }
        // mean ~500, sd ~ sqrt(500)
        assert!(
            (explored as f64 - 500.0).abs() < 4.0 * 500f64.sqrt() + 5.0,
            "{explored}"
        );
    }

    #[test]
    fn rejects_bad_calibration() {
        assert!(calibrate_schedule(0, 0.01).is_err());
        assert!(calibrate_schedule(10, 0.0).is_err());
    }
}
