//! Pseudo-regret accounting: each round adds the gap of the pulled arm.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundLog {
    /// 1-based round index.
    pub t: u64,
    pub pulled: usize,
    pub reward: f64,
    pub cumulative_regret: f64,
}

/// Builds a contiguous log while a policy runs.
#[derive(Debug, Clone)]
pub struct RegretAccumulator<'a> {
    gaps: &'a [f64],
    t: u64,
    regret: f64,
}

impl<'a> RegretAccumulator<'a> {
    pub fn new(gaps: &'a [f64]) -> Self {
        Self {
            gaps,
            t: 0,
            regret: 0.0,
        }
    }

    pub fn record(&mut self, pulled: usize, reward: f64) -> RoundLog {
        self.t += 1;
        self.regret += self.gaps[pulled];
        RoundLog {
            t: self.t,
            pulled,
            reward,
            cumulative_regret: self.regret,
        }
    }

    pub fn regret(&self) -> f64 {
        self.regret
    }
}

/// Recomputes the cumulative regret curve from the pulled arms.
///
/// Rounds must be exactly `1..=n` in order.
pub fn regret_curve(logs: &[RoundLog], gaps: &[f64]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(logs.len());
    let mut total = 0.0;
    for (i, log) in logs.iter().enumerate() {
        if log.t != i as u64 + 1 {
            return Err(Error::Inconsistent(format!(
                "round {} found at position {}, expected round {}",
                log.t,
                i,
                i + 1
            )));
        }
        let gap = gaps.get(log.pulled).ok_or(Error::ArmOutOfRange {
            arm: log.pulled,
            arms: gaps.len(),
        })?;
        total += gap;
        out.push(total);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{BanditInstance, Family};
    use crate::rng::split_seed;
    use crate::sampling::uniform_index;

    fn logs_for(pulls: &[usize], gaps: &[f64]) -> Vec<RoundLog> {
        let mut acc = RegretAccumulator::new(gaps);
        pulls.iter().map(|&a| acc.record(a, 0.0)).collect()
    }

    #[test]
    fn best_arm_only_is_zero() {
        let gaps = [0.0, 0.4];
        let curve = regret_curve(&logs_for(&[0; 10], &gaps), &gaps).unwrap();
        assert!(curve.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn suboptimal_every_round() {
        let gaps = [0.0, 0.4];
        let logs = logs_for(&[1; 10], &gaps);
        let curve = regret_curve(&logs, &gaps).unwrap();
        assert!((curve[9] - 4.0).abs() < 1e-12);
        assert!((logs[9].cumulative_regret - 4.0).abs() < 1e-12);
    }

    #[test]
    fn non_contiguous_rejected() {
        let gaps = [0.0, 0.4];
        let mut logs = logs_for(&[1, 0, 1], &gaps);
        logs[2].t = 5;
        assert!(matches!(
            regret_curve(&logs, &gaps),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn uniform_policy_expected_regret() {
        let env = BanditInstance::new(vec![0.6, 0.2], Family::Bernoulli).unwrap();
        let runs = 100;
        let n = 10_000;
        let mut total = 0.0;
        for run in 0..runs {
            let mut rng = split_seed(17, run, 0);
            let pulls: Vec<usize> = (0..n).map(|_| uniform_index(2, &mut rng)).collect();
            let curve = regret_curve(&logs_for(&pulls, env.gaps()), env.gaps()).unwrap();
            assert!(curve.windows(2).all(|w| w[1] >= w[0]));
            assert!(curve[n - 1] <= n as f64 * env.max_gap() + 1e-9);
            total += curve[n - 1];
        }
        let mean = total / runs as f64;
        assert!((mean - 2000.0).abs() < 60.0, "mean final regret {mean}");
    }
}
