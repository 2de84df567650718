//! Stochastic multi-armed bandit environments with `[0, 1]` rewards.

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampling::{bernoulli, beta_sample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Bernoulli,
    /// Arm `i` pays `Beta(v * mu_i, v * (1 - mu_i))`.
    Beta {
        v: f64,
    },
}

/// Ground truth of a simulation: arm means, their reward family and gaps.
///
/// Ties for the best mean resolve to the lowest index.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: Vec<f64>,
    family: Family,
    best: usize,
    gaps: Vec<f64>,
}

impl BanditInstance {
    pub fn new(means: Vec<f64>, family: Family) -> Result<Self> {
        if means.is_empty() {
            return Err(Error::InvalidArgument(
                "a bandit needs at least one arm".into(),
            ));
        }
        if let Some((i, m)) = means
            .iter()
            .enumerate()
            .find(|(_, m)| !(0.0..=1.0).contains(*m))
        {
            return Err(Error::InvalidArgument(format!(
                "mean of arm {i} is {m}, outside [0, 1]"
            )));
        }
        if let Family::Beta { v } = family {
            if !(v.is_finite() && v >= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "beta concentration {v} must be >= 1"
                )));
            }
            if let Some(i) = means.iter().position(|&m| m <= 0.0 || m >= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "beta arm {i} with mean {} has a zero shape parameter",
                    means[i]
                )));
            }
        }
        let mut best = 0;
        for (i, &m) in means.iter().enumerate() {
            if m > means[best] {
                best = i;
            }
        }
        let gaps = means.iter().map(|m| means[best] - m).collect();
        Ok(Self {
            means,
            family,
            best,
            gaps,
        })
    }

    pub fn arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn best_arm(&self) -> usize {
        self.best
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(0.0, f64::max)
    }

    /// Draws one reward of `arm`.
    pub fn pull(&self, arm: usize, rng: &mut RngStream) -> Result<f64> {
        let mu = *self.means.get(arm).ok_or(Error::ArmOutOfRange {
            arm,
            arms: self.arms(),
        })?;
        Ok(match self.family {
            Family::Bernoulli => {
                if bernoulli(mu, rng) {
                    1.0
                } else {
                    0.0
                }
            }
            Family::Beta { v } => beta_sample(v * mu, v * (1.0 - mu), rng)?,
        })
    }

    /// Pre-draws `rounds` rows of rewards for every arm, row-major.
    ///
    /// All policies of a run read the same tape, so the reward of arm `i` in
    /// round `t` is identical across them.
    pub fn reward_tape(&self, rounds: usize, rng: &mut RngStream) -> Result<RewardTape> {
        let k = self.arms();
        let mut rewards = Vec::with_capacity(rounds * k);
        for _ in 0..rounds {
            for arm in 0..k {
                rewards.push(self.pull(arm, rng)?);
            }
        }
        Ok(RewardTape { arms: k, rewards })
    }
}

#[derive(Debug, Clone)]
pub struct RewardTape {
    arms: usize,
    rewards: Vec<f64>,
}

impl RewardTape {
    /// Reward of `arm` in round `t` (1-based).
    #[inline]
    pub fn reward(&self, t: usize, arm: usize) -> f64 {
        self.rewards[(t - 1) * self.arms + arm]
    }

    pub fn rounds(&self) -> usize {
        self.rewards.len() / self.arms.max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::split_seed;
    use crate::testkit::mean_var;

    #[test]
    fn degenerate_bernoulli() {
        let env = BanditInstance::new(vec![1.0, 0.0], Family::Bernoulli).unwrap();
        let mut rng = split_seed(0, 0, 0);
        for _ in 0..100 {
            assert_eq!(env.pull(0, &mut rng).unwrap(), 1.0);
            assert_eq!(env.pull(1, &mut rng).unwrap(), 0.0);
        }
    }

    #[test]
    fn bernoulli_half_mean() {
        let env = BanditInstance::new(vec![0.5], Family::Bernoulli).unwrap();
        let mut rng = split_seed(9, 0, 0);
        let n = 1_000_000;
        let total: f64 = (0..n).map(|_| env.pull(0, &mut rng).unwrap()).sum();
        assert!((total / n as f64 - 0.5).abs() < 0.002);
    }

    #[test]
    fn beta_moments() {
        let env = BanditInstance::new(vec![0.25], Family::Beta { v: 16.0 }).unwrap();
        let mut rng = split_seed(9, 1, 0);
        let xs: Vec<f64> = (0..400_000)
            .map(|_| env.pull(0, &mut rng).unwrap())
            .collect();
        let (m, v) = mean_var(&xs);
        // mu (1 - mu) / (v + 1) = 0.1875 / 17
        assert!((m - 0.25).abs() < 1e-3, "mean {m}");
        assert!((v - 0.011_029_411_764_705_9).abs() < 2e-4, "var {v}");
    }

    #[test]
    fn arm_out_of_range() {
        let env = BanditInstance::new(vec![0.5, 0.2], Family::Bernoulli).unwrap();
        let mut rng = split_seed(0, 0, 0);
        assert!(matches!(
            env.pull(2, &mut rng),
            Err(Error::ArmOutOfRange { arm: 2, arms: 2 })
        ));
    }

    #[test]
    fn ties_pick_lowest_index_and_gaps() {
        let env = BanditInstance::new(vec![0.3, 0.7, 0.7, 0.1], Family::Bernoulli).unwrap();
        assert_eq!(env.best_arm(), 1);
        assert_eq!(env.gaps()[2], 0.0);
        assert!(env.gaps().iter().all(|&g| g >= 0.0));
        assert!((env.max_gap() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn rejects_invalid_means() {
        assert!(BanditInstance::new(vec![1.2], Family::Bernoulli).is_err());
        assert!(BanditInstance::new(vec![0.0, 0.5], Family::Beta { v: 4.0 }).is_err());
        assert!(BanditInstance::new(vec![0.5], Family::Beta { v: 0.5 }).is_err());
        assert!(BanditInstance::new(vec![], Family::Bernoulli).is_err());
    }
}
