//! Bernoulli Thompson sampling with a `Beta(1, 1)` prior.

use super::{ArmRecord, ArmSet, Policy, TieRule};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampling::{bernoulli, beta_sample};

/// Rounds a `[0, 1]` reward to a bit with `P[1] = reward`.
pub fn bernoulli_round(reward: f64, rng: &mut RngStream) -> Result<bool> {
    if !(0.0..=1.0).contains(&reward) {
        return Err(Error::InvalidArgument(format!(
            "reward {reward} outside [0, 1]"
        )));
    }
    Ok(bernoulli(reward, rng))
}

/// Posterior draw from `Beta(1 + ones, 1 + zeros)`.
pub fn ts_value(record: &ArmRecord, rng: &mut RngStream) -> Result<f64> {
    let ones = record.ones() as f64;
    let zeros = (record.pulls() - record.ones()) as f64;
    beta_sample(1.0 + ones, 1.0 + zeros, rng)
}

#[derive(Debug, Clone)]
pub struct Thompson {
    name: String,
    set: ArmSet,
}

impl Thompson {
    pub fn new(name: impl Into<String>, arms: usize, tie: TieRule) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            set: ArmSet::new(arms, tie)?,
        })
    }
}

impl Policy for Thompson {
    fn name(&self) -> &str {
        &self.name
    }

    fn arms(&self) -> usize {
        self.set.records.len()
    }

    fn select(&mut self, _t: u64, rng: &mut RngStream) -> Result<usize> {
        self.set.select_with(rng, ts_value)
    }

    fn update(&mut self, arm: usize, reward: f64, rng: &mut RngStream) -> Result<()> {
        let bit = bernoulli_round(reward, rng)?;
        self.set.record_mut(arm)?.push(if bit { 1.0 } else { 0.0 })
    }

    fn records(&self) -> &[ArmRecord] {
        &self.set.records
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::split_seed;
    use crate::testkit::mean_var;

    #[test]
    fn prior_is_uniform() {
        let mut rng = split_seed(1, 0, 0);
        let xs: Vec<f64> = (0..200_000)
            .map(|_| ts_value(&ArmRecord::new(), &mut rng).unwrap())
            .collect();
        let (m, v) = mean_var(&xs);
        assert!((m - 0.5).abs() < 3e-3);
        assert!((v - 1.0 / 12.0).abs() < 2e-3);
    }

    #[test]
    fn posterior_after_ten_successes() {
        let mut rng = split_seed(1, 1, 0);
        let r = ArmRecord::from_counts(10, 10).unwrap();
        let xs: Vec<f64> = (0..200_000)
            .map(|_| ts_value(&r, &mut rng).unwrap())
            .collect();
        let (m, _) = mean_var(&xs);
        assert!((m - 11.0 / 12.0).abs() < 2e-3, "{m}");
    }

    #[test]
    fn posterior_mean_formula() {
        let mut rng = split_seed(1, 2, 0);
        for s in [1u64, 4, 20] {
            let r = ArmRecord::from_counts(s, s).unwrap();
            let xs: Vec<f64> = (0..100_000)
                .map(|_| ts_value(&r, &mut rng).unwrap())
                .collect();
            let (m, _) = mean_var(&xs);
            let target = (1.0 + s as f64) / (2.0 + s as f64);
            assert!((m - target).abs() < 4e-3, "s={s}: {m} vs {target}");
        }
    }

    #[test]
    fn rounding() {
        let mut rng = split_seed(2, 0, 0);
        for _ in 0..1000 {
            assert!(!bernoulli_round(0.0, &mut rng).unwrap());
            assert!(bernoulli_round(1.0, &mut rng).unwrap());
        }
        let n = 1_000_000;
        let raw: Vec<f64> = (0..n).map(|i| (i % 10) as f64 / 9.0).collect();
        let mut hits03 = 0usize;
        let mut rounded_sum = 0.0;
        for &r in &raw {
            if bernoulli_round(0.3, &mut rng).unwrap() {
                hits03 += 1;
            }
            if bernoulli_round(r, &mut rng).unwrap() {
                rounded_sum += 1.0;
            }
        }
        assert!((hits03 as f64 / n as f64 - 0.3).abs() < 0.002);
        let raw_mean = raw.iter().sum::<f64>() / n as f64;
        assert!((rounded_sum / n as f64 - raw_mean).abs() < 0.002);
        assert!(bernoulli_round(1.2, &mut rng).is_err());
    }
}
