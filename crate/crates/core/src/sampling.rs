//! Exact discrete and continuous samplers used by environments and policies.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Beta, Binomial, Distribution};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Draws from `B(trials, p)` exactly.
///
/// Backed by `rand_distr::Binomial`: inversion (a cdf walk) when
/// `trials * min(p, 1 - p) < 10`, BTPE acceptance-rejection above that.
/// Degenerate `p` and zero trials short-circuit without consuming randomness.
pub fn binomial_sample(trials: u64, p: f64, rng: &mut RngStream) -> u64 {
    if trials == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    Binomial::new(trials, p)
        .expect("p lies strictly inside (0, 1)")
        .sample(rng)
}

/// Returns `true` with probability `p` (clamped to `[0, 1]`).
#[inline]
pub fn bernoulli(p: f64, rng: &mut RngStream) -> bool {
    rng.random::<f64>() < p
}

/// Draws from `Beta(alpha, beta)`; both shapes must be positive and finite.
pub fn beta_sample(alpha: f64, beta: f64, rng: &mut RngStream) -> Result<f64> {
    let dist = Beta::new(alpha, beta)
        .map_err(|e| Error::InvalidArgument(format!("beta shapes ({alpha}, {beta}): {e}")))?;
    Ok(dist.sample(rng))
}

/// Uniform index in `0..len`.
#[inline]
pub fn uniform_index(len: usize, rng: &mut RngStream) -> usize {
    rng.random_range(0..len)
}

/// Uniformly random permutation of `0..len`.
pub fn permutation(len: usize, rng: &mut RngStream) -> Vec<usize> {
    let mut order: Vec<usize> = (0..len).collect();
    order.shuffle(rng);
    order
}
