//! Binomial probabilities in the log domain.

use statrs::function::factorial::ln_binomial;

/// Slack used when rounding thresholds such as `ceil((a + p) n)` computed in
/// floating point, so that `(1 + 0.1) * 10` rounds up to 11, not 12.
pub const ROUNDING_SLACK: f64 = 1e-9;

pub fn ceil_tol(v: f64) -> f64 {
    (v - ROUNDING_SLACK).ceil()
}

pub fn floor_tol(v: f64) -> f64 {
    (v + ROUNDING_SLACK).floor()
}

/// `ln B(x; n, p)`; `-inf` off the support.
pub fn ln_binom_pmf(x: u64, n: u64, p: f64) -> f64 {
    if x > n {
        return f64::NEG_INFINITY;
    }
    if p <= 0.0 {
        return if x == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if p >= 1.0 {
        return if x == n { 0.0 } else { f64::NEG_INFINITY };
    }
    ln_binomial(n, x) + x as f64 * p.ln() + (n - x) as f64 * (-p).ln_1p()
}

pub fn binom_pmf(x: u64, n: u64, p: f64) -> f64 {
    ln_binom_pmf(x, n, p).exp()
}

/// `ln sum exp(terms)`, adding the smallest terms first.
pub fn ln_sum_exp(terms: &mut [f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    terms.sort_by(|a, b| a.total_cmp(b));
    let sum: f64 = terms.iter().map(|t| (t - max).exp()).sum();
    max + sum.ln()
}

/// `ln P[X >= k]` for `X ~ B(n, p)`.
pub fn ln_binom_tail_upper(n: u64, p: f64, k: u64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    if k > n {
        return f64::NEG_INFINITY;
    }
    let mut terms: Vec<f64> = (k..=n).map(|x| ln_binom_pmf(x, n, p)).collect();
    ln_sum_exp(&mut terms).min(0.0)
}

pub fn binom_tail_upper(n: u64, p: f64, k: u64) -> f64 {
    ln_binom_tail_upper(n, p, k).exp()
}
