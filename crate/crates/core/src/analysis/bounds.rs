//! Closed-form regret bounds and the binomial inequalities behind them.

use std::f64::consts::{E, PI};

use super::binom::{
    binom_pmf, ceil_tol, ln_binom_pmf, ln_binom_tail_upper, ln_sum_exp, ROUNDING_SLACK,
};
use crate::error::{Error, Result};

/// Largest `n` accepted by [`w_exact`].
pub const W_EXACT_MAX_N: u64 = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GiroConstants {
    pub alpha: f64,
    /// `(2a + 1) / (a (a + 1))`, below 2 exactly when `a > 1 / sqrt(2)`.
    pub b: f64,
    /// `8 b / (2 - b)`, the exponent of the dominant factor of `c`.
    pub exponent: f64,
    /// Upper bound on the expected inverse probability of being optimistic.
    pub c: f64,
}

pub fn giro_constants(a: f64) -> Result<GiroConstants> {
    if !(a.is_finite() && a > std::f64::consts::FRAC_1_SQRT_2) {
        return Err(Error::Domain(format!("a = {a} must exceed 1/sqrt(2)")));
    }
    let alpha = 2.0 * a + 1.0;
    let b = alpha / (a * (a + 1.0));
    let exponent = 8.0 * b / (2.0 - b);
    let c = 2.0 * E * E * alpha.sqrt() / (2.0 * PI).sqrt()
        * exponent.exp()
        * (1.0 + (2.0 * PI / (4.0 - 2.0 * b)).sqrt());
    Ok(GiroConstants {
        alpha,
        b,
        exponent,
        c,
    })
}

/// Upper bound on `W` (independent of `n` and `p`).
pub fn w_bound_thm3(a: f64) -> Result<f64> {
    giro_constants(a).map(|k| k.c)
}

/// Regret bound over the suboptimal gaps, natural log.
///
/// `sum_i gap_i [(16 alpha c / gap_i^2) ln n + 2 + (8 alpha / gap_i^2) ln n + 2]`.
pub fn regret_bound_thm2(suboptimal_gaps: &[f64], n: f64, a: f64) -> Result<f64> {
    let k = giro_constants(a)?;
    if let Some(g) = suboptimal_gaps.iter().find(|&&g| !(g > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "suboptimal gap {g} must be positive"
        )));
    }
    if !(n >= 1.0) {
        return Err(Error::InvalidArgument(format!("horizon {n} must be >= 1")));
    }
    let log_n = n.ln();
    Ok(suboptimal_gaps
        .iter()
        .map(|&g| {
            let a_term = 16.0 * k.alpha * k.c / (g * g) * log_n + 2.0;
            let b_term = 8.0 * k.alpha / (g * g) * log_n + 2.0;
            g * (a_term + b_term)
        })
        .sum())
}

/// `ln sum_{y >= ceil((a + p) n)} B(y; m, (a n + x) / m)` with `m = (2a + 1) n`.
fn ln_inner_tail(n: u64, p: f64, a: u32, x: f64) -> f64 {
    let a = a as u64;
    let m = (2 * a + 1) * n;
    let start = ceil_tol((a as f64 + p) * n as f64).max(0.0) as u64;
    ln_binom_tail_upper(m, (a as f64 * n as f64 + x) / m as f64, start)
}

/// Exact inner tail used by [`w_exact`] and the lower bound checks.
pub fn bootstrap_tail(n: u64, p: f64, a: u32, x: u64) -> f64 {
    ln_inner_tail(n, p, a, x as f64).exp()
}

/// `W = sum_x B(x; n, p) / P[B(m, (a n + x) / m) >= ceil((a + p) n)]`,
/// accumulated in the log domain.
pub fn w_exact(n: u64, p: f64, a: u32) -> Result<f64> {
    if n == 0 || n > W_EXACT_MAX_N {
        return Err(Error::TooLarge(format!(
            "W is evaluated exactly for 1 <= n <= {W_EXACT_MAX_N}, got {n}"
        )));
    }
    if a == 0 || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "need integer a >= 1 and p in [0, 1], got a = {a}, p = {p}"
        )));
    }
    let mut terms = Vec::with_capacity(n as usize + 1);
    for x in 0..=n {
        let ln_weight = ln_binom_pmf(x, n, p);
        if ln_weight == f64::NEG_INFINITY {
            continue;
        }
        let ln_tail = ln_inner_tail(n, p, a, x as f64);
        if ln_tail == f64::NEG_INFINITY {
            return Err(Error::Inconsistent(format!(
                "inner tail vanished at n = {n}, p = {p}, a = {a}, x = {x}"
            )));
        }
        terms.push(ln_weight - ln_tail);
    }
    Ok(ln_sum_exp(&mut terms).exp())
}

/// Stirling-type lower bound on `B(x; n, p)` for interior `x`.
pub fn stirling_binom_lb(x: u64, n: u64, p: f64) -> Result<f64> {
    if x == 0 || x >= n {
        return Err(Error::Domain(format!(
            "x = {x} must lie strictly inside (0, {n})"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p = {p} must lie in (0, 1)")));
    }
    let (xf, nf) = (x as f64, n as f64);
    let dev = xf - p * nf;
    Ok((2.0 * PI).sqrt() / (E * E)
        * (nf / (xf * (nf - xf))).sqrt()
        * (-dev * dev / (p * (1.0 - p) * nf)).exp())
}

/// Lower bound on the bootstrap tail for `x` in `[0, p n]`:
/// `sqrt(2 pi) / (e^2 sqrt(2a + 1)) exp(-b (p n + sqrt(n) - x)^2 / n)`.
pub fn bootstrap_tail_lb(x: f64, n: u64, p: f64, a: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a = {a} must be positive")));
    }
    let nf = n as f64;
    if x < 0.0 || x > p * nf + ROUNDING_SLACK {
        return Err(Error::Domain(format!(
            "x = {x} outside [0, p n = {}]",
            p * nf
        )));
    }
    let b = (2.0 * a + 1.0) / (a * (a + 1.0));
    let d = p * nf + nf.sqrt() - x;
    Ok((2.0 * PI).sqrt() / (E * E * (2.0 * a + 1.0).sqrt()) * (-b * d * d / nf).exp())
}

/// One evaluated inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub check: String,
    pub n: u64,
    pub p: f64,
    pub a: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl BoundReport {
    pub fn new(check: impl Into<String>, n: u64, p: f64, a: f64, lhs: f64, rhs: f64) -> Self {
        Self {
            check: check.into(),
            n,
            p,
            a,
            lhs,
            rhs,
            slack: rhs - lhs,
        }
    }

    pub fn pass(&self) -> bool {
        self.lhs <= self.rhs
    }

    /// Turns a violated inequality into an error.
    pub fn ensure(self) -> Result<Self> {
        if self.pass() {
            Ok(self)
        } else {
            Err(Error::Inconsistent(format!(
                "{} violated at n = {}, p = {}, a = {}: lhs {} > rhs {}",
                self.check, self.n, self.p, self.a, self.lhs, self.rhs
            )))
        }
    }
}

/// `i_0`: the smallest integer with `(i_0 + 1) sqrt(n) >= p n`.
pub fn lemma3_i0(n: u64, p: f64) -> u64 {
    let (root, target) = ((n as f64).sqrt(), p * n as f64);
    let mut i0 = 0u64;
    while (i0 + 1) as f64 * root < target {
        i0 += 1;
    }
    i0
}

/// Evaluates `sum_x B(x; n, p) f(x)` against its peeling bound.
///
/// `f` must be non-negative and non-increasing; this is checked on the
/// integers `0..=n` and on the points where the bound evaluates `f`.
pub fn lemma3_check<F>(n: u64, p: f64, f: F) -> Result<BoundReport>
where
    F: Fn(f64) -> f64,
{
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    let i0 = lemma3_i0(n, p);
    let root = (n as f64).sqrt();
    let nodes: Vec<f64> = (0..i0)
        .map(|i| p * n as f64 - (i + 1) as f64 * root)
        .collect();

    let mut points: Vec<f64> = (0..=n)
        .map(|x| x as f64)
        .chain(nodes.iter().copied())
        .collect();
    points.sort_by(|a, b| a.total_cmp(b));
    let values: Vec<f64> = points.iter().map(|&x| f(x)).collect();
    if let Some(i) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "f({}) = {} is not a finite non-negative value",
            points[i], values[i]
        )));
    }
    if let Some(w) = values.windows(2).position(|w| w[1] > w[0]) {
        return Err(Error::InvalidArgument(format!(
            "f increases between {} and {}",
            points[w],
            points[w + 1]
        )));
    }

    let lhs: f64 = (0..=n).map(|x| binom_pmf(x, n, p) * f(x as f64)).sum();
    let rhs: f64 = nodes
        .iter()
        .enumerate()
        .map(|(i, &z)| (-2.0 * (i * i) as f64).exp() * f(z))
        .sum::<f64>()
        + (-2.0 * (i0 * i0) as f64).exp() * f(0.0);
    Ok(BoundReport::new("peeling", n, p, f64::NAN, lhs, rhs))
}

/// Expected regret floor of the naive bootstrap on two arms.
pub fn lemma1_lower_bound(mu1: f64, delta2: f64, n: u64) -> f64 {
    0.5 * (1.0 - mu1) * delta2 * (n.saturating_sub(1)) as f64
}
