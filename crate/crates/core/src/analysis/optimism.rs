//! Probability that a bootstrap mean is optimistic, and the two regret terms
//! built from it.

use super::binom::{binom_pmf, binom_tail_upper, ceil_tol};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampling::bernoulli;

/// Largest horizon accepted by [`theorem1_terms`] (cost grows as `n^3`).
pub const THEOREM1_EXACT_MAX_N: u64 = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimismQuery {
    /// Pulls of the arm.
    pub s: u64,
    /// Ones in the augmented history, `V in [a s, (a + 1) s]`.
    pub v: u64,
    pub a: u32,
    pub tau: f64,
}

impl OptimismQuery {
    pub fn alpha(&self) -> u64 {
        2 * self.a as u64 + 1
    }
}

/// `P[U / (alpha s) >= tau | V]` with `U ~ B(alpha s, V / (alpha s))`; 1 when
/// `s = 0`.
pub fn optimism_tail_q(q: OptimismQuery) -> Result<f64> {
    if q.s == 0 {
        return Ok(1.0);
    }
    let a = q.a as u64;
    if q.v < a * q.s || q.v > (a + 1) * q.s {
        return Err(Error::InvalidArgument(format!(
            "V = {} outside [{}, {}] for s = {}, a = {}",
            q.v,
            a * q.s,
            (a + 1) * q.s,
            q.s,
            q.a
        )));
    }
    let size = q.alpha() * q.s;
    let threshold = ceil_tol(q.tau * size as f64);
    if threshold <= 0.0 {
        return Ok(1.0);
    }
    if threshold > size as f64 {
        return Ok(0.0);
    }
    Ok(binom_tail_upper(
        size,
        q.v as f64 / size as f64,
        threshold as u64,
    ))
}

/// Threshold `tau_i = (mu_i + a) / alpha + gap / (2 alpha)`, midway between
/// the shifted and scaled means of arm `i` and the best arm. Rewriting it
/// around the best arm, `(mu_1 + a) / alpha - gap / (2 alpha)`, gives the
/// same number.
pub fn midpoint_tau(p1: f64, pi: f64, a: u32) -> f64 {
    let alpha = 2.0 * a as f64 + 1.0;
    (pi + a as f64) / alpha + (p1 - pi) / (2.0 * alpha)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem1Terms {
    pub a_i: f64,
    pub b_i: f64,
    pub tau: f64,
}

fn check_means(n: u64, p1: f64, pi: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("horizon must be positive".into()));
    }
    if !(0.0 <= pi && pi < p1 && p1 <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= mu_i < mu_1 <= 1, got mu_1 = {p1}, mu_i = {pi}"
        )));
    }
    Ok(())
}

/// `Q_s(tau)` for every `s < n` and every count `x` of observed ones.
fn q_table(n: u64, a: u32, tau: f64) -> Result<Vec<Vec<f64>>> {
    (0..n)
        .map(|s| {
            (0..=s)
                .map(|x| {
                    optimism_tail_q(OptimismQuery {
                        s,
                        v: x + a as u64 * s,
                        a,
                        tau,
                    })
                })
                .collect()
        })
        .collect()
}

fn inverse_term(q: f64, n: u64) -> f64 {
    if q <= 0.0 {
        n as f64
    } else {
        (1.0 / q - 1.0).min(n as f64)
    }
}

/// Exact `a_i` and `b_i` at the midpoint threshold.
///
/// `a_i = sum_s E[min(1 / Q_{1,s} - 1, n)]` and
/// `b_i = sum_s P[Q_{i,s} > 1 / n] + 1`, with the expectations taken over
/// `V - a s ~ B(s, mu)` by enumeration.
pub fn theorem1_terms(n: u64, p1: f64, pi: f64, a: u32) -> Result<Theorem1Terms> {
    check_means(n, p1, pi)?;
    if n > THEOREM1_EXACT_MAX_N {
        return Err(Error::TooLarge(format!(
            "n = {n} exceeds the exact-mode cap {THEOREM1_EXACT_MAX_N}; use theorem1_terms_monte_carlo"
        )));
    }
    let tau = midpoint_tau(p1, pi, a);
    let table = q_table(n, a, tau)?;
    let cutoff = 1.0 / n as f64;
    let mut a_i = 0.0;
    let mut b_i = 1.0;
    for (s, row) in table.iter().enumerate() {
        let s = s as u64;
        for (x, &q) in row.iter().enumerate() {
            let x = x as u64;
            a_i += binom_pmf(x, s, p1) * inverse_term(q, n);
            if q > cutoff {
                b_i += binom_pmf(x, s, pi);
            }
        }
    }
    Ok(Theorem1Terms { a_i, b_i, tau })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloTerms {
    pub a_i: f64,
    pub a_i_stderr: f64,
    pub b_i: f64,
    pub b_i_stderr: f64,
    pub histories: usize,
}

/// Monte Carlo estimate of [`theorem1_terms`] from simulated reward
/// histories; `Q` given a history is still evaluated exactly.
///
/// Each simulated history is one reward sequence per arm, and every prefix
/// length `s` contributes to the sums, so one history yields one sample of
/// the whole sum over `s`.
pub fn theorem1_terms_monte_carlo(
    n: u64,
    p1: f64,
    pi: f64,
    a: u32,
    histories: usize,
    rng: &mut RngStream,
) -> Result<MonteCarloTerms> {
    check_means(n, p1, pi)?;
    if histories < 2 {
        return Err(Error::InvalidArgument("need at least two histories".into()));
    }
    let tau = midpoint_tau(p1, pi, a);
    let table = q_table(n, a, tau)?;
    let cutoff = 1.0 / n as f64;
    let (mut sa, mut saa, mut sb, mut sbb) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..histories {
        let (mut ones_best, mut ones_i) = (0usize, 0usize);
        let (mut a_sum, mut b_sum) = (0.0, 1.0);
        for row in &table {
            a_sum += inverse_term(row[ones_best], n);
            if row[ones_i] > cutoff {
                b_sum += 1.0;
            }
            ones_best += bernoulli(p1, rng) as usize;
            ones_i += bernoulli(pi, rng) as usize;
        }
        sa += a_sum;
        saa += a_sum * a_sum;
        sb += b_sum;
        sbb += b_sum * b_sum;
    }
    let h = histories as f64;
    let stderr = |s: f64, ss: f64| ((ss / h - (s / h).powi(2)).max(0.0) * h / (h - 1.0) / h).sqrt();
    Ok(MonteCarloTerms {
        a_i: sa / h,
        a_i_stderr: stderr(sa, saa),
        b_i: sb / h,
        b_i_stderr: stderr(sb, sbb),
        histories,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::split_seed;

    fn q(s: u64, v: u64, a: u32, tau: f64) -> f64 {
        optimism_tail_q(OptimismQuery { s, v, a, tau }).unwrap()
    }

    #[test]
    fn boundary_values() {
        assert_eq!(q(0, 0, 1, 0.7), 1.0);
        assert_eq!(q(4, 6, 1, 0.0), 1.0);
        assert_eq!(q(4, 6, 1, 1.01), 0.0);
    }

    #[test]
    fn half_threshold_example() {
        assert!((q(2, 3, 1, 0.5) - 21.0 / 32.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_invalid_v() {
        assert!(optimism_tail_q(OptimismQuery {
            s: 2,
            v: 1,
            a: 1,
            tau: 0.5
        })
        .is_err());
        assert!(optimism_tail_q(OptimismQuery {
            s: 2,
            v: 5,
            a: 1,
            tau: 0.5
        })
        .is_err());
    }

    #[test]
    fn monotone_in_v_and_tau() {
        for a in 1..=2u32 {
            for s in 1..=8u64 {
                let lo = a as u64 * s;
                for v in lo..(lo + s) {
                    for k in 0..20 {
                        let tau = k as f64 / 20.0;
                        assert!(q(s, v + 1, a, tau) >= q(s, v, a, tau) - 1e-15);
                        assert!(q(s, v, a, tau + 0.05) <= q(s, v, a, tau) + 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn single_round() {
        let t = theorem1_terms(1, 0.9, 0.1, 1).unwrap();
        assert_eq!(t.a_i, 0.0);
        assert_eq!(t.b_i, 1.0);
    }

    #[test]
    fn exact_agrees_with_monte_carlo() {
        let exact = theorem1_terms(20, 0.9, 0.1, 1).unwrap();
        let mut rng = split_seed(12, 0, 0);
        let mc = theorem1_terms_monte_carlo(20, 0.9, 0.1, 1, 1_000_000, &mut rng).unwrap();
        assert!(
            (exact.a_i - mc.a_i).abs() <= 3.0 * mc.a_i_stderr + 1e-12,
            "a_i exact {} mc {} ± {}",
            exact.a_i,
            mc.a_i,
            mc.a_i_stderr
        );
        assert!(
            (exact.b_i - mc.b_i).abs() <= 3.0 * mc.b_i_stderr + 1e-12,
            "b_i exact {} mc {} ± {}",
            exact.b_i,
            mc.b_i,
            mc.b_i_stderr
        );
    }

    #[test]
    fn b_term_shrinks_with_gap() {
        for a in 1..=2u32 {
            let mut prev = f64::INFINITY;
            for k in 0..=8 {
                let pi = 0.8 - 0.1 * k as f64;
                let b = theorem1_terms(40, 0.9, pi, a).unwrap().b_i;
                assert!(b <= prev + 1e-12, "a={a} pi={pi}: {b} > {prev}");
                prev = b;
            }
        }
    }

    #[test]
    fn size_cap() {
        assert!(matches!(
            theorem1_terms(10_000, 0.9, 0.1, 1),
            Err(Error::TooLarge(_))
        ));
    }
}
