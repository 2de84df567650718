//! Grid verification of the optimism bounds.

use std::io::Write;

use super::binom::{binom_pmf, floor_tol};
use super::bounds::{
    bootstrap_tail, bootstrap_tail_lb, lemma3_check, stirling_binom_lb, w_bound_thm3, w_exact,
    BoundReport,
};
use super::kl::kl_bernoulli;
use crate::error::Result;
use crate::exec::{map_indexed, Execution};
use crate::format::sig9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    /// A few seconds: `n <= 10`, three values of `p`, `a in {1, 2}`.
    Small,
    /// `n <= 40` (60 for the pmf bound), `p in {0.1, ..., 0.9}`, `a in {1, 2, 3}`.
    Full,
}

impl Grid {
    fn probabilities(self) -> Vec<f64> {
        match self {
            Grid::Small => vec![0.1, 0.5, 0.9],
            Grid::Full => (1..=9).map(|k| k as f64 / 10.0).collect(),
        }
    }

    fn pseudo_rates(self) -> Vec<u32> {
        match self {
            Grid::Small => vec![1, 2],
            Grid::Full => vec![1, 2, 3],
        }
    }

    fn max_n(self) -> u64 {
        match self {
            Grid::Small => 10,
            Grid::Full => 40,
        }
    }

    fn max_n_pmf(self) -> u64 {
        match self {
            Grid::Small => 12,
            Grid::Full => 60,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Job {
    /// Optimism bound, peeling bound and tail lower bound at one `(n, p, a)`.
    Bootstrap { n: u64, p: f64, a: u32 },
    /// Stirling pmf bound at one `(n, p)`.
    Pmf { n: u64, p: f64 },
    /// Quadratic KL bound at one `p1` against every grid `p2`.
    Kl { p1: f64 },
}

fn bootstrap_reports(n: u64, p: f64, a: u32) -> Result<Vec<BoundReport>> {
    let af = a as f64;
    let mut out = Vec::new();
    let w = w_exact(n, p, a)?;
    out.push(BoundReport::new("optimism", n, p, af, w, w_bound_thm3(af)?));

    let inverse_tail = |x: f64| {
        let a64 = a as u64;
        let m = (2 * a64 + 1) * n;
        let start = super::binom::ceil_tol((af + p) * n as f64) as u64;
        1.0 / super::binom::binom_tail_upper(m, (af * n as f64 + x) / m as f64, start)
    };
    let mut lemma3 = lemma3_check(n, p, inverse_tail)?;
    lemma3.a = af;
    out.push(lemma3);

    for x in 0..=floor_tol(p * n as f64) as u64 {
        let lb = bootstrap_tail_lb(x as f64, n, p, af)?;
        out.push(BoundReport::new(
            format!("bootstrap_tail:x={x}"),
            n,
            p,
            af,
            lb,
            bootstrap_tail(n, p, a, x),
        ));
    }
    Ok(out)
}

fn pmf_reports(n: u64, p: f64) -> Result<Vec<BoundReport>> {
    (1..n)
        .map(|x| {
            let lb = stirling_binom_lb(x, n, p)?;
            Ok(BoundReport::new(
                format!("binom_pmf_lb:x={x}"),
                n,
                p,
                f64::NAN,
                lb,
                binom_pmf(x, n, p),
            ))
        })
        .collect()
}

fn kl_reports(p1: f64) -> Vec<BoundReport> {
    (1..20)
        .map(|j| {
            let p2 = j as f64 / 20.0;
            let rhs = (p1 - p2).powi(2) / (p2 * (1.0 - p2));
            BoundReport::new(
                format!("kl_quadratic:p1={}", sig9(p1)),
                0,
                p2,
                f64::NAN,
                kl_bernoulli(p1, p2),
                rhs,
            )
        })
        .collect()
}

/// Evaluates every inequality on `grid`; rows come back in a fixed order.
pub fn verify_bounds(grid: Grid, exec: Execution) -> Result<Vec<BoundReport>> {
    let mut jobs = Vec::new();
    for &a in &grid.pseudo_rates() {
        for &p in &grid.probabilities() {
            for n in 1..=grid.max_n() {
                jobs.push(Job::Bootstrap { n, p, a });
            }
        }
    }
    for &p in &grid.probabilities() {
        for n in 2..=grid.max_n_pmf() {
            jobs.push(Job::Pmf { n, p });
        }
    }
    for i in 0..=20 {
        jobs.push(Job::Kl {
            p1: i as f64 / 20.0,
        });
    }

    let results = map_indexed(jobs.len(), exec, |i| match jobs[i] {
        Job::Bootstrap { n, p, a } => bootstrap_reports(n, p, a),
        Job::Pmf { n, p } => pmf_reports(n, p),
        Job::Kl { p1 } => Ok(kl_reports(p1)),
    });
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    Ok(reports)
}

/// Writes `check,n,p,a,lhs,rhs,slack,pass`.
pub fn write_bound_csv<W: Write>(reports: &[BoundReport], mut out: W) -> std::io::Result<()> {
    writeln!(out, "check,n,p,a,lhs,rhs,slack,pass")?;
    for r in reports {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.check,
            r.n,
            sig9(r.p),
            sig9(r.a),
            sig9(r.lhs),
            sig9(r.rhs),
            sig9(r.slack),
            r.pass()
        )?;
    }
    out.flush()
}
