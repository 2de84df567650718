//! Per-round mean and standard error across runs, and CSV output.

use std::io::Write;

use crate::error::{Error, Result};
use crate::format::sig9;

/// Sample mean and standard error of the mean (0 for a single value).
///
/// Values are summed in sorted order, so the result does not depend on the
/// order of `xs`.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    if sorted.len() < 2 {
        return (mean, 0.0);
    }
    let mut dev: Vec<f64> = sorted.iter().map(|x| (x - mean) * (x - mean)).collect();
    dev.sort_by(f64::total_cmp);
    let var = dev.iter().sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub policies: Vec<String>,
    pub runs: usize,
    /// `mean[policy][round - 1]`.
    pub mean: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
}

impl AggregateCurve {
    pub fn rounds(&self) -> usize {
        self.mean.first().map_or(0, Vec::len)
    }
}

/// Aggregates curves indexed `[run][policy][round - 1]`.
pub fn aggregate(policies: &[String], curves: &[Vec<Vec<f64>>]) -> Result<AggregateCurve> {
    if curves.is_empty() {
        return Err(Error::Inconsistent("no runs to aggregate".into()));
    }
    let rounds = curves[0].first().map_or(0, Vec::len);
    for (r, run) in curves.iter().enumerate() {
        if run.len() != policies.len() {
            return Err(Error::Inconsistent(format!(
                "run {r} has {} policies, expected {}",
                run.len(),
                policies.len()
            )));
        }
        if let Some(p) = run.iter().position(|c| c.len() != rounds) {
            return Err(Error::Inconsistent(format!(
                "run {r}, policy {} has {} rounds, expected {rounds}",
                policies[p],
                run[p].len()
            )));
        }
    }
    let mut mean = vec![vec![0.0; rounds]; policies.len()];
    let mut stderr = vec![vec![0.0; rounds]; policies.len()];
    let mut column = vec![0.0; curves.len()];
    for p in 0..policies.len() {
        for t in 0..rounds {
            for (slot, run) in column.iter_mut().zip(curves) {
                *slot = run[p][t];
            }
            let (m, s) = mean_stderr(&column);
            mean[p][t] = m;
            stderr[p][t] = s;
        }
    }
    Ok(AggregateCurve {
        policies: policies.to_vec(),
        runs: curves.len(),
        mean,
        stderr,
    })
}

/// Writes `round,policy,mean,stderr`, round-major, policies in list order.
pub fn emit_csv<W: Write>(curve: &AggregateCurve, writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(["round", "policy", "mean", "stderr"])?;
    for t in 0..curve.rounds() {
        let round = (t + 1).to_string();
        for (p, name) in curve.policies.iter().enumerate() {
            w.write_record([
                round.as_str(),
                name.as_str(),
                &sig9(curve.mean[p][t]),
                &sig9(curve.stderr[p][t]),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
