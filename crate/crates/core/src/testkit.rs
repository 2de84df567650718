//! Independent oracles shared by unit tests.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// `C(n, k) p^k (1-p)^(n-k)` by direct products, no log domain.
pub fn binomial_pmf_exact(n: u64, k: u64, p: f64) -> f64 {
    let mut c = 1.0f64;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Pearson chi-square p-value. Cells with expected count below 5 are pooled
/// into their neighbours, scanning from the left.
pub fn chi_square_p_value(observed: &[u64], expected: &[f64]) -> f64 {
    let mut obs = Vec::new();
    let mut exp = Vec::new();
    let (mut o_acc, mut e_acc) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        o_acc += o as f64;
        e_acc += e;
        if e_acc >= 5.0 {
            obs.push(o_acc);
            exp.push(e_acc);
            o_acc = 0.0;
            e_acc = 0.0;
        }
    }
    if e_acc > 0.0 || o_acc > 0.0 {
        if let (Some(lo), Some(le)) = (obs.last_mut(), exp.last_mut()) {
            *lo += o_acc;
            *le += e_acc;
        } else {
            obs.push(o_acc);
            exp.push(e_acc);
        }
    }
    if obs.len() < 2 {
        return 1.0;
    }
    let stat: f64 = obs
        .iter()
        .zip(&exp)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = (obs.len() - 1) as f64;
    1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
}

/// Mean and unbiased variance.
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}
