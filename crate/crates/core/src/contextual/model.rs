//! Per-arm reward models fitted to (weighted) bootstrap samples.

use nalgebra::{DMatrix, DVector};

use super::history::WeightedData;
use crate::error::{Error, Result};

/// Ridge on the feature coefficients; the bias is never penalized, so a
/// constant shift of all targets shifts linear predictions exactly.
pub const RIDGE: f64 = 1e-6;
/// Whole-vector ridge used when the normal equations are not positive definite.
pub const FALLBACK_RIDGE: f64 = 1e-3;
/// Logistic fits stop once the mean log-loss changes by less than this.
pub const LOGISTIC_TOL: f64 = 1e-3;
pub const LOGISTIC_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Linear,
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitMeta {
    pub iterations: usize,
    pub objective_delta: f64,
    /// The fit needed the fallback ridge or kept a previous solution.
    pub fallback: bool,
}

/// `theta` has `d + 1` entries; the last one multiplies the appended bias.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardModel {
    pub kind: ModelKind,
    pub theta: DVector<f64>,
    pub fit_meta: FitMeta,
}

fn with_bias(context: &[f64]) -> DVector<f64> {
    DVector::from_iterator(
        context.len() + 1,
        context.iter().copied().chain(std::iter::once(1.0)),
    )
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

impl RewardModel {
    pub fn zeros(kind: ModelKind, dim: usize) -> Self {
        Self {
            kind,
            theta: DVector::zeros(dim + 1),
            fit_meta: FitMeta::default(),
        }
    }

    pub fn dim(&self) -> usize {
        self.theta.len() - 1
    }

    /// `[x, 1]^T theta`.
    pub fn score(&self, context: &[f64]) -> f64 {
        self.theta
            .iter()
            .zip(context.iter().chain(std::iter::once(&1.0)))
            .map(|(t, x)| t * x)
            .sum()
    }

    /// Model output before clamping (the linear score, or the logistic mean).
    pub fn predict_raw(&self, context: &[f64]) -> f64 {
        let score = self.score(context);
        match self.kind {
            ModelKind::Linear => score,
            ModelKind::Logistic => sigmoid(score),
        }
    }

    /// Prediction clamped to `[0, 1]`.
    pub fn predict(&self, context: &[f64]) -> f64 {
        self.predict_raw(context).clamp(0.0, 1.0)
    }
}

/// Fits a model of `kind` to `data`, warm-starting logistic fits.
pub fn fit_reward_model(
    data: &WeightedData,
    kind: ModelKind,
    warm_start: Option<&RewardModel>,
) -> Result<RewardModel> {
    if data.is_empty() || data.total_weight() <= 0.0 {
        return Err(Error::InvalidArgument(
            "cannot fit a reward model to an empty sample".into(),
        ));
    }
    match kind {
        ModelKind::Linear => Ok(fit_linear(data)),
        ModelKind::Logistic => {
            let start = warm_start
                .filter(|m| m.kind == ModelKind::Logistic && m.dim() == data.dim())
                .map(|m| m.theta.clone())
                .unwrap_or_else(|| DVector::zeros(data.dim() + 1));
            Ok(fit_logistic(data, start))
        }
    }
}

fn penalty(dim: usize, lambda: f64) -> DMatrix<f64> {
    let mut d = DMatrix::identity(dim + 1, dim + 1) * lambda;
    d[(dim, dim)] = 0.0;
    d
}

fn solve_spd(mut a: DMatrix<f64>, b: &DVector<f64>) -> (DVector<f64>, bool) {
    if let Some(chol) = a.clone().cholesky() {
        let x = chol.solve(b);
        if x.iter().all(|v| v.is_finite()) {
            return (x, false);
        }
    }
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)] += FALLBACK_RIDGE;
    }
    let x = a
        .cholesky()
        .map(|c| c.solve(b))
        .unwrap_or_else(|| DVector::zeros(n));
    (x, true)
}

fn fit_linear(data: &WeightedData) -> RewardModel {
    let dim = data.dim();
    let mut gram = penalty(dim, RIDGE);
    let mut rhs = DVector::zeros(dim + 1);
    for j in 0..data.len() {
        let x = with_bias(data.context(j));
        let w = data.weights[j];
        gram.ger(w, &x, &x, 1.0);
        rhs.axpy(w * data.targets[j], &x, 1.0);
    }
    let (theta, fallback) = solve_spd(gram, &rhs);
    RewardModel {
        kind: ModelKind::Linear,
        theta,
        fit_meta: FitMeta {
            iterations: 1,
            objective_delta: 0.0,
            fallback,
        },
    }
}

fn logistic_objective(data: &WeightedData, theta: &DVector<f64>, total: f64) -> f64 {
    let mut loss = 0.0;
    for j in 0..data.len() {
        let z = with_bias(data.context(j)).dot(theta);
        let y = data.targets[j];
        // -(y ln s(z) + (1 - y) ln(1 - s(z))) = softplus(z) - y z
        loss += data.weights[j] * (softplus(z) - y * z);
    }
    let dim = theta.len() - 1;
    let ridge: f64 = theta.rows(0, dim).iter().map(|t| t * t).sum::<f64>() * 0.5 * RIDGE;
    loss / total + ridge
}

/// Damped Newton iterations on the mean weighted log-loss.
fn fit_logistic(data: &WeightedData, start: DVector<f64>) -> RewardModel {
    let dim = data.dim();
    let total = data.total_weight();
    let mut theta = start;
    let mut objective = logistic_objective(data, &theta, total);
    let mut meta = FitMeta {
        iterations: 0,
        objective_delta: f64::INFINITY,
        fallback: false,
    };
    while meta.iterations < LOGISTIC_MAX_ITER {
        meta.iterations += 1;
        let mut grad = DVector::zeros(dim + 1);
        let mut hess = penalty(dim, RIDGE);
        for j in 0..data.len() {
            let x = with_bias(data.context(j));
            let mu = sigmoid(x.dot(&theta));
            let w = data.weights[j] / total;
            grad.axpy(w * (mu - data.targets[j]), &x, 1.0);
            hess.ger(w * mu * (1.0 - mu), &x, &x, 1.0);
        }
        for i in 0..dim {
            grad[i] += RIDGE * theta[i];
        }
        let (step, fallback) = solve_spd(hess, &grad);
        meta.fallback |= fallback;

        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..40 {
            let candidate = &theta - &step * scale;
            let value = logistic_objective(data, &candidate, total);
            if value.is_finite() && value <= objective && candidate.iter().all(|v| v.is_finite()) {
                accepted = Some((candidate, value));
                break;
            }
            scale *= 0.5;
        }
        let Some((candidate, value)) = accepted else {
            meta.objective_delta = 0.0;
            break;
        };
        meta.objective_delta = objective - value;
        theta = candidate;
        objective = value;
        if meta.objective_delta < LOGISTIC_TOL {
            break;
        }
    }
    RewardModel {
        kind: ModelKind::Logistic,
        theta,
        fit_meta: meta,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::split_seed;
    use rand::Rng;

    #[test]
    fn constant_context_linear_fit() {
        let mut data = WeightedData::new(2);
        for &(w, y) in &[(2.0, 1.0), (1.0, 0.0), (3.0, 0.5)] {
            data.push(&[0.3, -1.2], w, y);
        }
        let m = fit_reward_model(&data, ModelKind::Linear, None).unwrap();
        let mean = (2.0 * 1.0 + 0.0 + 3.0 * 0.5) / 6.0;
        assert!((m.predict_raw(&[0.3, -1.2]) - mean).abs() < 1e-4);
    }

    #[test]
    fn single_point_interpolated() {
        let mut data = WeightedData::new(3);
        data.push(&[0.2, 0.4, -0.1], 1.0, 1.0);
        let m = fit_reward_model(&data, ModelKind::Linear, None).unwrap();
        assert!((m.predict(&[0.2, 0.4, -0.1]) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn noiseless_linear_recovery() {
        let theta = [0.3, -0.2, 0.1, 0.25];
        let mut rng = split_seed(4, 0, 0);
        let mut data = WeightedData::new(3);
        for _ in 0..200 {
            let x: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
            let y = theta[0] * x[0] + theta[1] * x[1] + theta[2] * x[2] + theta[3];
            data.push(&x, 1.0, y);
        }
        let m = fit_reward_model(&data, ModelKind::Linear, None).unwrap();
        for (fit, truth) in m.theta.iter().zip(theta) {
            assert!((fit - truth).abs() / truth.abs() < 1e-4, "{fit} vs {truth}");
        }
    }

    #[test]
    fn bias_shift_is_exact() {
        let mut rng = split_seed(4, 1, 0);
        let mut data = WeightedData::new(4);
        for _ in 0..50 {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            data.push(&x, rng.random_range(1..4) as f64, rng.random::<f64>());
        }
        let base = fit_reward_model(&data, ModelKind::Linear, None).unwrap();
        let mut shifted = data.clone();
        shifted.shift_targets(0.37);
        let moved = fit_reward_model(&shifted, ModelKind::Linear, None).unwrap();
        for _ in 0..20 {
            let x: Vec<f64> = (0..4).map(|_| rng.random_range(-2.0..2.0)).collect();
            assert!((moved.predict_raw(&x) - base.predict_raw(&x) - 0.37).abs() < 1e-9);
        }
    }

    #[test]
    fn separable_logistic_terminates_finite() {
        let mut data = WeightedData::new(1);
        for i in 0..20 {
            let x = i as f64 / 10.0 - 1.0;
            data.push(&[x], 1.0, if x > 0.0 { 1.0 } else { 0.0 });
        }
        let m = fit_reward_model(&data, ModelKind::Logistic, None).unwrap();
        assert!(m.fit_meta.iterations <= LOGISTIC_MAX_ITER);
        assert!(m.theta.iter().all(|t| t.is_finite()));
        for i in 0..20 {
            let x = [i as f64 / 10.0 - 1.0];
            // a finite log-odds is a probability strictly inside (0, 1);
            // far from the boundary f64 rounds it to an endpoint
            assert!(m.score(&x).is_finite());
            assert!((0.0..=1.0).contains(&m.predict_raw(&x)));
        }
        for x in [0.0, 0.1] {
            let p = m.predict_raw(&[x]);
            assert!(p > 0.0 && p < 1.0, "{p}");
        }
        assert!(m.theta[0] > 0.0);
    }

    #[test]
    fn logistic_recovers_sign_and_scale() {
        let mut rng = split_seed(4, 2, 0);
        let mut data = WeightedData::new(2);
        for _ in 0..4000 {
            let x = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            let p = sigmoid(1.5 * x[0] - 1.0 * x[1] + 0.2);
            data.push(&x, 1.0, if rng.random::<f64>() < p { 1.0 } else { 0.0 });
        }
        let m = fit_reward_model(&data, ModelKind::Logistic, None).unwrap();
        assert!((m.theta[0] - 1.5).abs() < 0.25, "{}", m.theta);
        assert!((m.theta[1] + 1.0).abs() < 0.25, "{}", m.theta);
        // warm start from the solution converges in one step
        let again = fit_reward_model(&data, ModelKind::Logistic, Some(&m)).unwrap();
        assert_eq!(again.fit_meta.iterations, 1);
    }

    #[test]
    fn empty_sample_rejected() {
        let data = WeightedData::new(2);
        assert!(fit_reward_model(&data, ModelKind::Linear, None).is_err());
    }
}
