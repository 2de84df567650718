//! Contextual environments: a synthetic logistic model and classification
//! datasets turned into bandits.

use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng::{split_seed, RngStream, TAG_SHUFFLE};
use crate::sampling::permutation;

/// What one round shows the learner, plus what only the evaluator sees.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextRound {
    pub context: Vec<f64>,
    /// Realized reward of every arm; the learner only observes the pulled one.
    pub rewards: Vec<f64>,
    /// Expected reward of every arm given the context.
    pub expected: Vec<f64>,
}

impl ContextRound {
    pub fn best_expected(&self) -> f64 {
        self.expected
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean_expected(&self) -> f64 {
        self.expected.iter().sum::<f64>() / self.expected.len() as f64
    }
}

pub trait ContextualEnv: Send + Sync {
    fn dim(&self) -> usize;
    fn arms(&self) -> usize;
    /// Round `t` (1-based). All policies of a run are shown the same rounds.
    fn round(&self, t: u64, rng: &mut RngStream) -> Result<ContextRound>;
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// `x ~ N(0, I_d)` and `Y_i ~ Ber(sigmoid([x, 1]^T theta_i))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticLogisticEnv {
    dim: usize,
    thetas: Vec<Vec<f64>>,
}

impl SyntheticLogisticEnv {
    /// `thetas[i]` has `d + 1` entries, the bias last.
    pub fn new(thetas: Vec<Vec<f64>>) -> Result<Self> {
        let len = thetas.first().map(Vec::len).unwrap_or(0);
        if len < 2
            || thetas
                .iter()
                .any(|t| t.len() != len || t.iter().any(|v| !v.is_finite()))
        {
            return Err(Error::InvalidArgument(
                "arm parameters must be finite vectors of one common length >= 2".into(),
            ));
        }
        Ok(Self {
            dim: len - 1,
            thetas,
        })
    }

    /// Arm parameters with i.i.d. `N(0, scale^2)` entries.
    pub fn random(dim: usize, arms: usize, scale: f64, rng: &mut RngStream) -> Result<Self> {
        let thetas = (0..arms)
            .map(|_| {
                (0..=dim)
                    .map(|_| {
                        let z: f64 = StandardNormal.sample(rng);
                        scale * z
                    })
                    .collect::<Vec<f64>>()
            })
            .collect();
        Self::new(thetas)
    }

    pub fn thetas(&self) -> &[Vec<f64>] {
        &self.thetas
    }

    pub fn expected(&self, x: &[f64]) -> Vec<f64> {
        self.thetas
            .iter()
            .map(|t| {
                let bias = t[self.dim];
                sigmoid(t.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() + bias)
            })
            .collect()
    }
}

impl ContextualEnv for SyntheticLogisticEnv {
    fn dim(&self) -> usize {
        self.dim
    }

    fn arms(&self) -> usize {
        self.thetas.len()
    }

    fn round(&self, _t: u64, rng: &mut RngStream) -> Result<ContextRound> {
        let context: Vec<f64> = (0..self.dim).map(|_| StandardNormal.sample(rng)).collect();
        let expected = self.expected(&context);
        let rewards = expected
            .iter()
            .map(|&p| if rng.random::<f64>() < p { 1.0 } else { 0.0 })
            .collect();
        Ok(ContextRound {
            context,
            rewards,
            expected,
        })
    }
}

/// Rows of a labelled dataset presented in a fixed shuffled order; the
/// reward is 1 exactly when the pulled arm is the row's class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationBanditEnv {
    dim: usize,
    arms: usize,
    features: Vec<f64>,
    labels: Vec<usize>,
    order: Vec<usize>,
}

impl ClassificationBanditEnv {
    /// Standardizes `features` column-wise, remaps labels to `0..K` and
    /// shuffles the presentation order by `shuffle_seed`.
    pub fn from_rows(features: Vec<Vec<f64>>, labels: Vec<u64>, shuffle_seed: u64) -> Result<Self> {
        if features.is_empty() || features.len() != labels.len() {
            return Err(Error::InvalidArgument(
                "need one label per non-empty feature row".into(),
            ));
        }
        let dim = features[0].len();
        if dim == 0 {
            return Err(Error::InvalidArgument(
                "rows need at least one feature".into(),
            ));
        }
        for (i, row) in features.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Load {
                    line: i as u64 + 2,
                    msg: format!("expected {dim} features, found {}", row.len()),
                });
            }
        }
        let lines: Vec<u64> = (0..labels.len() as u64).map(|i| i + 2).collect();
        let (labels, arms) = remap_labels(&labels, &lines)?;
        let flat: Vec<f64> = features.into_iter().flatten().collect();
        Ok(Self::assemble(dim, arms, flat, labels, shuffle_seed))
    }

    fn assemble(
        dim: usize,
        arms: usize,
        mut features: Vec<f64>,
        labels: Vec<usize>,
        seed: u64,
    ) -> Self {
        let rows = labels.len();
        for c in 0..dim {
            let column = || (0..rows).map(|r| features[r * dim + c]);
            let mean = column().sum::<f64>() / rows as f64;
            let var = column().map(|v| (v - mean).powi(2)).sum::<f64>() / rows as f64;
            let sd = var.sqrt();
            let constant = !(sd > 1e-12 * mean.abs().max(1.0));
            for r in 0..rows {
                let v = &mut features[r * dim + c];
                *v = if constant { 0.0 } else { (*v - mean) / sd };
            }
        }
        let order = permutation(rows, &mut split_seed(seed, 0, TAG_SHUFFLE));
        Self {
            dim,
            arms,
            features,
            labels,
            order,
        }
    }

    pub fn rows(&self) -> usize {
        self.labels.len()
    }

    /// Same rows presented in the order drawn from `seed`.
    pub fn reshuffled(&self, seed: u64) -> Self {
        let order = permutation(self.rows(), &mut split_seed(seed, 0, TAG_SHUFFLE));
        Self {
            order,
            ..self.clone()
        }
    }

    /// Standardized features of stored row `r`.
    pub fn row(&self, r: usize) -> &[f64] {
        &self.features[r * self.dim..(r + 1) * self.dim]
    }

    pub fn label(&self, r: usize) -> usize {
        self.labels[r]
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Stored row shown in round `t`; the order repeats after all rows.
    pub fn row_at(&self, t: u64) -> usize {
        self.order[((t.max(1) - 1) % self.order.len() as u64) as usize]
    }

    pub fn reward(&self, row: usize, arm: usize) -> f64 {
        if self.labels[row] == arm {
            1.0
        } else {
            0.0
        }
    }
}

impl ContextualEnv for ClassificationBanditEnv {
    fn dim(&self) -> usize {
        self.dim
    }

    fn arms(&self) -> usize {
        self.arms
    }

    fn round(&self, t: u64, _rng: &mut RngStream) -> Result<ContextRound> {
        let r = self.row_at(t);
        let rewards: Vec<f64> = (0..self.arms).map(|a| self.reward(r, a)).collect();
        Ok(ContextRound {
            context: self.row(r).to_vec(),
            expected: rewards.clone(),
            rewards,
        })
    }
}

/// Maps labels `min..=max` to `0..K`; a label value that never occurs is an
/// error reported at the first row whose label lies above it.
fn remap_labels(labels: &[u64], lines: &[u64]) -> Result<(Vec<usize>, usize)> {
    let min = *labels.iter().min().unwrap_or(&0);
    let max = *labels.iter().max().unwrap_or(&0);
    let span = usize::try_from(max - min)
        .ok()
        .filter(|&s| s < labels.len())
        .ok_or_else(|| {
            let i = labels.iter().position(|&l| l == max).unwrap_or(0);
            Error::Load {
                line: lines[i],
                msg: format!("label {max} leaves classes unused"),
            }
        })?;
    let mut seen = vec![false; span + 1];
    for &l in labels {
        seen[(l - min) as usize] = true;
    }
    if let Some(gap) = seen.iter().position(|s| !s) {
        let missing = min + gap as u64;
        let i = labels.iter().position(|&l| l > missing).unwrap_or(0);
        return Err(Error::Load {
            line: lines[i],
            msg: format!("label {} found but label {missing} never occurs", labels[i]),
        });
    }
    Ok((
        labels.iter().map(|&l| (l - min) as usize).collect(),
        span + 1,
    ))
}

/// Reads a `f1,...,fd,label` CSV file into a [`ClassificationBanditEnv`].
pub fn load_classification_env(
    path: impl AsRef<Path>,
    shuffle_seed: u64,
) -> Result<ClassificationBanditEnv> {
    let file = std::fs::File::open(path.as_ref())?;
    read_classification_env(file, shuffle_seed)
}

pub fn read_classification_env<R: std::io::Read>(
    reader: R,
    shuffle_seed: u64,
) -> Result<ClassificationBanditEnv> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header = csv
        .headers()
        .map_err(|e| Error::Load {
            line: 1,
            msg: e.to_string(),
        })?
        .clone();
    let columns = header.len();
    if columns < 2 || header.get(columns - 1).map(str::trim) != Some("label") {
        return Err(Error::Load {
            line: 1,
            msg: "header must be f1,...,fd,label".into(),
        });
    }
    let dim = columns - 1;
    let mut features = Vec::new();
    let mut labels = Vec::new();
    let mut lines = Vec::new();
    for record in csv.records() {
        let record = record.map_err(|e| Error::Load {
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != columns {
            return Err(Error::Load {
                line,
                msg: format!("expected {columns} fields, found {}", record.len()),
            });
        }
        for (c, field) in record.iter().take(dim).enumerate() {
            let v: f64 = field.trim().parse().map_err(|_| Error::Load {
                line,
                msg: format!("feature f{} is not a number: {field:?}", c + 1),
            })?;
            if !v.is_finite() {
                return Err(Error::Load {
                    line,
                    msg: format!("feature f{} is not finite", c + 1),
                });
            }
            features.push(v);
        }
        let field = &record[dim];
        let label: u64 = field.trim().parse().map_err(|_| Error::Load {
            line,
            msg: format!("label is not a non-negative integer: {field:?}"),
        })?;
        labels.push(label);
        lines.push(line);
    }
    if labels.is_empty() {
        return Err(Error::Load {
            line: 2,
            msg: "no data rows".into(),
        });
    }
    let (labels, arms) = remap_labels(&labels, &lines)?;
    Ok(ClassificationBanditEnv::assemble(
        dim,
        arms,
        features,
        labels,
        shuffle_seed,
    ))
}
