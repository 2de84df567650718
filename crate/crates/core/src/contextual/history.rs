use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::sampling::uniform_index;

/// Observed `(context, reward)` pairs of one arm.
///
/// Pseudo rewards are virtual: after `s` pulls the augmented history has
/// length `(2a + 1) s`, positions `0..s` are the observations and position
/// `s + 2 a j + 2 l + {0, 1}` is the `l`-th pseudo 0 / pseudo 1 attached to
/// observation `j`, sharing its context.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextHistory {
    dim: usize,
    contexts: Vec<f64>,
    rewards: Vec<f64>,
}

impl ContextHistory {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            contexts: Vec::new(),
            rewards: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rewards.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rewards.is_empty()
    }

    pub fn push(&mut self, context: &[f64], reward: f64) -> Result<()> {
        if context.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "context has dimension {}, expected {}",
                context.len(),
                self.dim
            )));
        }
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::InvalidArgument(format!(
                "reward {reward} outside [0, 1]"
            )));
        }
        self.contexts.extend_from_slice(context);
        self.rewards.push(reward);
        Ok(())
    }

    pub fn context(&self, j: usize) -> &[f64] {
        &self.contexts[j * self.dim..(j + 1) * self.dim]
    }

    pub fn reward(&self, j: usize) -> f64 {
        self.rewards[j]
    }

    pub fn augmented_len(&self, a: u32) -> usize {
        (2 * a as usize + 1) * self.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Observed,
    PseudoZero,
    PseudoOne,
}

/// One draw from the augmented history: which observation it comes from and
/// whether it is the observation itself or one of its pseudo rewards.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleEntry {
    pub source: usize,
    pub kind: EntryKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapSample {
    pub entries: Vec<SampleEntry>,
}

fn locate(position: usize, observed: usize, a: u32) -> SampleEntry {
    if position < observed {
        return SampleEntry {
            source: position,
            kind: EntryKind::Observed,
        };
    }
    let r = position - observed;
    let kind = if r.is_multiple_of(2) {
        EntryKind::PseudoZero
    } else {
        EntryKind::PseudoOne
    };
    SampleEntry {
        source: r / (2 * a as usize),
        kind,
    }
}

impl BootstrapSample {
    /// `(2a + 1) s` draws with replacement from the augmented history.
    pub fn draw(history: &ContextHistory, a: u32, rng: &mut RngStream) -> Self {
        let size = history.augmented_len(a);
        let entries = (0..size)
            .map(|_| locate(uniform_index(size, rng), history.len(), a))
            .collect();
        Self { entries }
    }

    /// The augmented history itself, each entry once.
    pub fn identity(history: &ContextHistory, a: u32) -> Self {
        let size = history.augmented_len(a);
        Self {
            entries: (0..size).map(|p| locate(p, history.len(), a)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn reward_of(&self, entry: &SampleEntry, history: &ContextHistory) -> f64 {
        match entry.kind {
            EntryKind::Observed => history.reward(entry.source),
            EntryKind::PseudoZero => 0.0,
            EntryKind::PseudoOne => 1.0,
        }
    }

    /// Collapses the sample onto the distinct observed contexts.
    pub fn weighted(&self, history: &ContextHistory) -> WeightedData {
        let s = history.len();
        let mut weight = vec![0.0; s];
        let mut target = vec![0.0; s];
        for e in &self.entries {
            weight[e.source] += 1.0;
            target[e.source] += self.reward_of(e, history);
        }
        let mut data = WeightedData::new(history.dim());
        for j in 0..s {
            if weight[j] > 0.0 {
                data.push(history.context(j), weight[j], target[j] / weight[j]);
            }
        }
        data
    }
}

/// Design rows with multiplicities and mean targets. A least-squares or
/// cross-entropy objective over a sample equals the weighted objective over
/// these rows.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedData {
    dim: usize,
    pub(crate) contexts: Vec<f64>,
    pub(crate) weights: Vec<f64>,
    pub(crate) targets: Vec<f64>,
}

impl WeightedData {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            contexts: Vec::new(),
            weights: Vec::new(),
            targets: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn push(&mut self, context: &[f64], weight: f64, target: f64) {
        debug_assert_eq!(context.len(), self.dim);
        self.contexts.extend_from_slice(context);
        self.weights.push(weight);
        self.targets.push(target);
    }

    pub fn context(&self, j: usize) -> &[f64] {
        &self.contexts[j * self.dim..(j + 1) * self.dim]
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Adds `c` to every target.
    pub fn shift_targets(&mut self, c: f64) {
        for t in &mut self.targets {
            *t += c;
        }
    }
}
