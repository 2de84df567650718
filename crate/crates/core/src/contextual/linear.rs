//! LinUCB and LinTS on a per-arm ridge design with an identity prior.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};

use super::giro::check_dim;
use super::ContextualPolicy;
use crate::error::{Error, Result};
use crate::policies::{select_arm, TieRule};
use crate::rng::RngStream;

pub const LINUCB_ALPHA: f64 = 1.0;
pub const LINTS_SCALE: f64 = 1.0;

/// `A = I + sum z z^T` and `b = sum y z` over bias-augmented contexts `z`.
/// `A^{-1}` is kept up to date by Sherman-Morrison.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearDesign {
    a_inv: DMatrix<f64>,
    b: DVector<f64>,
    pulls: u64,
}

fn augment(x: &[f64]) -> DVector<f64> {
    DVector::from_iterator(x.len() + 1, x.iter().copied().chain(std::iter::once(1.0)))
}

impl LinearDesign {
    pub fn new(dim: usize) -> Self {
        Self {
            a_inv: DMatrix::identity(dim + 1, dim + 1),
            b: DVector::zeros(dim + 1),
            pulls: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.b.len() - 1
    }

    pub fn pulls(&self) -> u64 {
        self.pulls
    }

    pub fn update(&mut self, x: &[f64], reward: f64) -> Result<()> {
        check_dim(self.dim(), x)?;
        let z = augment(x);
        let az = &self.a_inv * &z;
        let denom = 1.0 + z.dot(&az);
        self.a_inv.ger(-1.0 / denom, &az, &az, 1.0);
        self.b.axpy(reward, &z, 1.0);
        self.pulls += 1;
        Ok(())
    }

    /// Ridge estimate `A^{-1} b`.
    pub fn theta(&self) -> DVector<f64> {
        &self.a_inv * &self.b
    }

    pub fn a_inv(&self) -> &DMatrix<f64> {
        &self.a_inv
    }

    /// `sqrt(z^T A^{-1} z)`.
    pub fn width(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x)?;
        let z = augment(x);
        Ok(z.dot(&(&self.a_inv * &z)).max(0.0).sqrt())
    }

    pub fn mean(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x)?;
        Ok(augment(x).dot(&self.theta()))
    }
}

/// Ridge mean plus `alpha * sqrt(z^T A^{-1} z)`.
pub fn linucb_value(design: &LinearDesign, x: &[f64], alpha: f64) -> Result<f64> {
    Ok(design.mean(x)? + alpha * design.width(x)?)
}

/// `z^T theta~` with `theta~ ~ N(A^{-1} b, scale^2 A^{-1})`.
pub fn lints_value(
    design: &LinearDesign,
    x: &[f64],
    scale: f64,
    rng: &mut RngStream,
) -> Result<f64> {
    check_dim(design.dim(), x)?;
    let n = design.dim() + 1;
    let sym = (design.a_inv.clone() + design.a_inv.transpose()) * 0.5;
    let chol = sym
        .cholesky()
        .ok_or_else(|| Error::Domain("design inverse is not positive definite".into()))?;
    let eps = DVector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(rng)));
    let theta = design.theta() + chol.l() * eps * scale;
    Ok(augment(x).dot(&theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Index {
    Ucb,
    Ts,
}

#[derive(Debug, Clone)]
pub struct LinearBandit {
    name: String,
    index: Index,
    param: f64,
    tie: TieRule,
    designs: Vec<LinearDesign>,
    values: Vec<f64>,
}

impl LinearBandit {
    fn build(
        name: String,
        index: Index,
        arms: usize,
        dim: usize,
        param: f64,
        tie: TieRule,
    ) -> Result<Self> {
        if arms == 0 || dim == 0 {
            return Err(Error::InvalidArgument(
                "linear bandit needs arms and features".into(),
            ));
        }
        if !(param.is_finite() && param >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "multiplier {param} must be >= 0"
            )));
        }
        Ok(Self {
            name,
            index,
            param,
            tie,
            designs: vec![LinearDesign::new(dim); arms],
            values: vec![0.0; arms],
        })
    }

    pub fn linucb(
        name: impl Into<String>,
        arms: usize,
        dim: usize,
        alpha: f64,
        tie: TieRule,
    ) -> Result<Self> {
        Self::build(name.into(), Index::Ucb, arms, dim, alpha, tie)
    }

    pub fn lints(
        name: impl Into<String>,
        arms: usize,
        dim: usize,
        scale: f64,
        tie: TieRule,
    ) -> Result<Self> {
        Self::build(name.into(), Index::Ts, arms, dim, scale, tie)
    }

    pub fn designs(&self) -> &[LinearDesign] {
        &self.designs
    }
}

impl ContextualPolicy for LinearBandit {
    fn name(&self) -> &str {
        &self.name
    }

    fn arms(&self) -> usize {
        self.designs.len()
    }

    fn select(&mut self, _t: u64, x: &[f64], rng: &mut RngStream) -> Result<usize> {
        for (v, d) in self.values.iter_mut().zip(&self.designs) {
            *v = match self.index {
                Index::Ucb => linucb_value(d, x, self.param)?,
                Index::Ts => lints_value(d, x, self.param, rng)?,
            };
        }
        Ok(select_arm(&self.values, self.tie, rng))
    }

    fn update(&mut self, arm: usize, x: &[f64], reward: f64, _rng: &mut RngStream) -> Result<()> {
        let arms = self.designs.len();
        self.designs
            .get_mut(arm)
            .ok_or(Error::ArmOutOfRange { arm, arms })?
            .update(x, reward)
    }
}
