//! Bootstrap exploration with pseudo rewards for stochastic bandits.
//!
//! An arm's value is the mean of a with-replacement resample of its reward
//! history, after `a` pseudo rewards of 0 and of 1 were added per observed
//! reward. The pseudo rewards make the resampled mean optimistic often enough
//! to explore, while the history still pins down the order of the arms.
//!
//! Modules:
//! - [`rng`], [`sampling`], [`env`], [`regret`]: environments, seeded random
//!   streams, exact samplers and pseudo-regret accounting.
//! - [`policies`]: the bootstrap policy and the UCB1, KL-UCB, Thompson
//!   sampling and epsilon-greedy baselines.
//! - [`contextual`]: the contextual variant with linear and logistic reward
//!   models, LinUCB, LinTS and classification datasets as bandits.
//! - [`analysis`]: exact optimism tails and checks of the regret bounds.
//! - [`harness`]: experiment configs, seeded multi-run simulation and CSV
//!   output.

// `!(x >= 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod contextual;
pub mod env;
pub mod error;
pub mod exec;
pub mod format;
pub mod harness;
pub mod policies;
pub mod regret;
pub mod rng;
pub mod sampling;

#[cfg(test)]
mod testkit;

pub use env::{BanditInstance, Family};
pub use error::{Error, Result};
pub use exec::Execution;
pub use rng::{split_seed, RngStream};
