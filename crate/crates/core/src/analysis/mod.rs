//! Exact evaluation of the quantities in the regret analysis: optimism tail
//! probabilities, the two regret terms, the closed-form constants and the
//! binomial inequalities used to bound them.

mod binom;
mod bounds;
mod kl;
mod optimism;
mod verify;

pub use binom::{
    binom_pmf, binom_tail_upper, ceil_tol, floor_tol, ln_binom_pmf, ln_binom_tail_upper,
    ROUNDING_SLACK,
};
pub use bounds::{
    bootstrap_tail, bootstrap_tail_lb, giro_constants, lemma1_lower_bound, lemma3_check, lemma3_i0,
    regret_bound_thm2, stirling_binom_lb, w_bound_thm3, w_exact, BoundReport, GiroConstants,
    W_EXACT_MAX_N,
};
pub use kl::kl_bernoulli;
pub use optimism::{
    midpoint_tau, optimism_tail_q, theorem1_terms, theorem1_terms_monte_carlo, MonteCarloTerms,
    OptimismQuery, Theorem1Terms, THEOREM1_EXACT_MAX_N,
};
pub use verify::{verify_bounds, write_bound_csv, Grid};
