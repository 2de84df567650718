/// Bernoulli KL divergence `d(p1, p2)` with `0 log 0 = 0`.
///
/// Returns `+inf` when `p2` is 0 or 1 and `p1` differs from it.
pub fn kl_bernoulli(p1: f64, p2: f64) -> f64 {
    let term = |x: f64, y: f64| {
        if x <= 0.0 {
            0.0
        } else if y <= 0.0 {
            f64::INFINITY
        } else {
            x * (x / y).ln()
        }
    };
    term(p1, p2) + term(1.0 - p1, 1.0 - p2)
}
