use crate::problem::EvaluatedPoint;

pub const DEFAULT_PENALTY_K: f64 = 1e6;
pub const DEFAULT_PENALTY_ALPHA: f64 = 2.0;

/// `k * sum(v^alpha)` over every positive violation term (inequality,
/// equality and box). With `alpha_switch`, terms below one use exponent 1.
pub fn penalty(point: &EvaluatedPoint, k: f64, alpha: f64, alpha_switch: bool) -> f64 {
    k * point
        .violation_terms()
        .filter(|&v| v > 0.0)
        .map(|v| if alpha_switch && v < 1.0 { v } else { v.powf(alpha) })
        .sum::<f64>()
}

/// Additive penalized conflict `f + penalty`.
pub fn penalized_conflict(point: &EvaluatedPoint, k: f64, alpha: f64, alpha_switch: bool) -> f64 {
    point.conflict + penalty(point, k, alpha, alpha_switch)
}
