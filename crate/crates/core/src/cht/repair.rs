//! Bisection-style repair of moves that would leave the feasible region.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{EvaluatedPoint, Problem, Tolerances};
use crate::rng::UniformSource;
use crate::swarm::update::{clamp_velocity, position_update};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RepairVariant {
    /// Halve the velocity until the move is feasible.
    Bisection,
    /// Alternate down- and up-scalings: 0.9, 1.1, 0.8, 1.2, ..., 0.1, 1.9, 0.
    ExtraMomentum,
    /// Scale by a fresh `U(0, 1.5)` draw per trial.
    ProbabilisticMomentum,
}

pub const BM_MAX_TRIALS: usize = 20;
pub const BMEM_MAX_TRIALS: usize = 19;
pub const BMPEM_MAX_TRIALS: usize = 19;
pub const BMPEM_MAX_FACTOR: f64 = 1.5;

/// The full extra-momentum trial schedule.
pub fn extra_momentum_factors() -> Vec<f64> {
    let mut factors: Vec<f64> = (1..=9).flat_map(|k| [(10 - k) as f64 / 10.0, (10 + k) as f64 / 10.0]).collect();
    factors.push(0.0);
    factors
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepairOutcome {
    pub point: EvaluatedPoint,
    /// Velocity actually applied; the particle stores it as its new velocity.
    pub velocity: Vec<f64>,
    /// Function evaluations spent, including the unscaled move.
    pub evaluations: usize,
    /// False when every trial failed and the particle stayed put.
    pub moved: bool,
}

/// Moves from the feasible point `old` along `v`, scaling `v` down (or
/// around) until the destination is feasible under `tolerances`.
///
/// Every scaled velocity is clamped to the problem's velocity limits. If no
/// trial succeeds the particle keeps `old` with zero velocity.
pub fn repair_bisection<R: UniformSource + ?Sized>(
    problem: &Problem,
    old: &EvaluatedPoint,
    v: &[f64],
    tolerances: Tolerances,
    variant: RepairVariant,
    rng: &mut R,
    max_trials: usize,
) -> Result<RepairOutcome> {
    if !old.is_feasible(tolerances) {
        return Err(Error::ContractViolation(format!("repair requires a feasible starting point (cv = {:e})", old.cv)));
    }
    let vmax = problem.velocity_limits();
    let try_move = |velocity: Vec<f64>| -> Result<(EvaluatedPoint, Vec<f64>)> {
        let x = position_update(&old.position, &velocity, problem);
        Ok((problem.evaluate(&x, tolerances)?, velocity))
    };
    let stay = |evaluations: usize, moved: bool| RepairOutcome {
        point: old.clone(),
        velocity: vec![0.0; v.len()],
        evaluations,
        moved,
    };

    let (full, _) = try_move(v.to_vec())?;
    if full.is_feasible(tolerances) {
        return Ok(RepairOutcome { point: full, velocity: v.to_vec(), evaluations: 1, moved: true });
    }
    let box_violated = full.has_box_violation(tolerances);

    let schedule: Box<dyn Iterator<Item = Option<f64>>> = match variant {
        RepairVariant::Bisection => Box::new((1..=max_trials).map(|k| Some(0.5f64.powi(k as i32)))),
        RepairVariant::ExtraMomentum => Box::new(extra_momentum_factors().into_iter().take(max_trials).map(Some)),
        // Draws happen lazily, one per trial, so the stream stays in trial order.
        RepairVariant::ProbabilisticMomentum => Box::new((0..max_trials).map(|_| None)),
    };

    let mut evaluations = 1;
    for factor in schedule {
        let factor = factor.unwrap_or_else(|| BMPEM_MAX_FACTOR * rng.next_unit());
        if variant == RepairVariant::ExtraMomentum && factor > 1.0 && box_violated {
            continue;
        }
        if factor == 0.0 {
            return Ok(stay(evaluations, true));
        }
        let mut scaled: Vec<f64> = v.iter().map(|vi| factor * vi).collect();
        clamp_velocity(&mut scaled, &vmax);
        let (trial, velocity) = try_move(scaled)?;
        evaluations += 1;
        if trial.is_feasible(tolerances) {
            return Ok(RepairOutcome { point: trial, velocity, evaluations, moved: true });
        }
    }
    Ok(stay(evaluations, false))
}
