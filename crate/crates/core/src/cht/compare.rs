use serde::{Deserialize, Serialize};

use crate::problem::{EvaluatedPoint, Tolerances};
use crate::rng::UniformSource;

use super::penalty::penalized_conflict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Winner {
    First,
    Second,
}

/// What decided a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    Conflict,
    Feasibility,
    Violation,
    ProbabilisticOverride,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonOutcome {
    pub winner: Winner,
    pub basis: Basis,
}

impl ComparisonOutcome {
    pub fn second_wins(&self) -> bool {
        self.winner == Winner::Second
    }
}

fn lower(a: f64, b: f64, basis: Basis) -> ComparisonOutcome {
    let winner = if b < a { Winner::Second } else { Winner::First };
    ComparisonOutcome { winner, basis }
}

/// Feasibility priority rules. Exact ties keep `a`.
pub fn compare_priority(a: &EvaluatedPoint, b: &EvaluatedPoint, tolerances: Tolerances) -> ComparisonOutcome {
    match (a.is_feasible(tolerances), b.is_feasible(tolerances)) {
        (true, true) => lower(a.conflict, b.conflict, Basis::Conflict),
        (true, false) => ComparisonOutcome { winner: Winner::First, basis: Basis::Feasibility },
        (false, true) => ComparisonOutcome { winner: Winner::Second, basis: Basis::Feasibility },
        (false, false) => lower(a.cv, b.cv, Basis::Violation),
    }
}

/// Priority rules applied with probability `prob` whenever either point is
/// infeasible; otherwise the raw conflict alone decides. Draws once only in
/// that case.
pub fn compare_probabilistic<R: UniformSource + ?Sized>(
    a: &EvaluatedPoint,
    b: &EvaluatedPoint,
    tolerances: Tolerances,
    rng: &mut R,
    prob: f64,
) -> ComparisonOutcome {
    if a.is_feasible(tolerances) && b.is_feasible(tolerances) {
        return lower(a.conflict, b.conflict, Basis::Conflict);
    }
    if rng.next_unit() < prob {
        compare_priority(a, b, tolerances)
    } else {
        lower(a.conflict, b.conflict, Basis::ProbabilisticOverride)
    }
}

/// Deterministic ordering used to pick neighbourhood and run bests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Comparator {
    Priority,
    Penalized { k: f64, alpha: f64, alpha_switch: bool },
}

impl Comparator {
    pub fn compare(&self, a: &EvaluatedPoint, b: &EvaluatedPoint, tolerances: Tolerances) -> ComparisonOutcome {
        match *self {
            Comparator::Priority => compare_priority(a, b, tolerances),
            Comparator::Penalized { k, alpha, alpha_switch } => lower(
                penalized_conflict(a, k, alpha, alpha_switch),
                penalized_conflict(b, k, alpha, alpha_switch),
                Basis::Conflict,
            ),
        }
    }

    /// Index of the best point; ties go to the earliest.
    pub fn best_of<'a, I>(&self, points: I, tolerances: Tolerances) -> Option<(usize, &'a EvaluatedPoint)>
    where
        I: IntoIterator<Item = &'a EvaluatedPoint>,
    {
        let mut best: Option<(usize, &EvaluatedPoint)> = None;
        for (i, p) in points.into_iter().enumerate() {
            best = match best {
                Some((bi, bp)) if !self.compare(bp, p, tolerances).second_wins() => Some((bi, bp)),
                _ => Some((i, p)),
            };
        }
        best
    }
}
