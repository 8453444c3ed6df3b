//! Constrained problem representation and point evaluation.
//!
//! A [`Problem`] minimizes `f(x)` subject to inequality constraints
//! `g_j(x) <= 0`, equality constraints `h_j(x) = 0` and the bounding box
//! `l <= x <= u`. The box is not enforced: points outside it are evaluated
//! normally and the overshoot is charged as violation, one term per
//! dimension.
//!
//! Feasibility is always judged against [`Tolerances`]; the raw violation
//! amounts stored in an [`EvaluatedPoint`] never have the tolerance
//! subtracted.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, FaultSite, Result};

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Per-dimension variable domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum VariableKind {
    Continuous,
    /// Values restricted to integer multiples of `step`.
    Discrete {
        step: f64,
    },
}

/// Feasibility tolerances. Box terms are judged with `ineq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub ineq: f64,
    pub eq: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances { ineq: 1e-12, eq: 1e-12 };

    pub fn new(ineq: f64, eq: f64) -> Result<Self> {
        if !(ineq >= 0.0 && eq >= 0.0) || !ineq.is_finite() || !eq.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "tolerances must be finite and nonnegative (got ineq={ineq}, eq={eq})"
            )));
        }
        Ok(Tolerances { ineq, eq })
    }

    pub fn zero() -> Self {
        Tolerances { ineq: 0.0, eq: 0.0 }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Clone)]
pub struct Problem {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    kinds: Vec<VariableKind>,
    objective: ScalarFn,
    inequalities: Vec<ScalarFn>,
    equalities: Vec<ScalarFn>,
    known_optimum: Option<f64>,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("inequalities", &self.inequalities.len())
            .field("equalities", &self.equalities.len())
            .field("known_optimum", &self.known_optimum)
            .finish()
    }
}

impl Problem {
    pub fn builder(name: impl Into<String>, lower: Vec<f64>, upper: Vec<f64>) -> ProblemBuilder {
        ProblemBuilder {
            name: name.into(),
            kinds: vec![VariableKind::Continuous; lower.len()],
            lower,
            upper,
            objective: None,
            inequalities: Vec::new(),
            equalities: Vec::new(),
            known_optimum: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn kinds(&self) -> &[VariableKind] {
        &self.kinds
    }

    /// Number of inequality constraints, `q`.
    pub fn inequality_count(&self) -> usize {
        self.inequalities.len()
    }

    /// Number of equality constraints, `m - q`.
    pub fn equality_count(&self) -> usize {
        self.equalities.len()
    }

    pub fn known_optimum(&self) -> Option<f64> {
        self.known_optimum
    }

    pub fn has_discrete(&self) -> bool {
        self.kinds.iter().any(|k| matches!(k, VariableKind::Discrete { .. }))
    }

    /// Half of the mean bound span; the initial relaxed equality tolerance.
    pub fn half_mean_span(&self) -> f64 {
        let n = self.dimension() as f64;
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).sum::<f64>() / n / 2.0
    }

    /// Maximum velocity per dimension: half the dynamic range.
    pub fn velocity_limits(&self) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(l, u)| (u - l) / 2.0).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(&xi, (&l, &u))| xi >= l && xi <= u)
    }

    /// Snaps every discrete dimension of `x` onto its grid in place.
    pub fn snap(&self, x: &mut [f64]) {
        for (xi, kind) in x.iter_mut().zip(&self.kinds) {
            if let VariableKind::Discrete { step } = *kind {
                *xi = snap_to_grid(*xi, step);
            }
        }
    }

    /// Raw objective value, without any fault handling.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        (self.objective)(x)
    }

    /// Evaluates `x`: conflict, raw violation amounts, `cv` and `nac`.
    pub fn evaluate(&self, x: &[f64], tolerances: Tolerances) -> Result<EvaluatedPoint> {
        evaluate(self, x, tolerances)
    }
}

/// Nearest multiple of `step`; exact half-steps go to the lower multiple.
pub fn snap_to_grid(x: f64, step: f64) -> f64 {
    let q = x / step;
    let lower = q.floor();
    let k = if q - lower > 0.5 { lower + 1.0 } else { lower };
    k * step
}

pub struct ProblemBuilder {
    name: String,
    lower: Vec<f64>,
    upper: Vec<f64>,
    kinds: Vec<VariableKind>,
    objective: Option<ScalarFn>,
    inequalities: Vec<ScalarFn>,
    equalities: Vec<ScalarFn>,
    known_optimum: Option<f64>,
}

impl ProblemBuilder {
    pub fn objective(mut self, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.objective = Some(Arc::new(f));
        self
    }

    /// Adds `g(x) <= 0`.
    pub fn inequality(mut self, g: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.inequalities.push(Arc::new(g));
        self
    }

    /// Adds `h(x) = 0`.
    pub fn equality(mut self, h: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        self.equalities.push(Arc::new(h));
        self
    }

    pub fn discrete(mut self, dim: usize, step: f64) -> Self {
        if dim < self.kinds.len() {
            self.kinds[dim] = VariableKind::Discrete { step };
        } else {
            // Out-of-range index; reported by build().
            self.kinds.push(VariableKind::Discrete { step });
        }
        self
    }

    pub fn known_optimum(mut self, value: f64) -> Self {
        self.known_optimum = Some(value);
        self
    }

    pub fn build(self) -> Result<Problem> {
        let invalid = |reason: String| Error::InvalidProblem { problem: self.name.clone(), reason };
        let n = self.lower.len();
        if n == 0 {
            return Err(invalid("dimension must be positive".into()));
        }
        if self.upper.len() != n || self.kinds.len() != n {
            return Err(invalid(format!(
                "bounds/kinds length mismatch (lower {n}, upper {}, kinds {})",
                self.upper.len(),
                self.kinds.len()
            )));
        }
        for (i, (&l, &u)) in self.lower.iter().zip(&self.upper).enumerate() {
            if !(l.is_finite() && u.is_finite() && l < u) {
                return Err(invalid(format!("dimension {i}: need finite l < u, got [{l}, {u}]")));
            }
            if let VariableKind::Discrete { step } = self.kinds[i] {
                if !(step.is_finite() && step > 0.0) {
                    return Err(invalid(format!("dimension {i}: discrete step must be positive")));
                }
                let first = (l / step).ceil();
                let last = (u / step).floor();
                if last - first < 1.0 {
                    return Err(invalid(format!("dimension {i}: fewer than two multiples of {step} in [{l}, {u}]")));
                }
            }
        }
        let objective = self.objective.clone().ok_or_else(|| invalid("missing objective".into()))?;
        Ok(Problem {
            name: self.name,
            lower: self.lower,
            upper: self.upper,
            kinds: self.kinds,
            objective,
            inequalities: self.inequalities,
            equalities: self.equalities,
            known_optimum: self.known_optimum,
        })
    }
}

/// A position with its conflict and constraint violations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluatedPoint {
    pub position: Vec<f64>,
    /// Raw objective ("conflict") value.
    pub conflict: f64,
    /// `max(0, g_j)` per inequality.
    pub ineq_violations: Vec<f64>,
    /// `|h_j|` per equality.
    pub eq_violations: Vec<f64>,
    /// `max(0, x_j - u_j) + max(0, l_j - x_j)` per dimension.
    pub box_violations: Vec<f64>,
    /// Sum of all violation terms.
    pub cv: f64,
    /// Violation terms exceeding their tolerance, under the tolerances used at evaluation.
    pub nac: usize,
}

impl EvaluatedPoint {
    pub fn is_feasible(&self, tolerances: Tolerances) -> bool {
        self.ineq_violations.iter().all(|&v| v <= tolerances.ineq)
            && self.box_violations.iter().all(|&v| v <= tolerances.ineq)
            && self.eq_violations.iter().all(|&v| v <= tolerances.eq)
    }

    /// Number of active constraints under `tolerances`.
    pub fn nac_at(&self, tolerances: Tolerances) -> usize {
        self.ineq_violations.iter().filter(|&&v| v > tolerances.ineq).count()
            + self.box_violations.iter().filter(|&&v| v > tolerances.ineq).count()
            + self.eq_violations.iter().filter(|&&v| v > tolerances.eq).count()
    }

    /// Same point with `nac` recomputed under other tolerances.
    pub fn retolerated(mut self, tolerances: Tolerances) -> Self {
        self.nac = self.nac_at(tolerances);
        self
    }

    pub fn violation_terms(&self) -> impl Iterator<Item = f64> + '_ {
        self.ineq_violations.iter().chain(&self.eq_violations).chain(&self.box_violations).copied()
    }

    pub fn has_box_violation(&self, tolerances: Tolerances) -> bool {
        self.box_violations.iter().any(|&v| v > tolerances.ineq)
    }
}

pub fn is_feasible(point: &EvaluatedPoint, tolerances: Tolerances) -> bool {
    point.is_feasible(tolerances)
}

/// Evaluates `x` against `problem`.
///
/// Non-finite function values are a fault inside the box. Outside the box
/// they are recorded as `+inf` so the point ranks last.
pub fn evaluate(problem: &Problem, x: &[f64], tolerances: Tolerances) -> Result<EvaluatedPoint> {
    let n = problem.dimension();
    if x.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.len() });
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinitePosition(i));
    }

    let box_violations: Vec<f64> = x
        .iter()
        .zip(problem.lower.iter().zip(&problem.upper))
        .map(|(&xi, (&l, &u))| (xi - u).max(0.0) + (l - xi).max(0.0))
        .collect();
    let in_box = box_violations.iter().all(|&v| v == 0.0);

    let guard = |value: f64, site: FaultSite| -> Result<f64> {
        if value.is_finite() {
            Ok(value)
        } else if in_box {
            Err(Error::EvaluationFault { problem: problem.name.clone(), site })
        } else {
            Ok(f64::INFINITY)
        }
    };

    let conflict = guard((problem.objective)(x), FaultSite::Objective)?;
    let ineq_violations = problem
        .inequalities
        .iter()
        .enumerate()
        .map(|(j, g)| guard(g(x), FaultSite::Inequality(j)).map(|v| v.max(0.0)))
        .collect::<Result<Vec<_>>>()?;
    let eq_violations = problem
        .equalities
        .iter()
        .enumerate()
        .map(|(j, h)| guard(h(x), FaultSite::Equality(j)).map(f64::abs))
        .collect::<Result<Vec<_>>>()?;

    let cv =
        ineq_violations.iter().sum::<f64>() + eq_violations.iter().sum::<f64>() + box_violations.iter().sum::<f64>();

    let mut point =
        EvaluatedPoint { position: x.to_vec(), conflict, ineq_violations, eq_violations, box_violations, cv, nac: 0 };
    point.nac = point.nac_at(tolerances);
    Ok(point)
}
