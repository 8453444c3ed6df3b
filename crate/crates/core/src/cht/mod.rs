//! Constraint-handling techniques (CHTs).

mod compare;
mod penalty;
mod repair;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{EvaluatedPoint, Tolerances};
use crate::rec::RecSpec;
use crate::rng::UniformSource;

pub use compare::{compare_priority, compare_probabilistic, Basis, Comparator, ComparisonOutcome, Winner};
pub use penalty::{penalized_conflict, penalty, DEFAULT_PENALTY_ALPHA, DEFAULT_PENALTY_K};
pub use repair::{
    extra_momentum_factors, repair_bisection, RepairOutcome, RepairVariant, BMEM_MAX_TRIALS, BMPEM_MAX_FACTOR,
    BMPEM_MAX_TRIALS, BM_MAX_TRIALS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChtKind {
    /// Preserving feasibility.
    Pf,
    /// Priority rules.
    Pfpr,
    /// Probabilistic priority rules.
    Pfppr,
    PfprRec,
    PfpprRec,
    /// Additive penalization.
    Apm,
    /// Bisection method.
    Bm,
    /// Bisection with deterministic extra momentum.
    Bmem,
    /// Bisection with probabilistic extra momentum.
    Bmpem,
}

impl ChtKind {
    pub const ALL: [ChtKind; 9] = [
        ChtKind::Pf,
        ChtKind::Pfpr,
        ChtKind::Pfppr,
        ChtKind::PfprRec,
        ChtKind::PfpprRec,
        ChtKind::Apm,
        ChtKind::Bm,
        ChtKind::Bmem,
        ChtKind::Bmpem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChtKind::Pf => "pf",
            ChtKind::Pfpr => "pfpr",
            ChtKind::Pfppr => "pfppr",
            ChtKind::PfprRec => "pfpr+rec",
            ChtKind::PfpprRec => "pfppr+rec",
            ChtKind::Apm => "apm",
            ChtKind::Bm => "bm",
            ChtKind::Bmem => "bmem",
            ChtKind::Bmpem => "bmpem",
        }
    }

    pub fn names() -> Vec<&'static str> {
        Self::ALL.iter().map(|k| k.name()).collect()
    }

    pub fn uses_rec(self) -> bool {
        matches!(self, ChtKind::PfprRec | ChtKind::PfpprRec)
    }

    pub fn is_probabilistic(self) -> bool {
        matches!(self, ChtKind::Pfppr | ChtKind::PfpprRec)
    }

    pub fn repair_variant(self) -> Option<RepairVariant> {
        match self {
            ChtKind::Bm => Some(RepairVariant::Bisection),
            ChtKind::Bmem => Some(RepairVariant::ExtraMomentum),
            ChtKind::Bmpem => Some(RepairVariant::ProbabilisticMomentum),
            _ => None,
        }
    }

    /// Whether the swarm must start from feasible positions only.
    pub fn requires_feasible_init(self) -> bool {
        matches!(self, ChtKind::Pf) || self.repair_variant().is_some()
    }
}

impl fmt::Display for ChtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChtKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase().replace('_', "+");
        Self::ALL.iter().copied().find(|k| k.name() == lower).ok_or_else(|| Error::UnknownCht {
            name: s.to_string(),
            valid: Self::names().into_iter().map(String::from).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChtConfig {
    pub kind: ChtKind,
    /// Probability of applying the priority rules in probabilistic kinds.
    pub prob: f64,
    pub penalty_k: f64,
    pub penalty_alpha: f64,
    /// Use exponent 1 for violations below 1 in the penalty.
    pub alpha_switch: bool,
    pub max_repair_trials: usize,
    pub rec: Option<RecSpec>,
}

impl ChtConfig {
    pub fn new(kind: ChtKind) -> Self {
        ChtConfig {
            kind,
            prob: 0.9,
            penalty_k: DEFAULT_PENALTY_K,
            penalty_alpha: DEFAULT_PENALTY_ALPHA,
            alpha_switch: false,
            max_repair_trials: match kind {
                ChtKind::Bm => BM_MAX_TRIALS,
                ChtKind::Bmem => BMEM_MAX_TRIALS,
                ChtKind::Bmpem => BMPEM_MAX_TRIALS,
                _ => 0,
            },
            rec: kind.uses_rec().then(RecSpec::default),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(0.0..=1.0).contains(&self.prob) {
            return bad(format!("prob must lie in [0, 1], got {}", self.prob));
        }
        if !(self.penalty_k > 0.0 && self.penalty_k.is_finite()) {
            return bad(format!("penalty k must be positive, got {}", self.penalty_k));
        }
        if !(self.penalty_alpha > 0.0 && self.penalty_alpha.is_finite()) {
            return bad(format!("penalty alpha must be positive, got {}", self.penalty_alpha));
        }
        if self.kind.uses_rec() != self.rec.is_some() {
            return bad(format!(
                "{} {} a REC schedule",
                self.kind,
                if self.kind.uses_rec() { "needs" } else { "takes no" }
            ));
        }
        if self.kind.repair_variant().is_some() && self.max_repair_trials == 0 {
            return bad(format!("{} needs at least one repair trial", self.kind));
        }
        if self.kind == ChtKind::Bmem && self.max_repair_trials > BMEM_MAX_TRIALS {
            return bad(format!("bmem allows at most {BMEM_MAX_TRIALS} trials"));
        }
        Ok(())
    }

    /// Deterministic ordering for neighbourhood and run bests.
    pub fn plain_comparator(&self) -> Comparator {
        match self.kind {
            ChtKind::Apm => {
                Comparator::Penalized { k: self.penalty_k, alpha: self.penalty_alpha, alpha_switch: self.alpha_switch }
            }
            _ => Comparator::Priority,
        }
    }

    pub fn penalized(&self, point: &EvaluatedPoint) -> f64 {
        penalized_conflict(point, self.penalty_k, self.penalty_alpha, self.alpha_switch)
    }
}

/// Decides whether `candidate` replaces the particle's memory `pbest`.
///
/// Only the probabilistic kinds consume randomness, and only when one of the
/// two points is infeasible.
pub fn accepts<R: UniformSource + ?Sized>(
    cht: &ChtConfig,
    pbest: Option<&EvaluatedPoint>,
    candidate: &EvaluatedPoint,
    tolerances: Tolerances,
    rng: &mut R,
) -> bool {
    let Some(pbest) = pbest else {
        return cht.kind != ChtKind::Pf || candidate.is_feasible(tolerances);
    };
    match cht.kind {
        ChtKind::Pf => candidate.is_feasible(tolerances) && candidate.conflict < pbest.conflict,
        ChtKind::Pfppr | ChtKind::PfpprRec => {
            compare_probabilistic(pbest, candidate, tolerances, rng, cht.prob).second_wins()
        }
        ChtKind::Apm => cht.penalized(candidate) < cht.penalized(pbest),
        ChtKind::Pfpr | ChtKind::PfprRec | ChtKind::Bm | ChtKind::Bmem | ChtKind::Bmpem => {
            compare_priority(pbest, candidate, tolerances).second_wins()
        }
    }
}

/// Replaces `pbest` with `candidate` when the CHT accepts it. Returns whether it did.
pub fn update_pbest<R: UniformSource + ?Sized>(
    cht: &ChtConfig,
    pbest: &mut Option<EvaluatedPoint>,
    candidate: &EvaluatedPoint,
    tolerances: Tolerances,
    rng: &mut R,
) -> bool {
    let replace = accepts(cht, pbest.as_ref(), candidate, tolerances, rng);
    if replace {
        *pbest = Some(candidate.clone());
    }
    replace
}

/// Conflict value reported in statistics: always the raw objective.
pub fn reported_conflict(point: &EvaluatedPoint, _cht: &ChtConfig) -> f64 {
    point.conflict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::ScriptedUnits;

    fn point(conflict: f64, cv: f64) -> EvaluatedPoint {
        EvaluatedPoint {
            position: vec![0.0],
            conflict,
            ineq_violations: vec![cv],
            eq_violations: vec![],
            box_violations: vec![0.0],
            cv,
            nac: usize::from(cv > 0.0),
        }
    }

    const TOL: Tolerances = Tolerances::DEFAULT;

    #[test]
    fn names_round_trip() {
        for k in ChtKind::ALL {
            assert_eq!(k.name().parse::<ChtKind>().unwrap(), k);
        }
        assert_eq!("PFPR_REC".parse::<ChtKind>().unwrap(), ChtKind::PfprRec);
        let err = "nope".parse::<ChtKind>().unwrap_err().to_string();
        assert!(err.contains("bmpem"), "{err}");
    }

    #[test]
    fn defaults() {
        let bm = ChtConfig::new(ChtKind::Bm);
        assert_eq!(bm.max_repair_trials, 20);
        assert_eq!(ChtConfig::new(ChtKind::Bmem).max_repair_trials, 19);
        assert_eq!(ChtConfig::new(ChtKind::Bmpem).max_repair_trials, 19);
        let p = ChtConfig::new(ChtKind::Pfppr);
        assert_eq!((p.prob, p.penalty_k, p.penalty_alpha), (0.9, 1e6, 2.0));
        assert!(ChtConfig::new(ChtKind::PfprRec).rec.is_some());
        assert!(ChtConfig::new(ChtKind::Pfpr).rec.is_none());
        for k in ChtKind::ALL {
            ChtConfig::new(k).validate().unwrap();
        }
    }

    #[test]
    fn rec_kind_without_schedule_is_invalid() {
        let mut c = ChtConfig::new(ChtKind::PfpprRec);
        c.rec = None;
        assert!(c.validate().is_err());
    }

    #[test]
    fn pf_rejects_infeasible_candidate() {
        let mut rng = ScriptedUnits::constant(0.5);
        let cht = ChtConfig::new(ChtKind::Pf);
        let mut pbest = Some(point(1.0, 0.0));
        assert!(!update_pbest(&cht, &mut pbest, &point(0.0, 0.3), TOL, &mut rng));
        assert_eq!(pbest.unwrap().conflict, 1.0);
    }

    #[test]
    fn pfpr_accepts_lower_violation() {
        let mut rng = ScriptedUnits::constant(0.5);
        let cht = ChtConfig::new(ChtKind::Pfpr);
        let mut pbest = Some(point(0.0, 0.5));
        assert!(update_pbest(&cht, &mut pbest, &point(3.0, 0.2), TOL, &mut rng));
        assert_eq!(pbest.unwrap().cv, 0.2);
    }

    #[test]
    fn apm_compares_penalized_values() {
        let mut rng = ScriptedUnits::constant(0.5);
        let cht = ChtConfig::new(ChtKind::Apm);
        // 10 + 1e6 * 0.0005^2 = 10.25 against 10.4
        let mut pbest = Some(point(10.4, 0.0));
        assert!(update_pbest(&cht, &mut pbest, &point(10.0, 0.0005), TOL, &mut rng));
    }

    #[test]
    fn reported_conflict_is_raw() {
        let cht = ChtConfig::new(ChtKind::Apm);
        let p = point(10.0, 0.1);
        assert_eq!(reported_conflict(&p, &cht), 10.0);
        assert!((cht.penalized(&p) - 10010.0).abs() < 1e-6);
    }

    #[test]
    fn probabilistic_only_draws_with_an_infeasible_party() {
        let cht = ChtConfig::new(ChtKind::Pfppr);
        let mut rng = ScriptedUnits::constant(0.95);
        let mut pbest = Some(point(2.0, 0.0));
        assert!(update_pbest(&cht, &mut pbest, &point(1.0, 0.0), TOL, &mut rng));
        assert_eq!(rng.draws(), 0);
        // 0.95 >= 0.9: raw conflict decides, so the infeasible point wins.
        assert!(update_pbest(&cht, &mut pbest, &point(0.5, 0.2), TOL, &mut rng));
        assert_eq!(rng.draws(), 1);
    }
}
