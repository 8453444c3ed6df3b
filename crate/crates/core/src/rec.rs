//! Time-decreasing equality tolerance ("relaxed equality constraints").

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Decrease {
    Linear,
    /// Multiply by `rate` every step, never going below the final tolerance.
    Exponential {
        rate: f64,
    },
}

impl Decrease {
    pub const DEFAULT_RATE: f64 = 0.995;
}

/// Problem-independent part of a schedule, carried by a CHT configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecSpec {
    pub switch_fraction: f64,
    pub decrease: Decrease,
}

impl Default for RecSpec {
    fn default() -> Self {
        RecSpec { switch_fraction: 0.8, decrease: Decrease::Linear }
    }
}

impl RecSpec {
    /// Builds the schedule for `problem`, starting at half the mean bound span.
    pub fn resolve(&self, problem: &Problem, final_tol: f64) -> Result<RecSchedule> {
        let initial = problem.half_mean_span().max(final_tol);
        RecSchedule::new(initial, final_tol, self.switch_fraction, self.decrease)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecSchedule {
    pub initial_tol: f64,
    pub final_tol: f64,
    pub switch_fraction: f64,
    pub decrease: Decrease,
}

impl RecSchedule {
    pub fn new(initial_tol: f64, final_tol: f64, switch_fraction: f64, decrease: Decrease) -> Result<Self> {
        if !(final_tol > 0.0 && initial_tol >= final_tol && initial_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "REC schedule needs initial >= final > 0 (got {initial_tol}, {final_tol})"
            )));
        }
        if !(switch_fraction > 0.0 && switch_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!("REC switch fraction must lie in (0, 1], got {switch_fraction}")));
        }
        if let Decrease::Exponential { rate } = decrease {
            if !(rate > 0.0 && rate < 1.0) {
                return Err(Error::InvalidConfig(format!("REC exponential rate must lie in (0, 1), got {rate}")));
            }
        }
        Ok(RecSchedule { initial_tol, final_tol, switch_fraction, decrease })
    }

    pub fn for_problem(problem: &Problem, final_tol: f64, switch_fraction: f64, decrease: Decrease) -> Result<Self> {
        RecSpec { switch_fraction, decrease }.resolve(problem, final_tol)
    }

    /// First step at which the final tolerance applies: `ceil(switch_fraction * t_max)`.
    pub fn switch_step(&self, t_max: usize) -> usize {
        let raw = self.switch_fraction * t_max as f64;
        let nearest = raw.round();
        // 0.8 * 8500 lands a hair above 6800 in binary; treat such cases as exact.
        let step = if (raw - nearest).abs() <= 1e-9 * raw.max(1.0) { nearest } else { raw.ceil() };
        (step as usize).max(1)
    }

    /// Equality tolerance in force at step `t` (1-based) of `t_max`.
    pub fn tolerance_at(&self, t: usize, t_max: usize) -> f64 {
        let t = t.max(1);
        let switch = self.switch_step(t_max.max(1));
        if t >= switch {
            return self.final_tol;
        }
        match self.decrease {
            Decrease::Linear => {
                let frac = (t - 1) as f64 / (switch - 1) as f64;
                self.initial_tol + (self.final_tol - self.initial_tol) * frac
            }
            Decrease::Exponential { rate } => (self.initial_tol * rate.powi((t - 1) as i32)).max(self.final_tol),
        }
    }
}

pub fn tolerance_at(schedule: &RecSchedule, t: usize, t_max: usize) -> f64 {
    schedule.tolerance_at(t, t_max)
}
