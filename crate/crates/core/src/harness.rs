//! Multi-run experiments and sweeps with per-run deterministic seeding.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cht::{compare_priority, reported_conflict, ChtConfig};
use crate::error::{Error, Result};
use crate::problem::{EvaluatedPoint, Problem, Tolerances};
use crate::rng::run_seed;
use crate::suite::get_problem;
use crate::swarm::{init_swarm, InitOptions, SwarmConfig, Topology, TopologyKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: String,
    pub cht: ChtConfig,
    /// Neighbours per particle, excluding itself.
    pub nn: usize,
    /// Explicit topology; when absent it is derived from `nn`.
    pub topology: Option<TopologyKind>,
    pub particles: usize,
    pub steps: usize,
    pub runs: usize,
    pub master_seed: u64,
    pub tolerances: Tolerances,
    pub max_init_attempts: usize,
}

impl ExperimentConfig {
    pub fn new(
        problem: impl Into<String>,
        cht: ChtConfig,
        nn: usize,
        particles: usize,
        steps: usize,
        runs: usize,
    ) -> Self {
        ExperimentConfig {
            problem: problem.into(),
            cht,
            nn,
            topology: None,
            particles,
            steps,
            runs,
            master_seed: 0,
            tolerances: Tolerances::DEFAULT,
            max_init_attempts: InitOptions::DEFAULT_MAX_ATTEMPTS,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.master_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        if self.nn + 1 > self.particles {
            return Err(Error::InvalidConfig(format!(
                "nn = {} needs at least {} particles, got {}",
                self.nn,
                self.nn + 1,
                self.particles
            )));
        }
        self.cht.validate()?;
        Ok(())
    }

    pub fn topology_kind(&self) -> Result<TopologyKind> {
        match self.topology {
            Some(kind) => Ok(kind),
            None => Ok(Topology::from_nn(self.nn, self.particles)?.kind()),
        }
    }

    /// Swarm configuration of run `run_index` on `problem`.
    pub fn swarm_config(&self, problem: &Problem, run_index: usize) -> Result<SwarmConfig> {
        let rec = match &self.cht.rec {
            Some(spec) => Some(spec.resolve(problem, self.tolerances.eq)?),
            None => None,
        };
        Ok(SwarmConfig {
            size: self.particles,
            steps: self.steps,
            topology: self.topology_kind()?,
            seed: run_seed(self.master_seed, run_index),
            tolerances: self.tolerances,
            rec,
        })
    }

    /// Step evaluations budgeted per run.
    pub fn fes(&self) -> usize {
        self.particles * self.steps
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Completed,
    InitFailed { particle: usize, attempts: usize },
}

/// Best-so-far snapshot after one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub run: usize,
    pub step: usize,
    pub best_conflict: f64,
    pub best_cv: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run_index: usize,
    pub seed: u64,
    pub termination: Termination,
    /// Best memory at the final step, with `nac` at the final tolerances.
    pub best: Option<EvaluatedPoint>,
    /// Evaluations of accepted initial positions and of every step.
    pub evaluations: usize,
    /// Initial positions sampled, rejected ones included.
    pub init_attempts: usize,
    /// Repair evaluations beyond one per particle per step.
    pub repair_extra: usize,
    pub wall_time_secs: f64,
    pub trace: Vec<TraceRow>,
}

impl RunResult {
    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }

    /// Evaluations outside the `particles * steps` budget.
    pub fn extra_evaluations(&self) -> usize {
        self.init_attempts + self.repair_extra
    }
}

/// Runs one seeded run. Initialization failure is a result, not an error.
pub fn run_single(config: &ExperimentConfig, run_index: usize) -> Result<RunResult> {
    let problem = get_problem(&config.problem)?.problem;
    run_single_on(&problem, config, run_index, false)
}

pub fn run_single_on(problem: &Problem, config: &ExperimentConfig, run_index: usize, trace: bool) -> Result<RunResult> {
    config.validate()?;
    let started = Instant::now();
    let swarm_config = config.swarm_config(problem, run_index)?;
    let options = InitOptions::for_cht(&config.cht, config.max_init_attempts);
    let mut swarm = match init_swarm(problem, &swarm_config, &config.cht, options) {
        Ok(s) => s,
        Err(Error::InitializationFailure { particle, attempts }) => {
            return Ok(RunResult {
                run_index,
                seed: swarm_config.seed,
                termination: Termination::InitFailed { particle, attempts },
                best: None,
                evaluations: 0,
                init_attempts: 0,
                repair_extra: 0,
                wall_time_secs: started.elapsed().as_secs_f64(),
                trace: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };

    let mut rows = Vec::new();
    for _ in 0..config.steps {
        swarm.step()?;
        if trace {
            let tol = swarm.tolerances();
            if let Some((_, best)) = swarm.best(tol) {
                rows.push(TraceRow {
                    run: run_index,
                    step: swarm.steps_done(),
                    best_conflict: best.conflict,
                    best_cv: best.cv,
                });
            }
        }
    }

    let final_tol = swarm_config.final_tolerances();
    let best = swarm.best(final_tol).map(|(_, p)| p.clone().retolerated(final_tol));
    Ok(RunResult {
        run_index,
        seed: swarm_config.seed,
        termination: Termination::Completed,
        best,
        evaluations: swarm.evaluations(),
        init_attempts: swarm.init_attempts(),
        repair_extra: swarm.repair_extra(),
        wall_time_secs: started.elapsed().as_secs_f64(),
        trace: rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub problem: String,
    pub cht: String,
    pub nn: usize,
    pub particles: usize,
    pub steps: usize,
    pub runs: usize,
    pub seed: u64,
    /// Best of the run bests under the priority rules; ties keep the lowest run index.
    pub best: Option<EvaluatedPoint>,
    pub mean_conflict: Option<f64>,
    pub mean_cv: Option<f64>,
    pub mean_nac: Option<f64>,
    pub failures: usize,
    pub fes: usize,
    /// Mean per completed run of initialization plus extra repair evaluations.
    pub extra_evals: Option<f64>,
    /// Set when the experiment could not be executed at all.
    pub error: Option<String>,
}

impl SummaryRow {
    /// True when no run completed.
    pub fn is_fail(&self) -> bool {
        self.best.is_none()
    }

    pub fn best_conflict(&self) -> Option<f64> {
        self.best.as_ref().map(|b| b.conflict)
    }

    fn empty(config: &ExperimentConfig) -> Self {
        SummaryRow {
            problem: config.problem.clone(),
            cht: config.cht.kind.name().to_string(),
            nn: config.nn,
            particles: config.particles,
            steps: config.steps,
            runs: config.runs,
            seed: config.master_seed,
            best: None,
            mean_conflict: None,
            mean_cv: None,
            mean_nac: None,
            failures: 0,
            fes: config.fes(),
            extra_evals: None,
            error: None,
        }
    }
}

/// Aggregates run results (any order) into a summary row.
pub fn summarize(config: &ExperimentConfig, runs: &[RunResult], final_tolerances: Tolerances) -> SummaryRow {
    let mut sorted: Vec<&RunResult> = runs.iter().collect();
    sorted.sort_by_key(|r| r.run_index);
    let done: Vec<&RunResult> = sorted.iter().copied().filter(|r| r.completed() && r.best.is_some()).collect();

    let mut row = SummaryRow::empty(config);
    row.failures = sorted.len() - done.len();
    if done.is_empty() {
        return row;
    }
    let mut best = done[0].best.as_ref().unwrap();
    for r in &done[1..] {
        let b = r.best.as_ref().unwrap();
        if compare_priority(best, b, final_tolerances).second_wins() {
            best = b;
        }
    }
    let n = done.len() as f64;
    let mean = |f: &dyn Fn(&RunResult) -> f64| done.iter().map(|r| f(r)).sum::<f64>() / n;
    row.best = Some(best.clone());
    row.mean_conflict = Some(mean(&|r| reported_conflict(r.best.as_ref().unwrap(), &config.cht)));
    row.mean_cv = Some(mean(&|r| r.best.as_ref().unwrap().cv));
    row.mean_nac = Some(mean(&|r| r.best.as_ref().unwrap().nac as f64));
    row.extra_evals = Some(mean(&|r| r.extra_evaluations() as f64));
    row
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutcome {
    pub summary: SummaryRow,
    pub runs: Vec<RunResult>,
}

/// Runs every run of `config` in parallel and aggregates them.
pub fn run_experiment(config: &ExperimentConfig) -> Result<SummaryRow> {
    Ok(run_experiment_detailed(config, false)?.summary)
}

pub fn run_experiment_detailed(config: &ExperimentConfig, trace: bool) -> Result<ExperimentOutcome> {
    config.validate()?;
    let problem = get_problem(&config.problem)?.problem;
    let final_tol = config.swarm_config(&problem, 0)?.final_tolerances();
    let runs = (0..config.runs)
        .into_par_iter()
        .map(|i| run_single_on(&problem, config, i, trace))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentOutcome { summary: summarize(config, &runs, final_tol), runs })
}

/// Runs each configuration; rows keep input order and failures are recorded in-row.
pub fn sweep(configs: &[ExperimentConfig]) -> Result<Vec<SummaryRow>> {
    Ok(sweep_detailed(configs, false)?.into_iter().map(|o| o.summary).collect())
}

pub fn sweep_detailed(configs: &[ExperimentConfig], trace: bool) -> Result<Vec<ExperimentOutcome>> {
    if configs.is_empty() {
        return Err(Error::InvalidConfig("sweep needs at least one experiment".into()));
    }
    Ok(configs
        .par_iter()
        .map(|c| {
            run_experiment_detailed(c, trace).unwrap_or_else(|e| {
                let mut summary = SummaryRow::empty(c);
                summary.error = Some(e.to_string());
                ExperimentOutcome { summary, runs: Vec::new() }
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cht::ChtKind;

    fn cfg(problem: &str, kind: ChtKind, runs: usize) -> ExperimentConfig {
        ExperimentConfig::new(problem, ChtConfig::new(kind), 2, 12, 60, runs).with_seed(17)
    }

    fn strip_time(mut r: RunResult) -> RunResult {
        r.wall_time_secs = 0.0;
        r
    }

    #[test]
    fn identical_calls_are_bit_identical() {
        let c = cfg("g08", ChtKind::Pfppr, 1);
        let a = strip_time(run_single(&c, 3).unwrap());
        let b = strip_time(run_single(&c, 3).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn adding_runs_keeps_earlier_runs() {
        let small = run_experiment_detailed(&cfg("g06", ChtKind::Pfpr, 2), false).unwrap();
        let big = run_experiment_detailed(&cfg("g06", ChtKind::Pfpr, 4), false).unwrap();
        for (a, b) in small.runs.into_iter().zip(big.runs) {
            assert_eq!(strip_time(a), strip_time(b));
        }
    }

    #[test]
    fn single_run_means_equal_that_run() {
        let out = run_experiment_detailed(&cfg("g08", ChtKind::Pfpr, 1), false).unwrap();
        let best = out.runs[0].best.as_ref().unwrap();
        let s = &out.summary;
        assert_eq!(s.mean_conflict, Some(best.conflict));
        assert_eq!(s.mean_cv, Some(best.cv));
        assert_eq!(s.mean_nac, Some(best.nac as f64));
        assert_eq!(s.best.as_ref(), Some(best));
    }

    #[test]
    fn init_failure_marks_row() {
        let mut c = cfg("g03", ChtKind::Pf, 2);
        c.max_init_attempts = 1000;
        let s = run_experiment(&c).unwrap();
        assert!(s.is_fail());
        assert_eq!(s.failures, 2);
        assert_eq!(s.mean_conflict, None);
    }

    #[test]
    fn non_repair_evaluation_budget() {
        let c = cfg("g08", ChtKind::Apm, 2);
        for r in run_experiment_detailed(&c, false).unwrap().runs {
            assert_eq!(r.evaluations, c.particles * (c.steps + 1));
            assert_eq!(r.init_attempts, c.particles);
        }
    }

    #[test]
    fn sweep_keeps_order_and_records_errors() {
        let mut bad = cfg("g08", ChtKind::Pfpr, 1);
        bad.nn = 50;
        let configs = vec![cfg("g08", ChtKind::Pfpr, 1), bad, cfg("g06", ChtKind::Apm, 1)];
        let rows = sweep(&configs).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], run_experiment(&configs[0]).unwrap());
        assert!(rows[1].error.is_some());
        assert_eq!(rows[2].problem, "g06");
        assert!(sweep(&[]).is_err());
    }

    #[test]
    fn trace_has_one_row_per_step() {
        let c = cfg("g08", ChtKind::Pfpr, 2);
        let out = run_experiment_detailed(&c, true).unwrap();
        for r in &out.runs {
            assert_eq!(r.trace.len(), c.steps);
            assert!(r.trace.windows(2).all(|w| w[1].step == w[0].step + 1));
        }
    }
}
