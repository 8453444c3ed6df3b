//! Constrained particle swarm optimization.
//!
//! Problems with inequality, equality and box constraints are solved by a
//! PSO with three sub-swarms and ring, fully connected or wheel
//! neighbourhoods. Nine constraint-handling techniques are available:
//! preserving feasibility (plain, with priority rules, with probabilistic
//! priority rules, both of the latter optionally with relaxed equality
//! tolerances), additive penalization and three bisection repair variants.
//!
//! ```
//! use cpso::{run_experiment, ChtConfig, ChtKind, ExperimentConfig};
//!
//! let config = ExperimentConfig::new("g08", ChtConfig::new(ChtKind::Pfpr), 2, 20, 200, 2).with_seed(1);
//! let row = run_experiment(&config).unwrap();
//! assert!(row.best_conflict().unwrap() < -0.09);
//! ```

pub mod cht;
pub mod error;
pub mod harness;
pub mod problem;
pub mod rec;
pub mod rng;
pub mod suite;
pub mod swarm;

pub use cht::{
    compare_priority, compare_probabilistic, penalized_conflict, repair_bisection, reported_conflict, update_pbest,
    Basis, ChtConfig, ChtKind, Comparator, ComparisonOutcome, RepairOutcome, RepairVariant, Winner,
};
pub use error::{Error, FaultSite, Result};
pub use harness::{
    run_experiment, run_experiment_detailed, run_single, run_single_on, summarize, sweep, sweep_detailed,
    ExperimentConfig, ExperimentOutcome, RunResult, SummaryRow, Termination, TraceRow,
};
pub use problem::{evaluate, is_feasible, EvaluatedPoint, Problem, ProblemBuilder, Tolerances, VariableKind};
pub use rec::{Decrease, RecSchedule, RecSpec};
pub use rng::{run_seed, seeded, ScriptedUnits, SwarmRng, UniformSource};
pub use suite::{estimate_feasibility_ratio, get_problem, problem_names, registry, Suite, SuiteEntry};
pub use swarm::{
    assign_coefficients, init_swarm, CoefficientSet, InitOptions, Particle, Swarm, SwarmConfig, Topology, TopologyKind,
};
