//! Benchmark registry: five engineering design problems and the g01-g13 suite.

pub mod engineering;
mod feasibility;
pub mod gsuite;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{Problem, Tolerances};

pub use feasibility::estimate_feasibility_ratio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Suite {
    Engineering,
    GSuite,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Engineering => "engineering",
            Suite::GSuite => "g",
        })
    }
}

/// Constraint and dimension counts as listed in the published result tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclaredCounts {
    pub inequalities: usize,
    pub equalities: usize,
    pub dimension: usize,
}

#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub problem: Problem,
    pub suite: Suite,
    /// Percentage of the box that is feasible at tolerance 1e-12.
    pub reported_feasibility_ratio: Option<f64>,
    pub reported_optimum: Option<f64>,
    pub declared: DeclaredCounts,
    /// The declared inequalities are realized as a single aggregate constraint.
    pub aggregated_inequalities: bool,
    /// A feasible point near the best known solution.
    pub reference_point: Vec<f64>,
}

impl SuiteEntry {
    pub fn name(&self) -> &str {
        self.problem.name()
    }

    /// Whether the declared counts agree with the constructed problem.
    pub fn counts_match(&self) -> bool {
        let p = &self.problem;
        let ni_ok = if self.aggregated_inequalities {
            p.inequality_count() == 1 && self.declared.inequalities >= 1
        } else {
            p.inequality_count() == self.declared.inequalities
        };
        ni_ok && p.equality_count() == self.declared.equalities && p.dimension() == self.declared.dimension
    }

    /// Best known conflict: the tabulated optimum, else the literature value.
    pub fn best_known(&self) -> Option<f64> {
        self.reported_optimum.or(self.problem.known_optimum())
    }

    /// Checks that the reference point is feasible at `tolerances` and within
    /// `rel` relative distance of the best known conflict.
    pub fn self_check(&self, tolerances: Tolerances, rel: f64) -> Result<()> {
        let point = self.problem.evaluate(&self.reference_point, tolerances)?;
        if !point.is_feasible(tolerances) {
            return Err(Error::ContractViolation(format!(
                "{}: reference point infeasible (cv = {:e})",
                self.name(),
                point.cv
            )));
        }
        if let Some(best) = self.best_known() {
            let gap = (point.conflict - best).abs() / best.abs().max(1e-12);
            if gap > rel {
                return Err(Error::ContractViolation(format!(
                    "{}: reference conflict {} is {:e} away from {}",
                    self.name(),
                    point.conflict,
                    gap,
                    best
                )));
            }
        }
        Ok(())
    }
}

struct EntryData {
    build: fn() -> Problem,
    suite: Suite,
    ratio: Option<f64>,
    optimum: Option<f64>,
    counts: (usize, usize, usize),
    aggregated: bool,
    reference: &'static [f64],
}

const ENTRIES: &[EntryData] = &[
    EntryData {
        build: engineering::pressure_vessel_mixed,
        suite: Suite::Engineering,
        ratio: Some(75.8937),
        optimum: None,
        counts: (3, 0, 4),
        aggregated: false,
        reference: &[0.8125, 0.4375, 42.098446, 176.636596],
    },
    EntryData {
        build: engineering::pressure_vessel_continuous,
        suite: Suite::Engineering,
        ratio: Some(75.9314),
        optimum: None,
        counts: (3, 0, 4),
        aggregated: false,
        reference: &[0.7781686413751053, 0.3846491626279018, 40.31961872409872, 200.0],
    },
    EntryData {
        build: engineering::welded_beam,
        suite: Suite::Engineering,
        ratio: Some(2.6475),
        optimum: None,
        counts: (7, 0, 4),
        aggregated: false,
        reference: &[0.205730, 3.470489, 9.036624, 0.205730],
    },
    EntryData {
        build: engineering::spring,
        suite: Suite::Engineering,
        ratio: Some(0.7467),
        optimum: None,
        counts: (4, 0, 3),
        aggregated: false,
        reference: &[0.051689, 0.356718, 11.288966],
    },
    EntryData {
        build: engineering::himmelblau,
        suite: Suite::Engineering,
        ratio: Some(52.0696),
        optimum: None,
        counts: (3, 0, 5),
        aggregated: false,
        reference: &[78.0, 33.0, 27.070997, 45.0, 44.969242],
    },
    EntryData {
        build: gsuite::g01,
        suite: Suite::GSuite,
        ratio: Some(0.0003),
        optimum: Some(-15.0),
        counts: (9, 0, 13),
        aggregated: false,
        reference: &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 3.0, 3.0, 3.0, 1.0],
    },
    EntryData {
        build: gsuite::g02,
        suite: Suite::GSuite,
        ratio: Some(99.9964),
        optimum: Some(-0.803619),
        counts: (2, 0, 20),
        aggregated: false,
        reference: &[
            3.16246061572185,
            3.12833142812967,
            3.09479212988791,
            3.06145059523469,
            3.02792915885555,
            2.99382606701730,
            2.95866871765285,
            2.92184227312450,
            0.49482511456933,
            0.48835711005490,
            0.48231642711865,
            0.47664475092742,
            0.47129550835493,
            0.46623099264167,
            0.46142004984199,
            0.45683664767217,
            0.45245876903267,
            0.44826762241853,
            0.44424700958760,
            0.44038285956317,
        ],
    },
    EntryData {
        build: gsuite::g03,
        suite: Suite::GSuite,
        ratio: Some(0.0),
        optimum: Some(-1.0),
        counts: (0, 1, 10),
        aggregated: false,
        reference: &[0.31622776601683794; 10],
    },
    EntryData {
        build: gsuite::g04,
        suite: Suite::GSuite,
        ratio: Some(26.9552),
        optimum: Some(-30665.539),
        counts: (3, 0, 5),
        aggregated: false,
        reference: &[78.0, 33.0, 29.9952560256816, 45.0, 36.7758129057882],
    },
    EntryData {
        build: gsuite::g05,
        suite: Suite::GSuite,
        ratio: Some(0.0),
        optimum: Some(5126.498),
        counts: (1, 3, 4),
        aggregated: false,
        reference: &[679.9451482970287, 1026.066976000047, 0.11887636909441043, -0.39623348521517826],
    },
    EntryData {
        build: gsuite::g06,
        suite: Suite::GSuite,
        ratio: Some(0.0067),
        optimum: Some(-6961.81388),
        counts: (2, 0, 2),
        aggregated: false,
        reference: &[14.095, 0.8429607892154796],
    },
    EntryData {
        build: gsuite::g07,
        suite: Suite::GSuite,
        ratio: Some(0.0001),
        optimum: Some(24.306209),
        counts: (8, 0, 10),
        aggregated: false,
        reference: &[
            2.17199634142692,
            2.3636830416034,
            8.77392573913157,
            5.09598443745173,
            0.990654756560493,
            1.43057392853463,
            1.32164415364306,
            9.82872576524495,
            8.2800915887356,
            8.3759266477347,
        ],
    },
    EntryData {
        build: gsuite::g08,
        suite: Suite::GSuite,
        ratio: Some(0.8607),
        optimum: Some(-0.095825),
        counts: (2, 0, 2),
        aggregated: false,
        reference: &[1.227971352607526, 4.245373366122749],
    },
    EntryData {
        build: gsuite::g09,
        suite: Suite::GSuite,
        ratio: Some(0.5264),
        optimum: Some(680.630057),
        counts: (4, 0, 7),
        aggregated: false,
        reference: &[
            2.33049935147405,
            1.95137236847115,
            -0.477541399510616,
            4.36572624923626,
            -0.624486959100389,
            1.03813099410962,
            1.59422667806715,
        ],
    },
    EntryData {
        build: gsuite::g10,
        suite: Suite::GSuite,
        ratio: Some(0.0006),
        optimum: Some(7049.25),
        counts: (6, 0, 8),
        aggregated: false,
        reference: &[
            579.306685017980,
            1359.97067807936,
            5109.97065743133,
            182.017699630615,
            295.601173702747,
            217.982300369385,
            286.416525927869,
            395.601173702747,
        ],
    },
    EntryData {
        build: gsuite::g11,
        suite: Suite::GSuite,
        ratio: Some(0.0),
        optimum: Some(0.75),
        counts: (0, 1, 2),
        aggregated: false,
        reference: &[-std::f64::consts::FRAC_1_SQRT_2, 0.5],
    },
    EntryData {
        build: gsuite::g12,
        suite: Suite::GSuite,
        ratio: Some(4.7713),
        optimum: Some(-1.0),
        counts: (729, 0, 3),
        aggregated: true,
        reference: &[5.0, 5.0, 5.0],
    },
    EntryData {
        build: gsuite::g13,
        suite: Suite::GSuite,
        ratio: Some(0.0),
        optimum: Some(0.053950),
        counts: (0, 3, 5),
        aggregated: false,
        reference: &[-1.717143, 1.595709, 1.827247, -0.7636413, -0.763645],
    },
];

/// All registered problems in listing order.
pub fn registry() -> &'static [SuiteEntry] {
    static REGISTRY: OnceLock<Vec<SuiteEntry>> = OnceLock::new();
    REGISTRY.get_or_init(|| {
        ENTRIES
            .iter()
            .map(|s| SuiteEntry {
                problem: (s.build)(),
                suite: s.suite,
                reported_feasibility_ratio: s.ratio,
                reported_optimum: s.optimum,
                declared: DeclaredCounts { inequalities: s.counts.0, equalities: s.counts.1, dimension: s.counts.2 },
                aggregated_inequalities: s.aggregated,
                reference_point: s.reference.to_vec(),
            })
            .collect()
    })
}

pub fn problem_names() -> Vec<&'static str> {
    registry().iter().map(|e| e.problem.name()).collect()
}

pub fn get_problem(name: &str) -> Result<SuiteEntry> {
    registry().iter().find(|e| e.problem.name() == name).cloned().ok_or_else(|| Error::UnknownProblem {
        name: name.to_string(),
        valid: problem_names().into_iter().map(String::from).collect(),
    })
}

pub fn entries_in(suite: Suite) -> impl Iterator<Item = &'static SuiteEntry> {
    registry().iter().filter(move |e| e.suite == suite)
}
