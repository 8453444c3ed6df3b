//! Property checks shared by the proptest suite and the acceptance runner.
//! Each check runs `cases` random cases and returns the first failure.

#![allow(dead_code)]

use cpso::swarm::SUB_SWARM_PRESETS;
use cpso::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestError, TestRunner};

pub type Outcome = std::result::Result<(), String>;

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn report<T: std::fmt::Debug>(r: std::result::Result<(), TestError<T>>) -> Outcome {
    r.map_err(|e| e.to_string())
}

fn toy1() -> Problem {
    Problem::builder("toy1", vec![-2.0, -2.0], vec![2.0, 2.0])
        .objective(|x| x[0] + x[1])
        .inequality(|x| x[0] + x[1] - 1.0)
        .build()
        .unwrap()
}

/// Disc of radius 1 centred at the origin inside [-2, 2]^2.
fn disc() -> Problem {
    Problem::builder("disc", vec![-2.0, -2.0], vec![2.0, 2.0])
        .objective(|x| x[0] - x[1])
        .inequality(|x| x[0] * x[0] + x[1] * x[1] - 1.0)
        .build()
        .unwrap()
}

fn variant_strategy() -> impl Strategy<Value = (RepairVariant, usize)> {
    prop_oneof![
        Just((RepairVariant::Bisection, 20)),
        Just((RepairVariant::ExtraMomentum, 19)),
        Just((RepairVariant::ProbabilisticMomentum, 19)),
    ]
}

fn kind_strategy() -> impl Strategy<Value = ChtKind> {
    proptest::sample::select(ChtKind::ALL.to_vec())
}

/// Repair output is feasible or exactly the starting point, within budget,
/// with a clamped velocity. Input velocities are already clamped, as the swarm passes them.
pub fn repair_postcondition(cases: u32) -> Outcome {
    let problems = [toy1(), disc()];
    report(runner(cases).run(
        &(0usize..2, -1.0f64..1.0, -1.0f64..1.0, -2.0f64..=2.0, -2.0f64..=2.0, variant_strategy(), any::<u64>()),
        |(which, a, b, v0, v1, (variant, trials), seed)| {
            let problem = &problems[which];
            let tol = Tolerances::DEFAULT;
            // Scale the start into the feasible region of either problem.
            let start = [a * 0.7, b * 0.7];
            let old = problem.evaluate(&start, tol).unwrap();
            prop_assume!(old.is_feasible(tol));
            let mut rng = seeded(seed);
            let out = repair_bisection(problem, &old, &[v0, v1], tol, variant, &mut rng, trials).unwrap();
            prop_assert!(out.point.is_feasible(tol) || out.point.position == old.position);
            prop_assert!(out.evaluations >= 1 && out.evaluations <= trials + 1);
            for (v, m) in out.velocity.iter().zip(problem.velocity_limits()) {
                prop_assert!(v.abs() <= m);
            }
            Ok(())
        },
    ))
}

/// Single velocity updates never exceed the limit, and neither do swarm
/// velocities after any step of any CHT.
pub fn velocity_clamp(cases: u32) -> Outcome {
    let component = -1e3f64..1e3;
    report(runner(cases).run(
        &(
            proptest::collection::vec(
                (component.clone(), component.clone(), component.clone(), component, 1e-3f64..50.0),
                1..8,
            ),
            0usize..3,
            any::<u64>(),
        ),
        |(dims, preset, seed)| {
            let x: Vec<f64> = dims.iter().map(|d| d.0).collect();
            let v: Vec<f64> = dims.iter().map(|d| d.1).collect();
            let pb: Vec<f64> = dims.iter().map(|d| d.2).collect();
            let lb: Vec<f64> = dims.iter().map(|d| d.3 * 0.5).collect();
            let vmax: Vec<f64> = dims.iter().map(|d| d.4).collect();
            let mut rng = seeded(seed);
            let out = swarm::velocity_update(&x, &v, &pb, &lb, SUB_SWARM_PRESETS[preset], &vmax, &mut rng);
            for (o, m) in out.iter().zip(&vmax) {
                prop_assert!(o.abs() <= *m);
            }
            Ok(())
        },
    ))?;
    let problem = get_problem("g08").unwrap().problem;
    let vmax = problem.velocity_limits();
    report(runner((cases / 20).max(10)).run(&(kind_strategy(), any::<u64>()), |(kind, seed)| {
        let cht = ChtConfig::new(kind);
        let config = swarm_config(&problem, &cht, 9, 25, seed);
        let mut s = match init_swarm(&problem, &config, &cht, InitOptions::for_cht(&cht, 100_000)) {
            Ok(s) => s,
            Err(Error::InitializationFailure { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        for _ in 0..25 {
            s.step().map_err(|e| TestCaseError::fail(e.to_string()))?;
            for p in s.particles() {
                for (v, m) in p.velocity.iter().zip(&vmax) {
                    prop_assert!(v.abs() <= *m, "{kind}: |{v}| > {m}");
                }
            }
        }
        Ok(())
    }))
}

fn swarm_config(problem: &Problem, cht: &ChtConfig, size: usize, steps: usize, seed: u64) -> SwarmConfig {
    SwarmConfig {
        size,
        steps,
        topology: TopologyKind::Ring { neighbors: 2 },
        seed,
        tolerances: Tolerances::DEFAULT,
        rec: cht.rec.map(|r| r.resolve(problem, 1e-12).unwrap()),
    }
}

fn graded_point() -> impl Strategy<Value = EvaluatedPoint> {
    // Few distinct values so that ties are frequent.
    (0u8..4, 0u8..4).prop_map(|(f, v)| {
        let cv = [0.0, 0.5, 1.0, 1e-13][v as usize];
        EvaluatedPoint {
            position: vec![],
            conflict: f as f64 - 1.5,
            ineq_violations: vec![cv],
            eq_violations: vec![],
            box_violations: vec![],
            cv,
            nac: usize::from(cv > 1e-12),
        }
    })
}

/// Independent oracle: rank key (infeasible, f if feasible else cv).
fn rank_key(p: &EvaluatedPoint, tol: Tolerances) -> (bool, f64) {
    let feasible = p.cv_terms_within(tol);
    (!feasible, if feasible { p.conflict } else { p.cv })
}

trait FeasibleOracle {
    fn cv_terms_within(&self, tol: Tolerances) -> bool;
}

impl FeasibleOracle for EvaluatedPoint {
    fn cv_terms_within(&self, tol: Tolerances) -> bool {
        self.ineq_violations.iter().all(|&v| v <= tol.ineq)
            && self.box_violations.iter().all(|&v| v <= tol.ineq)
            && self.eq_violations.iter().all(|&v| v <= tol.eq)
    }
}

/// The priority comparator is the lexicographic order on the rank key and is transitive.
pub fn comparator_order(cases: u32) -> Outcome {
    let tol = Tolerances::DEFAULT;
    report(runner(cases).run(&(graded_point(), graded_point(), graded_point()), |(a, b, c)| {
        let beats = |x: &EvaluatedPoint, y: &EvaluatedPoint| compare_priority(x, y, tol).second_wins();
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c), (&b, &a)] {
            let expected = rank_key(y, tol).partial_cmp(&rank_key(x, tol)) == Some(std::cmp::Ordering::Less);
            prop_assert_eq!(beats(x, y), expected);
        }
        // y beats x and z beats y => z beats x
        if beats(&a, &b) && beats(&b, &c) {
            prop_assert!(beats(&a, &c));
        }
        // not-worse is transitive too
        if !beats(&b, &a) && !beats(&c, &b) {
            prop_assert!(!beats(&c, &a));
        }
        Ok(())
    }))
}

/// With prob = 1 the probabilistic rules give the priority verdict on any stream.
pub fn probabilistic_prob_one(cases: u32) -> Outcome {
    let tol = Tolerances::DEFAULT;
    report(runner(cases).run(&(graded_point(), graded_point(), any::<u64>()), |(a, b, seed)| {
        let mut rng = seeded(seed);
        let p = compare_probabilistic(&a, &b, tol, &mut rng, 1.0);
        prop_assert_eq!(p, compare_priority(&a, &b, tol));

        let mut pfppr = ChtConfig::new(ChtKind::Pfppr);
        pfppr.prob = 1.0;
        let pfpr = ChtConfig::new(ChtKind::Pfpr);
        let mut m1 = Some(a.clone());
        let mut m2 = Some(a.clone());
        let r1 = update_pbest(&pfppr, &mut m1, &b, tol, &mut seeded(seed));
        let r2 = update_pbest(&pfpr, &mut m2, &b, tol, &mut seeded(seed));
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(m1, m2);
        Ok(())
    }))
}

/// Penalized conflict never falls below f; the penalty is positive exactly when cv is.
pub fn penalty_bounds(cases: u32) -> Outcome {
    let violation = prop_oneof![Just(0.0), (-100.0f64..3.0).prop_map(|e| 10f64.powf(e))];
    report(runner(cases).run(
        &(
            -1e6f64..1e6,
            proptest::collection::vec(violation.clone(), 0..5),
            proptest::collection::vec(violation.clone(), 0..5),
            proptest::collection::vec(violation, 0..5),
            any::<bool>(),
        ),
        |(f, ineq, eq, bx, switch)| {
            let cv = ineq.iter().chain(&eq).chain(&bx).sum::<f64>();
            let p = EvaluatedPoint {
                position: vec![],
                conflict: f,
                ineq_violations: ineq,
                eq_violations: eq,
                box_violations: bx,
                cv,
                nac: 0,
            };
            let fp = penalized_conflict(&p, 1e6, 2.0, switch);
            prop_assert!(fp >= f);
            let pen = cht::penalty(&p, 1e6, 2.0, switch);
            prop_assert_eq!(pen > 0.0, cv > 0.0);
            if cv == 0.0 {
                prop_assert_eq!(fp, f);
            }
            Ok(())
        },
    ))
}

/// The linear schedule first reaches the final tolerance at ceil(0.8 t_max).
pub fn rec_switch_step(cases: u32) -> Outcome {
    report(runner(cases).run(&(1usize..50_000, 1e-6f64..1e3), |(t_max, initial)| {
        let s = RecSchedule::new(initial, 1e-12, 0.8, Decrease::Linear).unwrap();
        let switch = (4 * t_max).div_ceil(5).max(1);
        prop_assert_eq!(s.switch_step(t_max), switch);
        prop_assert_eq!(s.tolerance_at(switch, t_max), 1e-12);
        if switch > 1 {
            prop_assert!(s.tolerance_at(switch - 1, t_max) > 1e-12);
            prop_assert_eq!(s.tolerance_at(1, t_max), initial);
        }
        Ok(())
    }))
}

/// Discrete dimensions of the mixed pressure vessel hold exact grid values throughout a run.
pub fn discrete_grid(cases: u32) -> Outcome {
    let problem = get_problem("pressure-vessel-mixed").unwrap().problem;
    let on_grid = |v: f64| (v / 0.0625).fract() == 0.0;
    report(runner(cases).run(&(kind_strategy(), any::<u64>()), |(kind, seed)| {
        let cht = ChtConfig::new(kind);
        let config = swarm_config(&problem, &cht, 6, 15, seed);
        let mut s = init_swarm(&problem, &config, &cht, InitOptions::for_cht(&cht, 100_000))
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        for step in 0..=15 {
            if step > 0 {
                s.step().map_err(|e| TestCaseError::fail(e.to_string()))?;
            }
            for p in s.particles() {
                prop_assert!(on_grid(p.position()[0]) && on_grid(p.position()[1]), "{kind} {:?}", p.position());
                if let Some(b) = &p.pbest {
                    prop_assert!(on_grid(b.position[0]) && on_grid(b.position[1]));
                }
            }
        }
        Ok(())
    }))
}

/// Two runs with the same configuration and seed agree bit for bit.
pub fn rerun_determinism(cases: u32) -> Outcome {
    let names = ["g06", "g08", "g11", "spring", "pressure-vessel-mixed"];
    report(runner(cases).run(
        &(0usize..names.len(), kind_strategy(), any::<u64>(), 0usize..4),
        |(p, kind, seed, run)| {
            let mut c = ExperimentConfig::new(names[p], ChtConfig::new(kind), 2, 8, 20, 1).with_seed(seed);
            c.max_init_attempts = 100_000;
            let a = run_single(&c, run).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let b = run_single(&c, run).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let bits = |r: &RunResult| {
                r.best.as_ref().map(|b| {
                    (b.position.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), b.conflict.to_bits(), b.cv.to_bits())
                })
            };
            prop_assert_eq!(bits(&a), bits(&b));
            prop_assert_eq!(a.evaluations, b.evaluations);
            prop_assert_eq!(a.init_attempts, b.init_attempts);
            Ok(())
        },
    ))
}
