//! The particle swarm: initialization, synchronous steps and memories.

pub mod coefficients;
pub mod topology;
pub mod update;

use serde::{Deserialize, Serialize};

use crate::cht::{repair_bisection, update_pbest, ChtConfig};
use crate::error::{Error, Result};
use crate::problem::{EvaluatedPoint, Problem, Tolerances};
use crate::rec::RecSchedule;
use crate::rng::{seeded, SwarmRng, UniformSource};

pub use coefficients::{assign_coefficients, CoefficientSet, SUB_SWARM_PRESETS};
pub use topology::{Topology, TopologyKind};
pub use update::{clamp_velocity, position_update, velocity_update};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwarmConfig {
    pub size: usize,
    pub steps: usize,
    pub topology: TopologyKind,
    pub seed: u64,
    pub tolerances: Tolerances,
    /// Equality tolerance schedule; overrides `tolerances.eq` when present.
    pub rec: Option<RecSchedule>,
}

impl SwarmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.size < 3 {
            return Err(Error::InvalidConfig(format!("swarm needs at least 3 particles, got {}", self.size)));
        }
        if self.steps == 0 {
            return Err(Error::InvalidConfig("steps must be at least 1".into()));
        }
        Tolerances::new(self.tolerances.ineq, self.tolerances.eq)?;
        Topology::new(self.topology, self.size)?;
        Ok(())
    }

    /// Tolerances in force at step `t`; step 0 is initialization.
    pub fn tolerances_at(&self, t: usize) -> Tolerances {
        match &self.rec {
            Some(s) => Tolerances { ineq: self.tolerances.ineq, eq: s.tolerance_at(t, self.steps) },
            None => self.tolerances,
        }
    }

    pub fn final_tolerances(&self) -> Tolerances {
        self.tolerances_at(self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InitOptions {
    pub require_feasible: bool,
    /// Sampling attempts allowed per particle when feasibility is required.
    pub max_attempts: usize,
}

impl InitOptions {
    pub const DEFAULT_MAX_ATTEMPTS: usize = 1_000_000;

    pub fn for_cht(cht: &ChtConfig, max_attempts: usize) -> Self {
        InitOptions { require_feasible: cht.kind.requires_feasible_init(), max_attempts }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub index: usize,
    pub velocity: Vec<f64>,
    pub coefficients: CoefficientSet,
    /// Evaluation of the current position.
    pub current: EvaluatedPoint,
    pub pbest: Option<EvaluatedPoint>,
}

impl Particle {
    pub fn position(&self) -> &[f64] {
        &self.current.position
    }
}

#[derive(Clone)]
pub struct Swarm<R: UniformSource = SwarmRng> {
    problem: Problem,
    cht: ChtConfig,
    config: SwarmConfig,
    topology: Topology,
    vmax: Vec<f64>,
    particles: Vec<Particle>,
    rng: R,
    step: usize,
    evaluations: usize,
    init_attempts: usize,
    repair_extra: usize,
}

/// Builds a swarm seeded from `config.seed`.
pub fn init_swarm(problem: &Problem, config: &SwarmConfig, cht: &ChtConfig, options: InitOptions) -> Result<Swarm> {
    Swarm::init(problem, config, cht, options, seeded(config.seed))
}

impl<R: UniformSource> Swarm<R> {
    /// Samples every particle uniformly in the box, one draw per dimension,
    /// resampling until feasible when `options.require_feasible` is set.
    pub fn init(
        problem: &Problem,
        config: &SwarmConfig,
        cht: &ChtConfig,
        options: InitOptions,
        mut rng: R,
    ) -> Result<Self> {
        config.validate()?;
        cht.validate()?;
        if problem.dimension() == 0 {
            return Err(Error::InvalidConfig("problem has no dimensions".into()));
        }
        let topology = Topology::new(config.topology, config.size)?;
        let tolerances = config.tolerances_at(0);
        let (lower, upper) = (problem.lower(), problem.upper());
        let n = problem.dimension();
        let max_attempts = options.max_attempts.max(1);

        let mut particles = Vec::with_capacity(config.size);
        let mut init_attempts = 0;
        let mut x = vec![0.0; n];
        for index in 0..config.size {
            let mut attempts = 0;
            let current = loop {
                for (j, xj) in x.iter_mut().enumerate() {
                    *xj = lower[j] + rng.next_unit() * (upper[j] - lower[j]);
                }
                problem.snap(&mut x);
                let point = problem.evaluate(&x, tolerances)?;
                attempts += 1;
                init_attempts += 1;
                if !options.require_feasible || point.is_feasible(tolerances) {
                    break point;
                }
                if attempts >= max_attempts {
                    return Err(Error::InitializationFailure { particle: index, attempts });
                }
            };
            let pbest =
                (cht.kind != crate::cht::ChtKind::Pf || current.is_feasible(tolerances)).then(|| current.clone());
            particles.push(Particle {
                index,
                velocity: vec![0.0; n],
                coefficients: assign_coefficients(index, config.size),
                current,
                pbest,
            });
        }

        Ok(Swarm {
            problem: problem.clone(),
            cht: *cht,
            config: config.clone(),
            topology,
            vmax: problem.velocity_limits(),
            particles,
            rng,
            step: 0,
            evaluations: config.size,
            init_attempts,
            repair_extra: 0,
        })
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn config(&self) -> &SwarmConfig {
        &self.config
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    /// Steps completed so far.
    pub fn steps_done(&self) -> usize {
        self.step
    }

    /// Tolerances used by the most recent step (or initialization).
    pub fn tolerances(&self) -> Tolerances {
        self.config.tolerances_at(self.step)
    }

    /// Evaluations of accepted initial positions plus every evaluation made while stepping.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// All sampled initial positions, including rejected ones.
    pub fn init_attempts(&self) -> usize {
        self.init_attempts
    }

    /// Evaluations spent by repair beyond one per particle per step.
    pub fn repair_extra(&self) -> usize {
        self.repair_extra
    }

    /// Best memory in the neighbourhood of `i` under the CHT's plain
    /// comparator, judged at `tolerances`.
    pub fn neighborhood_best(&self, i: usize, tolerances: Tolerances) -> Result<&EvaluatedPoint> {
        let candidates = self.topology.neighborhood(i).iter().filter_map(|&j| self.particles[j].pbest.as_ref());
        self.cht
            .plain_comparator()
            .best_of(candidates, tolerances)
            .map(|(_, p)| p)
            .ok_or_else(|| Error::ContractViolation(format!("particle {i} has no memory in its neighbourhood")))
    }

    /// Best memory of the whole swarm under the CHT's plain comparator.
    pub fn best(&self, tolerances: Tolerances) -> Option<(usize, &EvaluatedPoint)> {
        let mut indexed = self.particles.iter().filter_map(|p| p.pbest.as_ref().map(|b| (p.index, b)));
        let cmp = self.cht.plain_comparator();
        let mut best = indexed.next()?;
        for (i, b) in indexed {
            if cmp.compare(best.1, b, tolerances).second_wins() {
                best = (i, b);
            }
        }
        Some(best)
    }

    /// One synchronous step: every neighbourhood best is read from the
    /// memories left by the previous step, then each particle in index order
    /// moves, is evaluated and updates its memory.
    pub fn step(&mut self) -> Result<()> {
        let t = self.step + 1;
        let tolerances = self.config.tolerances_at(t);
        let lbests: Vec<Vec<f64>> = (0..self.particles.len())
            .map(|i| self.neighborhood_best(i, tolerances).map(|p| p.position.clone()))
            .collect::<Result<_>>()?;
        let repair = self.cht.kind.repair_variant();

        for (particle, lbest) in self.particles.iter_mut().zip(&lbests) {
            let pbest_pos = particle.pbest.as_ref().map_or(&particle.current.position, |p| &p.position);
            let v = velocity_update(
                &particle.current.position,
                &particle.velocity,
                pbest_pos,
                lbest,
                particle.coefficients,
                &self.vmax,
                &mut self.rng,
            );
            match repair {
                Some(variant) => {
                    let out = repair_bisection(
                        &self.problem,
                        &particle.current,
                        &v,
                        tolerances,
                        variant,
                        &mut self.rng,
                        self.cht.max_repair_trials,
                    )?;
                    self.evaluations += out.evaluations;
                    self.repair_extra += out.evaluations.saturating_sub(1);
                    particle.current = out.point;
                    particle.velocity = out.velocity;
                }
                None => {
                    let x = position_update(&particle.current.position, &v, &self.problem);
                    particle.current = self.problem.evaluate(&x, tolerances)?;
                    self.evaluations += 1;
                    particle.velocity = v;
                }
            }
            update_pbest(&self.cht, &mut particle.pbest, &particle.current, tolerances, &mut self.rng);
        }
        self.step = t;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cht::ChtKind;
    use crate::rng::ScriptedUnits;

    fn toy1() -> Problem {
        Problem::builder("toy1", vec![-2.0, -2.0], vec![2.0, 2.0])
            .objective(|x| x[0] + x[1])
            .inequality(|x| x[0] + x[1] - 1.0)
            .build()
            .unwrap()
    }

    fn config(size: usize, steps: usize, seed: u64) -> SwarmConfig {
        SwarmConfig {
            size,
            steps,
            topology: TopologyKind::Ring { neighbors: 2 },
            seed,
            tolerances: Tolerances::DEFAULT,
            rec: None,
        }
    }

    #[test]
    fn feasible_init_satisfies_constraint() {
        let cht = ChtConfig::new(ChtKind::Pf);
        let s = init_swarm(&toy1(), &config(20, 10, 4), &cht, InitOptions::for_cht(&cht, 1000)).unwrap();
        assert!(s.init_attempts() >= 20);
        for p in s.particles() {
            assert!(p.position()[0] + p.position()[1] - 1.0 <= 1e-12);
            assert!(p.pbest.is_some());
            assert!(p.velocity.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn infeasible_problem_fails_init() {
        let p = Problem::builder("none", vec![0.0], vec![1.0])
            .objective(|x| x[0])
            .equality(|x| x[0] - 0.5)
            .build()
            .unwrap();
        let cht = ChtConfig::new(ChtKind::Bm);
        let err = init_swarm(&p, &config(5, 1, 0), &cht, InitOptions::for_cht(&cht, 100)).err().unwrap();
        assert!(matches!(err, Error::InitializationFailure { particle: 0, attempts: 100 }));
    }

    #[test]
    fn forced_zero_draws_are_a_fixed_point() {
        let cht = ChtConfig::new(ChtKind::Pfpr);
        let opts = InitOptions::for_cht(&cht, 10);
        let mut s = Swarm::init(&toy1(), &config(6, 5, 0), &cht, opts, ScriptedUnits::constant(0.0)).unwrap();
        let before: Vec<Particle> = s.particles().to_vec();
        for _ in 0..5 {
            s.step().unwrap();
        }
        assert_eq!(s.particles(), &before[..]);
    }

    #[test]
    fn evaluation_count_without_repair() {
        let cht = ChtConfig::new(ChtKind::Pfpr);
        let mut s = init_swarm(&toy1(), &config(10, 7, 1), &cht, InitOptions::for_cht(&cht, 10)).unwrap();
        for _ in 0..7 {
            s.step().unwrap();
        }
        assert_eq!(s.evaluations(), 10 * (7 + 1));
        assert_eq!(s.repair_extra(), 0);
    }

    #[test]
    fn repair_accounting_identity() {
        let cht = ChtConfig::new(ChtKind::Bm);
        let mut s = init_swarm(&toy1(), &config(10, 30, 2), &cht, InitOptions::for_cht(&cht, 1000)).unwrap();
        for _ in 0..30 {
            s.step().unwrap();
            for p in s.particles() {
                assert!(p.current.is_feasible(s.tolerances()));
            }
        }
        assert_eq!(s.evaluations(), 10 * 31 + s.repair_extra());
    }

    #[test]
    fn velocities_stay_clamped() {
        for kind in ChtKind::ALL {
            let cht = ChtConfig::new(kind);
            let mut cfg = config(9, 40, 3);
            if kind.uses_rec() {
                cfg.rec = Some(cht.rec.unwrap().resolve(&toy1(), 1e-12).unwrap());
            }
            let mut s = init_swarm(&toy1(), &cfg, &cht, InitOptions::for_cht(&cht, 1000)).unwrap();
            for _ in 0..40 {
                s.step().unwrap();
                for p in s.particles() {
                    assert!(p.velocity.iter().all(|v| v.abs() <= 2.0), "{kind}");
                }
            }
        }
    }

    #[test]
    fn pf_memories_stay_feasible() {
        let cht = ChtConfig::new(ChtKind::Pf);
        let mut s = init_swarm(&toy1(), &config(12, 50, 5), &cht, InitOptions::for_cht(&cht, 1000)).unwrap();
        for _ in 0..50 {
            s.step().unwrap();
            for p in s.particles() {
                assert!(p.pbest.as_ref().unwrap().is_feasible(s.tolerances()));
            }
        }
    }

    #[test]
    fn wheel_hub_gathers_best() {
        let cht = ChtConfig::new(ChtKind::Pfpr);
        let mut cfg = config(7, 1, 11);
        cfg.topology = TopologyKind::Wheel { hub: 0 };
        let s = init_swarm(&toy1(), &cfg, &cht, InitOptions::for_cht(&cht, 10)).unwrap();
        let tol = s.tolerances();
        let (_, global) = s.best(tol).unwrap();
        assert_eq!(s.neighborhood_best(0, tol).unwrap(), global);
    }
}
