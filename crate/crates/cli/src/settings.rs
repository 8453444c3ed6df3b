use cpso::{ChtConfig, ChtKind, Decrease, ExperimentConfig, InitOptions, RecSpec, Tolerances};

pub const DEFAULT_NN: usize = 2;
pub const DEFAULT_PARTICLES: usize = 40;
pub const DEFAULT_RUNS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RecDecrease {
    Linear,
    Exp,
}

/// Experiment parameters as given by flags or a sweep file; unset values take defaults.
#[derive(Debug, Clone)]
pub struct Settings {
    pub problem: String,
    pub cht: ChtKind,
    pub steps: usize,
    pub nn: Option<usize>,
    pub particles: Option<usize>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub tol_ineq: Option<f64>,
    pub tol_eq: Option<f64>,
    pub rec_switch: Option<f64>,
    pub rec_decrease: Option<RecDecrease>,
    pub prob: Option<f64>,
    pub max_init_attempts: Option<usize>,
}

impl Settings {
    pub fn new(problem: String, cht: ChtKind, steps: usize) -> Self {
        Settings {
            problem,
            cht,
            steps,
            nn: None,
            particles: None,
            runs: None,
            seed: None,
            tol_ineq: None,
            tol_eq: None,
            rec_switch: None,
            rec_decrease: None,
            prob: None,
            max_init_attempts: None,
        }
    }

    /// Builds and validates the experiment; errors are operator mistakes.
    pub fn into_config(self) -> Result<ExperimentConfig, String> {
        cpso::get_problem(&self.problem).map_err(|e| e.to_string())?;
        let mut cht = ChtConfig::new(self.cht);
        if self.rec_switch.is_some() || self.rec_decrease.is_some() {
            let Some(rec) = cht.rec.as_mut() else {
                return Err(format!("rec_switch and rec_decrease apply only to +rec techniques, not {}", self.cht));
            };
            *rec = RecSpec {
                switch_fraction: self.rec_switch.unwrap_or(rec.switch_fraction),
                decrease: match self.rec_decrease {
                    Some(RecDecrease::Exp) => Decrease::Exponential { rate: Decrease::DEFAULT_RATE },
                    Some(RecDecrease::Linear) => Decrease::Linear,
                    None => rec.decrease,
                },
            };
            if !(rec.switch_fraction > 0.0 && rec.switch_fraction <= 1.0) {
                return Err(format!("rec_switch must lie in (0, 1], got {}", rec.switch_fraction));
            }
        }
        if let Some(prob) = self.prob {
            if !self.cht.is_probabilistic() {
                return Err(format!("prob applies only to probabilistic techniques, not {}", self.cht));
            }
            cht.prob = prob;
        }
        let nn = self.nn.unwrap_or(DEFAULT_NN);
        let particles = self.particles.unwrap_or(DEFAULT_PARTICLES);
        let runs = self.runs.unwrap_or(DEFAULT_RUNS);
        let mut config =
            ExperimentConfig::new(self.problem, cht, nn, particles, self.steps, runs).with_seed(self.seed.unwrap_or(0));
        let defaults = Tolerances::DEFAULT;
        config.tolerances = Tolerances::new(self.tol_ineq.unwrap_or(defaults.ineq), self.tol_eq.unwrap_or(defaults.eq))
            .map_err(|e| e.to_string())?;
        config.max_init_attempts = self.max_init_attempts.unwrap_or(InitOptions::DEFAULT_MAX_ATTEMPTS);
        if config.max_init_attempts == 0 {
            return Err("max_init_attempts must be at least 1".into());
        }
        config.validate().map_err(|e| e.to_string())?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_unset_values() {
        let c = Settings::new("g08".into(), ChtKind::Pfpr, 100).into_config().unwrap();
        assert_eq!((c.nn, c.particles, c.runs, c.master_seed), (DEFAULT_NN, DEFAULT_PARTICLES, DEFAULT_RUNS, 0));
        assert_eq!(c.tolerances, Tolerances::DEFAULT);
    }

    #[test]
    fn conflicting_options_are_rejected() {
        let mut s = Settings::new("g08".into(), ChtKind::Pfpr, 100);
        s.prob = Some(0.5);
        assert!(s.into_config().unwrap_err().contains("probabilistic"));
        let mut s = Settings::new("g08".into(), ChtKind::Apm, 100);
        s.rec_decrease = Some(RecDecrease::Exp);
        assert!(s.into_config().unwrap_err().contains("+rec"));
        let mut s = Settings::new("g08".into(), ChtKind::Pfpr, 100);
        s.nn = Some(40);
        assert!(s.into_config().is_err());
    }

    #[test]
    fn rec_options_reach_the_schedule() {
        let mut s = Settings::new("g11".into(), ChtKind::PfpprRec, 100);
        s.rec_switch = Some(0.5);
        s.rec_decrease = Some(RecDecrease::Exp);
        s.prob = Some(0.7);
        let c = s.into_config().unwrap();
        let rec = c.cht.rec.unwrap();
        assert_eq!(rec.switch_fraction, 0.5);
        assert_eq!(rec.decrease, Decrease::Exponential { rate: Decrease::DEFAULT_RATE });
        assert_eq!(c.cht.prob, 0.7);
    }
}
