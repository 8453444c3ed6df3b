use crate::error::{Error, Result};
use crate::problem::{Problem, Tolerances};
use crate::rng::{seeded, UniformSource};

/// Percentage of `samples` uniform draws from the box (discrete dimensions
/// snapped to their grid) that are feasible under `tolerances`.
pub fn estimate_feasibility_ratio(problem: &Problem, samples: usize, tolerances: Tolerances, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidConfig("feasibility estimate needs at least one sample".into()));
    }
    let mut rng = seeded(seed);
    let (lower, upper) = (problem.lower(), problem.upper());
    let mut x = vec![0.0; problem.dimension()];
    let mut feasible = 0usize;
    for _ in 0..samples {
        for (j, xj) in x.iter_mut().enumerate() {
            *xj = lower[j] + rng.next_unit() * (upper[j] - lower[j]);
        }
        problem.snap(&mut x);
        if problem.evaluate(&x, tolerances)?.is_feasible(tolerances) {
            feasible += 1;
        }
    }
    Ok(100.0 * feasible as f64 / samples as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy1() -> Problem {
        Problem::builder("toy1", vec![-2.0, -2.0], vec![2.0, 2.0])
            .objective(|x| x[0] + x[1])
            .inequality(|x| x[0] + x[1] - 1.0)
            .build()
            .unwrap()
    }

    #[test]
    fn toy1_matches_exact_area() {
        // Infeasible corner triangle above x1 + x2 = 1 has legs of length 3.
        let exact = 100.0 * (16.0 - 4.5) / 16.0;
        let n = 200_000;
        let p = exact / 100.0;
        let sigma = 100.0 * (p * (1.0 - p) / n as f64).sqrt();
        let est = estimate_feasibility_ratio(&toy1(), n, Tolerances::DEFAULT, 3).unwrap();
        assert!((est - exact).abs() < 3.0 * sigma, "{est} vs {exact}");
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let a = estimate_feasibility_ratio(&toy1(), 10_000, Tolerances::DEFAULT, 9).unwrap();
        let b = estimate_feasibility_ratio(&toy1(), 10_000, Tolerances::DEFAULT, 9).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn single_sample_is_all_or_nothing() {
        for seed in 0..20 {
            let r = estimate_feasibility_ratio(&toy1(), 1, Tolerances::DEFAULT, seed).unwrap();
            assert!(r == 0.0 || r == 100.0);
        }
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(estimate_feasibility_ratio(&toy1(), 0, Tolerances::DEFAULT, 0).is_err());
    }
}
