//! Engineering design problems, in the formulations of Hu, Eberhart & Shi,
//! "Engineering optimization with particle swarm" (IEEE SIS 2003).

use std::f64::consts::PI;

use crate::problem::Problem;

fn pressure_vessel_objective(x: &[f64]) -> f64 {
    0.6224 * x[0] * x[2] * x[3] + 1.7781 * x[1] * x[2] * x[2] + 3.1661 * x[0] * x[0] * x[3] + 19.84 * x[0] * x[0] * x[2]
}

fn pressure_vessel(name: &str, discrete: bool, best_known: f64) -> Problem {
    // Shell and head thicknesses x1, x2; inner radius x3; length x4.
    // The length limit x4 <= 240 is implied by the box.
    let mut b = Problem::builder(name, vec![0.0, 0.0, 10.0, 10.0], vec![99.0, 99.0, 200.0, 200.0])
        .objective(pressure_vessel_objective)
        .inequality(|x| -x[0] + 0.0193 * x[2])
        .inequality(|x| -x[1] + 0.00954 * x[2])
        .inequality(|x| -PI * x[2] * x[2] * x[3] - 4.0 / 3.0 * PI * x[2].powi(3) + 1_296_000.0)
        .known_optimum(best_known);
    if discrete {
        b = b.discrete(0, 0.0625).discrete(1, 0.0625);
    }
    b.build().expect("pressure vessel definition is valid")
}

pub fn pressure_vessel_mixed() -> Problem {
    pressure_vessel("pressure-vessel-mixed", true, 6059.714335)
}

pub fn pressure_vessel_continuous() -> Problem {
    pressure_vessel("pressure-vessel-continuous", false, 5885.332774)
}

const WB_P: f64 = 6000.0;
const WB_L: f64 = 14.0;
const WB_E: f64 = 30e6;
const WB_G: f64 = 12e6;

fn wb_tau(x: &[f64]) -> f64 {
    let (h, l, t) = (x[0], x[1], x[2]);
    let tau_p = WB_P / (2f64.sqrt() * h * l);
    let m = WB_P * (WB_L + l / 2.0);
    let r = (l * l / 4.0 + ((h + t) / 2.0).powi(2)).sqrt();
    let j = 2.0 * (2f64.sqrt() * h * l * (l * l / 12.0 + ((h + t) / 2.0).powi(2)));
    let tau_pp = m * r / j;
    (tau_p * tau_p + 2.0 * tau_p * tau_pp * l / (2.0 * r) + tau_pp * tau_pp).sqrt()
}

fn wb_buckling_load(x: &[f64]) -> f64 {
    let (t, b) = (x[2], x[3]);
    4.013 * WB_E * (t * t * b.powi(6) / 36.0).sqrt() / (WB_L * WB_L)
        * (1.0 - t / (2.0 * WB_L) * (WB_E / (4.0 * WB_G)).sqrt())
}

/// Weld thickness h, weld length l, bar height t, bar thickness b.
pub fn welded_beam() -> Problem {
    Problem::builder("welded-beam", vec![0.1, 0.1, 0.1, 0.1], vec![2.0, 10.0, 10.0, 2.0])
        .objective(|x| 1.10471 * x[0] * x[0] * x[1] + 0.04811 * x[2] * x[3] * (14.0 + x[1]))
        .inequality(|x| wb_tau(x) - 13_600.0)
        .inequality(|x| 6.0 * WB_P * WB_L / (x[3] * x[2] * x[2]) - 30_000.0)
        .inequality(|x| x[0] - x[3])
        .inequality(|x| 0.10471 * x[0] * x[0] + 0.04811 * x[2] * x[3] * (14.0 + x[1]) - 5.0)
        .inequality(|x| 0.125 - x[0])
        .inequality(|x| 4.0 * WB_P * WB_L.powi(3) / (WB_E * x[2].powi(3) * x[3]) - 0.25)
        .inequality(|x| WB_P - wb_buckling_load(x))
        .known_optimum(1.724852)
        .build()
        .expect("welded beam definition is valid")
}

/// Wire diameter d, coil diameter D, number of active coils N.
pub fn spring() -> Problem {
    Problem::builder("spring", vec![0.05, 0.25, 2.0], vec![2.0, 1.3, 15.0])
        .objective(|x| (x[2] + 2.0) * x[1] * x[0] * x[0])
        .inequality(|x| 1.0 - x[1].powi(3) * x[2] / (71_785.0 * x[0].powi(4)))
        .inequality(|x| {
            let (d, dd) = (x[0], x[1]);
            (4.0 * dd * dd - d * dd) / (12_566.0 * (dd * d.powi(3) - d.powi(4))) + 1.0 / (5108.0 * d * d) - 1.0
        })
        .inequality(|x| 1.0 - 140.45 * x[0] / (x[1] * x[1] * x[2]))
        .inequality(|x| (x[0] + x[1]) / 1.5 - 1.0)
        .known_optimum(0.012665)
        .build()
        .expect("spring definition is valid")
}

/// Violation-style encoding of `lo <= value <= hi` as a single `g <= 0`.
pub(crate) fn within(value: f64, lo: f64, hi: f64) -> f64 {
    (lo - value).max(value - hi)
}

/// Himmelblau's nonlinear problem with the 0.00026 coefficient on `x1 x4`
/// used by Hu et al. (best known -31025.56142); the g-suite's g04 uses 0.0006262.
pub fn himmelblau() -> Problem {
    himmelblau_variant("himmelblau", 0.00026, -31025.561420)
}

pub(crate) fn himmelblau_variant(name: &str, x1x4_coefficient: f64, best_known: f64) -> Problem {
    Problem::builder(name, vec![78.0, 33.0, 27.0, 27.0, 27.0], vec![102.0, 45.0, 45.0, 45.0, 45.0])
        .objective(|x| 5.3578547 * x[2] * x[2] + 0.8356891 * x[0] * x[4] + 37.293239 * x[0] - 40_792.141)
        .inequality(move |x| {
            let g = 85.334407 + 0.0056858 * x[1] * x[4] + x1x4_coefficient * x[0] * x[3] - 0.0022053 * x[2] * x[4];
            within(g, 0.0, 92.0)
        })
        .inequality(|x| {
            let g = 80.51249 + 0.0071317 * x[1] * x[4] + 0.0029955 * x[0] * x[1] + 0.0021813 * x[2] * x[2];
            within(g, 90.0, 110.0)
        })
        .inequality(|x| {
            let g = 9.300961 + 0.0047026 * x[2] * x[4] + 0.0012547 * x[0] * x[2] + 0.0019085 * x[2] * x[3];
            within(g, 20.0, 25.0)
        })
        .known_optimum(best_known)
        .build()
        .expect("himmelblau definition is valid")
}
