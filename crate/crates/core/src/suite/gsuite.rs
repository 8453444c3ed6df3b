//! The thirteen-problem g-suite in the form used by Runarsson & Yao,
//! "Stochastic ranking for constrained evolutionary optimization"
//! (IEEE TEC 4(3), 2000). Maximization problems are stored negated.

use std::f64::consts::PI;

use crate::problem::Problem;

use super::engineering::himmelblau_variant;

fn build(b: crate::problem::ProblemBuilder) -> Problem {
    b.build().expect("g-suite definition is valid")
}

pub fn g01() -> Problem {
    let mut upper = vec![1.0; 13];
    upper[9] = 100.0;
    upper[10] = 100.0;
    upper[11] = 100.0;
    build(
        Problem::builder("g01", vec![0.0; 13], upper)
            .objective(|x| {
                5.0 * x[..4].iter().sum::<f64>()
                    - 5.0 * x[..4].iter().map(|v| v * v).sum::<f64>()
                    - x[4..].iter().sum::<f64>()
            })
            .inequality(|x| 2.0 * x[0] + 2.0 * x[1] + x[9] + x[10] - 10.0)
            .inequality(|x| 2.0 * x[0] + 2.0 * x[2] + x[9] + x[11] - 10.0)
            .inequality(|x| 2.0 * x[1] + 2.0 * x[2] + x[10] + x[11] - 10.0)
            .inequality(|x| -8.0 * x[0] + x[9])
            .inequality(|x| -8.0 * x[1] + x[10])
            .inequality(|x| -8.0 * x[2] + x[11])
            .inequality(|x| -2.0 * x[3] - x[4] + x[9])
            .inequality(|x| -2.0 * x[5] - x[6] + x[10])
            .inequality(|x| -2.0 * x[7] - x[8] + x[11])
            .known_optimum(-15.0),
    )
}

pub fn g02() -> Problem {
    const N: usize = 20;
    build(
        Problem::builder("g02", vec![0.0; N], vec![10.0; N])
            .objective(|x| {
                let s4: f64 = x.iter().map(|v| v.cos().powi(4)).sum();
                let p2: f64 = x.iter().map(|v| v.cos().powi(2)).product();
                let den: f64 = x.iter().enumerate().map(|(i, v)| (i + 1) as f64 * v * v).sum::<f64>().sqrt();
                -((s4 - 2.0 * p2).abs() / den)
            })
            .inequality(|x| 0.75 - x.iter().product::<f64>())
            .inequality(|x| x.iter().sum::<f64>() - 7.5 * N as f64)
            .known_optimum(-0.803619),
    )
}

pub fn g03() -> Problem {
    const N: usize = 10;
    build(
        Problem::builder("g03", vec![0.0; N], vec![1.0; N])
            .objective(|x| -(N as f64).sqrt().powi(N as i32) * x.iter().product::<f64>())
            .equality(|x| x.iter().map(|v| v * v).sum::<f64>() - 1.0)
            .known_optimum(-1.0),
    )
}

pub fn g04() -> Problem {
    himmelblau_variant("g04", 0.0006262, -30665.539)
}

/// The pair `x4 - x3 - 0.55 <= 0`, `x3 - x4 - 0.55 <= 0` is held as the
/// single constraint `|x4 - x3| - 0.55 <= 0`.
pub fn g05() -> Problem {
    build(
        Problem::builder("g05", vec![0.0, 0.0, -0.55, -0.55], vec![1200.0, 1200.0, 0.55, 0.55])
            .objective(|x| 3.0 * x[0] + 1e-6 * x[0].powi(3) + 2.0 * x[1] + 2e-6 / 3.0 * x[1].powi(3))
            .inequality(|x| (x[3] - x[2]).abs() - 0.55)
            .equality(|x| 1000.0 * ((-x[2] - 0.25).sin() + (-x[3] - 0.25).sin()) + 894.8 - x[0])
            .equality(|x| 1000.0 * ((x[2] - 0.25).sin() + (x[2] - x[3] - 0.25).sin()) + 894.8 - x[1])
            .equality(|x| 1000.0 * ((x[3] - 0.25).sin() + (x[3] - x[2] - 0.25).sin()) + 1294.8)
            .known_optimum(5126.498),
    )
}

pub fn g06() -> Problem {
    build(
        Problem::builder("g06", vec![13.0, 0.0], vec![100.0, 100.0])
            .objective(|x| (x[0] - 10.0).powi(3) + (x[1] - 20.0).powi(3))
            .inequality(|x| -(x[0] - 5.0).powi(2) - (x[1] - 5.0).powi(2) + 100.0)
            .inequality(|x| (x[0] - 6.0).powi(2) + (x[1] - 5.0).powi(2) - 82.81)
            .known_optimum(-6961.81388),
    )
}

pub fn g07() -> Problem {
    build(
        Problem::builder("g07", vec![-10.0; 10], vec![10.0; 10])
            .objective(|x| {
                x[0] * x[0] + x[1] * x[1] + x[0] * x[1] - 14.0 * x[0] - 16.0 * x[1]
                    + (x[2] - 10.0).powi(2)
                    + 4.0 * (x[3] - 5.0).powi(2)
                    + (x[4] - 3.0).powi(2)
                    + 2.0 * (x[5] - 1.0).powi(2)
                    + 5.0 * x[6] * x[6]
                    + 7.0 * (x[7] - 11.0).powi(2)
                    + 2.0 * (x[8] - 10.0).powi(2)
                    + (x[9] - 7.0).powi(2)
                    + 45.0
            })
            .inequality(|x| -105.0 + 4.0 * x[0] + 5.0 * x[1] - 3.0 * x[6] + 9.0 * x[7])
            .inequality(|x| 10.0 * x[0] - 8.0 * x[1] - 17.0 * x[6] + 2.0 * x[7])
            .inequality(|x| -8.0 * x[0] + 2.0 * x[1] + 5.0 * x[8] - 2.0 * x[9] - 12.0)
            .inequality(|x| {
                3.0 * (x[0] - 2.0).powi(2) + 4.0 * (x[1] - 3.0).powi(2) + 2.0 * x[2] * x[2] - 7.0 * x[3] - 120.0
            })
            .inequality(|x| 5.0 * x[0] * x[0] + 8.0 * x[1] + (x[2] - 6.0).powi(2) - 2.0 * x[3] - 40.0)
            .inequality(|x| x[0] * x[0] + 2.0 * (x[1] - 2.0).powi(2) - 2.0 * x[0] * x[1] + 14.0 * x[4] - 6.0 * x[5])
            .inequality(|x| 0.5 * (x[0] - 8.0).powi(2) + 2.0 * (x[1] - 4.0).powi(2) + 3.0 * x[4] * x[4] - x[5] - 30.0)
            .inequality(|x| -3.0 * x[0] + 6.0 * x[1] + 12.0 * (x[8] - 8.0).powi(2) - 7.0 * x[9])
            .known_optimum(24.306209),
    )
}

pub fn g08() -> Problem {
    build(
        Problem::builder("g08", vec![0.0, 0.0], vec![10.0, 10.0])
            .objective(|x| {
                -((2.0 * PI * x[0]).sin().powi(3) * (2.0 * PI * x[1]).sin()) / (x[0].powi(3) * (x[0] + x[1]))
            })
            .inequality(|x| x[0] * x[0] - x[1] + 1.0)
            .inequality(|x| 1.0 - x[0] + (x[1] - 4.0).powi(2))
            .known_optimum(-0.095825),
    )
}

pub fn g09() -> Problem {
    build(
        Problem::builder("g09", vec![-10.0; 7], vec![10.0; 7])
            .objective(|x| {
                (x[0] - 10.0).powi(2)
                    + 5.0 * (x[1] - 12.0).powi(2)
                    + x[2].powi(4)
                    + 3.0 * (x[3] - 11.0).powi(2)
                    + 10.0 * x[4].powi(6)
                    + 7.0 * x[5] * x[5]
                    + x[6].powi(4)
                    - 4.0 * x[5] * x[6]
                    - 10.0 * x[5]
                    - 8.0 * x[6]
            })
            .inequality(|x| -127.0 + 2.0 * x[0] * x[0] + 3.0 * x[1].powi(4) + x[2] + 4.0 * x[3] * x[3] + 5.0 * x[4])
            .inequality(|x| -282.0 + 7.0 * x[0] + 3.0 * x[1] + 10.0 * x[2] * x[2] + x[3] - x[4])
            .inequality(|x| -196.0 + 23.0 * x[0] + x[1] * x[1] + 6.0 * x[5] * x[5] - 8.0 * x[6])
            .inequality(|x| {
                4.0 * x[0] * x[0] + x[1] * x[1] - 3.0 * x[0] * x[1] + 2.0 * x[2] * x[2] + 5.0 * x[5] - 11.0 * x[6]
            })
            .known_optimum(680.630057),
    )
}

pub fn g10() -> Problem {
    build(
        Problem::builder(
            "g10",
            vec![100.0, 1000.0, 1000.0, 10.0, 10.0, 10.0, 10.0, 10.0],
            vec![10000.0, 10000.0, 10000.0, 1000.0, 1000.0, 1000.0, 1000.0, 1000.0],
        )
        .objective(|x| x[0] + x[1] + x[2])
        .inequality(|x| -1.0 + 0.0025 * (x[3] + x[5]))
        .inequality(|x| -1.0 + 0.0025 * (x[4] + x[6] - x[3]))
        .inequality(|x| -1.0 + 0.01 * (x[7] - x[4]))
        .inequality(|x| -x[0] * x[5] + 833.33252 * x[3] + 100.0 * x[0] - 83333.333)
        .inequality(|x| -x[1] * x[6] + 1250.0 * x[4] + x[1] * x[3] - 1250.0 * x[3])
        .inequality(|x| -x[2] * x[7] + 1_250_000.0 + x[2] * x[4] - 2500.0 * x[4])
        .known_optimum(7049.25),
    )
}

pub fn g11() -> Problem {
    build(
        Problem::builder("g11", vec![-1.0, -1.0], vec![1.0, 1.0])
            .objective(|x| x[0] * x[0] + (x[1] - 1.0).powi(2))
            .equality(|x| x[1] - x[0] * x[0])
            .known_optimum(0.75),
    )
}

/// Squared distance from `x` to the nearest sphere centre `(p, q, r)`,
/// `p, q, r in 1..=9`, minus the squared radius 0.0625.
///
/// The 729 disjoint spheres form one constraint: a point is feasible when it
/// lies in any of them, and its violation is the smallest over all spheres.
/// Distance is separable, so the nearest centre is found per coordinate.
pub fn g12_sphere_gap(x: &[f64]) -> f64 {
    x.iter()
        .map(|&v| {
            let c = v.round().clamp(1.0, 9.0);
            (v - c) * (v - c)
        })
        .sum::<f64>()
        - 0.0625
}

pub fn g12() -> Problem {
    build(
        Problem::builder("g12", vec![0.0; 3], vec![10.0; 3])
            .objective(|x| -(100.0 - (x[0] - 5.0).powi(2) - (x[1] - 5.0).powi(2) - (x[2] - 5.0).powi(2)) / 100.0)
            .inequality(g12_sphere_gap)
            .known_optimum(-1.0),
    )
}

pub fn g13() -> Problem {
    build(
        Problem::builder("g13", vec![-2.3, -2.3, -3.2, -3.2, -3.2], vec![2.3, 2.3, 3.2, 3.2, 3.2])
            .objective(|x| x.iter().product::<f64>().exp())
            .equality(|x| x.iter().map(|v| v * v).sum::<f64>() - 10.0)
            .equality(|x| x[1] * x[2] - 5.0 * x[3] * x[4])
            .equality(|x| x[0].powi(3) + x[1].powi(3) + 1.0)
            .known_optimum(0.053950),
    )
}
