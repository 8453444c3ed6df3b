use crate::problem::Problem;
use crate::rng::UniformSource;

use super::coefficients::CoefficientSet;

pub fn clamp_velocity(v: &mut [f64], vmax: &[f64]) {
    for (vj, &m) in v.iter_mut().zip(vmax) {
        *vj = vj.clamp(-m, m);
    }
}

/// `w v + iw U1 (pbest - x) + sw U2 (lbest - x)`, clamped to `vmax`.
///
/// Draws two uniforms per dimension, `U1` before `U2`.
pub fn velocity_update<R: UniformSource + ?Sized>(
    x: &[f64],
    v: &[f64],
    pbest: &[f64],
    lbest: &[f64],
    coefficients: CoefficientSet,
    vmax: &[f64],
    rng: &mut R,
) -> Vec<f64> {
    let CoefficientSet { w, iw, sw } = coefficients;
    let mut out: Vec<f64> = (0..x.len())
        .map(|j| {
            let u1 = rng.next_unit();
            let u2 = rng.next_unit();
            w * v[j] + iw * u1 * (pbest[j] - x[j]) + sw * u2 * (lbest[j] - x[j])
        })
        .collect();
    clamp_velocity(&mut out, vmax);
    out
}

/// `x + v`, with discrete dimensions snapped to their grid.
pub fn position_update(x: &[f64], v: &[f64], problem: &Problem) -> Vec<f64> {
    let mut out: Vec<f64> = x.iter().zip(v).map(|(a, b)| a + b).collect();
    problem.snap(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::ScriptedUnits;

    #[test]
    fn no_attraction_no_motion() {
        let mut rng = ScriptedUnits::constant(0.7);
        let v = velocity_update(
            &[1.0, 2.0],
            &[0.0, 0.0],
            &[1.0, 2.0],
            &[1.0, 2.0],
            CoefficientSet::new(0.7, 2.0, 2.0),
            &[5.0, 5.0],
            &mut rng,
        );
        assert_eq!(v, vec![0.0, 0.0]);
        assert_eq!(rng.draws(), 4);
    }

    #[test]
    fn forced_unit_draws() {
        let mut rng = ScriptedUnits::constant(1.0);
        let v = velocity_update(&[0.0], &[0.0], &[1.0], &[1.0], CoefficientSet::new(0.3, 2.0, 2.0), &[10.0], &mut rng);
        assert_eq!(v, vec![4.0]);
    }

    #[test]
    fn clamped_to_half_range() {
        let mut rng = ScriptedUnits::constant(1.0);
        // Box [-2, 2]: vmax = 2, raw velocity 5.
        let v = velocity_update(&[0.0], &[0.0], &[1.25], &[1.25], CoefficientSet::new(0.5, 2.0, 2.0), &[2.0], &mut rng);
        assert_eq!(v, vec![2.0]);
    }

    #[test]
    fn draw_order_is_individuality_then_sociality() {
        let mut rng = ScriptedUnits::new(vec![1.0, 0.0]);
        let v = velocity_update(&[0.0], &[0.0], &[1.0], &[3.0], CoefficientSet::new(0.0, 1.0, 1.0), &[10.0], &mut rng);
        assert_eq!(v, vec![1.0]);
    }

    #[test]
    fn positions_advance_and_snap() {
        let cont = Problem::builder("c", vec![0.0], vec![5.0]).objective(|_| 0.0).build().unwrap();
        assert_eq!(position_update(&[1.0], &[0.5], &cont), vec![1.5]);
        let disc = Problem::builder("d", vec![0.0], vec![5.0]).objective(|_| 0.0).discrete(0, 0.0625).build().unwrap();
        assert_eq!(position_update(&[1.0], &[0.03], &disc), vec![1.0]);
        assert_eq!(position_update(&[1.0], &[0.03125], &disc), vec![1.0]);
    }
}
