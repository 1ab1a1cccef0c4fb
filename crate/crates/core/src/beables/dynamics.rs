use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{BeableError, FieldUnits, ModePair};

/// `|α − iβ|` below this fraction of `|α| + |β|` counts as singular.
const SINGULAR_RELATIVE: f64 = 1e-10;

/// Sampled solution `(q_a(t), q_b(t))` of the guidance equations.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub q_a: Vec<Complex64>,
    pub q_b: Vec<Complex64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Conjugate coordinates `q_a*(t)`, the quantities that rotate forward.
    pub fn q_a_conj(&self) -> Vec<Complex64> {
        self.q_a.iter().map(|z| z.conj()).collect()
    }

    pub fn q_b_conj(&self) -> Vec<Complex64> {
        self.q_b.iter().map(|z| z.conj()).collect()
    }
}

fn singular_check(q_a: Complex64, q_b: Complex64) -> Result<Complex64, BeableError> {
    let z = q_a - Complex64::i() * q_b;
    let scale = q_a.norm() + q_b.norm();
    if scale == 0.0 || z.norm() <= SINGULAR_RELATIVE * scale {
        return Err(BeableError::SingularDenominator(z.norm()));
    }
    Ok(z)
}

/// Right-hand sides `(dq_a*/dt, dq_b*/dt)` of the coupled guidance equations.
pub fn region1_equations_of_motion(
    units: &FieldUnits,
    q_a: Complex64,
    q_b: Complex64,
) -> Result<(Complex64, Complex64), BeableError> {
    let z = singular_check(q_a, q_b)?;
    let k = 0.5 * units.hbar * units.c * units.c;
    Ok((Complex64::i() * k / z, Complex64::new(k, 0.0) / z))
}

/// Printed closed-form solution `q_a*(t) = amp_a e^{i(ω_a t + phase_a)}` and
/// likewise for `q_b`, returned as `(q_a(t), q_b(t))`. It solves the
/// guidance equations only on the family `q_b = i q_a`.
pub fn printed_solution(units: &FieldUnits, pair: &ModePair, t: f64) -> (Complex64, Complex64) {
    let (wa, wb) = pair.frequencies(units);
    (
        Complex64::from_polar(pair.amp_a(), -(wa * t + pair.phase_a())),
        Complex64::from_polar(pair.amp_b(), -(wb * t + pair.phase_b())),
    )
}

/// Exact solution for arbitrary initial data: `α + iβ` is conserved and
/// `α − iβ` rotates at `ħc²/|α₀ − iβ₀|²`.
pub fn analytic_region1(
    units: &FieldUnits,
    pair: &ModePair,
    t: f64,
) -> Result<(Complex64, Complex64), BeableError> {
    let (a0, b0) = pair.initial_coordinates();
    let z0 = singular_check(a0, b0)?;
    let w = a0 + Complex64::i() * b0;
    let omega = units.hbar * units.c * units.c / z0.norm_sqr();
    let z = z0 * Complex64::from_polar(1.0, -omega * t);
    Ok(((w + z) * 0.5, (w - z) / Complex64::new(0.0, 2.0)))
}

/// Rotation frequency of `α − iβ`, equal to both printed frequencies on the
/// printed family.
pub fn rotation_frequency(units: &FieldUnits, pair: &ModePair) -> Result<f64, BeableError> {
    let (a0, b0) = pair.initial_coordinates();
    let z0 = singular_check(a0, b0)?;
    Ok(units.hbar * units.c * units.c / z0.norm_sqr())
}

/// Shortest oscillation period relevant to the pair.
pub fn shortest_period(units: &FieldUnits, pair: &ModePair) -> Result<f64, BeableError> {
    let (wa, wb) = pair.frequencies(units);
    let w = wa.max(wb).max(rotation_frequency(units, pair)?);
    Ok(2.0 * PI / w)
}

/// Default integration step: a thousandth of the shortest period.
pub fn default_step(units: &FieldUnits, pair: &ModePair) -> Result<f64, BeableError> {
    Ok(shortest_period(units, pair)? / 1000.0)
}

fn velocity(units: &FieldUnits, a: Complex64, b: Complex64) -> Result<(Complex64, Complex64), BeableError> {
    let (da_conj, db_conj) = region1_equations_of_motion(units, a, b)?;
    Ok((da_conj.conj(), db_conj.conj()))
}

/// Classical fourth-order Runge-Kutta integration from `t = 0` to `t_end`.
/// The step is shrunk uniformly so the last sample lands on `t_end`.
/// Steps coarser than a sixteenth of the shortest period are refused.
pub fn integrate_region1(
    units: &FieldUnits,
    pair: &ModePair,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory, BeableError> {
    if !(t_end.is_finite() && t_end >= 0.0) {
        return Err(BeableError::InvalidInterval("t_end must be finite and non-negative"));
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(BeableError::InvalidInterval("dt must be positive"));
    }
    let limit = shortest_period(units, pair)? / 16.0;
    if dt > limit {
        return Err(BeableError::StepTooLarge { dt, limit });
    }

    let steps = if t_end == 0.0 { 0 } else { (t_end / dt).ceil() as usize };
    let h = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    let (mut a, mut b) = pair.initial_coordinates();
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        q_a: Vec::with_capacity(steps + 1),
        q_b: Vec::with_capacity(steps + 1),
    };
    traj.times.push(0.0);
    traj.q_a.push(a);
    traj.q_b.push(b);

    for i in 1..=steps {
        let (k1a, k1b) = velocity(units, a, b)?;
        let (k2a, k2b) = velocity(units, a + k1a * (h / 2.0), b + k1b * (h / 2.0))?;
        let (k3a, k3b) = velocity(units, a + k2a * (h / 2.0), b + k2b * (h / 2.0))?;
        let (k4a, k4b) = velocity(units, a + k3a * h, b + k3b * h)?;
        a += (k1a + k2a * 2.0 + k3a * 2.0 + k4a) * (h / 6.0);
        b += (k1b + k2b * 2.0 + k3b * 2.0 + k4b) * (h / 6.0);
        traj.times.push(if i == steps { t_end } else { i as f64 * h });
        traj.q_a.push(a);
        traj.q_b.push(b);
    }
    Ok(traj)
}

/// Least-squares slope of the unwrapped phase of `signal` against `times`.
/// Returns `None` for fewer than two samples.
pub fn fit_frequency(times: &[f64], signal: &[Complex64]) -> Option<f64> {
    let n = times.len().min(signal.len());
    if n < 2 {
        return None;
    }
    let mut phases = Vec::with_capacity(n);
    let mut prev = signal[0].arg();
    let mut acc = prev;
    phases.push(acc);
    for z in &signal[1..n] {
        let p = z.arg();
        let mut d = p - prev;
        while d > PI {
            d -= 2.0 * PI;
        }
        while d <= -PI {
            d += 2.0 * PI;
        }
        acc += d;
        phases.push(acc);
        prev = p;
    }
    let tm = times[..n].iter().sum::<f64>() / n as f64;
    let pm = phases.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (t, p) in times[..n].iter().zip(&phases) {
        sxy += (t - tm) * (p - pm);
        sxx += (t - tm) * (t - tm);
    }
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::super::Vec3;
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn equations_at_unit_point() {
        let (da, db) = region1_equations_of_motion(&FieldUnits::default(), c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_abs_diff_eq!((da - c(0.0, 0.5)).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((db - c(0.5, 0.0)).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn singular_manifold() {
        let a = c(0.7, 0.2);
        let b = -Complex64::i() * a;
        assert!(matches!(
            region1_equations_of_motion(&FieldUnits::default(), a, b),
            Err(BeableError::SingularDenominator(_))
        ));
    }

    #[test]
    fn printed_solution_satisfies_equations() {
        let units = FieldUnits { hbar: 0.3, c: 2.0 };
        let pair = ModePair::symmetric(0.8, 1.5, 0.4).unwrap();
        let (wa, wb) = pair.frequencies(&units);
        for t in [0.0, 0.37, 2.5] {
            let (a, b) = printed_solution(&units, &pair, t);
            let (da, db) = region1_equations_of_motion(&units, a, b).unwrap();
            let lhs_a = Complex64::i() * wa * a.conj();
            let lhs_b = Complex64::i() * wb * b.conj();
            assert!((lhs_a - da).norm() < 1e-12);
            assert!((lhs_b - db).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_length_run_returns_initial_state() {
        let units = FieldUnits::default();
        let pair = ModePair::symmetric(1.0, 1.0, 0.0).unwrap();
        let tr = integrate_region1(&units, &pair, 0.0, 0.01).unwrap();
        assert_eq!(tr.len(), 1);
        assert_eq!((tr.q_a[0], tr.q_b[0]), pair.initial_coordinates());
    }

    #[test]
    fn coarse_steps_rejected() {
        let units = FieldUnits::default();
        let pair = ModePair::symmetric(1.0, 1.0, 0.0).unwrap();
        let period = shortest_period(&units, &pair).unwrap();
        assert!(matches!(
            integrate_region1(&units, &pair, period, period / 4.0),
            Err(BeableError::StepTooLarge { .. })
        ));
        assert!(integrate_region1(&units, &pair, -1.0, 0.01).is_err());
    }

    #[test]
    fn general_solution_matches_integration_off_family() {
        let units = FieldUnits::default();
        let pair = ModePair::new(1.0, 0.5, 0.3, 1.1, Vec3::X, Vec3::Y, Vec3::Z, Vec3::Z).unwrap();
        assert!(!pair.on_printed_family(1e-9));
        let period = shortest_period(&units, &pair).unwrap();
        let tr = integrate_region1(&units, &pair, period, default_step(&units, &pair).unwrap()).unwrap();
        for (i, t) in tr.times.iter().enumerate().step_by(97) {
            let (a, b) = analytic_region1(&units, &pair, *t).unwrap();
            assert!((a - tr.q_a[i]).norm() < 1e-8);
            assert!((b - tr.q_b[i]).norm() < 1e-8);
        }
    }

    #[test]
    fn frequency_fit_recovers_rotation() {
        let times: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let sig: Vec<Complex64> = times.iter().map(|t| Complex64::from_polar(2.0, 3.3 * t + 1.0)).collect();
        assert_abs_diff_eq!(fit_frequency(&times, &sig).unwrap(), 3.3, epsilon = 1e-12);
        assert!(fit_frequency(&times[..1], &sig[..1]).is_none());
    }
}
