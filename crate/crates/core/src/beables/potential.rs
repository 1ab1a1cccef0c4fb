use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::dynamics::{analytic_region1, rotation_frequency};
use super::{BeableError, FieldUnits, ModePair};

/// Relative finite-difference step used for the second derivatives inside
/// `Q` and for the outer derivative `∂Q/∂q`.
pub const POTENTIAL_STEP: f64 = 1e-3;

/// `|α − iβ|` below this fraction of the coordinate scale is a node of `R`.
const NODE_RELATIVE: f64 = 1e-8;

/// Modulus `R` of the split single-photon state in the two excited modes,
/// up to a constant factor: `|α − iβ| exp(−κ(|α|² + |β|²)/(ħc))`.
pub fn region1_modulus(units: &FieldUnits, kappa: f64, q_a: Complex64, q_b: Complex64) -> f64 {
    let z = q_a - Complex64::i() * q_b;
    let a = kappa / (units.hbar * units.c);
    z.norm() * (-a * (q_a.norm_sqr() + q_b.norm_sqr())).exp()
}

fn second_derivative(f: &dyn Fn(f64) -> f64, f0: f64, h: f64) -> f64 {
    (-f(2.0 * h) + 16.0 * f(h) - 30.0 * f0 + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h)
}

fn first_derivative(f: &dyn Fn(f64) -> f64, h: f64) -> f64 {
    (-f(2.0 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2.0 * h)) / (12.0 * h)
}

/// `Q = −ħ²c² Σ_m (∂²R/∂q_m*∂q_m)/R` for an arbitrary modulus `r`, using
/// five-point central differences of step `h` along the real and imaginary
/// axis of every coordinate (`∂∂̄ = (∂²_x + ∂²_y)/4`).
pub fn quantum_potential_fd<F>(
    units: &FieldUnits,
    r: F,
    q: &[Complex64],
    h: f64,
) -> Result<f64, BeableError>
where
    F: Fn(&[Complex64]) -> f64,
{
    let r0 = r(q);
    if !(r0.is_finite() && r0 > f64::MIN_POSITIVE) {
        return Err(BeableError::NodeError(r0));
    }
    let mut lap = 0.0;
    for m in 0..q.len() {
        for dir in [Complex64::new(1.0, 0.0), Complex64::i()] {
            let along = |s: f64| {
                let mut w: Vec<Complex64> = q.to_vec();
                w[m] += dir * s;
                r(&w)
            };
            lap += second_derivative(&along, r0, h);
        }
    }
    Ok(-units.hbar * units.hbar * units.c * units.c * 0.25 * lap / r0)
}

fn coordinate_scale(units: &FieldUnits, kappa: f64, q_a: Complex64, q_b: Complex64) -> f64 {
    q_a.norm()
        .max(q_b.norm())
        .max((units.hbar * units.c / kappa).sqrt())
}

fn check_node(units: &FieldUnits, kappa: f64, q_a: Complex64, q_b: Complex64) -> Result<f64, BeableError> {
    let scale = coordinate_scale(units, kappa, q_a, q_b);
    let z = q_a - Complex64::i() * q_b;
    if z.norm() <= NODE_RELATIVE * scale {
        return Err(BeableError::NodeError(region1_modulus(units, kappa, q_a, q_b)));
    }
    Ok(scale)
}

/// Field quantum potential of the split single-photon state over the two
/// excited modes, by finite differences of `R`.
pub fn quantum_potential(
    units: &FieldUnits,
    kappa: f64,
    q_a: Complex64,
    q_b: Complex64,
) -> Result<f64, BeableError> {
    let scale = check_node(units, kappa, q_a, q_b)?;
    potential_with_step(units, kappa, q_a, q_b, POTENTIAL_STEP * scale)
}

fn potential_with_step(
    units: &FieldUnits,
    kappa: f64,
    q_a: Complex64,
    q_b: Complex64,
    h: f64,
) -> Result<f64, BeableError> {
    quantum_potential_fd(
        units,
        |q: &[Complex64]| region1_modulus(units, kappa, q[0], q[1]),
        &[q_a, q_b],
        h,
    )
}

/// Closed form of [`quantum_potential`]:
/// `3ħcκ − ħ²c²/(2|α − iβ|²) − κ²(|α|² + |β|²)`.
pub fn analytic_quantum_potential(units: &FieldUnits, kappa: f64, q_a: Complex64, q_b: Complex64) -> f64 {
    let hc = units.hbar * units.c;
    let z = q_a - Complex64::i() * q_b;
    3.0 * hc * kappa - hc * hc / (2.0 * z.norm_sqr()) - kappa * kappa * (q_a.norm_sqr() + q_b.norm_sqr())
}

/// Total energy `Σ[c²|∂S/∂q|² + κ²|q|²] + Q` carried by the two excited
/// modes. It equals `3ħcκ` everywhere off the node.
pub fn excited_mode_energy(
    units: &FieldUnits,
    kappa: f64,
    q_a: Complex64,
    q_b: Complex64,
) -> Result<f64, BeableError> {
    let q = quantum_potential(units, kappa, q_a, q_b)?;
    let z = q_a - Complex64::i() * q_b;
    let momentum_sq = units.hbar * units.hbar / (4.0 * z.norm_sqr());
    let kinetic = units.c * units.c * 2.0 * momentum_sq;
    Ok(kinetic + kappa * kappa * (q_a.norm_sqr() + q_b.norm_sqr()) + q)
}

/// The three terms of `(1/c²) d²q*/dt² + κ² q* + ∂Q/∂q = 0` for both
/// excited modes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveEquationTerms {
    pub acceleration: [Complex64; 2],
    pub restoring: [Complex64; 2],
    pub quantum_force: [Complex64; 2],
}

impl WaveEquationTerms {
    /// Euclidean norm of the left-hand side over both modes.
    pub fn residual(&self) -> f64 {
        (0..2)
            .map(|m| (self.acceleration[m] + self.restoring[m] + self.quantum_force[m]).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Residual over the size of the largest term of each mode.
    pub fn relative_residual(&self) -> f64 {
        let scale = (0..2)
            .map(|m| {
                let s = self.acceleration[m]
                    .norm()
                    .max(self.restoring[m].norm())
                    .max(self.quantum_force[m].norm());
                s * s
            })
            .sum::<f64>()
            .sqrt();
        self.residual() / scale
    }
}

/// Evaluates the modified wave equation along the exact trajectory at time
/// `t`: the acceleration is analytic, `∂Q/∂q` comes from finite differences
/// of the finite-difference quantum potential.
pub fn wave_equation_residual(
    units: &FieldUnits,
    pair: &ModePair,
    t: f64,
) -> Result<WaveEquationTerms, BeableError> {
    let kappa = pair.kappa();
    let (q_a, q_b) = analytic_region1(units, pair, t)?;
    let scale = check_node(units, kappa, q_a, q_b)?;
    let h = POTENTIAL_STEP * scale;

    // α − iβ rotates as z₀e^{−iΩt} while α + iβ is fixed, so
    // α̈ = −Ω² z/2 and β̈ = −Ω² (−z)/(2i) = −Ω² i z/2.
    let omega = rotation_frequency(units, pair)?;
    let z = q_a - Complex64::i() * q_b;
    let acc_a = -omega * omega * z * 0.5;
    let acc_b = -omega * omega * Complex64::i() * z * 0.5;
    let inv_c2 = 1.0 / (units.c * units.c);

    let q_at = |a: Complex64, b: Complex64| potential_with_step(units, kappa, a, b, h).unwrap_or(f64::NAN);
    let wirtinger = |mode: usize| {
        let dx = first_derivative(
            &|s| {
                let d = Complex64::new(s, 0.0);
                if mode == 0 { q_at(q_a + d, q_b) } else { q_at(q_a, q_b + d) }
            },
            h,
        );
        let dy = first_derivative(
            &|s| {
                let d = Complex64::new(0.0, s);
                if mode == 0 { q_at(q_a + d, q_b) } else { q_at(q_a, q_b + d) }
            },
            h,
        );
        Complex64::new(dx, -dy) * 0.5
    };
    let force = [wirtinger(0), wirtinger(1)];
    if force.iter().any(|f| !f.re.is_finite() || !f.im.is_finite()) {
        return Err(BeableError::NodeError(region1_modulus(units, kappa, q_a, q_b)));
    }
    Ok(WaveEquationTerms {
        acceleration: [acc_a.conj() * inv_c2, acc_b.conj() * inv_c2],
        restoring: [q_a.conj() * kappa * kappa, q_b.conj() * kappa * kappa],
        quantum_force: force,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_ground_state_potential() {
        let units = FieldUnits { hbar: 1.0, c: 1.0 };
        let kappa = 2.0;
        let a = kappa / (units.hbar * units.c);
        for q in [Complex64::new(0.0, 0.0), Complex64::new(0.3, -0.2), Complex64::new(1.1, 0.4)] {
            let qp = quantum_potential_fd(&units, |v: &[Complex64]| (-a * v[0].norm_sqr()).exp(), &[q], 1e-3)
                .unwrap();
            assert_relative_eq!(qp + kappa * kappa * q.norm_sqr(), units.hbar * units.c * kappa, max_relative = 1e-8);
        }
    }

    #[test]
    fn finite_difference_matches_closed_form() {
        let units = FieldUnits { hbar: 0.7, c: 1.3 };
        let (a, b) = (Complex64::new(0.4, 0.9), Complex64::new(-0.3, 0.5));
        let fd = quantum_potential(&units, 1.2, a, b).unwrap();
        let exact = analytic_quantum_potential(&units, 1.2, a, b);
        assert_relative_eq!(fd, exact, max_relative = 1e-7);
    }

    #[test]
    fn node_is_reported() {
        let a = Complex64::new(0.5, 0.5);
        let b = -Complex64::i() * a;
        assert!(matches!(
            quantum_potential(&FieldUnits::default(), 1.0, a, b),
            Err(BeableError::NodeError(_))
        ));
        assert!(quantum_potential_fd(&FieldUnits::default(), |_| 0.0, &[a], 1e-3).is_err());
    }
}
