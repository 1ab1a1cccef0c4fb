use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Distribution, Gamma, Normal};

use super::{FieldUnits, Vec3, VacuumMode, VacuumModes};

/// Draws `(α, β)` from `|Φ_I|² ∝ |α − iβ|² exp(−2κ(|α|² + |β|²)/(ħc))`.
///
/// In the rotated coordinates `u = (α − iβ)/√2`, `v = (α + iβ)/√2` the
/// density factorizes: `|u|²` is Gamma(2, ħc/2κ) with a uniform phase and
/// `v` is a circular Gaussian with `E|v|² = ħc/2κ`.
pub fn sample_region1_coordinates<R: Rng + ?Sized>(
    units: &FieldUnits,
    kappa: f64,
    rng: &mut R,
) -> (Complex64, Complex64) {
    let width = units.hbar * units.c / (2.0 * kappa);
    let gamma = Gamma::new(2.0, width).expect("positive shape and scale");
    let normal = Normal::new(0.0, (width / 2.0).sqrt()).expect("finite deviation");
    let u_abs = gamma.sample(rng).sqrt();
    let u = Complex64::from_polar(u_abs, 2.0 * PI * rng.random::<f64>());
    let v = Complex64::new(normal.sample(rng), normal.sample(rng));
    let alpha = (u + v) * FRAC_1_SQRT_2;
    let beta = -Complex64::i() * (v - u) * FRAC_1_SQRT_2;
    (alpha, beta)
}

/// Freezes one vacuum mode per `(k, polarization)` entry at a value drawn
/// from the ground state `|Φ₀|² ∝ exp(−2κ|q|²/(ħc))`, i.e. independent
/// Gaussian real and imaginary parts of variance `ħc/(4κ)`.
pub fn sample_ground_state_modes<R: Rng + ?Sized>(
    units: &FieldUnits,
    grid: &[(Vec3, Vec3)],
    rng: &mut R,
) -> VacuumModes {
    let modes: Vec<VacuumMode> = grid
        .iter()
        .map(|&(k, pol)| {
            let sd = (units.hbar * units.c / (4.0 * k.norm())).sqrt();
            let normal = Normal::new(0.0, sd).expect("finite deviation");
            VacuumMode {
                k,
                pol,
                q: Complex64::new(normal.sample(rng), normal.sample(rng)),
            }
        })
        .collect();
    VacuumModes { modes }
}
