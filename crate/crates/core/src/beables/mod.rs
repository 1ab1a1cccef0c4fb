//! Field beables of the causal interpretation for one photon split by a beam
//! splitter (region I) and recombined in a Mach-Zehnder interferometer
//! (region II).
//!
//! Each field mode is a complex normal-mode coordinate `q_{kμ}(t)` of the
//! vector potential. A single photon shared by two excited modes `α` and `β`
//! guides them through
//!
//! ```text
//! dα*/dt = (ħc²/2) i / (α − iβ),    dβ*/dt = (ħc²/2) / (α − iβ),
//! ```
//!
//! while every other mode stays frozen at its initial value. Along the
//! family `β = iα` the solution is `α*(t) = α₀ exp(i(ωt + σ₀))` with the
//! amplitude-dependent frequency `ω = ħc²/(4α₀²)`.
//!
//! Conventions: the mode Hamiltonian is `Σ(−ħ²c² ∂²/∂q*∂q + κ²|q|²)`, so
//! the ground state is `exp(−κ|q|²/(ħc))` with energy `ħcκ` per mode and the
//! quantum potential is `Q = −ħ²c² Σ (∂²R/∂q*∂q)/R`. Wirtinger derivatives
//! are `∂/∂q = (∂/∂x − i ∂/∂y)/2` for `q = x + iy`. With these choices the
//! guidance equations above, the Hamilton-Jacobi equation and the modified
//! wave equation `(1/c²) d²q*/dt² + κ² q* = −∂Q/∂q` agree exactly.
//!
//! Units default to `ħ = c = 1`; [`FieldUnits`] carries other values.

mod dynamics;
mod fields;
mod potential;
mod sampling;
mod vec3;

pub use dynamics::{
    analytic_region1, default_step, fit_frequency, integrate_region1, printed_solution,
    region1_equations_of_motion, rotation_frequency, shortest_period, Trajectory,
};
pub use fields::{
    beables_region1, beables_region2, frame_consistency, region2_amplitudes, time_averaged_intensity,
    visibility, BeableFrame, FrameConsistency, Region, VacuumMode, VacuumModes,
};
pub use potential::{
    analytic_quantum_potential, excited_mode_energy, quantum_potential, quantum_potential_fd,
    region1_modulus, wave_equation_residual, WaveEquationTerms, POTENTIAL_STEP,
};
pub use sampling::{sample_ground_state_modes, sample_region1_coordinates};
pub use vec3::Vec3;

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum BeableError {
    #[error("invalid mode pair: {0}")]
    InvalidModePair(&'static str),
    #[error("coordinates reach the singular manifold α − iβ = 0 (|α − iβ| = {0:e})")]
    SingularDenominator(f64),
    #[error("step {dt:e} exceeds the resolution bound {limit:e}")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("invalid integration interval: {0}")]
    InvalidInterval(&'static str),
    #[error("wavefunction modulus {0:e} is at a node")]
    NodeError(f64),
    #[error("intensity curve is empty")]
    EmptyCurve,
}

/// Physical constants used by the field dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FieldUnits {
    pub hbar: f64,
    pub c: f64,
}

impl Default for FieldUnits {
    fn default() -> Self {
        Self { hbar: 1.0, c: 1.0 }
    }
}

impl FieldUnits {
    /// Nonclassical frequency `ħc²/(4 amp²)` of an excited mode.
    pub fn nonclassical_frequency(&self, amplitude: f64) -> f64 {
        self.hbar * self.c * self.c / (4.0 * amplitude * amplitude)
    }
}

/// Two excited modes, their initial amplitudes and phases, wave vectors and
/// polarizations. In region I these are the `α` (horizontal) and `β`
/// (vertical) beams; in region II the `c` and `d` output beams.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModePair {
    amp_a: f64,
    amp_b: f64,
    phase_a: f64,
    phase_b: f64,
    k_a: Vec3,
    k_b: Vec3,
    pol_a: Vec3,
    pol_b: Vec3,
}

impl ModePair {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        amp_a: f64,
        amp_b: f64,
        phase_a: f64,
        phase_b: f64,
        k_a: Vec3,
        k_b: Vec3,
        pol_a: Vec3,
        pol_b: Vec3,
    ) -> Result<Self, BeableError> {
        let bad = BeableError::InvalidModePair;
        if !(amp_a > 0.0 && amp_b > 0.0 && amp_a.is_finite() && amp_b.is_finite()) {
            return Err(bad("amplitudes must be positive and finite"));
        }
        if !(phase_a.is_finite() && phase_b.is_finite()) {
            return Err(bad("phases must be finite"));
        }
        let (ka, kb) = (k_a.norm(), k_b.norm());
        if ka == 0.0 || !ka.is_finite() {
            return Err(bad("wave vectors must be nonzero"));
        }
        if (ka - kb).abs() > 1e-12 * ka.max(kb) {
            return Err(bad("wave vectors must have equal magnitude"));
        }
        for (pol, k) in [(pol_a, k_a), (pol_b, k_b)] {
            if (pol.norm() - 1.0).abs() > 1e-12 {
                return Err(bad("polarizations must be unit vectors"));
            }
            if pol.dot(k).abs() > 1e-12 * k.norm() {
                return Err(bad("polarization must be orthogonal to its wave vector"));
            }
        }
        Ok(Self {
            amp_a,
            amp_b,
            phase_a,
            phase_b,
            k_a,
            k_b,
            pol_a,
            pol_b,
        })
    }

    /// Beams along +x and +y with magnitude `k0`, both polarized along z,
    /// equal amplitudes and phases on the printed solution family
    /// (`phase_b = phase_a − π/2`).
    pub fn symmetric(amplitude: f64, k0: f64, phase_a: f64) -> Result<Self, BeableError> {
        Self::new(
            amplitude,
            amplitude,
            phase_a,
            phase_a - core::f64::consts::FRAC_PI_2,
            Vec3::X * k0,
            Vec3::Y * k0,
            Vec3::Z,
            Vec3::Z,
        )
    }

    /// Pair whose initial coordinates are `q_a(0) = α`, `q_b(0) = β`.
    pub fn from_coordinates(
        alpha: Complex64,
        beta: Complex64,
        k_a: Vec3,
        k_b: Vec3,
        pol_a: Vec3,
        pol_b: Vec3,
    ) -> Result<Self, BeableError> {
        Self::new(alpha.norm(), beta.norm(), -alpha.arg(), -beta.arg(), k_a, k_b, pol_a, pol_b)
    }

    pub fn amp_a(&self) -> f64 {
        self.amp_a
    }
    pub fn amp_b(&self) -> f64 {
        self.amp_b
    }
    pub fn phase_a(&self) -> f64 {
        self.phase_a
    }
    pub fn phase_b(&self) -> f64 {
        self.phase_b
    }
    pub fn k_a(&self) -> Vec3 {
        self.k_a
    }
    pub fn k_b(&self) -> Vec3 {
        self.k_b
    }
    pub fn pol_a(&self) -> Vec3 {
        self.pol_a
    }
    pub fn pol_b(&self) -> Vec3 {
        self.pol_b
    }

    /// Common wave number `κ = |k_a| = |k_b|`.
    pub fn kappa(&self) -> f64 {
        self.k_a.norm()
    }

    /// Initial coordinates `(α(0), β(0))`; the conjugates carry the phases
    /// `σ₀`, `τ₀` with a positive sign.
    pub fn initial_coordinates(&self) -> (Complex64, Complex64) {
        (
            Complex64::from_polar(self.amp_a, -self.phase_a),
            Complex64::from_polar(self.amp_b, -self.phase_b),
        )
    }

    /// Nonclassical frequencies `(ω_a, ω_b)`.
    pub fn frequencies(&self, units: &FieldUnits) -> (f64, f64) {
        (
            units.nonclassical_frequency(self.amp_a),
            units.nonclassical_frequency(self.amp_b),
        )
    }

    /// `true` when the pair lies on the printed solution family `β = iα`.
    pub fn on_printed_family(&self, tol: f64) -> bool {
        let (a, b) = self.initial_coordinates();
        (a + Complex64::i() * b).norm() <= tol * (a.norm() + b.norm())
    }
}
