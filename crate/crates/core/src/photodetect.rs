//! First-order photoionization of a hydrogen-like detector atom by the
//! split single-photon field.
//!
//! The transition amplitude into a box-normalized continuum state of
//! wavenumber `k_en` is
//!
//! ```text
//! η(t) = (e/μc) √(ħc/2V) · (i − e^{iφ})/√(2k₀)
//!        · ħ/√(Vπa³) · 8πa³/(1 + a²k_en²)²
//!        · (1 − e^{iEt/ħ})/E
//! ```
//!
//! with `E = ħ²k_en²/2μ − ħck₀ + E_b` the energy mismatch between the final
//! state (free electron, field vacuum) and the initial one (bound electron,
//! one photon). The time factor is evaluated as
//! `−i(t/ħ) sinc(x) e^{ix}` with `x = Et/2ħ`, which is exact, smooth through
//! `E = 0` and free of cancellation.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

use crate::fock::{oracle_output_state, BeamSplitter, FockError, Mode, QuantumState};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum PhotodetectError {
    #[error("invalid detector configuration: {0}")]
    Config(&'static str),
    #[error("negative elapsed time {0}")]
    NegativeTime(f64),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// Detector atom, coupling constants and the interferometer phase seen by
/// the incoming photon.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectorAtomConfig {
    pub hbar: f64,
    pub c: f64,
    /// Coupling charge `e` (Heaviside-Lorentz, so `a = 4πħ²/μe²`).
    pub charge: f64,
    pub reduced_mass: f64,
    pub bohr_radius: f64,
    /// Binding energy `E_b > 0`; the initial electron energy is `−E_b`.
    pub binding_energy: f64,
    pub photon_wavenumber: f64,
    pub phase: f64,
    pub volume: f64,
}

impl Default for DetectorAtomConfig {
    fn default() -> Self {
        Self::hydrogen_like()
    }
}

impl DetectorAtomConfig {
    /// Hydrogen in atomic units (`ħ = μ = a = 1`, `e² = 4π`, `c ≈ 137`),
    /// ground-state binding `1/2`, a photon that ionizes with margin, and a
    /// large quantization box.
    pub fn hydrogen_like() -> Self {
        let hbar = 1.0;
        let reduced_mass = 1.0;
        let charge = (4.0 * PI).sqrt();
        Self {
            hbar,
            c: 137.035_999,
            charge,
            reduced_mass,
            bohr_radius: bohr_radius(hbar, reduced_mass, charge),
            binding_energy: 0.5,
            photon_wavenumber: 0.01,
            phase: 0.0,
            volume: 1e6,
        }
    }

    pub fn with_phase(mut self, phase: f64) -> Self {
        self.phase = phase;
        self
    }

    pub fn validate(&self) -> Result<(), PhotodetectError> {
        let bad = PhotodetectError::Config;
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.hbar) || !positive(self.c) || !positive(self.reduced_mass) {
            return Err(bad("hbar, c and reduced mass must be positive"));
        }
        if !self.charge.is_finite() {
            return Err(bad("charge must be finite"));
        }
        if !positive(self.bohr_radius) {
            return Err(bad("bohr radius must be positive"));
        }
        if !positive(self.photon_wavenumber) {
            return Err(bad("photon wavenumber must be positive"));
        }
        if !positive(self.volume) {
            return Err(bad("volume must be positive"));
        }
        if !(self.binding_energy.is_finite() && self.binding_energy >= 0.0) {
            return Err(bad("binding energy must be non-negative"));
        }
        if !self.phase.is_finite() {
            return Err(bad("phase must be finite"));
        }
        Ok(())
    }

    pub fn photon_energy(&self) -> f64 {
        self.hbar * self.c * self.photon_wavenumber
    }

    /// Energy mismatch `E` for an ejected electron of wavenumber `k_en`.
    pub fn energy_mismatch(&self, k_en: f64) -> f64 {
        self.hbar * self.hbar * k_en * k_en / (2.0 * self.reduced_mass) - self.photon_energy()
            + self.binding_energy
    }

    /// Electron wavenumber whose mismatch is `energy`, or `None` below the
    /// continuum threshold.
    pub fn wavenumber_for_mismatch(&self, energy: f64) -> Option<f64> {
        let kinetic = energy + self.photon_energy() - self.binding_energy;
        (kinetic >= 0.0).then(|| (2.0 * self.reduced_mass * kinetic).sqrt() / self.hbar)
    }

    /// Resonant wavenumber, where energy is conserved.
    pub fn resonant_wavenumber(&self) -> Option<f64> {
        self.wavenumber_for_mismatch(0.0)
    }

    /// `(i − e^{iφ})/√(2k₀)`, the overlap of the annihilated field with the
    /// vacuum.
    pub fn absorption_factor(&self) -> Complex64 {
        (Complex64::i() - Complex64::from_polar(1.0, self.phase)) / (2.0 * self.photon_wavenumber).sqrt()
    }

    /// Everything in `η` except the time factor.
    pub fn amplitude_prefactor(&self, k_en: f64) -> Complex64 {
        let a = self.bohr_radius;
        let coupling = self.charge / (self.reduced_mass * self.c)
            * (self.hbar * self.c / (2.0 * self.volume)).sqrt();
        let atomic = self.hbar / (self.volume * PI * a * a * a).sqrt() * 8.0 * PI * a * a * a
            / (1.0 + a * a * k_en * k_en).powi(2);
        self.absorption_factor() * (coupling * atomic)
    }
}

/// `4πħ²/(μe²)`.
pub fn bohr_radius(hbar: f64, reduced_mass: f64, charge: f64) -> f64 {
    4.0 * PI * hbar * hbar / (reduced_mass * charge * charge)
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `(1 − e^{iEt/ħ})/E`, continuous through `E = 0` where it equals `−it/ħ`.
pub fn time_factor(energy: f64, t: f64, hbar: f64) -> Complex64 {
    let x = energy * t / (2.0 * hbar);
    Complex64::from_polar(t / hbar * sinc(x), x) * -Complex64::i()
}

/// `|time_factor|² = 4 sin²(Et/2ħ)/E²`.
pub fn time_factor_norm_sqr(energy: f64, t: f64, hbar: f64) -> f64 {
    let s = t / hbar * sinc(energy * t / (2.0 * hbar));
    s * s
}

/// Transition amplitude into the continuum state of wavenumber `k_en` after
/// time `t ≥ 0`.
pub fn eta(cfg: &DetectorAtomConfig, k_en: f64, t: f64) -> Result<Complex64, PhotodetectError> {
    cfg.validate()?;
    if t.is_nan() || t < 0.0 {
        return Err(PhotodetectError::NegativeTime(t));
    }
    Ok(cfg.amplitude_prefactor(k_en) * time_factor(cfg.energy_mismatch(k_en), t, cfg.hbar))
}

/// One row of a `|η|²` profile.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfilePoint {
    pub energy: f64,
    pub t: f64,
    pub time_factor_sq: f64,
    /// `None` below the continuum threshold.
    pub eta_sq: Option<f64>,
}

fn profile_point(cfg: &DetectorAtomConfig, energy: f64, t: f64) -> ProfilePoint {
    ProfilePoint {
        energy,
        t,
        time_factor_sq: time_factor_norm_sqr(energy, t, cfg.hbar),
        eta_sq: cfg
            .wavenumber_for_mismatch(energy)
            .map(|k| cfg.amplitude_prefactor(k).norm_sqr() * time_factor_norm_sqr(energy, t, cfg.hbar)),
    }
}

/// `|η|²` against the energy mismatch at fixed `t`.
pub fn energy_profile(
    cfg: &DetectorAtomConfig,
    t: f64,
    energies: &[f64],
) -> Result<Vec<ProfilePoint>, PhotodetectError> {
    cfg.validate()?;
    if t.is_nan() || t < 0.0 {
        return Err(PhotodetectError::NegativeTime(t));
    }
    Ok(energies.iter().map(|&e| profile_point(cfg, e, t)).collect())
}

/// `|η|²` against time at fixed energy mismatch.
pub fn time_profile(
    cfg: &DetectorAtomConfig,
    energy: f64,
    times: &[f64],
) -> Result<Vec<ProfilePoint>, PhotodetectError> {
    cfg.validate()?;
    if let Some(&t) = times.iter().find(|t| t.is_nan() || **t < 0.0) {
        return Err(PhotodetectError::NegativeTime(t));
    }
    Ok(times.iter().map(|&t| profile_point(cfg, energy, t)).collect())
}

/// Overlap of the annihilated field state with one final two-mode Fock
/// state `|n_α, n_β⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FieldOverlap {
    pub n_alpha: usize,
    pub n_beta: usize,
    pub amplitude: Complex64,
}

/// Outcome of the whole-quantum absorption check.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AbsorptionReport {
    pub n_max: usize,
    pub phase: f64,
    /// Every final state with overlap magnitude above `tolerance`.
    pub nonzero: Vec<FieldOverlap>,
    /// Largest overlap magnitude among the non-vacuum final states.
    pub max_non_vacuum: f64,
    pub vacuum_overlap: Complex64,
    pub expected_vacuum_overlap: Complex64,
    /// The absorption amplitude itself vanishes at this phase.
    pub zero_amplitude: bool,
    pub tolerance: f64,
}

impl AbsorptionReport {
    /// Only the vacuum is reachable, and its overlap matches the closed form.
    /// A vanishing amplitude also passes, since then nothing is reachable.
    pub fn whole_quantum_only(&self) -> bool {
        let matches = (self.vacuum_overlap - self.expected_vacuum_overlap).norm() <= self.tolerance;
        let only_vacuum = self.nonzero.iter().all(|o| o.n_alpha == 0 && o.n_beta == 0);
        matches && only_vacuum && self.max_non_vacuum <= self.tolerance
    }
}

/// Default magnitude below which an overlap counts as zero.
pub const OVERLAP_TOLERANCE: f64 = 1e-12;

/// Computes `Σ_modes k^{-1/2} ⟨N| a_mode |Φ⟩` for every final state `|N⟩` of
/// the truncated two-mode basis. `|Φ⟩` is one photon split by a balanced
/// beam splitter with a `π/2` reflection phase, after which the transmitted
/// arm picks up `−e^{iφ}` from its mirror and phase shifter.
pub fn absorption_matrix_element_check(
    cfg: &DetectorAtomConfig,
    n_max: usize,
) -> Result<AbsorptionReport, PhotodetectError> {
    absorption_matrix_element_check_with_tolerance(cfg, n_max, OVERLAP_TOLERANCE)
}

pub fn absorption_matrix_element_check_with_tolerance(
    cfg: &DetectorAtomConfig,
    n_max: usize,
    tolerance: f64,
) -> Result<AbsorptionReport, PhotodetectError> {
    cfg.validate()?;
    let mut space = oracle_output_state(&QuantumState::number(1), &BeamSplitter::balanced(), n_max)?;
    space.apply_arm_factor(Mode::Transmitted, -Complex64::from_polar(1.0, cfg.phase));
    let basis = space.basis();
    let psi = &space.components()[0].amplitudes;

    let weight = 1.0 / cfg.photon_wavenumber.sqrt();
    let a_psi = basis.annihilate(Mode::Transmitted, psi);
    let b_psi = basis.annihilate(Mode::Reflected, psi);
    let summed: Vec<Complex64> = a_psi.iter().zip(&b_psi).map(|(x, y)| (x + y) * weight).collect();

    let mut nonzero = Vec::new();
    let mut max_non_vacuum: f64 = 0.0;
    for (idx, amp) in summed.iter().enumerate() {
        let (n_alpha, n_beta) = basis.occupation(idx);
        if n_alpha + n_beta > 0 {
            max_non_vacuum = max_non_vacuum.max(amp.norm());
        }
        if amp.norm() > tolerance {
            nonzero.push(FieldOverlap {
                n_alpha,
                n_beta,
                amplitude: *amp,
            });
        }
    }
    let expected = cfg.absorption_factor();
    Ok(AbsorptionReport {
        n_max,
        phase: cfg.phase,
        nonzero,
        max_non_vacuum,
        vacuum_overlap: summed[basis.index(0, 0)],
        expected_vacuum_overlap: expected,
        zero_amplitude: expected.norm() <= tolerance,
        tolerance,
    })
}
