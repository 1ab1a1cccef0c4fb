//! Photon statistics behind a single-input beam splitter.
//!
//! The input mode `a` feeds two output modes, the transmitted mode `b_α` and
//! the reflected mode `b_β`, through `a† = t b_α† + r e^{iθ} b_β†` with real
//! `t`, `r` and a reflection phase `θ`. Only `t²` and `r²` enter the
//! photon-number expectations, so the phase matters only for the amplitudes
//! of the output state.
//!
//! Two routes are provided for every observable: the closed forms
//! ([`expect_transmitted`], [`expect_reflected`], [`expect_coincidence`],
//! [`g2`]) and a brute-force route that builds the output state in a
//! truncated two-mode Fock space by repeated application of creation
//! operators and evaluates the same expectations with annihilation operators
//! ([`oracle_output_state`], [`oracle_g2`]).

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

#[allow(unused_imports)]
use num_traits::Float;
use thiserror::Error;

/// Default bound on the input-state probability weight lost to truncation.
pub const DEFAULT_LEAKAGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FockError {
    #[error("beam splitter amplitudes t={t}, r={r} must lie in [0, 1] with t^2 + r^2 = 1")]
    InvalidBeamSplitter { t: f64, r: f64 },
    #[error("invalid quantum state: {0}")]
    InvalidState(&'static str),
    #[error("g2 is undefined: {0}")]
    DegenerateState(&'static str),
    #[error("truncation at n_max={n_max} loses weight {leakage:e} (tolerance {tolerance:e})")]
    Truncation {
        n_max: usize,
        leakage: f64,
        tolerance: f64,
    },
}

/// Lossless beam splitter with real amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSplitter {
    t: f64,
    r: f64,
    reflection_phase: f64,
}

impl BeamSplitter {
    /// Allowed deviation of `t² + r²` from one.
    pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

    /// Builds a splitter with the conventional π/2 phase on reflection.
    pub fn new(t: f64, r: f64) -> Result<Self, FockError> {
        let ok = t.is_finite()
            && r.is_finite()
            && (0.0..=1.0).contains(&t)
            && (0.0..=1.0).contains(&r)
            && (t * t + r * r - 1.0).abs() <= Self::NORMALIZATION_TOLERANCE;
        if !ok {
            return Err(FockError::InvalidBeamSplitter { t, r });
        }
        Ok(Self {
            t,
            r,
            reflection_phase: core::f64::consts::FRAC_PI_2,
        })
    }

    /// Symmetric splitter, `t = r = 1/√2`.
    pub fn balanced() -> Self {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Self {
            t: h,
            r: h,
            reflection_phase: core::f64::consts::FRAC_PI_2,
        }
    }

    /// Builds a splitter from the intensity transmittance `t²`.
    pub fn from_transmittance(transmittance: f64) -> Result<Self, FockError> {
        if !(0.0..=1.0).contains(&transmittance) {
            return Err(FockError::InvalidBeamSplitter {
                t: transmittance,
                r: f64::NAN,
            });
        }
        Self::new(transmittance.sqrt(), (1.0 - transmittance).sqrt())
    }

    pub fn with_reflection_phase(mut self, phase: f64) -> Self {
        self.reflection_phase = phase;
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn transmittance(&self) -> f64 {
        self.t * self.t
    }

    pub fn reflectance(&self) -> f64 {
        self.r * self.r
    }

    pub fn reflection_phase(&self) -> f64 {
        self.reflection_phase
    }

    /// Complex coefficient of `b_β†` in the image of `a†`.
    pub fn reflected_amplitude(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.reflection_phase)
    }
}

impl Default for BeamSplitter {
    fn default() -> Self {
        Self::balanced()
    }
}

/// Photon statistics of the single input mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateKind {
    /// Fock state `|n⟩`.
    Number(u32),
    /// Coherent state `|α⟩`.
    Coherent(Complex64),
    /// Thermal mixture with `P_n = (1 − U) Uⁿ`, `U = exp(−ħω/kT)`.
    Chaotic(f64),
}

/// Validated input state. Construct through [`QuantumState::number`],
/// [`QuantumState::coherent`] or [`QuantumState::chaotic`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumState(StateKind);

impl QuantumState {
    pub fn number(n: u32) -> Self {
        Self(StateKind::Number(n))
    }

    pub fn coherent(alpha: Complex64) -> Result<Self, FockError> {
        if !alpha.re.is_finite() || !alpha.im.is_finite() {
            return Err(FockError::InvalidState("coherent amplitude must be finite"));
        }
        Ok(Self(StateKind::Coherent(alpha)))
    }

    pub fn chaotic(u: f64) -> Result<Self, FockError> {
        if !(u > 0.0 && u < 1.0) {
            return Err(FockError::InvalidState(
                "chaotic Boltzmann factor U must lie in (0, 1)",
            ));
        }
        Ok(Self(StateKind::Chaotic(u)))
    }

    /// Chaotic state at mode energy over thermal energy `ħω/kT`.
    pub fn chaotic_from_energy_ratio(hbar_omega_over_kt: f64) -> Result<Self, FockError> {
        if !(hbar_omega_over_kt > 0.0 && hbar_omega_over_kt.is_finite()) {
            return Err(FockError::InvalidState("ħω/kT must be positive and finite"));
        }
        Self::chaotic((-hbar_omega_over_kt).exp())
    }

    pub fn kind(&self) -> StateKind {
        self.0
    }

    /// `⟨a†a⟩` of the input mode.
    pub fn mean_photon_number(&self) -> f64 {
        match self.0 {
            StateKind::Number(n) => n as f64,
            StateKind::Coherent(alpha) => alpha.norm_sqr(),
            StateKind::Chaotic(u) => u / (1.0 - u),
        }
    }

    /// Probability of finding `n` photons in the input mode.
    pub fn photon_number_probability(&self, n: u32) -> f64 {
        match self.0 {
            StateKind::Number(m) => {
                if m == n {
                    1.0
                } else {
                    0.0
                }
            }
            StateKind::Coherent(alpha) => {
                let mean = alpha.norm_sqr();
                if mean == 0.0 {
                    return if n == 0 { 1.0 } else { 0.0 };
                }
                let ln_p = -mean + n as f64 * mean.ln() - ln_factorial(n);
                ln_p.exp()
            }
            StateKind::Chaotic(u) => (1.0 - u) * u.powi(n as i32),
        }
    }
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `⟨b_α† b_α⟩`.
pub fn expect_transmitted(state: &QuantumState, bs: &BeamSplitter) -> f64 {
    let t2 = bs.transmittance();
    match state.kind() {
        StateKind::Number(n) => n as f64 * t2,
        StateKind::Coherent(alpha) => t2 * alpha.norm_sqr(),
        StateKind::Chaotic(u) => t2 * u / (1.0 - u),
    }
}

/// `⟨b_β† b_β⟩`.
pub fn expect_reflected(state: &QuantumState, bs: &BeamSplitter) -> f64 {
    let r2 = bs.reflectance();
    match state.kind() {
        StateKind::Number(n) => n as f64 * r2,
        StateKind::Coherent(alpha) => r2 * alpha.norm_sqr(),
        StateKind::Chaotic(u) => r2 * u / (1.0 - u),
    }
}

/// `⟨b_α† b_α b_β† b_β⟩`.
pub fn expect_coincidence(state: &QuantumState, bs: &BeamSplitter) -> f64 {
    let t2r2 = bs.transmittance() * bs.reflectance();
    match state.kind() {
        StateKind::Number(n) => {
            let n = n as f64;
            n * (n - 1.0) * t2r2
        }
        StateKind::Coherent(alpha) => t2r2 * alpha.norm_sqr() * alpha.norm_sqr(),
        StateKind::Chaotic(u) => t2r2 * 2.0 * u * u / ((1.0 - u) * (1.0 - u)),
    }
}

/// Degree of second-order coherence between the two output arms.
///
/// Vacuum input or a splitter that sends everything to one arm leaves the
/// ratio undefined and is reported as [`FockError::DegenerateState`].
pub fn g2(state: &QuantumState, bs: &BeamSplitter) -> Result<f64, FockError> {
    check_nondegenerate(state, bs)?;
    let num = expect_coincidence(state, bs);
    let den = expect_transmitted(state, bs) * expect_reflected(state, bs);
    Ok(num / den)
}

fn check_nondegenerate(state: &QuantumState, bs: &BeamSplitter) -> Result<(), FockError> {
    if bs.t() == 0.0 {
        return Err(FockError::DegenerateState("t = 0, no transmitted light"));
    }
    if bs.r() == 0.0 {
        return Err(FockError::DegenerateState("r = 0, no reflected light"));
    }
    if state.mean_photon_number() == 0.0 {
        return Err(FockError::DegenerateState("vacuum input"));
    }
    Ok(())
}

/// Output arm of the beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `b_α`.
    Transmitted,
    /// `b_β`.
    Reflected,
}

/// Basis `|n_α, n_β⟩` with `0 ≤ n_α, n_β ≤ n_max`, stored row-major in `n_α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    n_max: usize,
}

impl FockBasis {
    pub fn new(n_max: usize) -> Self {
        Self { n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1) * (self.n_max + 1)
    }

    pub fn index(&self, n_alpha: usize, n_beta: usize) -> usize {
        n_alpha * (self.n_max + 1) + n_beta
    }

    pub fn occupation(&self, index: usize) -> (usize, usize) {
        (index / (self.n_max + 1), index % (self.n_max + 1))
    }

    pub fn vacuum(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.dim()];
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// `b_mode† ψ`; components pushed past `n_max` are dropped.
    pub fn create(&self, mode: Mode, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (idx, amp) in psi.iter().enumerate() {
            if *amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (na, nb) = self.occupation(idx);
            match mode {
                Mode::Transmitted if na < self.n_max => {
                    out[self.index(na + 1, nb)] += amp * ((na + 1) as f64).sqrt();
                }
                Mode::Reflected if nb < self.n_max => {
                    out[self.index(na, nb + 1)] += amp * ((nb + 1) as f64).sqrt();
                }
                _ => {}
            }
        }
        out
    }

    /// `b_mode ψ`.
    pub fn annihilate(&self, mode: Mode, psi: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (idx, amp) in psi.iter().enumerate() {
            let (na, nb) = self.occupation(idx);
            match mode {
                Mode::Transmitted if na > 0 => {
                    out[self.index(na - 1, nb)] += amp * (na as f64).sqrt();
                }
                Mode::Reflected if nb > 0 => {
                    out[self.index(na, nb - 1)] += amp * (nb as f64).sqrt();
                }
                _ => {}
            }
        }
        out
    }

    /// Image of the input creation operator, `t b_α† + r e^{iθ} b_β†`, applied to `ψ`.
    pub fn input_creation(&self, bs: &BeamSplitter, psi: &[Complex64]) -> Vec<Complex64> {
        let t = Complex64::new(bs.t(), 0.0);
        let r = bs.reflected_amplitude();
        let a = self.create(Mode::Transmitted, psi);
        let b = self.create(Mode::Reflected, psi);
        a.iter().zip(&b).map(|(x, y)| t * x + r * y).collect()
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// One pure member of a statistical mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub amplitudes: Vec<Complex64>,
}

/// Output state of the two arms, held as a weighted ensemble of pure states
/// in a truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeFockSpace {
    basis: FockBasis,
    components: Vec<Component>,
    leakage: f64,
}

/// Photon-number expectations evaluated in the truncated space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleExpectations {
    pub transmitted: f64,
    pub reflected: f64,
    pub coincidence: f64,
}

impl TwoModeFockSpace {
    /// Wraps a single pure state.
    pub fn pure(basis: FockBasis, amplitudes: Vec<Complex64>) -> Self {
        assert_eq!(amplitudes.len(), basis.dim(), "amplitude length must match basis");
        Self {
            basis,
            components: vec![Component {
                weight: 1.0,
                amplitudes,
            }],
            leakage: 0.0,
        }
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn n_max(&self) -> usize {
        self.basis.n_max
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// Input-state probability weight beyond `n_max`.
    pub fn leakage(&self) -> f64 {
        self.leakage
    }

    /// Trace of the represented density operator.
    pub fn norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * norm_sqr(&c.amplitudes))
            .sum()
    }

    /// Amplitude of `|n_α, n_β⟩` when the state is pure.
    pub fn amplitude(&self, n_alpha: usize, n_beta: usize) -> Option<Complex64> {
        match self.components.as_slice() {
            [only] if only.weight == 1.0 => Some(only.amplitudes[self.basis.index(n_alpha, n_beta)]),
            _ => None,
        }
    }

    /// Multiplies every amplitude with one photon in `mode` by `factor`
    /// per photon, i.e. applies `exp(iφ n̂_mode)`-type arm phases.
    pub fn apply_arm_factor(&mut self, mode: Mode, factor: Complex64) {
        let basis = self.basis;
        for comp in &mut self.components {
            for (idx, amp) in comp.amplitudes.iter_mut().enumerate() {
                let (na, nb) = basis.occupation(idx);
                let n = match mode {
                    Mode::Transmitted => na,
                    Mode::Reflected => nb,
                };
                *amp *= factor.powu(n as u32);
            }
        }
    }

    /// `Tr(ρ O) / Tr(ρ)` for the two singles and the coincidence operator,
    /// each as the squared norm of annihilation operators acting on the
    /// ensemble members.
    pub fn expectations(&self) -> OracleExpectations {
        let b = self.basis;
        let mut out = OracleExpectations {
            transmitted: 0.0,
            reflected: 0.0,
            coincidence: 0.0,
        };
        for comp in &self.components {
            let a_psi = b.annihilate(Mode::Transmitted, &comp.amplitudes);
            let b_psi = b.annihilate(Mode::Reflected, &comp.amplitudes);
            let ab_psi = b.annihilate(Mode::Transmitted, &b_psi);
            out.transmitted += comp.weight * norm_sqr(&a_psi);
            out.reflected += comp.weight * norm_sqr(&b_psi);
            out.coincidence += comp.weight * norm_sqr(&ab_psi);
        }
        let norm = self.norm();
        out.transmitted /= norm;
        out.reflected /= norm;
        out.coincidence /= norm;
        out
    }
}

/// Truncation large enough that the discarded input weight falls below
/// [`DEFAULT_LEAKAGE_TOLERANCE`].
pub fn default_n_max(state: &QuantumState) -> usize {
    match state.kind() {
        StateKind::Number(n) => n as usize,
        StateKind::Coherent(alpha) => {
            let m = alpha.norm_sqr();
            (m + 10.0 * m.sqrt() + 10.0).ceil() as usize
        }
        StateKind::Chaotic(u) => {
            let n = (DEFAULT_LEAKAGE_TOLERANCE.ln() / u.ln()).ceil();
            (n as usize).max(1)
        }
    }
}

/// Builds the two-arm output state with the default leakage tolerance.
pub fn oracle_output_state(
    state: &QuantumState,
    bs: &BeamSplitter,
    n_max: usize,
) -> Result<TwoModeFockSpace, FockError> {
    oracle_output_state_with_tolerance(state, bs, n_max, DEFAULT_LEAKAGE_TOLERANCE)
}

/// Builds `|n⟩ → (t b_α† + r e^{iθ} b_β†)ⁿ/√(n!) |0,0⟩` by repeated operator
/// application. Coherent input becomes the corresponding pure superposition,
/// chaotic input a geometric mixture of split number states.
pub fn oracle_output_state_with_tolerance(
    state: &QuantumState,
    bs: &BeamSplitter,
    n_max: usize,
    tolerance: f64,
) -> Result<TwoModeFockSpace, FockError> {
    let basis = FockBasis::new(n_max);
    let truncation = |leakage: f64| FockError::Truncation {
        n_max,
        leakage,
        tolerance,
    };

    match state.kind() {
        StateKind::Number(n) => {
            let n = n as usize;
            if n > n_max {
                return Err(truncation(1.0));
            }
            let mut psi = basis.vacuum();
            for k in 1..=n {
                psi = basis.input_creation(bs, &psi);
                let s = 1.0 / (k as f64).sqrt();
                psi.iter_mut().for_each(|z| *z *= s);
            }
            Ok(TwoModeFockSpace::pure(basis, psi))
        }
        StateKind::Coherent(alpha) => {
            let mut coeff = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
            let mut split_n = basis.vacuum();
            let mut psi: Vec<Complex64> = split_n.iter().map(|z| z * coeff).collect();
            let mut captured = coeff.norm_sqr();
            for k in 1..=n_max {
                split_n = basis.input_creation(bs, &split_n);
                let s = 1.0 / (k as f64).sqrt();
                split_n.iter_mut().for_each(|z| *z *= s);
                coeff = coeff * alpha * s;
                captured += coeff.norm_sqr();
                for (p, z) in psi.iter_mut().zip(&split_n) {
                    *p += coeff * z;
                }
            }
            let leakage = (1.0 - captured).max(0.0);
            if leakage > tolerance {
                return Err(truncation(leakage));
            }
            let mut out = TwoModeFockSpace::pure(basis, psi);
            out.leakage = leakage;
            Ok(out)
        }
        StateKind::Chaotic(u) => {
            let leakage = u.powi(n_max as i32 + 1);
            if leakage > tolerance {
                return Err(truncation(leakage));
            }
            let mut split_n = basis.vacuum();
            let mut components = Vec::with_capacity(n_max + 1);
            components.push(Component {
                weight: 1.0 - u,
                amplitudes: split_n.clone(),
            });
            for k in 1..=n_max {
                split_n = basis.input_creation(bs, &split_n);
                let s = 1.0 / (k as f64).sqrt();
                split_n.iter_mut().for_each(|z| *z *= s);
                components.push(Component {
                    weight: (1.0 - u) * u.powi(k as i32),
                    amplitudes: split_n.clone(),
                });
            }
            Ok(TwoModeFockSpace {
                basis,
                components,
                leakage,
            })
        }
    }
}

/// g⁽²⁾ evaluated entirely inside the truncated Fock space.
pub fn oracle_g2(state: &QuantumState, bs: &BeamSplitter, n_max: usize) -> Result<f64, FockError> {
    let space = oracle_output_state(state, bs, n_max)?;
    let e = space.expectations();
    if e.transmitted == 0.0 || e.reflected == 0.0 {
        return Err(FockError::DegenerateState("an output arm carries no photons"));
    }
    Ok(e.coincidence / (e.transmitted * e.reflected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_unnormalized_splitter() {
        assert!(BeamSplitter::new(0.8, 0.8).is_err());
        assert!(BeamSplitter::new(-0.6, 0.8).is_err());
        assert!(BeamSplitter::new(0.6, 0.8).is_ok());
        assert!(BeamSplitter::from_transmittance(1.2).is_err());
    }

    #[test]
    fn rejects_bad_chaotic_factor() {
        assert!(QuantumState::chaotic(0.0).is_err());
        assert!(QuantumState::chaotic(1.0).is_err());
        assert!(QuantumState::coherent(c(f64::NAN, 0.0)).is_err());
        let s = QuantumState::chaotic_from_energy_ratio(2.0f64.ln()).unwrap();
        assert_abs_diff_eq!(s.mean_photon_number(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn transmitted_examples() {
        let half = BeamSplitter::balanced();
        assert_abs_diff_eq!(expect_transmitted(&QuantumState::number(1), &half), 0.5, epsilon = 1e-15);
        assert_eq!(expect_transmitted(&QuantumState::number(0), &half), 0.0);
        let chaotic = QuantumState::chaotic(0.5).unwrap();
        assert_abs_diff_eq!(expect_transmitted(&chaotic, &half), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn reflected_examples() {
        let bs = BeamSplitter::from_transmittance(0.7).unwrap();
        assert_abs_diff_eq!(expect_reflected(&QuantumState::number(2), &bs), 0.6, epsilon = 1e-12);
        let coh = QuantumState::coherent(c(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(expect_reflected(&coh, &BeamSplitter::balanced()), 2.0, epsilon = 1e-12);
        assert_eq!(expect_reflected(&QuantumState::number(0), &bs), 0.0);
    }

    #[test]
    fn coincidence_examples() {
        let half = BeamSplitter::balanced();
        assert_eq!(expect_coincidence(&QuantumState::number(1), &half), 0.0);
        assert_abs_diff_eq!(expect_coincidence(&QuantumState::number(2), &half), 0.5, epsilon = 1e-15);
        let chaotic = QuantumState::chaotic(0.5).unwrap();
        assert_abs_diff_eq!(expect_coincidence(&chaotic, &half), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn g2_closed_form_values() {
        let bs = BeamSplitter::from_transmittance(0.3).unwrap();
        assert_eq!(g2(&QuantumState::number(1), &bs).unwrap(), 0.0);
        assert_abs_diff_eq!(g2(&QuantumState::number(10), &bs).unwrap(), 0.9, epsilon = 1e-12);
        let coh = QuantumState::coherent(c(0.4, -1.1)).unwrap();
        assert_abs_diff_eq!(g2(&coh, &bs).unwrap(), 1.0, epsilon = 1e-12);
        let ch = QuantumState::chaotic(0.37).unwrap();
        assert_abs_diff_eq!(g2(&ch, &bs).unwrap(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn g2_degenerate_inputs() {
        let bs = BeamSplitter::balanced();
        assert!(matches!(
            g2(&QuantumState::number(0), &bs),
            Err(FockError::DegenerateState(_))
        ));
        let all_through = BeamSplitter::new(1.0, 0.0).unwrap();
        assert!(matches!(
            g2(&QuantumState::number(3), &all_through),
            Err(FockError::DegenerateState(_))
        ));
        let all_reflected = BeamSplitter::new(0.0, 1.0).unwrap();
        assert!(g2(&QuantumState::number(3), &all_reflected).is_err());
    }

    #[test]
    fn single_photon_output_amplitudes() {
        let bs = BeamSplitter::balanced().with_reflection_phase(0.0);
        let s = oracle_output_state(&QuantumState::number(1), &bs, 1).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.amplitude(1, 0).unwrap().re, h, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(0, 1).unwrap().re, h, epsilon = 1e-15);
        assert_eq!(s.amplitude(0, 0).unwrap(), c(0.0, 0.0));
        assert_eq!(s.amplitude(1, 1).unwrap(), c(0.0, 0.0));

        // default π/2 reflection phase gives (|1,0⟩ + i|0,1⟩)/√2
        let s = oracle_output_state(&QuantumState::number(1), &BeamSplitter::balanced(), 1).unwrap();
        let b = s.amplitude(0, 1).unwrap();
        assert_abs_diff_eq!(b.re, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b.im, h, epsilon = 1e-15);
    }

    #[test]
    fn two_photon_output_amplitudes() {
        // (t b_α† + r b_β†)² / √2 |0,0⟩ with t = r = 1/√2:
        // b_α†² |0,0⟩ = √2 |2,0⟩, so |2,0⟩ gets (1/2)·√2/√2 = 1/2;
        // 2 t r b_α† b_β† |0,0⟩ / √2 = (1/√2) |1,1⟩.
        let bs = BeamSplitter::balanced().with_reflection_phase(0.0);
        let s = oracle_output_state(&QuantumState::number(2), &bs, 2).unwrap();
        assert_abs_diff_eq!(s.amplitude(2, 0).unwrap().re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(
            s.amplitude(1, 1).unwrap().re,
            core::f64::consts::FRAC_1_SQRT_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(s.amplitude(0, 2).unwrap().re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s.norm(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn vacuum_output() {
        let s = oracle_output_state(&QuantumState::number(0), &BeamSplitter::balanced(), 0).unwrap();
        assert_eq!(s.amplitude(0, 0).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn number_state_beyond_truncation_is_rejected() {
        let err = oracle_output_state(&QuantumState::number(4), &BeamSplitter::balanced(), 3);
        assert!(matches!(err, Err(FockError::Truncation { .. })));
    }

    #[test]
    fn chaotic_truncation_is_checked() {
        let st = QuantumState::chaotic(0.7).unwrap();
        let err = oracle_output_state(&st, &BeamSplitter::balanced(), 60);
        assert!(matches!(err, Err(FockError::Truncation { .. })));
        let ok = oracle_output_state(&st, &BeamSplitter::balanced(), default_n_max(&st)).unwrap();
        assert!(ok.leakage() < DEFAULT_LEAKAGE_TOLERANCE);
        assert_abs_diff_eq!(ok.norm(), 1.0, epsilon = 1e-10);
    }

    #[test]
    fn oracle_examples() {
        let bs = BeamSplitter::from_transmittance(0.7).unwrap();
        let g = oracle_g2(&QuantumState::number(5), &bs, 5).unwrap();
        assert_abs_diff_eq!(g, 0.8, epsilon = 1e-12);

        let coh = QuantumState::coherent(c(1.3, 0.0)).unwrap();
        let g = oracle_g2(&coh, &BeamSplitter::balanced(), 30).unwrap();
        assert_abs_diff_eq!(g, 1.0, epsilon = 1e-8);

        let ch = QuantumState::chaotic(0.3).unwrap();
        let g = oracle_g2(&ch, &BeamSplitter::balanced(), 40).unwrap();
        assert_abs_diff_eq!(g, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn arm_factor_multiplies_per_photon() {
        let mut s = oracle_output_state(&QuantumState::number(2), &BeamSplitter::balanced(), 2).unwrap();
        let before = s.amplitude(2, 0).unwrap();
        s.apply_arm_factor(Mode::Transmitted, c(0.0, 1.0));
        assert_abs_diff_eq!((s.amplitude(2, 0).unwrap() + before).norm(), 0.0, epsilon = 1e-15);
    }
}
