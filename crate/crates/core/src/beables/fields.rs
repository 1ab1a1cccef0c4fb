use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::{BeableError, FieldUnits, ModePair, Vec3};

/// Where the field is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Region {
    /// Between the first beam splitter and the mirrors.
    I,
    /// After the second beam splitter, with interferometer phase `phi`.
    II { phi: f64 },
}

/// An unexcited mode pair `(k, −k)` frozen at `q_{k}`, with
/// `q_{−k} = q_k*`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VacuumMode {
    pub k: Vec3,
    pub pol: Vec3,
    pub q: Complex64,
}

/// Frozen vacuum modes entering the `u`, `v`, `f` terms of the beables.
/// Empty by default, which removes those terms.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct VacuumModes {
    pub modes: Vec<VacuumMode>,
}

impl VacuumModes {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    fn phase(m: &VacuumMode, x: Vec3) -> Complex64 {
        m.q * Complex64::from_polar(1.0, m.k.dot(x))
    }

    /// `u(x) = Σ ε q e^{ik·x}` over both members of every pair.
    pub fn u(&self, x: Vec3) -> Vec3 {
        self.modes
            .iter()
            .fold(Vec3::ZERO, |acc, m| acc + m.pol * (2.0 * Self::phase(m, x).re))
    }

    /// `v(x) = ∇ × u(x)`.
    pub fn v(&self, x: Vec3) -> Vec3 {
        self.modes.iter().fold(Vec3::ZERO, |acc, m| {
            acc + m.k.cross(m.pol) * (-2.0 * Self::phase(m, x).im)
        })
    }

    /// `f(x) = iħc² Σ ε₀ × (k × ε) q e^{ik·x}` over both members of every pair.
    pub fn f(&self, units: &FieldUnits, pol0: Vec3, x: Vec3) -> Vec3 {
        let hc2 = units.hbar * units.c * units.c;
        self.modes.iter().fold(Vec3::ZERO, |acc, m| {
            acc + pol0.cross(m.k.cross(m.pol)) * (-2.0 * hc2 * Self::phase(m, x).im)
        })
    }
}

/// Field beables at one space-time point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BeableFrame {
    pub x: Vec3,
    pub t: f64,
    /// Vector potential.
    pub a: Vec3,
    /// Electric field.
    pub e: Vec3,
    /// Magnetic induction.
    pub b: Vec3,
    /// Intensity (momentum density times c²).
    pub i: Vec3,
}

fn phases(units: &FieldUnits, pair: &ModePair, x: Vec3, t: f64) -> (f64, f64) {
    let (wa, wb) = pair.frequencies(units);
    (
        pair.k_a().dot(x) - wa * t - pair.phase_a(),
        pair.k_b().dot(x) - wb * t - pair.phase_b(),
    )
}

/// Beables of the split photon, `Θ_a = k_a·x − ω_a t − σ₀` and likewise
/// for `b`:
///
/// ```text
/// A = (2/√V)(ε_a α₀ cos Θ_a + ε_b β₀ cos Θ_b) + u/√V
/// E = −(ħc/2√V)(ε_a sin Θ_a / α₀ + ε_b sin Θ_b / β₀)
/// B = −(2/√V)[(k_a × ε_a) α₀ sin Θ_a + (k_b × ε_b) β₀ sin Θ_b] + v/√V
/// I = (ħc²/2V)(k_a + k_b − k_a cos 2Θ_a − k_b cos 2Θ_b) − f g / V
/// ```
///
/// with `g = sin Θ_a + sin Θ_b`.
pub fn beables_region1(
    units: &FieldUnits,
    pair: &ModePair,
    vacuum: &VacuumModes,
    x: Vec3,
    t: f64,
    volume: f64,
) -> BeableFrame {
    let (ta, tb) = phases(units, pair, x, t);
    let sv = volume.sqrt();
    let (a0, b0) = (pair.amp_a(), pair.amp_b());
    let (ea, eb) = (pair.pol_a(), pair.pol_b());
    let (ka, kb) = (pair.k_a(), pair.k_b());
    let hc = units.hbar * units.c;
    let hc2 = hc * units.c;

    let a = (ea * (a0 * ta.cos()) + eb * (b0 * tb.cos())) * (2.0 / sv) + vacuum.u(x) * (1.0 / sv);
    let e = (ea * (ta.sin() / a0) + eb * (tb.sin() / b0)) * (-hc / (2.0 * sv));
    let b = (ka.cross(ea) * (a0 * ta.sin()) + kb.cross(eb) * (b0 * tb.sin())) * (-2.0 / sv)
        + vacuum.v(x) * (1.0 / sv);
    let g = ta.sin() + tb.sin();
    let i = (ka + kb - ka * (2.0 * ta).cos() - kb * (2.0 * tb).cos()) * (hc2 / (2.0 * volume))
        - vacuum.f(units, ea, x) * (g / volume);
    BeableFrame { x, t, a, e, b, i }
}

/// Beables behind the interferometer for the output pair `c`, `d` with
/// `Θ_c = k_c·x − ω_c t − χ₀`, `Θ_d = k_d·x − ω_d t − ξ₀`:
///
/// ```text
/// A = (2/√V)(ε_c c₀ cos Θ_c + ε_d d₀ cos Θ_d) + u/√V
/// E = −(ħc/2√V)(ε_c (1 + cos φ) sin Θ_c / c₀ + ε_d (1 − cos φ) sin Θ_d / d₀)
/// B = −(2/√V)[(k_c × ε_c) c₀ sin Θ_c + (k_d × ε_d) d₀ sin Θ_d] + v/√V
/// I = (ħc²/2V)[k_c (1 + cos φ)(1 − cos 2Θ_c) + k_d (1 − cos φ)(1 − cos 2Θ_d)] − f g / V
/// ```
///
/// with `g = (1 + cos φ) sin Θ_c + (1 − cos φ) sin Θ_d` and an extra `1/V`
/// inside `f`, referred to the polarization of the `c` beam.
pub fn beables_region2(
    units: &FieldUnits,
    pair: &ModePair,
    phi: f64,
    vacuum: &VacuumModes,
    x: Vec3,
    t: f64,
    volume: f64,
) -> BeableFrame {
    let (tc, td) = phases(units, pair, x, t);
    let sv = volume.sqrt();
    let (c0, d0) = (pair.amp_a(), pair.amp_b());
    let (ec, ed) = (pair.pol_a(), pair.pol_b());
    let (kc, kd) = (pair.k_a(), pair.k_b());
    let hc = units.hbar * units.c;
    let hc2 = hc * units.c;
    let (plus, minus) = (1.0 + phi.cos(), 1.0 - phi.cos());

    let a = (ec * (c0 * tc.cos()) + ed * (d0 * td.cos())) * (2.0 / sv) + vacuum.u(x) * (1.0 / sv);
    let e = (ec * (plus * tc.sin() / c0) + ed * (minus * td.sin() / d0)) * (-hc / (2.0 * sv));
    let b = (kc.cross(ec) * (c0 * tc.sin()) + kd.cross(ed) * (d0 * td.sin())) * (-2.0 / sv)
        + vacuum.v(x) * (1.0 / sv);
    let g = plus * tc.sin() + minus * td.sin();
    let i = (kc * plus + kd * minus - kc * (plus * (2.0 * tc).cos()) - kd * (minus * (2.0 * td).cos()))
        * (hc2 / (2.0 * volume))
        - vacuum.f(units, ec, x) * (g / (volume * volume));
    BeableFrame { x, t, a, e, b, i }
}

/// Output-port amplitudes `(A_c, A_d) = (−(1 + e^{iφ})/2, i(1 − e^{iφ})/2)`
/// of the recombined single-photon state.
pub fn region2_amplitudes(phi: f64) -> (Complex64, Complex64) {
    let e = Complex64::from_polar(1.0, phi);
    let one = Complex64::new(1.0, 0.0);
    (-(one + e) * 0.5, Complex64::i() * (one - e) * 0.5)
}

fn frame(units: &FieldUnits, pair: &ModePair, region: Region, vacuum: &VacuumModes, x: Vec3, t: f64, v: f64) -> BeableFrame {
    match region {
        Region::I => beables_region1(units, pair, vacuum, x, t, v),
        Region::II { phi } => beables_region2(units, pair, phi, vacuum, x, t, v),
    }
}

/// Mean of `I` over `samples` equally spaced instants spanning one period
/// `2π/ω_a`. Exact up to rounding when `ω_a = ω_b` and `samples ≥ 5`.
pub fn time_averaged_intensity(
    units: &FieldUnits,
    pair: &ModePair,
    region: Region,
    vacuum: &VacuumModes,
    x: Vec3,
    volume: f64,
    samples: usize,
) -> Vec3 {
    let n = samples.max(1);
    let period = 2.0 * PI / pair.frequencies(units).0;
    let mut sum = Vec3::ZERO;
    for j in 0..n {
        let t = period * j as f64 / n as f64;
        sum += frame(units, pair, region, vacuum, x, t, volume).i;
    }
    sum * (1.0 / n as f64)
}

/// `(max − min)/(max + min)` of a fringe curve; a curve that is zero
/// everywhere has visibility 0.
pub fn visibility(curve: &[f64]) -> Result<f64, BeableError> {
    if curve.is_empty() {
        return Err(BeableError::EmptyCurve);
    }
    let max = curve.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = curve.iter().cloned().fold(f64::INFINITY, f64::min);
    if max + min == 0.0 {
        return Ok(0.0);
    }
    Ok((max - min) / (max + min))
}

/// Relative deviations of the finite-difference relations
/// `E = −(1/c) ∂A/∂t` and `B = ∇ × A` from the closed-form fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameConsistency {
    pub electric: f64,
    pub magnetic: f64,
}

/// Checks a region-I frame against central differences of `A` with steps
/// of `1e-5` of the local time and length scales.
pub fn frame_consistency(
    units: &FieldUnits,
    pair: &ModePair,
    vacuum: &VacuumModes,
    x: Vec3,
    t: f64,
    volume: f64,
) -> FrameConsistency {
    let (wa, wb) = pair.frequencies(units);
    let ht = 1e-5 / wa.max(wb);
    let hx = 1e-5 / pair.kappa();
    let at = |x: Vec3, t: f64| beables_region1(units, pair, vacuum, x, t, volume).a;
    let f0 = beables_region1(units, pair, vacuum, x, t, volume);

    let dadt = (at(x, t + ht) - at(x, t - ht)) * (1.0 / (2.0 * ht));
    let e_fd = dadt * (-1.0 / units.c);

    let grad = |axis: usize| {
        let xp = x.with_component(axis, x.component(axis) + hx);
        let xm = x.with_component(axis, x.component(axis) - hx);
        (at(xp, t) - at(xm, t)) * (1.0 / (2.0 * hx))
    };
    let (dx, dy, dz) = (grad(0), grad(1), grad(2));
    let curl = Vec3::new(dy.z - dz.y, dz.x - dx.z, dx.y - dy.x);

    let sv = volume.sqrt();
    let e_scale = units.hbar * units.c / (2.0 * sv) * (1.0 / pair.amp_a() + 1.0 / pair.amp_b());
    let b_scale = 2.0 * pair.kappa() / sv * (pair.amp_a() + pair.amp_b()) + vacuum.v(x).norm() / sv;
    FrameConsistency {
        electric: (e_fd - f0.e).norm() / e_scale,
        magnetic: (curl - f0.b).norm() / b_scale,
    }
}
