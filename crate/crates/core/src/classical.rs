//! Semiclassical gate-intensity model.
//!
//! Each gate `n` carries a classical intensity `i_n`. Detection probabilities
//! are linear in the intensity, so the singles go as `⟨i⟩` and coincidences
//! as `⟨i²⟩`, which forces `α = ⟨i²⟩/⟨i⟩² ≥ 1` by the Cauchy-Schwarz
//! inequality.

use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum ClassicalError {
    #[error("intensity list is empty")]
    Empty,
    #[error("intensity at gate {index} is {value}; intensities must be finite and non-negative")]
    InvalidIntensity { index: usize, value: f64 },
    #[error("mean intensity is zero")]
    ZeroMeanIntensity,
    #[error("{0} must be finite and non-negative")]
    InvalidParameter(&'static str),
}

/// Finite sample of per-gate intensities together with the gate length and
/// the two detector efficiencies.
#[derive(Debug, Clone, PartialEq)]
pub struct GateIntensityEnsemble {
    intensities: Vec<f64>,
    gate: f64,
    efficiency_t: f64,
    efficiency_r: f64,
    mean: f64,
    mean_sq: f64,
}

impl GateIntensityEnsemble {
    pub fn new(
        intensities: Vec<f64>,
        gate: f64,
        efficiency_t: f64,
        efficiency_r: f64,
    ) -> Result<Self, ClassicalError> {
        check_intensities(&intensities)?;
        if !(gate.is_finite() && gate >= 0.0) {
            return Err(ClassicalError::InvalidParameter("gate duration"));
        }
        for (name, e) in [("efficiency_t", efficiency_t), ("efficiency_r", efficiency_r)] {
            if !(0.0..=1.0).contains(&e) {
                return Err(ClassicalError::InvalidParameter(name));
            }
        }
        let n = intensities.len() as f64;
        let mean = intensities.iter().sum::<f64>() / n;
        let mean_sq = intensities.iter().map(|i| i * i).sum::<f64>() / n;
        if mean == 0.0 {
            return Err(ClassicalError::ZeroMeanIntensity);
        }
        Ok(Self {
            intensities,
            gate,
            efficiency_t,
            efficiency_r,
            mean,
            mean_sq,
        })
    }

    pub fn intensities(&self) -> &[f64] {
        &self.intensities
    }

    pub fn gate(&self) -> f64 {
        self.gate
    }

    pub fn mean_intensity(&self) -> f64 {
        self.mean
    }

    pub fn mean_square_intensity(&self) -> f64 {
        self.mean_sq
    }

    /// `false` when some detection probability exceeds one, i.e. the linear
    /// response model is being used outside its range of validity.
    pub fn is_admissible(&self) -> bool {
        let (pt, pr) = singles_probabilities(self);
        pt <= 1.0 && pr <= 1.0 && coincidence_probability(self) <= 1.0
    }
}

/// `(p_t, p_r) = (α_t ω ⟨i⟩, α_r ω ⟨i⟩)`.
pub fn singles_probabilities(ens: &GateIntensityEnsemble) -> (f64, f64) {
    let w = ens.gate * ens.mean;
    (ens.efficiency_t * w, ens.efficiency_r * w)
}

/// `p_c = α_t α_r ω² ⟨i²⟩`.
pub fn coincidence_probability(ens: &GateIntensityEnsemble) -> f64 {
    ens.efficiency_t * ens.efficiency_r * ens.gate * ens.gate * ens.mean_sq
}

/// `⟨i²⟩/⟨i⟩²`, never below one.
pub fn classical_alpha(ens: &GateIntensityEnsemble) -> f64 {
    ens.mean_sq / (ens.mean * ens.mean)
}

fn check_intensities(intensities: &[f64]) -> Result<(), ClassicalError> {
    if intensities.is_empty() {
        return Err(ClassicalError::Empty);
    }
    match intensities
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
    {
        Some((index, &value)) => Err(ClassicalError::InvalidIntensity { index, value }),
        None => Ok(()),
    }
}

/// Same ratio for a raw intensity slice, without efficiency bookkeeping.
pub fn alpha_of_intensities(intensities: &[f64]) -> Result<f64, ClassicalError> {
    check_intensities(intensities)?;
    let n = intensities.len() as f64;
    let mean = intensities.iter().sum::<f64>() / n;
    if mean == 0.0 {
        return Err(ClassicalError::ZeroMeanIntensity);
    }
    let mean_sq = intensities.iter().map(|i| i * i).sum::<f64>() / n;
    Ok(mean_sq / (mean * mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn constant_intensity() {
        let e = GateIntensityEnsemble::new(vec![1.0; 8], 1.0, 0.1, 0.1).unwrap();
        let (pt, pr) = singles_probabilities(&e);
        assert_abs_diff_eq!(pt, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(pr, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(coincidence_probability(&e), 0.01, epsilon = 1e-15);
        assert_eq!(classical_alpha(&e), 1.0);
    }

    #[test]
    fn two_point_intensity() {
        let e = GateIntensityEnsemble::new(vec![0.0, 2.0, 0.0, 2.0], 1.0, 0.1, 0.1).unwrap();
        assert_abs_diff_eq!(singles_probabilities(&e).0, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(coincidence_probability(&e), 0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(classical_alpha(&e), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn single_gate_is_inadmissible_but_accepted() {
        let e = GateIntensityEnsemble::new(vec![3.0], 1.0, 1.0, 1.0).unwrap();
        assert_eq!(coincidence_probability(&e), 9.0);
        assert!(!e.is_admissible());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            GateIntensityEnsemble::new(vec![0.0, 0.0], 1.0, 0.1, 0.1),
            Err(ClassicalError::ZeroMeanIntensity)
        );
        assert_eq!(GateIntensityEnsemble::new(vec![], 1.0, 0.1, 0.1), Err(ClassicalError::Empty));
        assert!(matches!(
            GateIntensityEnsemble::new(vec![1.0, -1.0], 1.0, 0.1, 0.1),
            Err(ClassicalError::InvalidIntensity { index: 1, .. })
        ));
        assert!(GateIntensityEnsemble::new(vec![1.0], 1.0, 1.5, 0.1).is_err());
        assert_eq!(alpha_of_intensities(&[0.0]), Err(ClassicalError::ZeroMeanIntensity));
    }

    #[test]
    fn one_nonzero_gate() {
        let mut v = vec![0.0; 9];
        v[4] = 5.0;
        let e = GateIntensityEnsemble::new(v, 1.0, 0.5, 0.5).unwrap();
        assert_abs_diff_eq!(e.mean_intensity(), 5.0 / 9.0, epsilon = 1e-15);
        assert_abs_diff_eq!(classical_alpha(&e), 9.0, epsilon = 1e-12);
    }
}
