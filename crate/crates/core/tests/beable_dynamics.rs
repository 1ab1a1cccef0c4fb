use std::f64::consts::PI;

use gralab_core::beables::{
    analytic_quantum_potential, analytic_region1, beables_region1, default_step, excited_mode_energy,
    fit_frequency, frame_consistency, integrate_region1, printed_solution, quantum_potential,
    quantum_potential_fd, region1_modulus, time_averaged_intensity, visibility, wave_equation_residual,
    BeableError, FieldUnits, ModePair, Region, VacuumMode, VacuumModes, Vec3,
};
use gralab_core::Complex64;
use proptest::prelude::*;

fn units() -> impl Strategy<Value = FieldUnits> {
    (0.2f64..3.0, 0.5f64..3.0).prop_map(|(hbar, c)| FieldUnits { hbar, c })
}

fn on_family() -> impl Strategy<Value = ModePair> {
    (0.3f64..2.0, 0.3f64..3.0, -PI..PI).prop_map(|(amp, k, ph)| ModePair::symmetric(amp, k, ph).unwrap())
}

fn general() -> impl Strategy<Value = ModePair> {
    (0.3f64..2.0, 0.3f64..2.0, -PI..PI, -PI..PI, 0.5f64..2.0).prop_filter_map("near node", |(a, b, pa, pb, k)| {
        let p = ModePair::new(a, b, pa, pb, Vec3::X * k, Vec3::Y * k, Vec3::Z, Vec3::Z).ok()?;
        let (qa, qb) = p.initial_coordinates();
        ((qa - Complex64::i() * qb).norm() > 0.2).then_some(p)
    })
}

/// Independent second-order estimate of `∂²R/∂q*∂q = (R_xx + R_yy)/4`.
fn laplacian_oracle(units: &FieldUnits, kappa: f64, qa: Complex64, qb: Complex64) -> f64 {
    let h = 1e-4;
    let r = |a: Complex64, b: Complex64| region1_modulus(units, kappa, a, b);
    let r0 = r(qa, qb);
    let mut lap = 0.0;
    for d in [Complex64::new(h, 0.0), Complex64::new(0.0, h)] {
        lap += (r(qa + d, qb) - 2.0 * r0 + r(qa - d, qb)) / (h * h);
        lap += (r(qa, qb + d) - 2.0 * r0 + r(qa, qb - d)) / (h * h);
    }
    -units.hbar.powi(2) * units.c.powi(2) * lap / 4.0 / r0
}

#[test]
fn rk4_matches_closed_form_over_one_period() {
    let units = FieldUnits::default();
    let pair = ModePair::symmetric(0.9, 1.0, 0.3).unwrap();
    let (w, _) = pair.frequencies(&units);
    let period = 2.0 * PI / w;
    let tr = integrate_region1(&units, &pair, period, default_step(&units, &pair).unwrap()).unwrap();
    let mut worst: f64 = 0.0;
    for (i, &t) in tr.times.iter().enumerate() {
        let (a, b) = printed_solution(&units, &pair, t);
        worst = worst.max((a - tr.q_a[i]).norm()).max((b - tr.q_b[i]).norm());
    }
    assert!(worst < 1e-6, "max error {worst:e}");
    let fit = fit_frequency(&tr.times, &tr.q_a_conj()).unwrap();
    assert!((fit - w).abs() < 1e-9 * w);
}

#[test]
fn quantum_potential_matches_independent_stencil() {
    let units = FieldUnits { hbar: 0.7, c: 1.3 };
    let (qa, qb) = (Complex64::new(0.4, -0.2), Complex64::new(0.1, 0.6));
    let q = quantum_potential(&units, 1.2, qa, qb).unwrap();
    let oracle = laplacian_oracle(&units, 1.2, qa, qb);
    assert!((q - oracle).abs() < 1e-5 * oracle.abs().max(1.0));
}

#[test]
fn ground_state_potential_by_hand() {
    // R = exp(−κ|q|²/ħc) in one mode: Q = ħcκ − κ²|q|².
    let units = FieldUnits::default();
    let kappa = 1.5;
    let q = [Complex64::new(0.3, 0.2)];
    let got = quantum_potential_fd(&units, |q: &[Complex64]| (-kappa * q[0].norm_sqr()).exp(), &q, 1e-3).unwrap();
    assert!((got - (kappa - kappa * kappa * q[0].norm_sqr())).abs() < 1e-8);
}

#[test]
fn node_is_rejected() {
    let units = FieldUnits::default();
    let a = Complex64::new(0.5, 0.5);
    assert!(matches!(
        quantum_potential(&units, 1.0, a, -Complex64::i() * a),
        Err(BeableError::NodeError(_))
    ));
}

#[test]
fn sampled_vacuum_keeps_frame_consistent() {
    let units = FieldUnits::default();
    let pair = ModePair::symmetric(1.0, 1.0, 0.0).unwrap();
    let vac = VacuumModes {
        modes: vec![
            VacuumMode { k: Vec3::Z * 2.0, pol: Vec3::X, q: Complex64::new(0.1, -0.2) },
            VacuumMode { k: Vec3::new(1.0, 1.0, 0.0), pol: Vec3::Z, q: Complex64::new(-0.3, 0.05) },
        ],
    };
    let fc = frame_consistency(&units, &pair, &vac, Vec3::new(0.2, -0.4, 0.9), 0.7, 2.0);
    assert!(fc.electric < 1e-6 && fc.magnetic < 1e-6, "{fc:?}");
}

#[test]
fn region2_visibility_and_extinction() {
    let units = FieldUnits::default();
    let pair = ModePair::symmetric(1.0, 1.0, 0.0).unwrap();
    let vac = VacuumModes::zero();
    let (kc, kd) = (pair.k_a().unit(), pair.k_b().unit());
    let phis: Vec<f64> = (0..=64).map(|i| 2.0 * PI * i as f64 / 64.0).collect();
    let avg: Vec<Vec3> = phis
        .iter()
        .map(|&phi| time_averaged_intensity(&units, &pair, Region::II { phi }, &vac, Vec3::ZERO, 1.0, 16))
        .collect();
    let c: Vec<f64> = avg.iter().map(|i| i.dot(kc)).collect();
    let d: Vec<f64> = avg.iter().map(|i| i.dot(kd)).collect();
    assert!((visibility(&c).unwrap() - 1.0).abs() < 1e-9);
    assert!((visibility(&d).unwrap() - 1.0).abs() < 1e-9);
    let peak = c.iter().cloned().fold(0.0, f64::max);
    assert!(d[0].abs() < 1e-12 * peak);
    assert!(c[32].abs() < 1e-12 * peak);
    for (x, y) in c.iter().zip(&d) {
        assert!((x + y - peak).abs() < 1e-10 * peak);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn invariants_of_the_general_solution(u in units(), pair in general(), t in 0.0f64..20.0) {
        let (a0, b0) = pair.initial_coordinates();
        let (a, b) = analytic_region1(&u, &pair, t).unwrap();
        let i = Complex64::i();
        prop_assert!(((a + i * b) - (a0 + i * b0)).norm() < 1e-12);
        prop_assert!(((a - i * b).norm() - (a0 - i * b0).norm()).abs() < 1e-12);
    }

    #[test]
    fn printed_solution_keeps_modulus(u in units(), pair in on_family(), t in 0.0f64..50.0) {
        let (a, b) = printed_solution(&u, &pair, t);
        prop_assert!((a.norm() - pair.amp_a()).abs() < 1e-12);
        prop_assert!((b.norm() - pair.amp_b()).abs() < 1e-12);
    }

    #[test]
    fn fd_potential_matches_closed_form(u in units(), pair in general()) {
        let (a, b) = pair.initial_coordinates();
        let k = pair.kappa();
        let fd = quantum_potential(&u, k, a, b).unwrap();
        let exact = analytic_quantum_potential(&u, k, a, b);
        let scale = u.hbar * u.c * k + k * k * (a.norm_sqr() + b.norm_sqr());
        prop_assert!((fd - exact).abs() < 1e-5 * scale);
    }

    #[test]
    fn excited_energy_is_three_quanta(u in units(), pair in general()) {
        let (a, b) = pair.initial_coordinates();
        let k = pair.kappa();
        let e = excited_mode_energy(&u, k, a, b).unwrap();
        prop_assert!((e - 3.0 * u.hbar * u.c * k).abs() < 1e-5 * u.hbar * u.c * k + 1e-5 * k * k * (a.norm_sqr() + b.norm_sqr()));
    }

    #[test]
    fn nonclassical_part_scales_with_hbar_squared(pair in general(), hbar in 0.2f64..2.0) {
        let (a, b) = pair.initial_coordinates();
        let k = pair.kappa();
        let extra = |h: f64| {
            let u = FieldUnits { hbar: h, c: 1.0 };
            analytic_quantum_potential(&u, k, a, b) - 3.0 * h * k + k * k * (a.norm_sqr() + b.norm_sqr())
        };
        prop_assert!((extra(2.0 * hbar) / extra(hbar) - 4.0).abs() < 1e-10);
    }

    #[test]
    fn wave_equation_holds(u in units(), pair in general(), t in 0.0f64..5.0) {
        let terms = wave_equation_residual(&u, &pair, t).unwrap();
        prop_assert!(terms.relative_residual() < 1e-4, "{}", terms.relative_residual());
    }

    #[test]
    fn fields_follow_from_potential(pair in on_family(), x in -2.0f64..2.0, y in -2.0f64..2.0, t in 0.0f64..5.0) {
        let u = FieldUnits::default();
        let fc = frame_consistency(&u, &pair, &VacuumModes::zero(), Vec3::new(x, y, 0.3), t, 1.5);
        prop_assert!(fc.electric < 1e-6 && fc.magnetic < 1e-6, "{:?}", fc);
    }

    #[test]
    fn region1_intensity_has_no_fringes(pair in on_family(), x in -3.0f64..3.0) {
        let u = FieldUnits::default();
        let f = beables_region1(&u, &pair, &VacuumModes::zero(), Vec3::new(x, 0.0, 0.0), 0.0, 1.0);
        prop_assert!(f.i.norm().is_finite());
        let avg_a = time_averaged_intensity(&u, &pair, Region::I, &VacuumModes::zero(), Vec3::new(x, 0.0, 0.0), 1.0, 16);
        let avg_b = time_averaged_intensity(&u, &pair, Region::I, &VacuumModes::zero(), Vec3::new(0.0, x, 0.0), 1.0, 16);
        prop_assert!((avg_a - avg_b).norm() < 1e-10 * avg_a.norm());
    }
}
