//! Acceptance suite: one line per criterion, nonzero exit on any failure or
//! runtime overrun.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use gralab::commands::cascade::{simulate_parallel, sweep_parallel, within_tolerance};
use gralab_core::beables::{
    default_step, fit_frequency, integrate_region1, printed_solution, time_averaged_intensity, visibility,
    wave_equation_residual, FieldUnits, ModePair, Region, VacuumModes, Vec3,
};
use gralab_core::cascade::{g2_analytic, ArrivalMode, CascadeConfig, RunLength};
use gralab_core::classical::alpha_of_intensities;
use gralab_core::fock::{default_n_max, g2, oracle_g2, BeamSplitter, QuantumState};
use gralab_core::photodetect::{absorption_matrix_element_check, eta, DetectorAtomConfig};
use gralab_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, fn() -> Outcome, Duration);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok { Ok(()) } else { Err(msg()) }
}

fn criterion_1() -> Outcome {
    let bs = BeamSplitter::balanced();
    let v = g2(&QuantumState::number(1), &bs).map_err(|e| e.to_string())?;
    ensure(v == 0.0, || format!("g2(|1>) = {v}"))?;
    for n in 2..=20u32 {
        let v = g2(&QuantumState::number(n), &bs).map_err(|e| e.to_string())?;
        let want = (n - 1) as f64 / n as f64;
        ensure((v - want).abs() <= 1e-12, || format!("g2(|{n}>) = {v}, want {want}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let bs = BeamSplitter::from_transmittance(rng.random_range(0.05..0.95)).unwrap();
        let alpha = Complex64::from_polar(rng.random_range(0.01..5.0), rng.random_range(0.0..2.0 * PI));
        let c = g2(&QuantumState::coherent(alpha).unwrap(), &bs).map_err(|e| e.to_string())?;
        ensure((c - 1.0).abs() <= 1e-12, || format!("coherent {alpha}: {c}"))?;
        let u = rng.random_range(1e-4..0.999);
        let t = g2(&QuantumState::chaotic(u).unwrap(), &bs).map_err(|e| e.to_string())?;
        ensure((t - 2.0).abs() <= 1e-12, || format!("chaotic U={u}: {t}"))?;
    }
    Ok("number 0 and (n-1)/n, coherent 1, chaotic 2 over 100 draws".into())
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut compare = |state: QuantumState, bs: &BeamSplitter, n_max: usize| -> Result<(), String> {
        let closed = g2(&state, bs).map_err(|e| e.to_string())?;
        let oracle = oracle_g2(&state, bs, n_max.max(default_n_max(&state))).map_err(|e| e.to_string())?;
        worst = worst.max((closed - oracle).abs());
        ensure((closed - oracle).abs() <= 1e-8, || format!("{state:?}: closed {closed} oracle {oracle}"))
    };
    for tr in [0.5, 0.2, 0.9] {
        let bs = BeamSplitter::from_transmittance(tr).unwrap();
        for n in 1..=10 {
            compare(QuantumState::number(n), &bs, n as usize)?;
        }
        for m in [0.1, 1.0, 2.5, 5.0] {
            let alpha = Complex64::from_polar(f64::sqrt(m), 0.7);
            compare(QuantumState::coherent(alpha).unwrap(), &bs, 40)?;
        }
        for u in [0.05, 0.3, 0.5, 0.7] {
            compare(QuantumState::chaotic(u).unwrap(), &bs, 60)?;
        }
    }
    Ok(format!("max |closed - oracle| = {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut min_alpha = f64::INFINITY;
    for _ in 0..1000 {
        let n = rng.random_range(1..200);
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..100.0) * rng.random::<f64>()).collect();
        v[0] += 1e-3;
        let a = alpha_of_intensities(&v).map_err(|e| e.to_string())?;
        min_alpha = min_alpha.min(a);
        ensure(a >= 1.0 - 1e-12, || format!("alpha = {a} < 1"))?;
    }
    for value in [1e-3, 0.5, 7.0, 1e4] {
        let a = alpha_of_intensities(&vec![value; 321]).map_err(|e| e.to_string())?;
        ensure((a - 1.0).abs() <= 1e-12, || format!("constant {value}: alpha = {a}"))?;
    }
    Ok(format!("min alpha over 1000 ensembles = {min_alpha:.6}; constant ensembles give 1"))
}

fn criterion_4() -> Outcome {
    let landmarks = g2_analytic(0.9, 0.9);
    ensure(landmarks == 0.75, || format!("analytic(0.9) = {landmarks}"))?;
    ensure(g2_analytic(1e-9, 0.9) < 1e-8, || "low limit".into())?;
    ensure(1.0 - g2_analytic(1e9, 0.9) < 1e-8, || "high limit".into())?;
    let template = CascadeConfig {
        run: RunLength::Gates(1_000_000),
        seed: 2024,
        ..CascadeConfig::default()
    };
    let rows = sweep_parallel(&template, &[0.01, 0.05, 0.1, 0.3, 0.9, 3.0]).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for r in &rows {
        ensure(within_tolerance(r, 0.05, 3.0), || {
            format!("N*omega={}: MC {} +- {} vs {}", r.n_omega, r.alpha_mc, r.stderr, r.alpha_analytic)
        })?;
        parts.push(format!("{}:{:.4}/{:.4}", r.n_omega, r.alpha_mc, r.alpha_analytic));
    }
    Ok(format!("MC/analytic {}", parts.join(" ")))
}

fn criterion_5() -> Outcome {
    for mode in [ArrivalMode::Analytic, ArrivalMode::Physical] {
        let cfg = CascadeConfig {
            decay_rate: 0.0,
            run: RunLength::Gates(1_000_000),
            seed: 5,
            mode,
            ..CascadeConfig::default()
        };
        let rec = simulate_parallel(&cfg).map_err(|e| e.to_string())?;
        ensure(rec.nc == 0, || format!("{mode:?}: {} coincidences", rec.nc))?;
        ensure(rec.nt > 0 && rec.nr > 0, || "no singles".into())?;
    }
    Ok("0 coincidences in 10^6 isolated gates (analytic and physical arrivals)".into())
}

fn criterion_6() -> Outcome {
    let base = CascadeConfig::default();
    let cfg = CascadeConfig {
        correlation_factor: 1.0,
        gate: 2.0 * base.lifetime,
        decay_rate: 0.0,
        run: RunLength::Gates(1_000_000),
        seed: 6,
        mode: ArrivalMode::Physical,
        ..base
    };
    let rec = simulate_parallel(&cfg).map_err(|e| e.to_string())?;
    let p = 1.0 - (-2.0f64).exp();
    let frac = rec.trigger_arrival_fraction();
    let se = (p * (1.0 - p) / rec.total_gates as f64).sqrt();
    ensure((frac - p).abs() <= 3.0 * se, || format!("fraction {frac} vs {p} (se {se:.2e})"))?;
    Ok(format!("arrival fraction {frac:.5} vs {p:.5} ({:.2} sigma)", (frac - p).abs() / se))
}

fn criterion_7() -> Outcome {
    let units = FieldUnits { hbar: 1.0, c: 1.0 };
    let mut worst_traj: f64 = 0.0;
    let mut worst_freq: f64 = 0.0;
    let mut worst_weq: f64 = 0.0;
    for (amp, k, phase) in [(1.0, 1.0, 0.0), (0.6, 2.0, 0.8), (1.7, 0.5, -2.1)] {
        let pair = ModePair::symmetric(amp, k, phase).map_err(|e| e.to_string())?;
        let (w, _) = pair.frequencies(&units);
        let period = 2.0 * PI / w;
        let tr = integrate_region1(&units, &pair, period, default_step(&units, &pair).unwrap())
            .map_err(|e| e.to_string())?;
        for (i, &t) in tr.times.iter().enumerate() {
            let (a, b) = printed_solution(&units, &pair, t);
            worst_traj = worst_traj.max((a - tr.q_a[i]).norm()).max((b - tr.q_b[i]).norm());
        }
        let fit = fit_frequency(&tr.times, &tr.q_a_conj()).ok_or("too few samples")?;
        worst_freq = worst_freq.max((fit - units.hbar * units.c.powi(2) / (4.0 * amp * amp)).abs() / w);
        for j in 0..8 {
            let r = wave_equation_residual(&units, &pair, period * j as f64 / 8.0).map_err(|e| e.to_string())?;
            worst_weq = worst_weq.max(r.relative_residual());
        }
    }
    ensure(worst_traj <= 1e-6, || format!("trajectory error {worst_traj:e}"))?;
    ensure(worst_freq <= 1e-9, || format!("frequency error {worst_freq:e}"))?;
    ensure(worst_weq < 1e-4, || format!("wave-equation residual {worst_weq:e}"))?;
    Ok(format!(
        "trajectory {worst_traj:.1e}, frequency {worst_freq:.1e} rel, wave equation {worst_weq:.1e} rel"
    ))
}

fn criterion_8() -> Outcome {
    let units = FieldUnits::default();
    let pair = ModePair::symmetric(1.0, 1.0, 0.0).map_err(|e| e.to_string())?;
    let vac = VacuumModes::zero();
    let (kc, kd) = (pair.k_a().unit(), pair.k_b().unit());
    let n = 129;
    let port = |phi: f64| {
        let avg = time_averaged_intensity(&units, &pair, Region::II { phi }, &vac, Vec3::ZERO, 1.0, 16);
        (avg.dot(kc), avg.dot(kd))
    };
    let phis: Vec<f64> = (0..n).map(|i| 2.0 * PI * i as f64 / (n - 1) as f64).collect();
    let (c, d): (Vec<f64>, Vec<f64>) = phis.iter().map(|&p| port(p)).unzip();
    let (vc, vd) = (visibility(&c).unwrap(), visibility(&d).unwrap());
    ensure((vc - 1.0).abs() <= 1e-9 && (vd - 1.0).abs() <= 1e-9, || format!("V_c {vc}, V_d {vd}"))?;
    let peak = c.iter().chain(&d).cloned().fold(0.0, f64::max);
    let (_, d0) = port(0.0);
    let (c_pi, _) = port(PI);
    ensure(d0.abs() < 1e-12 * peak, || format!("d at 0: {d0:e}"))?;
    ensure(c_pi.abs() < 1e-12 * peak, || format!("c at pi: {c_pi:e}"))?;
    let spread = c.iter().zip(&d).map(|(x, y)| (x + y - peak).abs()).fold(0.0, f64::max) / peak;
    ensure(spread <= 1e-10, || format!("total varies by {spread:e}"))?;
    Ok(format!("V_c = {vc:.12}, V_d = {vd:.12}, total spread {spread:.1e}"))
}

fn criterion_9() -> Outcome {
    for phase in [0.0, 0.3, 1.0, 2.5, PI, -1.2] {
        let cfg = DetectorAtomConfig::hydrogen_like().with_phase(phase);
        for n_max in [1, 2, 5, 8] {
            let rep = absorption_matrix_element_check(&cfg, n_max).map_err(|e| e.to_string())?;
            ensure(rep.nonzero.len() == 1 && rep.nonzero[0].n_alpha + rep.nonzero[0].n_beta == 0, || {
                format!("phase {phase}, n_max {n_max}: {:?}", rep.nonzero)
            })?;
            ensure(rep.max_non_vacuum < 1e-12, || format!("non-vacuum overlap {:e}", rep.max_non_vacuum))?;
            ensure((rep.vacuum_overlap - rep.expected_vacuum_overlap).norm() < 1e-12, || "vacuum overlap".into())?;
        }
    }
    let quarter = absorption_matrix_element_check(&DetectorAtomConfig::hydrogen_like().with_phase(FRAC_PI_2), 4)
        .map_err(|e| e.to_string())?;
    ensure(quarter.zero_amplitude, || "phase pi/2 not flagged".into())?;

    // Shape: |η|² divided by its smooth prefactor must follow 4 sin²(Et/2ħ)/E².
    let cfg = DetectorAtomConfig::hydrogen_like();
    let k_res = cfg.resonant_wavenumber().ok_or("photon cannot ionize")?;
    let t = 60.0;
    let mut worst: f64 = 0.0;
    for i in 1..400 {
        let k = k_res * (0.9 + 0.2 * i as f64 / 400.0);
        let e = cfg.energy_mismatch(k);
        let shape = eta(&cfg, k, t).unwrap().norm_sqr() / cfg.amplitude_prefactor(k).norm_sqr();
        let direct = (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, e * t / cfg.hbar)).norm_sqr() / (e * e);
        worst = worst.max((shape - direct).abs() / (t * t));
    }
    ensure(worst < 1e-9, || format!("shape deviation {worst:e}"))?;
    let p = |t: f64| eta(&cfg, k_res, t).unwrap().norm_sqr();
    for t in [2.0, 10.0, 50.0] {
        let ratio = p(t) / p(1.0);
        ensure((ratio / (t * t) - 1.0).abs() < 1e-9, || format!("peak ratio at t={t}: {ratio}"))?;
    }
    Ok(format!("single vacuum overlap; sinc^2 shape to {worst:.1e}; peak grows as t^2"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, criterion_1, Duration::from_secs(1)),
        (2, criterion_2, Duration::from_secs(30)),
        (3, criterion_3, Duration::from_secs(1)),
        (4, criterion_4, Duration::from_secs(120)),
        (5, criterion_5, Duration::from_secs(60)),
        (6, criterion_6, Duration::from_secs(60)),
        (7, criterion_7, Duration::from_secs(10)),
        (8, criterion_8, Duration::from_secs(10)),
        (9, criterion_9, Duration::from_secs(10)),
    ];
    let mut failures = 0;
    for (n, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= limit => (true, d),
            Ok(d) => (false, format!("{d}; runtime over limit")),
            Err(e) => (false, e),
        };
        failures += usize::from(!ok);
        println!(
            "[{}] criterion {n}: {detail} ({:.3} s, limit {} s)",
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failures == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
