use std::f64::consts::PI;

use anyhow::{bail, Result};
use gralab_core::beables::{
    beables_region1, beables_region2, default_step, fit_frequency, frame_consistency, integrate_region1,
    printed_solution, region2_amplitudes, sample_ground_state_modes, time_averaged_intensity, visibility,
    wave_equation_residual, BeableFrame, FieldUnits, ModePair, Region, VacuumModes, Vec3,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cli::BeablesArgs;
use crate::config;
use crate::output::{ensure_dir, fmt_num, Cell, Check, Table};
use crate::svg::{Plot, Series};
use crate::{Context, Report};

pub const TRAJECTORY_TOLERANCE: f64 = 1e-6;
pub const FREQUENCY_TOLERANCE: f64 = 1e-9;
pub const WAVE_EQUATION_TOLERANCE: f64 = 1e-4;
pub const FIELD_TOLERANCE: f64 = 1e-6;
pub const VISIBILITY_TOLERANCE: f64 = 1e-9;
pub const EXTINCTION_TOLERANCE: f64 = 1e-12;
pub const TOTAL_INTENSITY_TOLERANCE: f64 = 1e-10;

/// Beable run settings. Units default to `ħ = c = 1`.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeablesFile {
    pub hbar: f64,
    pub c: f64,
    /// Initial modulus of both excited-mode coordinates.
    pub amplitude: f64,
    /// Wave number of both beams.
    pub k0: f64,
    /// Initial phase of the first beam; the second trails by π/2.
    pub phase: f64,
    pub volume: f64,
    /// Integration span in periods of the nonclassical frequency.
    pub periods: f64,
    pub steps_per_period: u64,
    /// Number of vacuum modes drawn from the ground state; zero freezes
    /// them all at the origin.
    pub vacuum_modes: usize,
    /// Half-width of the field grid in wavelengths.
    pub grid_extent: f64,
    /// Phase samples over one turn for the visibility sweep.
    pub phi_points: usize,
    /// Time samples per period for averages.
    pub average_samples: usize,
    /// Time samples of the wave-equation check.
    pub wave_eq_samples: usize,
}

impl Default for BeablesFile {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            c: 1.0,
            amplitude: 1.0,
            k0: 1.0,
            phase: 0.0,
            volume: 1.0,
            periods: 1.0,
            steps_per_period: 1000,
            vacuum_modes: 0,
            grid_extent: 1.0,
            phi_points: 65,
            average_samples: 16,
            wave_eq_samples: 16,
        }
    }
}

impl BeablesFile {
    fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !(positive(self.hbar) && positive(self.c) && positive(self.volume)) {
            bail!("hbar, c and volume must be positive");
        }
        if !(positive(self.periods) && positive(self.grid_extent)) {
            bail!("periods and grid_extent must be positive");
        }
        if self.steps_per_period < 16 {
            bail!("steps_per_period must be at least 16");
        }
        if self.phi_points < 3 || self.average_samples < 5 || self.wave_eq_samples == 0 {
            bail!("phi_points >= 3, average_samples >= 5 and wave_eq_samples >= 1 are required");
        }
        Ok(())
    }
}

fn vector_cells(v: Vec3) -> [Cell; 3] {
    [v.x.into(), v.y.into(), v.z.into()]
}

fn frame_row(f: &BeableFrame) -> Vec<Cell> {
    let mut row: Vec<Cell> = vec![f.x.x.into(), f.x.y.into(), f.t.into()];
    for v in [f.a, f.e, f.b, f.i] {
        row.extend(vector_cells(v));
    }
    row
}

/// Time-averaged output intensities `(along k_c, along k_d)` at phase `phi`.
pub fn port_intensities(
    units: &FieldUnits,
    pair: &ModePair,
    vacuum: &VacuumModes,
    phi: f64,
    volume: f64,
    samples: usize,
) -> (f64, f64) {
    let avg = time_averaged_intensity(units, pair, Region::II { phi }, vacuum, Vec3::ZERO, volume, samples);
    (avg.dot(pair.k_a().unit()), avg.dot(pair.k_b().unit()))
}

pub fn run(ctx: &Context, args: &BeablesArgs) -> Result<Report> {
    let file: BeablesFile = config::load(args.config.as_deref())?;
    file.validate()?;
    let units = FieldUnits { hbar: file.hbar, c: file.c };
    let pair = ModePair::symmetric(file.amplitude, file.k0, file.phase)?;
    let seed = ctx.seed.unwrap_or(0);
    let vacuum = if file.vacuum_modes == 0 {
        VacuumModes::zero()
    } else {
        let grid: Vec<(Vec3, Vec3)> = (0..file.vacuum_modes)
            .map(|j| (Vec3::Z * (file.k0 * (j + 2) as f64), Vec3::X))
            .collect();
        sample_ground_state_modes(&units, &grid, &mut ChaCha8Rng::seed_from_u64(seed))
    };

    let mut report = Report {
        config: serde_json::json!({
            "file": file,
            "region": args.region,
            "phi": args.phi,
            "grid": args.grid,
            "check_wave_eq": args.check_wave_eq,
            "visibility_sweep": args.visibility_sweep,
        }),
        seed: (file.vacuum_modes > 0).then_some(seed),
        ..Report::default()
    };
    let dir = ctx.out_dir();
    ensure_dir(&dir)?;
    let (omega, _) = pair.frequencies(&units);
    let period = 2.0 * PI / omega;
    report.line(format!("nonclassical frequency {}", fmt_num(omega)));

    // Trajectory of the excited-mode coordinates.
    let t_end = file.periods * period;
    let dt = (period / file.steps_per_period as f64).min(default_step(&units, &pair)?);
    let traj = integrate_region1(&units, &pair, t_end, dt)?;
    let mut table = Table::new(&[
        "t", "q_a_re", "q_a_im", "q_b_re", "q_b_im", "exact_a_re", "exact_a_im", "exact_b_re", "exact_b_im", "error",
    ]);
    let mut worst: f64 = 0.0;
    for (i, &t) in traj.times.iter().enumerate() {
        let (ea, eb) = printed_solution(&units, &pair, t);
        let err = (traj.q_a[i] - ea).norm().max((traj.q_b[i] - eb).norm());
        worst = worst.max(err);
        table.push(vec![
            t.into(),
            traj.q_a[i].re.into(),
            traj.q_a[i].im.into(),
            traj.q_b[i].re.into(),
            traj.q_b[i].im.into(),
            ea.re.into(),
            ea.im.into(),
            eb.re.into(),
            eb.im.into(),
            err.into(),
        ]);
    }
    report.check(Check::new(
        "trajectory vs closed form",
        worst < TRAJECTORY_TOLERANCE,
        format!("max |q - q_exact| = {worst:.3e} over {} samples", traj.len()),
    ));
    let fitted = fit_frequency(&traj.times, &traj.q_a_conj()).unwrap_or(f64::NAN);
    let rel = (fitted - omega).abs() / omega;
    report.check(Check::new(
        "fitted frequency",
        rel < FREQUENCY_TOLERANCE,
        format!("fit {} vs {} (relative {rel:.3e})", fmt_num(fitted), fmt_num(omega)),
    ));
    let table = table.meta("command", "beables").meta("omega", fmt_num(omega));
    report.outputs.push(table.save(&dir, "beables_trajectory", ctx.format)?);
    let plot = Plot::new("Excited-mode coordinate", "t", "Re q_a")
        .series(Series::line("closed form", traj.times.clone(), table.column("exact_a_re")))
        .series(Series::line("integrated", traj.times.clone(), table.column("q_a_re")));
    report.outputs.push(plot.save(&dir, "beables_trajectory")?);

    // Field grid at t = 0 in the plane of the two beams.
    let extent = file.grid_extent * 2.0 * PI / file.k0;
    let n = args.grid as usize;
    let region = if args.region == 1 { Region::I } else { Region::II { phi: args.phi } };
    let mut grid = Table::new(&[
        "x", "y", "t", "a_x", "a_y", "a_z", "e_x", "e_y", "e_z", "b_x", "b_y", "b_z", "i_x", "i_y", "i_z",
    ]);
    let mut field_worst: f64 = 0.0;
    for iy in 0..n {
        for ix in 0..n {
            let x = Vec3::new(
                -extent + 2.0 * extent * ix as f64 / (n - 1) as f64,
                -extent + 2.0 * extent * iy as f64 / (n - 1) as f64,
                0.0,
            );
            let f = match region {
                Region::I => {
                    let fc = frame_consistency(&units, &pair, &vacuum, x, 0.0, file.volume);
                    field_worst = field_worst.max(fc.electric).max(fc.magnetic);
                    beables_region1(&units, &pair, &vacuum, x, 0.0, file.volume)
                }
                Region::II { phi } => beables_region2(&units, &pair, phi, &vacuum, x, 0.0, file.volume),
            };
            grid.push(frame_row(&f));
        }
    }
    if matches!(region, Region::I) {
        report.check(Check::new(
            "fields follow from the vector potential",
            field_worst < FIELD_TOLERANCE,
            format!("max relative deviation {field_worst:.3e}"),
        ));
    }
    let grid = grid.meta("command", "beables").meta("region", args.region).meta("phi", fmt_num(args.phi));
    report.outputs.push(grid.save(&dir, &format!("beables_region{}_grid", args.region), ctx.format)?);

    if args.region == 2 {
        let phis: Vec<f64> = (0..file.phi_points).map(|i| 2.0 * PI * i as f64 / (file.phi_points - 1) as f64).collect();
        let peak = phis
            .iter()
            .map(|&p| {
                let (c, d) = port_intensities(&units, &pair, &vacuum, p, file.volume, file.average_samples);
                c.max(d)
            })
            .fold(0.0, f64::max);
        let (c, d) = port_intensities(&units, &pair, &vacuum, args.phi, file.volume, file.average_samples);
        report.line(format!("phi = {}: <I_c> = {}, <I_d> = {}, peak = {}", args.phi, fmt_num(c), fmt_num(d), fmt_num(peak)));
        let turns = args.phi / (2.0 * PI);
        if (args.phi.cos() - 1.0).abs() < 1e-12 && (turns - turns.round()).abs() < 1e-12 {
            report.check(Check::new(
                "d beam extinguished",
                d.abs() < EXTINCTION_TOLERANCE * peak,
                format!("<I_d>/peak = {:.3e}", d.abs() / peak),
            ));
        }
        let half = (args.phi - PI) / (2.0 * PI);
        if (half - half.round()).abs() < 1e-12 {
            report.check(Check::new(
                "c beam extinguished",
                c.abs() < EXTINCTION_TOLERANCE * peak,
                format!("<I_c>/peak = {:.3e}", c.abs() / peak),
            ));
        }
    }

    if args.visibility_sweep {
        let phis: Vec<f64> = (0..file.phi_points).map(|i| 2.0 * PI * i as f64 / (file.phi_points - 1) as f64).collect();
        let mut table = Table::new(&["phi", "intensity_c", "intensity_d", "total", "born_c", "born_d"]);
        let (mut ic, mut id, mut tot) = (Vec::new(), Vec::new(), Vec::new());
        for &phi in &phis {
            let (c, d) = port_intensities(&units, &pair, &vacuum, phi, file.volume, file.average_samples);
            let (ac, ad) = region2_amplitudes(phi);
            table.push(vec![phi.into(), c.into(), d.into(), (c + d).into(), ac.norm_sqr().into(), ad.norm_sqr().into()]);
            ic.push(c);
            id.push(d);
            tot.push(c + d);
        }
        let vc = visibility(&ic)?;
        let vd = visibility(&id)?;
        report.line(format!("visibility c = {}, d = {}", fmt_num(vc), fmt_num(vd)));
        report.check(Check::new(
            "visibility of c beam",
            (vc - 1.0).abs() < VISIBILITY_TOLERANCE,
            format!("V_c = {}", fmt_num(vc)),
        ));
        report.check(Check::new(
            "visibility of d beam",
            (vd - 1.0).abs() < VISIBILITY_TOLERANCE,
            format!("V_d = {}", fmt_num(vd)),
        ));
        let mean = tot.iter().sum::<f64>() / tot.len() as f64;
        let spread = tot.iter().map(|t| (t - mean).abs()).fold(0.0, f64::max) / mean;
        report.check(Check::new(
            "total output intensity constant",
            spread < TOTAL_INTENSITY_TOLERANCE,
            format!("max relative spread {spread:.3e}"),
        ));
        let table = table.meta("command", "beables --visibility-sweep");
        report.outputs.push(table.save(&dir, "beables_visibility", ctx.format)?);
        let plot = Plot::new("Interferometer output intensities", "phi", "time-averaged intensity")
            .series(Series::line("c beam", phis.clone(), ic))
            .series(Series::line("d beam", phis.clone(), id))
            .series(Series::line("sum", phis, tot));
        report.outputs.push(plot.save(&dir, "beables_visibility")?);
    }

    if args.check_wave_eq {
        let mut table = Table::new(&["t", "relative_residual"]);
        let mut worst: f64 = 0.0;
        for j in 0..file.wave_eq_samples {
            let t = period * j as f64 / file.wave_eq_samples as f64;
            let r = wave_equation_residual(&units, &pair, t)?.relative_residual();
            worst = worst.max(r);
            table.push(vec![t.into(), r.into()]);
        }
        report.check(Check::new(
            "modified wave equation",
            worst < WAVE_EQUATION_TOLERANCE,
            format!("max relative residual {worst:.3e}"),
        ));
        let table = table.meta("command", "beables --check-wave-eq");
        report.outputs.push(table.save(&dir, "beables_wave_equation", ctx.format)?);
    }
    Ok(report)
}
