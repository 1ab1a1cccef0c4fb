use anyhow::{bail, Result};
use gralab_core::photodetect::{
    absorption_matrix_element_check, energy_profile, time_profile, DetectorAtomConfig,
};
use serde::{Deserialize, Serialize};

use crate::cli::PhotodetectArgs;
use crate::config;
use crate::output::{ensure_dir, fmt_num, Cell, Check, Table};
use crate::svg::{Plot, Series};
use crate::{Context, Report};

/// Detector settings plus the sampling of the `|η|²` profiles.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhotodetectFile {
    pub atom: DetectorAtomConfig,
    /// Elapsed times of the energy profiles.
    pub times: Vec<f64>,
    /// Half-width of the energy window around resonance.
    pub energy_span: f64,
    pub energy_points: usize,
    /// Energy mismatch of the time profile.
    pub resonance_offset: f64,
    pub t_max: f64,
    pub time_points: usize,
    pub n_max: usize,
}

impl Default for PhotodetectFile {
    fn default() -> Self {
        Self {
            atom: DetectorAtomConfig::hydrogen_like(),
            times: vec![0.0, 50.0, 100.0, 200.0],
            energy_span: 0.5,
            energy_points: 401,
            resonance_offset: 0.0,
            t_max: 200.0,
            time_points: 201,
            n_max: 4,
        }
    }
}

pub fn run(ctx: &Context, args: &PhotodetectArgs) -> Result<Report> {
    let mut file: PhotodetectFile = config::load(args.config.as_deref())?;
    if let Some(phi) = args.phi {
        file.atom.phase = phi;
    }
    file.atom.validate()?;
    if file.energy_points < 2 || file.time_points < 2 || file.energy_span.is_nan() || file.energy_span <= 0.0 || file.t_max.is_nan() || file.t_max <= 0.0 {
        bail!("profiles need at least two points and positive spans");
    }
    let cfg = file.atom;
    let mut report = Report {
        config: serde_json::to_value(&file)?,
        ..Report::default()
    };
    let dir = ctx.out_dir();
    ensure_dir(&dir)?;

    let energies: Vec<f64> = (0..file.energy_points)
        .map(|i| -file.energy_span + 2.0 * file.energy_span * i as f64 / (file.energy_points - 1) as f64)
        .collect();
    let mut table = Table::new(&["t", "energy", "time_factor_sq", "eta_sq"]);
    let mut plot = Plot::new("Transition probability against energy mismatch", "E", "|eta|^2");
    for &t in &file.times {
        let rows = energy_profile(&cfg, t, &energies)?;
        for p in &rows {
            table.push(vec![
                p.t.into(),
                p.energy.into(),
                p.time_factor_sq.into(),
                p.eta_sq.map_or(Cell::Text(String::new()), Cell::Num),
            ]);
        }
        if t == 0.0 {
            let all_zero = rows.iter().all(|p| p.time_factor_sq == 0.0 && p.eta_sq.unwrap_or(0.0) == 0.0);
            report.check(Check::new("no transition at t = 0", all_zero, "profile at t = 0 vanishes identically"));
        }
        plot = plot.series(Series::line(
            &format!("t = {t}"),
            rows.iter().map(|p| p.energy).collect(),
            rows.iter().map(|p| p.eta_sq.unwrap_or(0.0)).collect(),
        ));
    }
    let table = table.meta("command", "photodetect").meta("phase", fmt_num(cfg.phase));
    report.outputs.push(table.save(&dir, "photodetect_energy", ctx.format)?);
    report.outputs.push(plot.save(&dir, "photodetect_energy")?);

    let times: Vec<f64> = (0..file.time_points)
        .map(|i| file.t_max * i as f64 / (file.time_points - 1) as f64)
        .collect();
    let rows = time_profile(&cfg, file.resonance_offset, &times)?;
    let mut table = Table::new(&["t", "energy", "time_factor_sq", "eta_sq"]);
    for p in &rows {
        table.push(vec![
            p.t.into(),
            p.energy.into(),
            p.time_factor_sq.into(),
            p.eta_sq.map_or(Cell::Text(String::new()), Cell::Num),
        ]);
    }
    let table = table.meta("command", "photodetect").meta("energy", fmt_num(file.resonance_offset));
    report.outputs.push(table.save(&dir, "photodetect_time", ctx.format)?);

    let check = absorption_matrix_element_check(&cfg, file.n_max)?;
    let mut table = Table::new(&["n_alpha", "n_beta", "overlap_re", "overlap_im", "overlap_abs"]);
    for o in &check.nonzero {
        table.push(vec![
            o.n_alpha.into(),
            o.n_beta.into(),
            o.amplitude.re.into(),
            o.amplitude.im.into(),
            o.amplitude.norm().into(),
        ]);
    }
    report.line(format!("phase                      {}", fmt_num(cfg.phase)));
    report.line(format!("nonzero field overlaps     {}", check.nonzero.len()));
    report.line(format!(
        "vacuum overlap             {} {:+}i",
        fmt_num(check.vacuum_overlap.re),
        fmt_num(check.vacuum_overlap.im)
    ));
    report.line(format!("largest non-vacuum overlap {:.3e}", check.max_non_vacuum));
    if check.zero_amplitude {
        report.line("note: i - exp(i phi) vanishes at this phase, so the absorption amplitude is zero");
    }
    let expected_count = usize::from(!check.zero_amplitude);
    report.check(Check::new(
        "whole-quantum absorption",
        check.whole_quantum_only() && check.nonzero.len() == expected_count,
        format!(
            "{} nonzero overlap(s), all non-vacuum overlaps below {:.0e}",
            check.nonzero.len(),
            check.tolerance
        ),
    ));
    let table = table
        .meta("command", "photodetect")
        .meta("n_max", check.n_max)
        .meta("zero_amplitude", check.zero_amplitude);
    report.outputs.push(table.save(&dir, "photodetect_overlaps", ctx.format)?);
    Ok(report)
}
