use anyhow::{bail, Result};
use gralab_core::cascade::{
    alpha_stderr, correlation_for_f, f_omega, g2_analytic, measured_alpha, simulate_worker, sweep_curve_with,
    ArrivalMode, CascadeConfig, CascadeError, CountRecord, RunLength, SweepRow, DEFAULT_LIFETIME,
};
use gralab_core::fock::BeamSplitter;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cli::CascadeArgs;
use crate::config::{self, duration};
use crate::output::{ensure_dir, fmt_num, Check, Table};
use crate::svg::{Plot, Series};
use crate::{Context, Report};

/// Nω values of the default sweep.
pub const DEFAULT_SWEEP: [f64; 6] = [0.01, 0.05, 0.1, 0.3, 0.9, 3.0];

/// On-disk cascade configuration; every field is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CascadeFile {
    #[serde(default, deserialize_with = "duration")]
    pub lifetime: Option<f64>,
    #[serde(default, deserialize_with = "duration")]
    pub gate: Option<f64>,
    /// Mean decays per gate; alternative to `decay_rate`.
    pub n_omega: Option<f64>,
    pub decay_rate: Option<f64>,
    /// Target `f(ω)`; alternative to `correlation_factor`.
    pub f_omega: Option<f64>,
    pub correlation_factor: Option<f64>,
    pub epsilon_1: Option<f64>,
    pub epsilon_t: Option<f64>,
    pub epsilon_r: Option<f64>,
    pub transmittance: Option<f64>,
    pub gates: Option<u64>,
    #[serde(default, deserialize_with = "duration")]
    pub run_time: Option<f64>,
    pub seed: Option<u64>,
    pub mode: Option<ArrivalMode>,
    pub accidental_collection: Option<f64>,
    pub workers: Option<usize>,
    pub sweep: Option<Vec<f64>>,
    /// Accepted relative deviation in the sweep check.
    pub relative_tolerance: Option<f64>,
    /// Accepted deviation in standard errors in the sweep check.
    pub sigma_tolerance: Option<f64>,
}

/// Fully resolved settings, as recorded in the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedCascade {
    pub lifetime: f64,
    pub gate: f64,
    pub decay_rate: f64,
    pub n_omega: f64,
    pub correlation_factor: f64,
    pub f_omega: f64,
    pub epsilon_1: f64,
    pub epsilon_t: f64,
    pub epsilon_r: f64,
    pub transmittance: f64,
    pub run: RunLength,
    pub seed: u64,
    pub mode: ArrivalMode,
    pub accidental_collection: f64,
    pub workers: usize,
    pub sweep: Vec<f64>,
    pub relative_tolerance: f64,
    pub sigma_tolerance: f64,
}

impl CascadeFile {
    pub fn resolve(&self, args: &CascadeArgs, seed: Option<u64>) -> Result<(CascadeConfig, ResolvedCascade)> {
        let d = CascadeConfig::default();
        let lifetime = self.lifetime.unwrap_or(DEFAULT_LIFETIME);
        let gate = self.gate.unwrap_or(2.0 * lifetime);
        let decay_rate = match (self.n_omega, self.decay_rate) {
            (Some(_), Some(_)) => bail!("give either n_omega or decay_rate, not both"),
            (Some(n), None) => n / gate,
            (None, Some(r)) => r,
            (None, None) => 0.9 / gate,
        };
        let correlation_factor = match (self.f_omega, self.correlation_factor) {
            (Some(_), Some(_)) => bail!("give either f_omega or correlation_factor, not both"),
            (Some(f), None) => correlation_for_f(f, gate, lifetime),
            (None, Some(a)) => a,
            (None, None) => correlation_for_f(0.9, gate, lifetime),
        };
        let transmittance = self.transmittance.unwrap_or(0.5);
        let run = match (args.gates, self.gates, self.run_time) {
            (Some(g), _, _) => RunLength::Gates(g),
            (None, Some(_), Some(_)) => bail!("give either gates or run_time, not both"),
            (None, Some(g), None) => RunLength::Gates(g),
            (None, None, Some(t)) => RunLength::Time(t),
            (None, None, None) => d.run,
        };
        let cfg = CascadeConfig {
            decay_rate,
            lifetime,
            gate,
            correlation_factor,
            epsilon_1: self.epsilon_1.unwrap_or(d.epsilon_1),
            epsilon_t: self.epsilon_t.unwrap_or(d.epsilon_t),
            epsilon_r: self.epsilon_r.unwrap_or(d.epsilon_r),
            beam_splitter: BeamSplitter::from_transmittance(transmittance)?,
            run,
            seed: seed.or(self.seed).unwrap_or(d.seed),
            mode: self.mode.unwrap_or(d.mode),
            accidental_collection: self.accidental_collection.unwrap_or(d.accidental_collection),
            workers: args.workers.map(|w| w as usize).or(self.workers).unwrap_or(d.workers),
        };
        cfg.validate()?;
        let sweep = self.sweep.clone().unwrap_or_else(|| DEFAULT_SWEEP.to_vec());
        if sweep.iter().any(|n| !(n.is_finite() && *n >= 0.0)) {
            bail!("sweep values must be finite and non-negative");
        }
        let resolved = ResolvedCascade {
            lifetime,
            gate,
            decay_rate,
            n_omega: cfg.n_omega(),
            correlation_factor,
            f_omega: f_omega(&cfg),
            epsilon_1: cfg.epsilon_1,
            epsilon_t: cfg.epsilon_t,
            epsilon_r: cfg.epsilon_r,
            transmittance,
            run,
            seed: cfg.seed,
            mode: cfg.mode,
            accidental_collection: cfg.accidental_collection,
            workers: cfg.workers,
            sweep,
            relative_tolerance: self.relative_tolerance.unwrap_or(0.05),
            sigma_tolerance: self.sigma_tolerance.unwrap_or(3.0),
        };
        Ok((cfg, resolved))
    }
}

/// Runs the worker streams in parallel and merges them in worker order,
/// which reproduces the sequential result bit for bit.
pub fn simulate_parallel(cfg: &CascadeConfig) -> Result<CountRecord, CascadeError> {
    cfg.validate()?;
    let parts: Vec<CountRecord> = (0..cfg.workers)
        .into_par_iter()
        .map(|w| simulate_worker(cfg, w))
        .collect::<Result<_, _>>()?;
    Ok(parts.iter().fold(CountRecord::default(), |acc, r| acc.merge(r)))
}

/// Parallel sweep over Nω with per-point seeds `seed + index`.
pub fn sweep_parallel(template: &CascadeConfig, values: &[f64]) -> Result<Vec<SweepRow>, CascadeError> {
    let records: Vec<CountRecord> = values
        .par_iter()
        .enumerate()
        .map(|(i, &n)| simulate_parallel(&gralab_core::cascade::sweep_point_config(template, n, i)))
        .collect::<Result<_, _>>()?;
    let mut it = records.into_iter();
    sweep_curve_with(template, values, |_| Ok(it.next().expect("one record per point")))
}

/// `|α_mc − α_analytic| ≤ max(rel·α_analytic, sigmas·stderr)`.
pub fn within_tolerance(row: &SweepRow, rel: f64, sigmas: f64) -> bool {
    (row.alpha_mc - row.alpha_analytic).abs() <= (rel * row.alpha_analytic).max(sigmas * row.stderr)
}

pub fn run(ctx: &Context, args: &CascadeArgs) -> Result<Report> {
    let file: CascadeFile = config::load(args.config.as_deref())?;
    let (cfg, resolved) = file.resolve(args, ctx.seed)?;
    let mut report = Report {
        config: serde_json::to_value(&resolved)?,
        seed: Some(cfg.seed),
        ..Report::default()
    };
    let f = f_omega(&cfg);
    let dir = ctx.out_dir();
    ensure_dir(&dir)?;

    if args.sweep {
        let rows = sweep_parallel(&cfg, &resolved.sweep)?;
        let mut table = Table::new(&["n_omega", "alpha_mc", "stderr", "alpha_analytic", "gates", "within_tolerance"]);
        report.line(format!("f(omega) = {}", fmt_num(f)));
        report.line(format!("{:>10} {:>18} {:>18} {:>18}", "N*omega", "alpha (MC)", "stderr", "alpha (analytic)"));
        for row in &rows {
            let ok = within_tolerance(row, resolved.relative_tolerance, resolved.sigma_tolerance);
            report.line(format!(
                "{:>10} {:>18} {:>18} {:>18}",
                row.n_omega,
                fmt_num(row.alpha_mc),
                fmt_num(row.stderr),
                fmt_num(row.alpha_analytic)
            ));
            table.push(vec![
                row.n_omega.into(),
                row.alpha_mc.into(),
                row.stderr.into(),
                row.alpha_analytic.into(),
                row.gates.into(),
                ok.into(),
            ]);
            report.check(Check::new(
                &format!("Monte Carlo vs analytic at N*omega = {}", row.n_omega),
                ok,
                format!(
                    "|{} - {}| vs max({} rel, {} sigma)",
                    fmt_num(row.alpha_mc),
                    fmt_num(row.alpha_analytic),
                    resolved.relative_tolerance,
                    resolved.sigma_tolerance
                ),
            ));
        }
        let table = table
            .meta("command", "cascade --sweep")
            .meta("seed", cfg.seed)
            .meta("f_omega", fmt_num(f))
            .meta("rng", gralab_core::cascade::RNG_ALGORITHM);
        report.outputs.push(table.save(&dir, "cascade_sweep", ctx.format)?);

        let (lo, hi) = resolved
            .sweep
            .iter()
            .filter(|n| **n > 0.0)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &n| (a.min(n), b.max(n)));
        let (lo, hi) = if lo.is_finite() { (lo / 2.0, hi * 2.0) } else { (1e-3, 10.0) };
        let xs: Vec<f64> = (0..=200).map(|i| lo * (hi / lo).powf(i as f64 / 200.0)).collect();
        let ys: Vec<f64> = xs.iter().map(|&n| g2_analytic(n, f)).collect();
        let plotted: Vec<&SweepRow> = rows.iter().filter(|r| r.n_omega > 0.0).collect();
        let plot = Plot::new("Anticorrelation parameter of the gated cascade source", "N omega", "alpha")
            .log_x()
            .series(Series::line(&format!("analytic, f = {f:.3}"), xs, ys))
            .series(
                Series::markers(
                    "Monte Carlo",
                    plotted.iter().map(|r| r.n_omega).collect(),
                    plotted.iter().map(|r| r.alpha_mc).collect(),
                )
                .with_errors(plotted.iter().map(|r| r.stderr).collect()),
            );
        report.outputs.push(plot.save(&dir, "cascade_sweep")?);
    } else {
        let rec = simulate_parallel(&cfg)?;
        let analytic = g2_analytic(cfg.n_omega(), f);
        let mut table = Table::new(&[
            "n_omega", "gates", "n1", "nt", "nr", "nc", "alpha_mc", "stderr", "alpha_analytic", "trigger_fraction",
        ]);
        let (alpha, se) = match (measured_alpha(&rec), alpha_stderr(&rec)) {
            (Ok(a), Ok(s)) => (a, s),
            _ => (f64::NAN, f64::NAN),
        };
        report.line(format!("N*omega          {}", fmt_num(cfg.n_omega())));
        report.line(format!("gates            {}", rec.total_gates));
        report.line(format!("N1 Nt Nr Nc      {} {} {} {}", rec.n1, rec.nt, rec.nr, rec.nc));
        report.line(format!("alpha (MC)       {} +- {}", fmt_num(alpha), fmt_num(se)));
        report.line(format!("alpha (analytic) {}", fmt_num(analytic)));
        table.push(vec![
            cfg.n_omega().into(),
            rec.total_gates.into(),
            rec.n1.into(),
            rec.nt.into(),
            rec.nr.into(),
            rec.nc.into(),
            alpha.into(),
            se.into(),
            analytic.into(),
            rec.trigger_arrival_fraction().into(),
        ]);
        if cfg.decay_rate == 0.0 {
            report.check(Check::new(
                "single-photon anticoincidence",
                rec.nc == 0,
                format!("{} coincidences in {} gates", rec.nc, rec.total_gates),
            ));
        }
        let table = table
            .meta("command", "cascade")
            .meta("seed", cfg.seed)
            .meta("rng", gralab_core::cascade::RNG_ALGORITHM);
        report.outputs.push(table.save(&dir, "cascade_run", ctx.format)?);
    }
    Ok(report)
}
