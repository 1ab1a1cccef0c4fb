use std::fs::File;

use anyhow::{Context as _, Result};
use gralab_core::classical::alpha_of_intensities;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use crate::cli::ClassicalArgs;
use crate::output::{ensure_dir, fmt_num, Cell, Check, Table};
use crate::svg::{Plot, Series};
use crate::{Context, Report};

/// Reads the first column of a headerless or headed CSV, skipping cells
/// that do not parse as numbers.
pub fn read_intensities(path: &std::path::Path) -> Result<Vec<f64>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(file);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if let Some(v) = rec.get(0).and_then(|c| c.trim().parse::<f64>().ok()) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Named intensity ensembles drawn from one seeded stream.
pub fn generated_ensembles(seed: u64, gates: usize) -> Vec<(&'static str, Vec<f64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let constant = vec![1.0; gates];
    let uniform: Vec<f64> = (0..gates).map(|_| rng.random::<f64>()).collect();
    let thermal: Vec<f64> = (0..gates).map(|_| Exp1.sample(&mut rng)).collect();
    let on_off: Vec<f64> = (0..gates).map(|_| if rng.random_bool(0.2) { 5.0 } else { 0.0 }).collect();
    let sinusoidal: Vec<f64> = (0..gates)
        .map(|i| 1.0 + (2.0 * std::f64::consts::PI * i as f64 / gates as f64).sin())
        .collect();
    vec![
        ("constant", constant),
        ("uniform", uniform),
        ("thermal", thermal),
        ("on_off", on_off),
        ("sinusoidal", sinusoidal),
    ]
}

pub fn run(ctx: &Context, args: &ClassicalArgs) -> Result<Report> {
    let seed = ctx.seed.unwrap_or(0);
    let ensembles: Vec<(String, Vec<f64>)> = match &args.intensities {
        Some(path) => vec![(path.display().to_string(), read_intensities(path)?)],
        None => generated_ensembles(seed, args.gates as usize)
            .into_iter()
            .map(|(n, v)| (n.to_owned(), v))
            .collect(),
    };

    let mut report = Report {
        config: serde_json::json!({
            "intensities": args.intensities.as_ref().map(|p| p.display().to_string()),
            "gates": args.gates,
        }),
        seed: args.intensities.is_none().then_some(seed),
        ..Report::default()
    };
    let mut table = Table::new(&["ensemble", "gates", "alpha", "bound_holds"]);
    let mut alphas = Vec::new();
    report.line(format!("{:<16} {:>8} {:>20}", "ensemble", "gates", "alpha"));
    for (name, values) in &ensembles {
        let alpha = alpha_of_intensities(values).with_context(|| format!("ensemble {name}"))?;
        let holds = alpha >= 1.0 - 1e-12;
        report.line(format!("{name:<16} {:>8} {:>20}", values.len(), fmt_num(alpha)));
        table.push(vec![name.as_str().into(), values.len().into(), alpha.into(), Cell::from(holds)]);
        report.check(Check::new(
            &format!("alpha >= 1 ({name})"),
            holds,
            format!("alpha = {}", fmt_num(alpha)),
        ));
        alphas.push(alpha);
    }

    let dir = ctx.out_dir();
    ensure_dir(&dir)?;
    let table = table.meta("command", "classical").meta("seed", seed);
    report.outputs.push(table.save(&dir, "classical", ctx.format)?);
    let idx: Vec<f64> = (0..alphas.len()).map(|i| i as f64).collect();
    let plot = Plot::new("Semiclassical anticorrelation parameter", "ensemble index", "alpha")
        .series(Series::markers("alpha", idx.clone(), alphas))
        .series(Series::line("bound", idx, vec![1.0; ensembles.len()]));
    report.outputs.push(plot.save(&dir, "classical")?);
    Ok(report)
}
