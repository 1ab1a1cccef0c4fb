//! Command-line laboratory around `gralab-core`: configuration files,
//! CSV/JSON tables, SVG plots and run manifests.

pub mod cli;
pub mod commands;
pub mod config;
pub mod output;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Result;

use crate::cli::{Cli, Command};
use crate::output::{Check, Format, RunManifest};

/// Default output directory when neither `--out-dir` nor `GRALAB_OUT_DIR` is set.
pub const DEFAULT_OUT_DIR: &str = "gralab-out";

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Context {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub format: Format,
}

impl Context {
    pub fn out_dir(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }
}

/// What a subcommand produced.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub checks: Vec<Check>,
    pub outputs: Vec<PathBuf>,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::G2(_) => "g2",
        Command::Cascade(_) => "cascade",
        Command::Beables(_) => "beables",
        Command::Photodetect(_) => "photodetect",
        Command::Classical(_) => "classical",
    }
}

/// Runs one invocation, writing the manifest whenever files were produced.
pub fn run(cli: &Cli) -> Result<Report> {
    let ctx = Context {
        seed: cli.seed,
        out_dir: cli.out_dir.clone(),
        format: cli.format,
    };
    let start = Instant::now();
    let report = match &cli.command {
        Command::G2(a) => commands::g2::run(&ctx, a)?,
        Command::Cascade(a) => commands::cascade::run(&ctx, a)?,
        Command::Beables(a) => commands::beables::run(&ctx, a)?,
        Command::Photodetect(a) => commands::photodetect::run(&ctx, a)?,
        Command::Classical(a) => commands::classical::run(&ctx, a)?,
    };
    if !report.outputs.is_empty() {
        let dir = ctx.out_dir();
        let manifest = RunManifest {
            subcommand: subcommand_name(&cli.command).to_owned(),
            config: report.config.clone(),
            rng_seed: report.seed,
            rng_algorithm: gralab_core::cascade::RNG_ALGORITHM,
            engine_versions: output::engine_versions(),
            outputs: report.outputs.iter().map(|p| file_name(p)).collect(),
            checks: report.checks.clone(),
            wall_clock_seconds: start.elapsed().as_secs_f64(),
        };
        manifest.save(&dir)?;
    }
    Ok(report)
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |n| n.to_string_lossy().into_owned())
}
