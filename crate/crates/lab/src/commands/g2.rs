use anyhow::{bail, Context as _, Result};
use gralab_core::fock::{
    default_n_max, expect_coincidence, expect_reflected, expect_transmitted, g2, oracle_g2, BeamSplitter,
    QuantumState,
};
use gralab_core::Complex64;

use crate::cli::G2Args;
use crate::output::{fmt_num, ensure_dir, Cell, Check, Table};
use crate::{Context, Report};

/// Parses `number:N`, `coherent:RE[,IM]` or `chaotic:U`.
pub fn parse_state(spec: &str) -> Result<QuantumState> {
    let (kind, value) = spec
        .split_once(':')
        .with_context(|| format!("state {spec:?} must look like kind:value"))?;
    let state = match kind.trim().to_ascii_lowercase().as_str() {
        "number" => QuantumState::number(value.trim().parse().with_context(|| format!("bad photon number in {spec:?}"))?),
        "coherent" => {
            let mut parts = value.split(',').map(|p| p.trim().parse::<f64>());
            let re = parts.next().transpose()?.with_context(|| format!("missing amplitude in {spec:?}"))?;
            let im = parts.next().transpose()?.unwrap_or(0.0);
            if parts.next().is_some() {
                bail!("coherent amplitude takes at most two components");
            }
            QuantumState::coherent(Complex64::new(re, im))?
        }
        "chaotic" => QuantumState::chaotic(value.trim().parse().with_context(|| format!("bad U in {spec:?}"))?)?,
        other => bail!("unknown state kind {other:?}; expected number, coherent or chaotic"),
    };
    Ok(state)
}

pub fn run(ctx: &Context, args: &G2Args) -> Result<Report> {
    let state = parse_state(&args.state)?;
    let bs = BeamSplitter::from_transmittance(args.transmittance)?;
    let closed = g2(&state, &bs)?;

    let mut report = Report {
        config: serde_json::json!({
            "state": args.state,
            "transmittance": args.transmittance,
            "oracle": args.oracle,
            "n_max": args.n_max,
            "tolerance": args.tolerance,
        }),
        ..Report::default()
    };
    let mut table = Table::new(&[
        "state", "mean_transmitted", "mean_reflected", "coincidence", "g2", "g2_oracle", "discrepancy",
    ]);
    report.line(format!("state            {}", args.state));
    report.line(format!("<n_t>            {}", fmt_num(expect_transmitted(&state, &bs))));
    report.line(format!("<n_r>            {}", fmt_num(expect_reflected(&state, &bs))));
    report.line(format!("<n_t n_r>        {}", fmt_num(expect_coincidence(&state, &bs))));
    report.line(format!("g2               {}", fmt_num(closed)));

    let mut row: Vec<Cell> = vec![
        args.state.as_str().into(),
        expect_transmitted(&state, &bs).into(),
        expect_reflected(&state, &bs).into(),
        expect_coincidence(&state, &bs).into(),
        closed.into(),
    ];
    if args.oracle {
        let n_max = args.n_max.unwrap_or(0).max(default_n_max(&state));
        let oracle = oracle_g2(&state, &bs, n_max)?;
        let diff = (oracle - closed).abs();
        report.line(format!("g2 (oracle)      {}  [n_max = {n_max}]", fmt_num(oracle)));
        report.line(format!("discrepancy      {}", fmt_num(diff)));
        report.check(Check::new(
            "oracle agreement",
            diff <= args.tolerance,
            format!("|closed - oracle| = {diff:.3e} (tolerance {:.1e})", args.tolerance),
        ));
        row.extend([Cell::Num(oracle), Cell::Num(diff)]);
    } else {
        row.extend(["".into(), "".into()]);
    }
    table.push(row);

    if let Some(dir) = &ctx.out_dir {
        ensure_dir(dir)?;
        let table = table.meta("command", "g2").meta("transmittance", fmt_num(args.transmittance));
        report.outputs.push(table.save(dir, "g2", ctx.format)?);
    }
    Ok(report)
}
