//! Command-line front end: prediction, sweeps, segment search, gamma
//! calibration, strategy selection and schedule simulation over parameter
//! files, with CSV on stdout and diagnostics on stderr.
//!
//! Exit codes: 0 on success, 2 on bad arguments, 3 on file or parse errors,
//! 4 on model precondition violations. Numbers are printed with 9 significant
//! digits in decimal notation (exponent fallback outside a sane range), so
//! identical inputs produce byte-identical output.

use crate::contention::{self, ContentionModel, MeasurementSet};
use crate::error::ModelError;
use crate::model::{Family, Prediction, Strategy};
use crate::optimize::{self, SegmentedModel};
use crate::params::{ParamTable, SegmentSpec};
use crate::select;
use crate::sim::{self, AllToAllMode, TreeShape};
use clap::{Args, Parser, Subcommand};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Collective-communication performance toolkit.
#[derive(Debug, Parser)]
#[command(name = "collperf", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predict one strategy's completion time.
    Predict(PredictArgs),
    /// Predict a grid of strategies, process counts and message sizes.
    Sweep(SweepArgs),
    /// Search for the best segment size of a segmented strategy.
    Segment(SegmentArgs),
    /// Fit the all-to-all contention factor to measured completion times.
    Calibrate(CalibrateArgs),
    /// Rank all candidate strategies for one (P, m) point.
    Select(SelectArgs),
    /// Run the schedule simulator and export its timeline.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// pLogP parameter file.
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    /// Collective family: broadcast, scatter or alltoall.
    #[arg(long)]
    pub family: String,
    /// Strategy name within the family.
    #[arg(long)]
    pub strategy: String,
    /// Process count.
    #[arg(short = 'P', long)]
    pub procs: u32,
    /// Message size in bytes.
    #[arg(short = 'm', long)]
    pub message_size: u64,
    /// Fixed segment size in bytes (segmented strategies).
    #[arg(long, conflicts_with = "auto_segment")]
    pub segment: Option<u64>,
    /// Tune the segment size instead of fixing it.
    #[arg(long)]
    pub auto_segment: bool,
    /// Basic-datatype size in bytes.
    #[arg(long, default_value_t = 1)]
    pub unit: u64,
    /// Fixed contention factor for the contended all-to-all.
    #[arg(long, conflicts_with = "gamma_file")]
    pub gamma: Option<f64>,
    /// Measurement file to fit the contention factor from.
    #[arg(long, value_name = "FILE")]
    pub gamma_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    #[arg(long)]
    pub family: String,
    /// Comma-separated strategy names; defaults to the family's candidate set.
    #[arg(long)]
    pub strategies: Option<String>,
    /// Process counts: a comma list (2,4,8) or an inclusive range (2..32).
    #[arg(short = 'P', long)]
    pub procs: String,
    /// Message sizes as a comma list.
    #[arg(short = 'm', long)]
    pub message_sizes: Option<String>,
    /// Geometric message-size ladder: first value.
    #[arg(long, conflicts_with = "message_sizes", requires = "m_count")]
    pub m_start: Option<u64>,
    /// Geometric message-size ladder: multiplier between values.
    #[arg(long, default_value_t = 2)]
    pub m_factor: u64,
    /// Geometric message-size ladder: number of values.
    #[arg(long, requires = "m_start")]
    pub m_count: Option<u32>,
    /// Fixed segment size for segmented strategies; tuned per cell if absent.
    #[arg(long)]
    pub segment: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub unit: u64,
    #[arg(long, conflicts_with = "gamma_file")]
    pub gamma: Option<f64>,
    #[arg(long, value_name = "FILE")]
    pub gamma_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    /// Segmented broadcast strategy: flat_segmented, pipeline or
    /// binomial_segmented.
    #[arg(long, default_value = "pipeline")]
    pub strategy: String,
    #[arg(short = 'P', long)]
    pub procs: u32,
    #[arg(short = 'm', long)]
    pub message_size: u64,
    #[arg(long, default_value_t = 1)]
    pub unit: u64,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    /// Observed all-to-all completion times: `<P> <m_bytes> <observed_seconds>` lines.
    #[arg(long, value_name = "FILE")]
    pub measurements: PathBuf,
}

#[derive(Debug, Args)]
pub struct SelectArgs {
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    #[arg(long)]
    pub family: String,
    #[arg(short = 'P', long)]
    pub procs: u32,
    #[arg(short = 'm', long)]
    pub message_size: u64,
    /// Comma-separated candidate strategies; defaults to the family's set.
    #[arg(long)]
    pub candidates: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub unit: u64,
    #[arg(long, conflicts_with = "gamma_file")]
    pub gamma: Option<f64>,
    #[arg(long, value_name = "FILE")]
    pub gamma_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_name = "FILE")]
    pub params: PathBuf,
    /// Collective to simulate: broadcast, scatter or alltoall.
    #[arg(long)]
    pub collective: String,
    /// Schedule variant: flat, chain or binomial for trees; serialized or
    /// overlapped for the all-to-all.
    #[arg(long)]
    pub variant: String,
    #[arg(short = 'P', long)]
    pub procs: u32,
    #[arg(short = 'm', long)]
    pub message_size: u64,
    /// Segment size in bytes (broadcast shapes only).
    #[arg(long)]
    pub segment: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub unit: u64,
}

/// A failed command with its exit-code category.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::File { .. } => 3,
            CliError::Model(_) => 4,
        }
    }
}

/// Finished command output: CSV/text for stdout plus diagnostic lines for
/// stderr.
#[derive(Debug, Default)]
pub struct CommandOutput {
    pub stdout: String,
    pub diagnostics: Vec<String>,
}

/// Runs one parsed command to completion.
pub fn run(cli: &Cli) -> Result<CommandOutput, CliError> {
    match &cli.command {
        Command::Predict(a) => run_predict(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Segment(a) => run_segment(a),
        Command::Calibrate(a) => run_calibrate(a),
        Command::Select(a) => run_select(a),
        Command::Simulate(a) => run_simulate(a),
    }
}

/// Formats a number with 9 significant digits: decimal notation for
/// magnitudes in [1e-4, 1e9), exponent notation outside.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..=8).contains(&mag) {
        format!("{:.*}", (8 - mag).max(0) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

const PREDICTION_HEADER: &str = "family,strategy,P,m,segment,time_s";

fn prediction_row(p: &Prediction) -> String {
    let segment = p.segment.map(|s| s.size.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{}",
        p.strategy.family(),
        p.strategy,
        p.procs,
        p.message_size,
        segment,
        format_float(p.time)
    )
}

fn load_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::File {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_table(path: &Path) -> Result<ParamTable, CliError> {
    ParamTable::parse(&load_file(path)?).map_err(|e| CliError::File {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse_family(name: &str) -> Result<Family, CliError> {
    match name {
        "broadcast" => Ok(Family::Broadcast),
        "scatter" => Ok(Family::Scatter),
        "alltoall" => Ok(Family::AllToAll),
        other => Err(CliError::Usage(format!(
            "unknown family `{other}` (expected broadcast, scatter or alltoall)"
        ))),
    }
}

fn parse_strategy(family: Family, name: &str) -> Result<Strategy, CliError> {
    Strategy::parse(family, name)
        .ok_or_else(|| CliError::Usage(format!("unknown {family} strategy `{name}`")))
}

fn parse_strategy_list(family: Family, list: &str) -> Result<Vec<Strategy>, CliError> {
    let out: Result<Vec<_>, _> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_strategy(family, s))
        .collect();
    let out = out?;
    if out.is_empty() {
        return Err(CliError::Usage("empty strategy list".into()));
    }
    Ok(out)
}

fn parse_procs_axis(spec: &str) -> Result<Vec<u32>, CliError> {
    let bad = |s: &str| CliError::Usage(format!("bad process-count axis `{s}`"));
    if let Some((a, b)) = spec.split_once("..") {
        let lo: u32 = a.trim().parse().map_err(|_| bad(spec))?;
        let hi: u32 = b.trim().parse().map_err(|_| bad(spec))?;
        if lo > hi {
            return Err(bad(spec));
        }
        return Ok((lo..=hi).collect());
    }
    let vals: Result<Vec<u32>, _> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    let vals = vals.map_err(|_| bad(spec))?;
    if vals.is_empty() {
        return Err(bad(spec));
    }
    Ok(vals)
}

fn parse_size_list(spec: &str) -> Result<Vec<u64>, CliError> {
    let vals: Result<Vec<u64>, _> = spec
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    let vals = vals.map_err(|_| CliError::Usage(format!("bad message-size list `{spec}`")))?;
    if vals.is_empty() {
        return Err(CliError::Usage("empty message-size list".into()));
    }
    Ok(vals)
}

/// Resolves `--gamma`/`--gamma-file` into a contention model, fitting inline
/// when a measurement file is given.
fn resolve_gamma(
    gamma: Option<f64>,
    gamma_file: &Option<PathBuf>,
    table: &ParamTable,
    diagnostics: &mut Vec<String>,
) -> Result<Option<ContentionModel>, CliError> {
    let model = match (gamma, gamma_file) {
        (Some(g), _) => Some(ContentionModel::fixed(g)),
        (None, Some(path)) => {
            let set = MeasurementSet::parse(&load_file(path)?).map_err(|e| CliError::File {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            Some(contention::fit_gamma(table, &set)?)
        }
        (None, None) => None,
    };
    if let Some(m) = &model {
        if m.gamma_out_of_range() {
            diagnostics.push(format!(
                "warning: gamma {} is outside [0, 1]; the linear blend may not describe this network",
                format_float(m.gamma)
            ));
        }
    }
    Ok(model)
}

fn run_predict(args: &PredictArgs) -> Result<CommandOutput, CliError> {
    let table = load_table(&args.params)?;
    let family = parse_family(&args.family)?;
    let strategy = parse_strategy(family, &args.strategy)?;
    let mut out = CommandOutput::default();
    let gamma = resolve_gamma(args.gamma, &args.gamma_file, &table, &mut out.diagnostics)?;

    let seg = if strategy.is_segmented() {
        match (args.segment, args.auto_segment) {
            (Some(size), _) => Some(SegmentSpec::new(args.message_size, size, args.unit)?),
            (None, true) => {
                let model = SegmentedModel::for_strategy(strategy).expect("segmented strategy");
                let search = optimize::optimize_segment(
                    model,
                    &table,
                    args.procs,
                    args.message_size,
                    args.unit,
                )?;
                Some(search.best)
            }
            (None, false) => {
                return Err(CliError::Usage(format!(
                    "strategy {strategy} requires --segment <bytes> or --auto-segment"
                )));
            }
        }
    } else {
        if args.segment.is_some() || args.auto_segment {
            return Err(CliError::Usage(format!(
                "strategy {strategy} does not take a segment"
            )));
        }
        None
    };

    let prediction = select::evaluate(
        &table,
        strategy,
        args.procs,
        args.message_size,
        seg,
        gamma.as_ref(),
    )?;
    if prediction.extrapolated {
        out.diagnostics.push(
            "warning: gap/overhead queried beyond the measured size range (extrapolated)".into(),
        );
    }
    writeln!(out.stdout, "{PREDICTION_HEADER}").unwrap();
    writeln!(out.stdout, "{}", prediction_row(&prediction)).unwrap();
    Ok(out)
}

fn run_sweep(args: &SweepArgs) -> Result<CommandOutput, CliError> {
    let table = load_table(&args.params)?;
    let family = parse_family(&args.family)?;
    let strategies = match &args.strategies {
        Some(list) => parse_strategy_list(family, list)?,
        None => select::default_candidates(family),
    };
    let procs_axis = parse_procs_axis(&args.procs)?;
    let m_axis = match (&args.message_sizes, args.m_start) {
        (Some(list), _) => parse_size_list(list)?,
        (None, Some(start)) => {
            if args.m_factor < 2 {
                return Err(CliError::Usage("--m-factor must be at least 2".into()));
            }
            let count = args
                .m_count
                .expect("clap `requires` ties m_count to m_start");
            let mut sizes = Vec::with_capacity(count as usize);
            let mut m = start.max(1);
            for _ in 0..count {
                sizes.push(m);
                m = m.saturating_mul(args.m_factor);
            }
            sizes
        }
        (None, None) => {
            return Err(CliError::Usage(
                "message sizes required: -m <list> or --m-start/--m-count".into(),
            ));
        }
    };

    let mut out = CommandOutput::default();
    let gamma = resolve_gamma(args.gamma, &args.gamma_file, &table, &mut out.diagnostics)?;
    if gamma.is_none()
        && strategies.iter().any(|s| {
            matches!(
                s,
                Strategy::AllToAll(crate::model::AllToAllVariant::Contended)
            )
        })
    {
        return Err(CliError::Usage(
            "the contended strategy requires --gamma or --gamma-file".into(),
        ));
    }

    writeln!(out.stdout, "{PREDICTION_HEADER}").unwrap();
    let mut extrapolated_rows = 0usize;
    for &strategy in &strategies {
        for &procs in &procs_axis {
            for &m in &m_axis {
                let cell = sweep_cell(&table, strategy, procs, m, args, gamma.as_ref());
                match cell {
                    Ok(p) => {
                        extrapolated_rows += usize::from(p.extrapolated);
                        writeln!(out.stdout, "{}", prediction_row(&p)).unwrap();
                    }
                    Err(e) => out
                        .diagnostics
                        .push(format!("skipping {family},{strategy},P={procs},m={m}: {e}")),
                }
            }
        }
    }
    if extrapolated_rows > 0 {
        out.diagnostics.push(format!(
            "warning: {extrapolated_rows} row(s) queried gap/overhead beyond the measured size range"
        ));
    }
    Ok(out)
}

fn sweep_cell(
    table: &ParamTable,
    strategy: Strategy,
    procs: u32,
    m: u64,
    args: &SweepArgs,
    gamma: Option<&ContentionModel>,
) -> Result<Prediction, ModelError> {
    let seg = match SegmentedModel::for_strategy(strategy) {
        Some(model) => Some(match args.segment {
            Some(size) => SegmentSpec::new(m, size, args.unit)?,
            None => optimize::optimize_segment(model, table, procs, m, args.unit)?.best,
        }),
        None => None,
    };
    select::evaluate(table, strategy, procs, m, seg, gamma)
}

fn run_segment(args: &SegmentArgs) -> Result<CommandOutput, CliError> {
    let table = load_table(&args.params)?;
    let strategy = parse_strategy(Family::Broadcast, &args.strategy)?;
    let model = SegmentedModel::for_strategy(strategy).ok_or_else(|| {
        CliError::Usage(format!("strategy {strategy} has no segment size to search"))
    })?;

    let sweep =
        optimize::sweep_powers_of_two(model, &table, args.procs, args.message_size, args.unit)?;
    let climb = optimize::hill_climb(
        model,
        &table,
        args.procs,
        args.message_size,
        args.unit,
        sweep.best,
    )?;

    let mut out = CommandOutput::default();
    writeln!(out.stdout, "stage,s,time_s").unwrap();
    for &(s, t) in &sweep.trace {
        writeln!(out.stdout, "sweep,{s},{}", format_float(t)).unwrap();
    }
    for &(s, t) in &climb.trace {
        writeln!(out.stdout, "climb,{s},{}", format_float(t)).unwrap();
    }
    let (best, time) = if climb.time < sweep.time
        || (climb.time == sweep.time && climb.best.size > sweep.best.size)
    {
        (climb.best, climb.time)
    } else {
        (sweep.best, sweep.time)
    };
    writeln!(out.stdout, "winner,{},{}", best.size, format_float(time)).unwrap();
    if climb.budget_exhausted {
        out.diagnostics
            .push("warning: hill climbing stopped at its step budget".into());
    }
    Ok(out)
}

fn run_calibrate(args: &CalibrateArgs) -> Result<CommandOutput, CliError> {
    let table = load_table(&args.params)?;
    let set =
        MeasurementSet::parse(&load_file(&args.measurements)?).map_err(|e| CliError::File {
            path: args.measurements.display().to_string(),
            message: e.to_string(),
        })?;
    let fit = contention::fit_gamma(&table, &set)?;
    let mut out = CommandOutput::default();
    writeln!(out.stdout, "gamma {}", format_float(fit.gamma)).unwrap();
    writeln!(
        out.stdout,
        "rms_residual_s {}",
        format_float(fit.fit_residual.unwrap_or(0.0))
    )
    .unwrap();
    writeln!(out.stdout, "samples {}", fit.sample_count).unwrap();
    if fit.gamma_out_of_range() {
        writeln!(
            out.stdout,
            "warning: gamma outside [0, 1]; the linear blend may not describe this network"
        )
        .unwrap();
    }
    Ok(out)
}

fn run_select(args: &SelectArgs) -> Result<CommandOutput, CliError> {
    let table = load_table(&args.params)?;
    let family = parse_family(&args.family)?;
    let candidates = match &args.candidates {
        Some(list) => Some(parse_strategy_list(family, list)?),
        None => None,
    };
    let mut out = CommandOutput::default();
    let gamma = resolve_gamma(args.gamma, &args.gamma_file, &table, &mut out.diagnostics)?;
    let report = select::select(
        &table,
        family,
        args.procs,
        args.message_size,
        args.unit,
        candidates.as_deref(),
        gamma.as_ref(),
    )?;

    writeln!(out.stdout, "rank,strategy,segment,time_s,caveats").unwrap();
    for (i, p) in report.ranked.iter().enumerate() {
        let mut notes = Vec::new();
        if p.upper_bound {
            notes.push("upper_bound");
        }
        if p.extrapolated {
            notes.push("extrapolated");
        }
        let segment = p.segment.map(|s| s.size.to_string()).unwrap_or_default();
        writeln!(
            out.stdout,
            "{},{},{},{},{}",
            i + 1,
            p.strategy,
            segment,
            format_float(p.time),
            notes.join(";")
        )
        .unwrap();
    }
    for caveat in &report.caveats {
        out.diagnostics.push(format!("note: {caveat}"));
    }
    Ok(out)
}

fn run_simulate(args: &SimulateArgs) -> Result<CommandOutput, CliError> {
    let table = load_table(&args.params)?;
    let seg = args
        .segment
        .map(|size| SegmentSpec::new(args.message_size, size, args.unit))
        .transpose()?;

    let (timeline, model_time) = match args.collective.as_str() {
        "broadcast" => {
            let shape = parse_tree_shape(&args.variant)?;
            let tl = sim::simulate_broadcast(&table, args.procs, args.message_size, shape, seg)?;
            let closed = match (shape, seg) {
                (TreeShape::Flat, None) => {
                    crate::model::bcast_flat(&table, args.procs, args.message_size)?
                }
                (TreeShape::Flat, Some(s)) => {
                    crate::model::bcast_flat_segmented(&table, args.procs, args.message_size, s)?
                }
                (TreeShape::Chain, None) => {
                    crate::model::bcast_chain(&table, args.procs, args.message_size)?
                }
                (TreeShape::Chain, Some(s)) => {
                    crate::model::bcast_pipeline(&table, args.procs, args.message_size, s)?
                }
                (TreeShape::Binomial, None) => {
                    crate::model::bcast_binomial(&table, args.procs, args.message_size)?
                }
                (TreeShape::Binomial, Some(s)) => crate::model::bcast_binomial_segmented(
                    &table,
                    args.procs,
                    args.message_size,
                    s,
                )?,
            };
            (tl, closed.time)
        }
        "scatter" => {
            if seg.is_some() {
                return Err(CliError::Usage(
                    "scatter simulation takes no segment".into(),
                ));
            }
            let shape = parse_tree_shape(&args.variant)?;
            let tl = sim::simulate_scatter(&table, args.procs, args.message_size, shape)?;
            let closed = match shape {
                TreeShape::Flat => {
                    crate::model::scatter_flat(&table, args.procs, args.message_size)?
                }
                TreeShape::Chain => {
                    crate::model::scatter_chain(&table, args.procs, args.message_size)?
                }
                TreeShape::Binomial => {
                    crate::model::scatter_binomial(&table, args.procs, args.message_size)?
                }
            };
            (tl, closed.time)
        }
        "alltoall" => {
            if seg.is_some() {
                return Err(CliError::Usage(
                    "alltoall simulation takes no segment".into(),
                ));
            }
            let mode = match args.variant.as_str() {
                "serialized" => AllToAllMode::Serialized,
                "overlapped" => AllToAllMode::Overlapped,
                other => {
                    return Err(CliError::Usage(format!(
                        "unknown alltoall variant `{other}` (expected serialized or overlapped)"
                    )));
                }
            };
            let tl = sim::simulate_alltoall(&table, args.procs, args.message_size, mode)?;
            let closed = match mode {
                AllToAllMode::Serialized => {
                    crate::model::alltoall_upper(&table, args.procs, args.message_size)?
                }
                AllToAllMode::Overlapped => {
                    crate::model::alltoall_lower(&table, args.procs, args.message_size)?
                }
            };
            (tl, closed.time)
        }
        other => {
            return Err(CliError::Usage(format!(
                "unknown collective `{other}` (expected broadcast, scatter or alltoall)"
            )));
        }
    };

    let mut out = CommandOutput::default();
    out.stdout.push_str(&timeline.export());
    writeln!(
        out.stdout,
        "# completion {:.9} model {:.9}",
        timeline.completion, model_time
    )
    .unwrap();
    Ok(out)
}

fn parse_tree_shape(name: &str) -> Result<TreeShape, CliError> {
    match name {
        "flat" => Ok(TreeShape::Flat),
        "chain" => Ok(TreeShape::Chain),
        "binomial" => Ok(TreeShape::Binomial),
        other => Err(CliError::Usage(format!(
            "unknown tree variant `{other}` (expected flat, chain or binomial)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_is_nine_significant_digits() {
        assert_eq!(format_float(34.0), "34.0000000");
        assert_eq!(format_float(1930.0), "1930.00000");
        assert_eq!(format_float(0.000160), "0.000160000000");
        assert_eq!(format_float(1.5e-7), "1.50000000e-7");
        assert_eq!(format_float(123456789.0), "123456789");
        assert_eq!(format_float(0.0), "0.00000000");
    }

    #[test]
    fn procs_axis_forms() {
        assert_eq!(parse_procs_axis("2,4,8").unwrap(), vec![2, 4, 8]);
        assert_eq!(parse_procs_axis("3..6").unwrap(), vec![3, 4, 5, 6]);
        assert!(parse_procs_axis("6..3").is_err());
        assert!(parse_procs_axis("a,b").is_err());
    }

    #[test]
    fn strategy_names_resolve_per_family() {
        assert!(parse_strategy(Family::Broadcast, "pipeline").is_ok());
        assert!(parse_strategy(Family::Broadcast, "chain_segmented").is_ok());
        assert!(parse_strategy(Family::Scatter, "pipeline").is_err());
        assert!(parse_strategy(Family::AllToAll, "contended").is_ok());
    }
}
