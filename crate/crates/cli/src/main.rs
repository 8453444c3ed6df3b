//! `cpso`: run constrained PSO experiments, sweeps and feasibility estimates.
//!
//! Exit status is 0 whenever results were produced, including rows where
//! every run failed to initialize (written as `FAIL`). Usage errors exit
//! with 2, evaluation errors with 1.

mod output;
mod settings;
mod sweep_file;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use cpso::{ChtKind, ExperimentConfig, Suite, Tolerances};
use serde::Serialize;

use output::OutputRecord;
use settings::{RecDecrease, Settings};

#[derive(Debug, Parser)]
#[command(name = "cpso", version, about = "Constrained particle swarm optimization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one experiment and print its summary row.
    Run(RunArgs),
    /// Run every experiment described by a TOML sweep file.
    Sweep(SweepArgs),
    /// Estimate the feasible percentage of a problem's box by uniform sampling.
    Feasibility(FeasibilityArgs),
    /// List the registered benchmark problems.
    List(ListArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParallelArgs {
    /// Worker threads; 0 uses one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Include per-run records in JSON output.
    #[arg(long)]
    detail: bool,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[arg(long)]
    problem: String,
    #[arg(long)]
    cht: String,
    /// Neighbours per particle: 2 ring, 10 ring window of 11, particles-1 fully connected.
    #[arg(long, default_value_t = settings::DEFAULT_NN)]
    nn: usize,
    #[arg(long, default_value_t = settings::DEFAULT_PARTICLES)]
    particles: usize,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = settings::DEFAULT_RUNS)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Tolerances::DEFAULT.ineq)]
    tol_ineq: f64,
    #[arg(long, default_value_t = Tolerances::DEFAULT.eq)]
    tol_eq: f64,
    /// Fraction of the steps after which the equality tolerance is final (+rec techniques only).
    #[arg(long)]
    rec_switch: Option<f64>,
    #[arg(long, value_enum)]
    rec_decrease: Option<RecDecrease>,
    /// Probability of applying the priority rules (pfppr techniques only).
    #[arg(long)]
    prob: Option<f64>,
    #[arg(long)]
    max_init_attempts: Option<usize>,
    /// Write per-step best conflict and violation of every run to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    parallel: ParallelArgs,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// TOML sweep file.
    config: PathBuf,
    #[command(flatten)]
    output: OutputArgs,
    #[command(flatten)]
    parallel: ParallelArgs,
}

#[derive(Debug, Args)]
struct FeasibilityArgs {
    #[arg(long)]
    problem: String,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Tolerances::DEFAULT.ineq)]
    tol_ineq: f64,
    #[arg(long, default_value_t = Tolerances::DEFAULT.eq)]
    tol_eq: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    G,
    Engineering,
}

#[derive(Debug, Args)]
struct ListArgs {
    #[arg(long, value_enum)]
    suite: Option<SuiteArg>,
    #[command(flatten)]
    output: OutputArgs,
}

/// An operator mistake: bad names, conflicting flags, malformed sweep files.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl ToString) -> anyhow::Error {
    UsageError(msg.to_string()).into()
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            Box::new(BufWriter::new(File::create(path).with_context(|| format!("cannot create {}", path.display()))?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?;
    Ok(pool.install(f))
}

fn emit_records(records: &[OutputRecord], output: &OutputArgs, single: bool) -> Result<()> {
    for r in records {
        r.validate().context("emitted record failed validation")?;
    }
    let out = sink(&output.out)?;
    match output.format {
        Format::Json if single => output::write_json(out, &records[0]),
        Format::Json => output::write_json(out, records),
        Format::Csv => output::write_csv(out, &records.iter().map(|r| &r.summary).collect::<Vec<_>>()),
    }
}

fn cmd_run(args: RunArgs) -> Result<()> {
    let cht: ChtKind = args.cht.parse().map_err(usage)?;
    let settings = Settings {
        nn: Some(args.nn),
        particles: Some(args.particles),
        runs: Some(args.runs),
        seed: Some(args.seed),
        tol_ineq: Some(args.tol_ineq),
        tol_eq: Some(args.tol_eq),
        rec_switch: args.rec_switch,
        rec_decrease: args.rec_decrease,
        prob: args.prob,
        max_init_attempts: args.max_init_attempts,
        ..Settings::new(args.problem, cht, args.steps)
    };
    let config = settings.into_config().map_err(usage)?;
    let tracing = args.trace.is_some();
    let outcome = with_jobs(args.parallel.jobs, || cpso::run_experiment_detailed(&config, tracing))??;
    if let Some(path) = &args.trace {
        let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
        output::write_trace(BufWriter::new(file), outcome.runs.iter().flat_map(|r| &r.trace))?;
    }
    let record = OutputRecord::new(config, outcome, args.parallel.detail);
    emit_records(&[record], &args.output, true)
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let path = args.config.display().to_string();
    let text = std::fs::read_to_string(&args.config).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let configs: Vec<ExperimentConfig> = sweep_file::parse(&path, &text).map_err(usage)?;
    let outcomes = with_jobs(args.parallel.jobs, || cpso::sweep_detailed(&configs, false))??;
    let records: Vec<OutputRecord> =
        configs.into_iter().zip(outcomes).map(|(c, o)| OutputRecord::new(c, o, args.parallel.detail)).collect();
    emit_records(&records, &args.output, false)?;
    let errors: Vec<String> = records
        .iter()
        .filter_map(|r| {
            r.summary
                .error
                .as_ref()
                .map(|e| format!("{} {} nn={}: {e}", r.summary.problem, r.summary.cht, r.summary.nn))
        })
        .collect();
    anyhow::ensure!(errors.is_empty(), "{} experiment(s) failed:\n{}", errors.len(), errors.join("\n"));
    Ok(())
}

#[derive(Debug, Serialize)]
struct FeasibilityRecord {
    problem: String,
    samples: u64,
    seed: u64,
    tol_ineq: f64,
    tol_eq: f64,
    feasibility_ratio: f64,
}

fn cmd_feasibility(args: FeasibilityArgs) -> Result<()> {
    let entry = cpso::get_problem(&args.problem).map_err(usage)?;
    let tolerances = Tolerances::new(args.tol_ineq, args.tol_eq).map_err(usage)?;
    let samples = usize::try_from(args.samples).map_err(usage)?;
    let ratio = cpso::estimate_feasibility_ratio(&entry.problem, samples, tolerances, args.seed)?;
    let record = FeasibilityRecord {
        problem: args.problem,
        samples: args.samples,
        seed: args.seed,
        tol_ineq: args.tol_ineq,
        tol_eq: args.tol_eq,
        feasibility_ratio: ratio,
    };
    let out = sink(&args.output.out)?;
    match args.output.format {
        Format::Json => output::write_json(out, &record),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["problem", "samples", "seed", "tol_ineq", "tol_eq", "feasibility_ratio"])?;
            w.write_record([
                record.problem.clone(),
                record.samples.to_string(),
                record.seed.to_string(),
                output::format_sig(record.tol_ineq, 12),
                output::format_sig(record.tol_eq, 12),
                output::format_sig(record.feasibility_ratio, 12),
            ])?;
            w.flush()?;
            Ok(())
        }
    }
}

#[derive(Debug, Serialize)]
struct ListRecord {
    name: String,
    suite: String,
    dimension: usize,
    ni: usize,
    ne: usize,
    feasibility_ratio: Option<f64>,
    optimum: Option<f64>,
}

fn cmd_list(args: ListArgs) -> Result<()> {
    let wanted = args.suite.map(|s| match s {
        SuiteArg::G => Suite::GSuite,
        SuiteArg::Engineering => Suite::Engineering,
    });
    let rows: Vec<ListRecord> = cpso::registry()
        .iter()
        .filter(|e| wanted.is_none_or(|s| e.suite == s))
        .map(|e| ListRecord {
            name: e.name().to_string(),
            suite: e.suite.to_string(),
            dimension: e.declared.dimension,
            ni: e.declared.inequalities,
            ne: e.declared.equalities,
            feasibility_ratio: e.reported_feasibility_ratio,
            optimum: e.best_known(),
        })
        .collect();
    let out = sink(&args.output.out)?;
    match args.output.format {
        Format::Json => output::write_json(out, &rows),
        Format::Csv => {
            let opt = |v: Option<f64>| v.map_or(String::new(), |v| output::format_sig(v, 12));
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["name", "suite", "dimension", "ni", "ne", "feasibility_ratio", "optimum"])?;
            for r in &rows {
                w.write_record([
                    r.name.clone(),
                    r.suite.clone(),
                    r.dimension.to_string(),
                    r.ni.to_string(),
                    r.ne.to_string(),
                    opt(r.feasibility_ratio),
                    opt(r.optimum),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Feasibility(a) => cmd_feasibility(a),
        Command::List(a) => cmd_list(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
