//! Command implementations behind the `unifit` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use unifit::censored::{censored_test_with, CensoredOptions, VarianceMode, WeightMode};
use unifit::classical::{classical_test, Tail};
use unifit::delta::delta_test;
use unifit::io::{read_dataset, CriticalValueCache, Dataset, Report, StandardizeSpec, CACHE_ENV};
use unifit::montecarlo::{
    calibrate_censoring, censoring_rate, custom_table, empirical_censoring_fraction,
    reproduce_table, DistributionSpec, PowerTable, SimulationConfig, Simulator, TableId,
};
use unifit::{CensoredSample, Error, Method, Result, Sample};

pub const DEFAULT_ALPHA: f64 = 0.05;
pub const DEFAULT_REPS: usize = 10_000;
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Parser)]
#[command(name = "unifit", version, about = "Goodness-of-fit tests for U(0,1)")]
#[command(after_help = format!(
    "Exit status: 0 = H0 not rejected, 1 = H0 rejected, 2 = error.\n\
     Simulated critical values are cached in ${CACHE_ENV} when it is set."
))]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a complete sample (or a censored one with --method censored).
    Test(TestArgs),
    /// Test a right-censored sample with the IPCW statistic.
    TestCensored(CensoredArgs),
    /// Run a size/power study: a reference table or a single custom cell.
    Simulate(SimulateArgs),
    /// Find the bound c of C ~ U(0,c) giving a target censoring rate.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// CSV file with a `time` column and an optional `status` column.
    pub file: PathBuf,
    #[arg(long, default_value = "delta")]
    pub method: Method,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// none, minmax or range:a,b
    #[arg(long, default_value = "none")]
    pub standardize: StandardizeSpec,
    /// Null replications for simulated critical values.
    #[arg(long, default_value_t = DEFAULT_REPS)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the report as JSON.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum VarianceArg {
    #[default]
    Corrected,
    Literal,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum WeightArg {
    /// 1/K(Y-)
    #[default]
    Left,
    /// 1/K(Y)
    Right,
}

#[derive(Debug, Args)]
pub struct CensoredArgs {
    /// CSV file with `time` and `status` columns (1 = event, 0 = censored).
    pub file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value = "none")]
    pub standardize: StandardizeSpec,
    #[arg(long, value_enum, default_value_t)]
    pub variance: VarianceArg,
    #[arg(long, value_enum, default_value_t)]
    pub weights: WeightArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Reference table T1..T8.
    #[arg(long, conflicts_with_all = ["dist", "n"], required_unless_present = "dist")]
    pub table: Option<String>,
    /// Alternative for a custom cell, e.g. uniform:0,1.2 or gamma:2,1.
    #[arg(long, requires = "n")]
    pub dist: Option<DistributionSpec>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Restrict a table to these methods; the method of a custom cell.
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<Method>,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    pub alpha: f64,
    /// Target censoring rate P(X > C) for a custom cell.
    #[arg(long)]
    pub censoring: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_REPS)]
    pub reps: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Null replications behind competitor critical values.
    #[arg(long, default_value_t = unifit::montecarlo::CALIBRATION_REPS)]
    pub calibration_reps: usize,
    /// Directory receiving `<table>.json` and `<table>.txt`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub dist: DistributionSpec,
    #[arg(long)]
    pub target: f64,
    /// Simulated (X, C) pairs used to check the attained rate.
    #[arg(long, default_value_t = 100_000)]
    pub pairs: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

/// What a finished command tells the shell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Accept,
    Reject,
    Done,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Accept | Status::Done => 0,
            Status::Reject => 1,
        }
    }
}

pub const ERROR_CODE: u8 = 2;

pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<Status> {
    match cli.command {
        Command::Test(args) => {
            let cache = CriticalValueCache::from_env();
            let report = cmd_test(&args, &cache)?;
            emit_report(&report, args.out.as_deref(), stdout, stderr)
        }
        Command::TestCensored(args) => {
            let report = cmd_test_censored(&args)?;
            emit_report(&report, args.out.as_deref(), stdout, stderr)
        }
        Command::Simulate(args) => {
            let sim = Simulator::new(CriticalValueCache::from_env())
                .with_calibration_reps(args.calibration_reps);
            let table = cmd_simulate(&args, &sim)?;
            write(stdout, &table.render())?;
            if let Some(dir) = &args.out {
                write_table(&table, dir)?;
            }
            for cell in table.flagged() {
                write(
                    stderr,
                    &format!(
                        "note: {} {} n={} level={} differs from the reference by {:+.4}\n",
                        cell.method,
                        cell.dist,
                        cell.n,
                        cell.level,
                        cell.diff.unwrap_or(0.0)
                    ),
                )?;
            }
            Ok(Status::Done)
        }
        Command::Calibrate(args) => {
            let c = cmd_calibrate(&args)?;
            let attained = censoring_rate(&args.dist, c);
            let empirical = empirical_censoring_fraction(&args.dist, c, args.pairs, args.seed);
            write(
                stdout,
                &format!(
                    "dist             {}\ntarget           {}\nc                {c:.10}\nattained rate    {attained:.10}\nempirical rate   {empirical:.4} ({} pairs, seed {})\n",
                    args.dist, args.target, args.pairs, args.seed
                ),
            )?;
            Ok(Status::Done)
        }
    }
}

fn write(w: &mut dyn Write, text: &str) -> Result<()> {
    w.write_all(text.as_bytes()).map_err(Error::from)
}

fn emit_report(
    report: &Report,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<Status> {
    write(stdout, &report.render())?;
    for w in &report.warnings {
        write(stderr, &format!("warning: {w}\n"))?;
    }
    if let Some(path) = out {
        fs::write(path, report.to_json() + "\n")?;
    }
    Ok(if report.rejected() {
        Status::Reject
    } else {
        Status::Accept
    })
}

fn write_table(table: &PowerTable, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(
        dir.join(format!("{}.json", table.table)),
        table.to_json() + "\n",
    )?;
    fs::write(dir.join(format!("{}.txt", table.table)), table.render())?;
    Ok(())
}

/// Delta and KS tolerate data off the unit interval; the spacing
/// statistics and Frozini do not.
fn refuses_off_support(method: Method) -> bool {
    method.requires_unit_interval() || method == Method::Frozini
}

pub fn cmd_test(args: &TestArgs, cache: &CriticalValueCache) -> Result<Report> {
    let data = read_dataset(&args.file)?;
    if args.method == Method::Censored {
        return censored_report(
            &data,
            args.alpha,
            args.standardize,
            CensoredOptions::default(),
        );
    }
    if data.is_censored() {
        return Err(Error::Unsupported {
            method: args.method.label(),
            regime: "censored",
        });
    }
    let (values, standardization) = args.standardize.apply(data.times())?;
    let sample = Sample::new(values)?;
    let mut warnings = Vec::new();
    if let Some((index, value)) = sample.first_outside_unit() {
        if refuses_off_support(args.method) {
            return Err(Error::Domain {
                method: args.method.label(),
                index,
                value,
            });
        }
        warnings.push(format!(
            "observation {index} = {value} lies outside [0, 1]; consider --standardize"
        ));
    }
    let mut report = if args.method == Method::Delta {
        Report::new(&delta_test(&sample, args.alpha)?, standardization)
    } else {
        let n = sample.len();
        cache.get(args.method, n, args.alpha, args.reps, args.seed)?;
        let null = cache.null_distribution(args.method, n, args.reps, args.seed)?;
        let mut r = Report::new(
            &classical_test(&sample, args.alpha, &null)?,
            standardization,
        );
        r.tail = Some(Tail::of(args.method));
        r.reps = Some(args.reps);
        r.seed = Some(args.seed);
        r
    };
    report.warnings = warnings;
    Ok(report)
}

pub fn cmd_test_censored(args: &CensoredArgs) -> Result<Report> {
    let data = read_dataset(&args.file)?;
    let opts = CensoredOptions {
        weights: match args.weights {
            WeightArg::Left => WeightMode::LeftLimit,
            WeightArg::Right => WeightMode::RightContinuous,
        },
        variance: match args.variance {
            VarianceArg::Corrected => VarianceMode::Corrected,
            VarianceArg::Literal => VarianceMode::Literal,
        },
    };
    censored_report(&data, args.alpha, args.standardize, opts)
}

fn censored_report(
    data: &Dataset,
    alpha: f64,
    standardize: StandardizeSpec,
    opts: CensoredOptions,
) -> Result<Report> {
    let (times, standardization) = standardize.apply(data.times())?;
    let sample = match data {
        Dataset::Complete(_) => CensoredSample::uncensored(&times)?,
        Dataset::Censored { status, .. } => CensoredSample::from_parts(&times, status)?,
    };
    let result = censored_test_with(&sample, alpha, opts)?;
    let mut report = Report::new(&result, standardization);
    report.events = Some(sample.event_count());
    if let Some(t) = sample.times().find(|&t| t > 1.0) {
        report.warnings.push(format!(
            "follow-up time {t} exceeds 1; consider --standardize"
        ));
    }
    Ok(report)
}

pub fn cmd_simulate(args: &SimulateArgs, sim: &Simulator) -> Result<PowerTable> {
    match (&args.table, &args.dist) {
        (Some(id), _) => {
            let id: TableId = id.parse()?;
            let methods = (!args.method.is_empty()).then_some(args.method.as_slice());
            reproduce_table(sim, id, args.reps, args.seed, methods)
        }
        (None, Some(dist)) => {
            let method = match args.method.as_slice() {
                [] => {
                    if args.censoring.is_some() {
                        Method::Censored
                    } else {
                        Method::Delta
                    }
                }
                [m] => *m,
                _ => {
                    return Err(Error::Argument(
                        "a custom cell takes a single --method".into(),
                    ))
                }
            };
            let config = SimulationConfig {
                dist: *dist,
                n: args
                    .n
                    .ok_or_else(|| Error::Argument("--dist needs --n".into()))?,
                alpha: args.alpha,
                reps: args.reps,
                seed: args.seed,
                censoring: args.censoring,
            };
            config.validate()?;
            custom_table(sim, &config, method)
        }
        (None, None) => Err(Error::Argument("give --table or --dist".into())),
    }
}

pub fn cmd_calibrate(args: &CalibrateArgs) -> Result<f64> {
    if args.pairs == 0 {
        return Err(Error::Argument("--pairs must be at least 1".into()));
    }
    calibrate_censoring(&args.dist, args.target)
}
