//! Command-line interface.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use bundlechoice_core::designs::simulate_design;
use bundlechoice_core::result::{EstimationResult, EtaTestResult, Method};
use bundlechoice_core::seed::{derive_seed, Stream};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::estimate::{estimate, estimate_with_bootstrap, test_eta};
use crate::harness::{run_replications, ReplicationPlan};
use crate::io::{float17, read_dataset_file, write_dataset_file, write_json, Dataset};
use crate::table::{emit_table, TableFormat, TableRow};

/// Semiparametric estimation of bundle discrete-choice models.
#[derive(Debug, Parser)]
#[command(name = "bundlechoice", version, about)]
pub struct Cli {
    /// Worker threads for Monte Carlo batches (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Log progress to stderr; repeat for more detail.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    /// Subcommand.
    #[command(subcommand)]
    pub command: Command,
}

fn method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: bundlechoice_core::Error| e.to_string())
}

/// Data, configuration and seed shared by the estimation commands.
#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Estimator: mrc, lad, panel-ms or panel-lad.
    #[arg(long, value_parser = method)]
    pub method: Method,
    /// Dataset CSV.
    #[arg(long)]
    pub data: PathBuf,
    /// Configuration JSON.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Seed of the optimizer and first-stage streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output JSON.
    #[arg(long)]
    pub out: PathBuf,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a built-in design and write it as CSV.
    Simulate {
        /// Design, 1 to 4.
        #[arg(long)]
        design: u8,
        /// Number of agents.
        #[arg(long)]
        n: usize,
        /// Seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Set the interaction effect to zero.
        #[arg(long)]
        null_eta: bool,
        /// Output CSV.
        #[arg(long)]
        out: PathBuf,
    },
    /// Point estimate.
    Estimate(EstimateArgs),
    /// Point estimate with bootstrap confidence intervals.
    Bootstrap {
        /// Data, configuration, seed and output.
        #[command(flatten)]
        args: EstimateArgs,
        /// Bootstrap draws.
        #[arg(long, default_value_t = 99)]
        b: usize,
    },
    /// Replicated simulation and estimation, summarized per sample size.
    Montecarlo {
        /// Design, 1 to 4.
        #[arg(long)]
        design: u8,
        /// Estimator.
        #[arg(long, value_parser = method)]
        method: Method,
        /// Sample sizes; repeat the flag or separate with commas.
        #[arg(long, required = true, value_delimiter = ',')]
        n: Vec<usize>,
        /// Replications per sample size.
        #[arg(long, default_value_t = 50)]
        reps: usize,
        /// Bootstrap draws per replication; 0 skips the bootstrap.
        #[arg(long, default_value_t = 0)]
        b: usize,
        /// Master seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Set the interaction effect to zero.
        #[arg(long)]
        null_eta: bool,
        /// Configuration JSON.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Table format; inferred from the extension of `--out` (`.txt` is text).
        #[arg(long, value_enum)]
        format: Option<TableFormat>,
        /// Also write every replication's estimates to this CSV.
        #[arg(long)]
        estimates: Option<PathBuf>,
        /// Output table.
        #[arg(long)]
        out: PathBuf,
    },
    /// Bootstrap test of a positive interaction effect.
    TestEta {
        /// Data, configuration, seed and output.
        #[command(flatten)]
        args: EstimateArgs,
        /// Bootstrap draws.
        #[arg(long, default_value_t = 99)]
        b: usize,
    },
}

fn load(args: &EstimateArgs) -> Result<(RunConfig, Dataset)> {
    let config = RunConfig::load(args.config.as_deref())?;
    let data = read_dataset_file(&args.data, config.kinds.as_ref())?;
    Ok((config, data))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct EtaReport<'a> {
    estimation: &'a EstimationResult,
    test: &'a EtaTestResult,
}

fn write_estimates(path: &Path, names: &[String], rows: &[(usize, crate::harness::Batch)]) -> Result<()> {
    let f = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(f));
    let mut h = vec!["N".to_string(), "replication".to_string()];
    h.extend(names.iter().cloned());
    w.write_record(&h)?;
    for (n, batch) in rows {
        for r in &batch.replications {
            let mut rec = vec![n.to_string(), r.index.to_string()];
            rec.extend(r.estimates.iter().map(|v| float17(*v)));
            w.write_record(&rec)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Executes a parsed command line.
pub fn run(cli: Cli) -> Result<()> {
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(t) = cli.threads {
            if t == 0 {
                return Err(Error::format("--threads must be at least 1"));
            }
            b = b.num_threads(t);
        }
        b.build().map_err(|e| Error::format(e.to_string()))?
    };
    pool.install(|| execute(cli.command))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Simulate { design, n, seed, null_eta, out } => {
            let plan = ReplicationPlan { null_eta, ..ReplicationPlan::new(design, Method::Mrc, n, 1, seed) };
            let data: Dataset = simulate_design(&plan.spec()?, n, seed)?.into();
            write_dataset_file(&data, out)
        }
        Command::Estimate(args) => {
            let (config, data) = load(&args)?;
            let r = estimate(args.method, &data, &config, args.seed, None)?;
            write_json(&r, &args.out)
        }
        Command::Bootstrap { args, b } => {
            if b == 0 {
                return Err(Error::format("--b must be at least 1"));
            }
            let (config, data) = load(&args)?;
            let r = estimate_with_bootstrap(args.method, &data, &config, args.seed, None, b, derive_seed(args.seed, 0, Stream::Bootstrap))?;
            write_json(&r, &args.out)
        }
        Command::TestEta { args, b } => {
            if b == 0 {
                return Err(Error::format("--b must be at least 1"));
            }
            let (config, data) = load(&args)?;
            let (estimation, test) = test_eta(args.method, &data, &config, args.seed, b, derive_seed(args.seed, 0, Stream::EtaTest))?;
            write_json(&EtaReport { estimation: &estimation, test: &test }, &args.out)
        }
        Command::Montecarlo { design, method, n, reps, b, seed, null_eta, config, format, estimates, out } => {
            let config = RunConfig::load(config.as_deref())?;
            let format = format.unwrap_or(if out.extension().is_some_and(|e| e == "txt") { TableFormat::Text } else { TableFormat::Csv });
            let plans: Vec<ReplicationPlan> = n.iter().map(|&n| ReplicationPlan { design, method, n, reps, b, seed, null_eta }).collect();
            for p in &plans {
                p.validate()?;
            }
            let mut batches = Vec::with_capacity(plans.len());
            for p in &plans {
                log::info!("design {} {} N={} R={} B={}", p.design, p.method.as_str(), p.n, p.reps, p.b);
                let batch = run_replications(p, &config)?;
                if !batch.failures.is_empty() {
                    eprintln!("N={}: {} of {} replications failed", p.n, batch.failures.len(), p.reps);
                }
                batches.push((p.n, batch));
            }
            let rows = batches.iter().map(|(n, b)| Ok(TableRow { n: *n, summary: b.summary()? })).collect::<Result<Vec<_>>>()?;
            write_text(&out, &emit_table(&rows, format))?;
            if let Some(path) = estimates {
                write_estimates(&path, &plans[0].truth()?.0, &batches)?;
            }
            Ok(())
        }
    }
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).try_init();
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
            if let Error::Batch { log, .. } = &e {
                for line in log {
                    let _ = writeln!(std::io::stderr(), "  {line}");
                }
            }
            e.exit_code()
        }
    }
}
