use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hpobench::analyze::{analyze, manifest_budgets, write_reports};
use hpobench::persist;
use hpobench::runner::{load_results, run_suite, RunOptions};
use hpobench::suite::{builtin, SuiteSpec, SUITES};
use hpobench_core::instance::SurrogateConfig;
use hpobench_core::{Instance, Mode};

#[derive(Parser)]
#[command(name = "hpobench", version, about = "Benchmark hyperparameter optimizers on real, tabular and surrogate instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in suite or a suite spec file.
    Run(RunArgs),
    /// Evaluate a real instance on a grid and store the table.
    Tabulate {
        #[arg(long)]
        instance: String,
        /// Non-budget grid points.
        #[arg(long, default_value_t = 10_000)]
        cap: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit an MLP-ensemble surrogate of a real instance and store it.
    FitSurrogate {
        #[arg(long)]
        instance: String,
        #[arg(long, default_value_t = 10_000)]
        n_train: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute regret or hypervolume curves, ranks, consensus and tests.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        /// Report directory; defaults to `<in>/analysis`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the consensus report.
        #[arg(long)]
        consensus: bool,
        /// Mode the consensus orders are compared against.
        #[arg(long)]
        reference: Option<Mode>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Inspect built-in suites.
    Suite {
        #[command(subcommand)]
        command: SuiteCommand,
    },
}

#[derive(Subcommand)]
enum SuiteCommand {
    /// List built-in suites with their instance counts.
    List,
    /// Print a built-in suite as a spec file.
    Show { name: String },
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct SuiteSource {
    #[arg(long)]
    suite: Option<String>,
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    source: SuiteSource,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Only run cells of this mode.
    #[arg(long)]
    mode: Option<Mode>,
    /// Replace every cell's optimizers.
    #[arg(long, value_delimiter = ',')]
    optimizers: Option<Vec<String>>,
}

fn run(args: RunArgs) -> Result<()> {
    let mut spec: SuiteSpec = match (&args.source.suite, &args.source.spec) {
        (Some(name), _) => builtin(name)?,
        (_, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        _ => unreachable!("clap enforces one source"),
    };
    if let Some(s) = args.seed {
        spec.master_seed = s;
    }
    if let Some(r) = args.reps {
        spec.replications = r;
    }
    if let Some(m) = args.mode {
        spec.restrict_mode(m);
    }
    if let Some(o) = &args.optimizers {
        spec.set_optimizers(o);
    }
    let Some(out) = args.out.or_else(|| spec.out_dir.clone()) else {
        bail!("no output directory: pass --out or set out_dir in the spec");
    };
    let opts = RunOptions { workers: args.workers, ..RunOptions::new(out.clone()) };
    let manifest = run_suite(&spec, &opts)?;
    let failed: Vec<&str> = manifest.cells.iter().filter(|c| !c.errors.is_empty()).map(|c| c.key.as_str()).collect();
    let total: usize = manifest.cells.iter().map(|c| c.trajectories).sum();
    println!("{}: {total} trajectories in {:.1}s -> {}", spec.name, manifest.wall_time_s, out.display());
    if !failed.is_empty() {
        bail!("failures in {}", failed.join(", "));
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => run(args),
        Command::Tabulate { instance, cap, out } => {
            let tab = Instance::from_id(&instance)?.tabulate(cap, None)?;
            persist::save(&tab, &out)?;
            println!("{instance}: {} rows -> {}", tab.tabular().expect("tabular").rows(), out.display());
            Ok(())
        }
        Command::FitSurrogate { instance, n_train, seed, out } => {
            let cfg = SurrogateConfig { n_train, ..SurrogateConfig::default() };
            let (sur, report) = Instance::from_id(&instance)?.fit_surrogate(&cfg, seed)?;
            persist::save(&sur, &out)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(())
        }
        Command::Analyze { input, out, consensus, reference, alpha } => {
            let (manifest, rows) = load_results(&input)?;
            let a = analyze(&rows, &manifest_budgets(&manifest), reference, alpha);
            for s in &a.skipped {
                log::warn!("{s}");
            }
            let out = out.unwrap_or_else(|| input.join("analysis"));
            write_reports(&a, &out)?;
            if consensus {
                match &a.consensus {
                    Some(c) => println!("{}", serde_json::to_string_pretty(c)?),
                    None => bail!("no consensus could be formed"),
                }
            }
            Ok(())
        }
        Command::Suite { command: SuiteCommand::List } => {
            for name in SUITES {
                let s = builtin(name)?;
                println!("{name}\t{} instances\t{} cells", s.distinct_instances(), s.cells.len());
            }
            Ok(())
        }
        Command::Suite { command: SuiteCommand::Show { name } } => {
            println!("{}", serde_json::to_string_pretty(&builtin(&name)?)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // Clap exits with status 2 on usage errors.
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
