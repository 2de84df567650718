use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use giro::analysis::{lemma1_lower_bound, verify_bounds, write_bound_csv, Grid};
use giro::contextual::load_classification_env;
use giro::harness::{
    aggregate, emit_csv, lemma1_experiment, run_contextual, run_experiment, ExperimentConfig,
    Lemma1Report, MeanRule, Mode,
};
use giro::Execution;

/// Exit code when a bound check fails.
const BOUND_FAILURE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "giro",
    version,
    about = "Bootstrap exploration bandit experiments"
)]
struct Cli {
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridArg {
    Small,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV; overrides `out` in the config. Defaults to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Draw rewards separately for each policy.
        #[arg(long)]
        independent_draws: bool,
    },
    /// Naive bootstrap lock-in on two Bernoulli arms.
    Lemma1 {
        #[arg(long)]
        mu1: f64,
        #[arg(long)]
        mu2: f64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        runs: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Contextual policies on a classification dataset.
    Contextual {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the regret-analysis inequalities on a parameter grid.
    VerifyBounds {
        #[arg(long, value_enum, default_value = "small")]
        grid: GridArg,
        #[arg(long)]
        out: PathBuf,
    },
}

type BoxError = Box<dyn std::error::Error>;

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, BoxError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_config(path: &Path) -> Result<ExperimentConfig, BoxError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    Ok(ExperimentConfig::parse(&text)?)
}

fn print_lemma1(report: &Lemma1Report, mu1: f64, mu2: f64, n: u64) -> bool {
    let bound = lemma1_lower_bound(mu1, mu1 - mu2, n);
    let margin = 3.0 * report.regret_stderr;
    println!("runs={}", report.runs);
    println!("lock_events={}", report.lock_events);
    println!("lock_frequency={}", report.lock_frequency);
    println!("expected_lock_frequency={}", 0.5 * (1.0 - mu1));
    println!("lock_violations={}", report.lock_violations);
    println!("mean_regret={}", report.mean_regret);
    println!("regret_stderr={}", report.regret_stderr);
    println!("lower_bound={bound}");
    report.lock_violations == 0 && report.mean_regret + margin >= bound
}

fn verify(grid: Grid, out: Option<&Path>, exec: Execution) -> Result<bool, BoxError> {
    let reports = verify_bounds(grid, exec)?;
    write_bound_csv(&reports, open_out(out)?)?;
    let failed = reports.iter().filter(|r| !r.pass()).count();
    eprintln!("{} checks, {failed} failed", reports.len());
    Ok(failed == 0)
}

/// Runs the command; `Ok(false)` means a bound check failed.
fn run(cli: Cli) -> Result<bool, BoxError> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Simulate {
            config,
            out,
            independent_draws,
        } => {
            let mut config = read_config(&config)?;
            config.independent_draws |= independent_draws;
            let out = out.or_else(|| config.out.clone().map(PathBuf::from));
            match config.mode {
                Mode::Mab => {
                    let logs = run_experiment(&config, exec)?;
                    let curve = aggregate(&logs.policy_names, &logs.regret_curves())?;
                    emit_csv(&curve, open_out(out.as_deref())?)?;
                    Ok(true)
                }
                Mode::Contextual => {
                    let dataset = match &config.contextual.data {
                        Some(path) => Some(load_classification_env(path, config.seed)?),
                        None => None,
                    };
                    let logs = run_contextual(&config, dataset.as_ref(), exec)?;
                    let curve = aggregate(&logs.policy_names, &logs.mean_reward_curves())?;
                    emit_csv(&curve, open_out(out.as_deref())?)?;
                    Ok(true)
                }
                Mode::Lemma1 => {
                    config.validate()?;
                    let MeanRule::Explicit(m) = &config.means else {
                        return Err("lemma1 needs explicit means".into());
                    };
                    let report =
                        lemma1_experiment(m[0], m[1], config.n, config.runs, config.seed, exec)?;
                    Ok(print_lemma1(&report, m[0], m[1], config.n))
                }
                Mode::VerifyBounds => verify(config.grid, out.as_deref(), exec),
            }
        }
        Command::Lemma1 {
            mu1,
            mu2,
            n,
            runs,
            seed,
        } => {
            let report = lemma1_experiment(mu1, mu2, n, runs, seed, exec)?;
            Ok(print_lemma1(&report, mu1, mu2, n))
        }
        Command::Contextual { config, data, out } => {
            let mut config = read_config(&config)?;
            if config.mode != Mode::Contextual {
                return Err("contextual needs a config with mode = contextual".into());
            }
            let env = load_classification_env(&data, config.seed)
                .map_err(|e| format!("{}: {e}", data.display()))?;
            config.contextual.data = Some(data.display().to_string());
            let out = out.or_else(|| config.out.clone().map(PathBuf::from));
            let logs = run_contextual(&config, Some(&env), exec)?;
            let curve = aggregate(&logs.policy_names, &logs.mean_reward_curves())?;
            emit_csv(&curve, open_out(out.as_deref())?)?;
            Ok(true)
        }
        Command::VerifyBounds { grid, out } => {
            let grid = match grid {
                GridArg::Small => Grid::Small,
                GridArg::Full => Grid::Full,
            };
            verify(grid, Some(&out), exec)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(BOUND_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
