use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use convlab::catalog::{default_method, default_problem, METHODS, PROBLEMS};
use convlab::output::{curve_csv, emit_bound_table, emit_witness, write_file};
use convlab::run::output_paths;
use convlab::{run, threads_from_env, verify_record, CliError, CliResult, Experiment, LoadedConfig, Overrides, RunRecord};

#[derive(Parser)]
#[command(name = "convlab", version, about = "Finite-horizon convergence experiments for inference methods")]
struct Cli {
    /// Master seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Horizon T (overrides the config).
    #[arg(long, global = true)]
    horizon: Option<u64>,
    /// Monte Carlo trials per stage (overrides the config).
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Output directory for `run`, output file for the other commands.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mode check and write the curve CSV and run record.
    Run { config: PathBuf },
    /// Compute the success curve only.
    Curve { config: PathBuf },
    /// Check a config and its problem; with --record, re-run and compare.
    Verify {
        config: PathBuf,
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Describe unachievability witnesses for a problem.
    Witness {
        /// Take problem and method from a config instead of by name.
        config: Option<PathBuf>,
        #[arg(long)]
        problem: Option<String>,
        #[arg(long)]
        method: Option<String>,
        /// Input length for the never-output search.
        #[arg(long, default_value_t = 4)]
        depth: u32,
    },
    /// Tabulate the Bernoulli bound 1 - 1/(4nε²).
    Bound {
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        n_min: u64,
        #[arg(long)]
        n_max: u64,
    },
}

fn load(cli: &Cli, path: &Path) -> CliResult<LoadedConfig> {
    let mut cfg = LoadedConfig::load(path)?;
    Overrides {
        seed: cli.seed,
        horizon: cli.horizon,
        trials: cli.trials,
    }
    .apply(&mut cfg);
    Ok(cfg)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => write_file(p, text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string())),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn witness(cli: &Cli, config: Option<&Path>, problem: Option<&str>, method: Option<&str>, depth: u32) -> CliResult<()> {
    let doc = match config {
        Some(path) => {
            let cfg = load(cli, path)?;
            let exp = Experiment::from_config(&cfg)?;
            emit_witness(&exp.problem, Some(exp.method.as_ref()), depth, cfg.experiment.mode.horizon)?
        }
        None => {
            let name = problem.ok_or_else(|| CliError::Usage("witness needs a config or --problem".into()))?;
            let p = default_problem(name)
                .ok_or_else(|| CliError::Usage(format!("unknown problem {name:?}; known: {}", PROBLEMS.join(", "))))?;
            let m = method
                .map(|n| {
                    default_method(n)
                        .ok_or_else(|| CliError::Usage(format!("unknown method {n:?}; known: {}", METHODS.join(", "))))
                })
                .transpose()?;
            emit_witness(&p, m.as_deref(), depth, cli.horizon.unwrap_or(64))?
        }
    };
    emit(cli.out.as_deref(), &to_json(&doc)?)
}

fn verify(cli: &Cli, config: &Path, record: Option<&Path>) -> CliResult<()> {
    let cfg = load(cli, config)?;
    let report = Experiment::from_config(&cfg)?.validate();
    let mut doc = serde_json::json!({
        "config": cfg.path.display().to_string(),
        "config_digest": cfg.digest(),
        "problem_valid": report.passed(),
        "validation": report,
    });
    let mut ok = true;
    if let Some(path) = record {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let rec: RunRecord = serde_json::from_str(&text)
            .map_err(|e| CliError::Runtime(format!("{}: not a run record: {e}", path.display())))?;
        let v = verify_record(&cfg, &rec)?;
        ok = v.ok();
        doc["record"] = serde_json::to_value(&v).map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    emit(cli.out.as_deref(), &to_json(&doc)?)?;
    if ok {
        Ok(())
    } else {
        Err(CliError::Runtime("run record does not reproduce".into()))
    }
}

fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Run { config } => {
            let cfg = load(cli, config)?;
            let record = run(&cfg, cli.out.as_deref())?;
            for v in &record.verdicts {
                let field = |k: &str| v[k].as_str().unwrap_or_default().to_string();
                println!("{} / {} / mode {}: {}", field("problem"), field("method"), field("mode"), field("status"));
            }
            let (curve, rec) = output_paths(&cfg, cli.out.as_deref());
            println!("curve: {}\nrecord: {}", curve.display(), rec.display());
            Ok(())
        }
        Command::Curve { config } => {
            let cfg = load(cli, config)?;
            let curve = Experiment::from_config(&cfg)?.curve()?;
            emit(cli.out.as_deref(), &curve_csv(&curve))
        }
        Command::Verify { config, record } => verify(cli, config, record.as_deref()),
        Command::Witness {
            config,
            problem,
            method,
            depth,
        } => witness(cli, config.as_deref(), problem.as_deref(), method.as_deref(), *depth),
        Command::Bound { eps, n_min, n_max } => {
            if n_min > n_max || *n_min == 0 {
                return Err(CliError::Usage("need 1 <= n-min <= n-max".into()));
            }
            let table = emit_bound_table(eps, *n_min..=*n_max).map_err(|e| CliError::Usage(e.to_string()))?;
            emit(cli.out.as_deref(), &table)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = threads_from_env().and_then(|threads| {
        if let Some(n) = threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
        execute(&cli)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("convlab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
