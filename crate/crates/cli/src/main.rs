//! `rabi-discord run | sweep | converge`
//!
//! Exit codes: 0 success, 1 invalid config or arguments, 2 dynamics invariant
//! violation, 3 I/O failure.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use log::{error, info};

use rabi_discord::dynamics::Stepping;
use rabi_discord::output::{
    manifest_path, write_convergence, write_records, write_summary, RunManifest,
};
use rabi_discord::pipeline::{convergence_study, run_detailed, run_sweep, RunOutput, SweepSpec};
use rabi_discord::{Error, SimConfig};

#[derive(Parser, Debug)]
#[command(
    name = "rabi-discord",
    version,
    about = "Two atoms in a lossy cavity: discord and concurrence"
)]
struct Cli {
    /// Only report errors.
    #[arg(long, global = true)]
    quiet: bool,

    /// Worker threads for sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve one config and write its correlation records.
    Run {
        config: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run every point of a sweep spec into a directory.
    Sweep {
        spec: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fock-truncation convergence study.
    Converge {
        config: PathBuf,
        /// Cutoffs as `start:stop:step` (inclusive) or a comma list.
        #[arg(long = "n")]
        n_list: String,
        #[arg(short, long)]
        output: PathBuf,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.root() {
            Error::InvalidConfig { .. } | Error::ConfigSyntax(_) => 1,
            Error::Io(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 3,
        message: format!("{}: {e}", path.display()),
    }
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> rabi_discord::Result<T>) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    parse(&text).map_err(|e| Failure::from(e.context(path.display().to_string())))
}

fn parse_n_list(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = |why: &str| Failure {
        code: 1,
        message: format!("invalid value for `n`: {why} (got {s:?})"),
    };
    let num = |p: &str| {
        p.trim()
            .parse::<usize>()
            .map_err(|_| bad("expected non-negative integers"))
    };
    let ns = match s.split(':').collect::<Vec<_>>()[..] {
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if step == 0 {
                return Err(bad("step must be positive"));
            }
            (a..=b).step_by(step).collect()
        }
        [_] => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(bad("expected start:stop:step or a comma list")),
    };
    if ns.len() < 2 {
        return Err(bad("need at least two cutoffs to compare"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("cutoffs must be strictly ascending"));
    }
    Ok(ns)
}

fn write_run(output: &RunOutput, csv: &Path, wall: f64) -> Result<(), Failure> {
    let file = File::create(csv).map_err(|e| io_failure(csv, e))?;
    write_records(BufWriter::new(file), &output.records).map_err(|e| io_failure(csv, e))?;
    let manifest = manifest_path(csv);
    RunManifest::new(output, wall)
        .write(&manifest)
        .map_err(|e| io_failure(&manifest, e))
}

fn cmd_run(config: &Path, csv: &Path) -> Result<(), Failure> {
    let cfg = load(config, SimConfig::from_toml_str)?;
    let start = Instant::now();
    let out = run_detailed(&cfg, Stepping::Adaptive)?;
    let wall = start.elapsed().as_secs_f64();
    let last = out.terminal();
    info!(
        "{} samples in {wall:.1} s; terminal t = {}, discord = {:.6}, concurrence = {:.6}, steady = {}",
        out.records.len(),
        last.t,
        last.discord,
        last.concurrence,
        out.steady_reached
    );
    write_run(&out, csv, wall)
}

fn cmd_sweep(spec_path: &Path, dir: &Path) -> Result<(), Failure> {
    let spec = load(spec_path, SweepSpec::from_toml_str)?;
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let start = Instant::now();
    let points = run_sweep(&spec)?;
    let wall = start.elapsed().as_secs_f64();
    for p in &points {
        let csv = dir.join(spec.file_name(p.value));
        write_run(&p.output, &csv, wall)?;
        info!(
            "{}={}: terminal discord {:.6}, steady = {}",
            spec.axis,
            p.value,
            p.output.terminal().discord,
            p.output.steady_reached
        );
    }
    let summary = dir.join(format!("{}_summary.csv", spec.label));
    let file = File::create(&summary).map_err(|e| io_failure(&summary, e))?;
    write_summary(BufWriter::new(file), spec.axis, &points).map_err(|e| io_failure(&summary, e))
}

fn cmd_converge(config: &Path, n_list: &str, csv: &Path) -> Result<(), Failure> {
    let ns = parse_n_list(n_list)?;
    let cfg = load(config, SimConfig::from_toml_str)?;
    let report = convergence_study(&cfg, &ns)?;
    match report.converged_at {
        Some(n) => info!("converged at n_max = {n}"),
        None => info!("not converged within {ns:?}"),
    }
    let file = File::create(csv).map_err(|e| io_failure(csv, e))?;
    write_convergence(BufWriter::new(file), &report).map_err(|e| io_failure(csv, e))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "info" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            error!("cannot start thread pool: {e}");
            return ExitCode::from(1);
        }
    };
    let result = pool.install(|| match &cli.command {
        Command::Run { config, output } => cmd_run(config, output),
        Command::Sweep { spec, output } => cmd_sweep(spec, output),
        Command::Converge {
            config,
            n_list,
            output,
        } => cmd_converge(config, n_list, output),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
