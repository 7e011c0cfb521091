use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use shiftlab::config::{reference_config, ExperimentConfig, Suite};
use shiftlab::report::emit_report;
use shiftlab::suite::{prepare, run_suite};
use shiftlab::Error;

const EXIT_CLAIM_FAILED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "shiftlab", version, about = "Certification suites for weighted shift operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a certification suite and write the JSON report and CSV tables.
    Run {
        /// TOML configuration; defaults are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        /// theorem1, theorem2, theorem3, hardy-props, oracle-suite or all.
        #[arg(long)]
        suite: Option<String>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0 = all cores).
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the reference configuration with every default.
    DefaultConfig,
    /// Check a configuration without running anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: Option<&PathBuf>) -> Result<ExperimentConfig, Error> {
    match path {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn config_failure(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_CONFIG)
}

fn run(
    config: Option<PathBuf>,
    suite: Option<String>,
    out: Option<PathBuf>,
    seed: Option<u64>,
    workers: Option<usize>,
) -> ExitCode {
    let mut cfg = match load(config.as_ref()) {
        Ok(c) => c,
        Err(e) => return config_failure(&e),
    };
    if let Some(s) = suite {
        match Suite::parse(&s) {
            Ok(s) => cfg.suite = s,
            Err(e) => return config_failure(&e),
        }
    }
    if let Some(dir) = out {
        cfg.output.dir = dir;
    }
    if let Some(seed) = seed {
        cfg.seed = seed;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e @ (Error::Config(_) | Error::Io { .. })) => return config_failure(&e),
        Err(e) => {
            eprintln!("internal error: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    for claim in &report.claims {
        match &claim.error {
            Some(err) => println!("{:<24} {:<18} error: {err}", claim.id, claim.verdict.label()),
            None => println!("{:<24} {}", claim.id, claim.verdict.label()),
        }
    }
    match emit_report(&report, &cfg.output.dir, &cfg.output.json, cfg.output.csv) {
        Ok(files) => println!("wrote {} file(s) to {}", files.len(), cfg.output.dir.display()),
        Err(e) => {
            eprintln!("error writing report: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    if report.has_internal_error() {
        ExitCode::from(EXIT_INTERNAL)
    } else if !report.success() {
        ExitCode::from(EXIT_CLAIM_FAILED)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            config,
            suite,
            out,
            seed,
            workers,
        } => run(config, suite, out, seed, workers),
        Command::DefaultConfig => {
            print!("{}", reference_config());
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(Some(&config)).and_then(|c| prepare(&c).map(|_| ())) {
            Ok(()) => {
                println!("{}: ok", config.display());
                ExitCode::SUCCESS
            }
            Err(e) => config_failure(&e),
        },
    }
}
