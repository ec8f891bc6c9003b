use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use apvar::error::ConfigErrors;
use apvar::experiment::{parse_raw, run_experiment, ExperimentConfig, EXIT_USAGE, THREADS_ENV};
use apvar::Error;

/// Run a variance / circle-method experiment from a config file or flags.
/// Flags override keys of the config file.
#[derive(Parser, Debug)]
#[command(name = "apvar", version)]
struct Cli {
    /// `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    alpha_r: Option<String>,
    #[arg(long)]
    y: Option<String>,
    /// Comma-separated list.
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    q_min: Option<String>,
    #[arg(long)]
    q_max: Option<String>,
    #[arg(long)]
    q_points: Option<String>,
    /// Comma-separated list; replaces the geometric grid.
    #[arg(long)]
    q_list: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    q0_rule: Option<String>,
    #[arg(long)]
    q0: Option<String>,
    #[arg(long)]
    q0_c: Option<String>,
    #[arg(long)]
    grid_mult: Option<String>,
    #[arg(long)]
    r: Option<String>,
    /// `bump` or `none`.
    #[arg(long)]
    weight: Option<String>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<String>,
    /// `csv` or `json`.
    #[arg(long)]
    format: Option<String>,
}

impl Cli {
    fn overrides(&self) -> Vec<(&'static str, &String)> {
        let pairs = [
            ("experiment", &self.experiment),
            ("n", &self.n),
            ("f", &self.f),
            ("alpha_r", &self.alpha_r),
            ("y", &self.y),
            ("u", &self.u),
            ("q_min", &self.q_min),
            ("q_max", &self.q_max),
            ("q_points", &self.q_points),
            ("q_list", &self.q_list),
            ("k", &self.k),
            ("q0_rule", &self.q0_rule),
            ("q0", &self.q0),
            ("q0_c", &self.q0_c),
            ("grid_mult", &self.grid_mult),
            ("r", &self.r),
            ("weight", &self.weight),
            ("out", &self.out),
            ("format", &self.format),
        ];
        pairs
            .into_iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
            .collect()
    }
}

fn load(cli: &Cli) -> apvar::Result<ExperimentConfig> {
    let mut errors = ConfigErrors::default();
    let mut raw = match &cli.config {
        Some(path) => parse_raw(&std::fs::read_to_string(path)?, &mut errors),
        None => Default::default(),
    };
    for (key, value) in cli.overrides() {
        raw.set(key, value, None, &mut errors);
    }
    ExperimentConfig::from_raw(&raw, errors)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: {THREADS_ENV} must be a positive integer, got '{v}'");
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
    }

    let config = match load(&cli) {
        Ok(c) => c,
        Err(Error::Config(errors)) => {
            eprintln!("invalid configuration:\n{errors}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match run_experiment(&config) {
        Ok(outcome) => {
            if config.out.is_none() {
                print!("{}", outcome.rendered);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
