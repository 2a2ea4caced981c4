//! Command-line front end for sweeps, Gram comparisons, single runs and the
//! multimode codeword comparison.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coherent_receiver::compression::Alphabet;
use coherent_receiver::sweep::{self, OutputFormat, PartialConfig, PartialGrid};
use coherent_receiver::{Error, TransferChannel};

#[derive(Parser)]
#[command(name = "cohrx", version, about = "Slice-and-compress coherent-state receivers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Receiver error, Helstrom bound and homodyne baseline over an (alpha, n) grid.
    Sweep(Opts),
    /// Coherent and compressed Gram matrices for one (alpha, n).
    Gram(Opts),
    /// One receiver run with structural diagnostics.
    Run(Opts),
    /// Joint versus per-mode measurement of the four-mode codewords.
    Multimode(Opts),
}

#[derive(Args)]
struct Opts {
    /// bpsk, 3ask or multimode.
    #[arg(long)]
    alphabet: Option<Alphabet>,
    /// exact-pure, ideal-swap or stirap.
    #[arg(long)]
    channel: Option<TransferChannel>,
    /// Slice counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<usize>>,
    /// Single amplitude (replaces the grid).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    alpha_min: Option<f64>,
    #[arg(long)]
    alpha_max: Option<f64>,
    #[arg(long)]
    alpha_steps: Option<usize>,
    /// Hypothesis priors in amplitude order, comma separated.
    #[arg(long, value_delimiter = ',')]
    priors: Option<Vec<f64>>,
    /// Output file; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// csv or jsonl.
    #[arg(long)]
    format: Option<OutputFormat>,
    /// TOML config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Opts {
    fn resolve(self) -> Result<sweep::SweepConfig, Error> {
        let base = match &self.config {
            Some(path) => PartialConfig::from_file(path)?,
            None => PartialConfig::default(),
        };
        let grid = (self.alpha_min.is_some() || self.alpha_max.is_some() || self.alpha_steps.is_some())
            .then_some(PartialGrid {
                min: self.alpha_min,
                max: self.alpha_max,
                steps: self.alpha_steps,
            });
        let flags = PartialConfig {
            alphabet: self.alphabet,
            channel: self.channel,
            slice_counts: self.n,
            alpha: self.alpha,
            alpha_grid: grid,
            priors: self.priors,
            output: self.output,
            format: self.format,
        };
        base.merge(flags).resolve()
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::Sweep(opts) => {
            let config = opts.resolve()?;
            sweep::emit(&sweep::run_sweep(&config)?, &config)
        }
        Command::Gram(opts) => {
            let config = opts.resolve()?;
            let rows = sweep::gram_report(config.alphabet, config.single_alpha()?, config.single_n()?)?;
            sweep::emit(&rows, &config)
        }
        Command::Run(opts) => {
            let config = opts.resolve()?;
            sweep::emit(&[sweep::run_record(&config)?], &config)
        }
        Command::Multimode(opts) => {
            let config = opts.resolve()?;
            sweep::emit(&sweep::run_multimode_rows(&config)?, &config)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cohrx: {e}");
            ExitCode::from(if e.is_input_error() { 2 } else { 3 })
        }
    }
}
