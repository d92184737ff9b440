use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use parity_radar::harness::{
    run_angle_scan, run_fringe_scan, run_resolution_sweep, run_track_experiment, Config,
    ExperimentOutput,
};

#[derive(Parser)]
#[command(
    name = "parity-radar",
    version,
    about = "Coherent-state parity radar experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parity interferogram with the classical fringe alongside.
    FringeScan(Common),
    /// Receiver readouts and angle estimates over a range of angles.
    AngleScan(Common),
    /// Fringe width and resolution against photon number.
    ResolutionSweep(Common),
    /// Closed-loop track of a moving target.
    Track(Common),
}

#[derive(Args)]
struct Common {
    /// TOML config; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Expectation values instead of sampled photocounts.
    #[arg(long)]
    noiseless: bool,
    /// Also write an SVG figure.
    #[arg(long)]
    svg: bool,
}

impl Common {
    fn config(&self) -> parity_radar::Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.noiseless |= self.noiseless;
        Ok(cfg)
    }
}

type Runner = fn(&Config, &std::path::Path, bool) -> parity_radar::Result<ExperimentOutput>;

fn run(cli: Cli) -> parity_radar::Result<ExperimentOutput> {
    let (common, f): (_, Runner) = match &cli.command {
        Command::FringeScan(c) => (c, run_fringe_scan),
        Command::AngleScan(c) => (c, run_angle_scan),
        Command::ResolutionSweep(c) => (c, run_resolution_sweep),
        Command::Track(c) => (c, run_track_experiment),
    };
    f(&common.config()?, &common.out, common.svg)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) => {
            println!("{}", o.csv.display());
            println!("{}", o.json.display());
            if let Some(svg) = o.svg {
                println!("{}", svg.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
