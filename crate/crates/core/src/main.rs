use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use donor_cpt::io::{execute, Command};

#[derive(Parser)]
#[command(version, about = "Donor-spin CPT forward model and defect post-processing")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Sub {
    /// Probe sweep of the two-laser spectrum and dip report.
    CptSweep(Common),
    /// Spectra and nuclear polarization against pump power.
    PowerSeries(Common),
    /// Formation-energy diagrams, transition levels and binding energies.
    Energetics(Common),
    /// Dilute-limit hyperfine extrapolation.
    Extrapolate(Common),
    /// Level diagram and equilibrium nuclear polarization.
    Levels(Common),
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let (command, args) = match Cli::parse().command {
        Sub::CptSweep(a) => (Command::CptSweep, a),
        Sub::PowerSeries(a) => (Command::PowerSeries, a),
        Sub::Energetics(a) => (Command::Energetics, a),
        Sub::Extrapolate(a) => (Command::Extrapolate, a),
        Sub::Levels(a) => (Command::Levels, a),
    };
    std::process::exit(execute(Some(command), &args.config, &args.out, args.threads));
}
