//! `aqg` — command-line front end for the gate and clock simulations.
//!
//! Every subcommand reads one config file (see [`config`]), runs the
//! corresponding model, and emits a self-describing CSV to stdout or
//! `--out`. Exit codes: 0 success, 1 invalid input (config or parameters),
//! 2 numerical failure inside a computation.

mod config;
mod runners;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_config, schema_help, RunConfig};

#[derive(Parser)]
#[command(
    name = "aqg",
    version,
    about = "Simulations of photon-, blockade- and phonon-mediated gates and an autonomous clock",
    after_help = "Run `aqg schema <SUBCOMMAND>` to list the config keys a subcommand accepts."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration file (`[subcommand]` header + `key = value unit` lines)
    #[arg(long)]
    config: PathBuf,
    /// Write the CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Size of the worker pool used for sweep points
    #[arg(long)]
    workers: Option<usize>,
    /// Rewrite the golden file at --out; refuses unless every internal
    /// consistency check passes
    #[arg(long)]
    regen_golden: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Scatter a single photon off a dispersively coupled qubit-cavity system
    #[command(name = "dispersive-z")]
    DispersiveZ(RunArgs),
    /// Optimize the dispersive shift for a set of target Z-rotation angles
    #[command(name = "fidelity-sweep")]
    FidelitySweep(RunArgs),
    /// Three-pulse blockade controlled-Z phase table
    #[command(name = "rydberg-cz")]
    RydbergCz(RunArgs),
    /// Two-pulse controlled-Z with a detuned drive and a phase jump
    #[command(name = "levine-pichler")]
    LevinePichler(RunArgs),
    /// Exchange-pulse pair amplitudes over time
    #[command(name = "ultrafast")]
    Ultrafast(RunArgs),
    /// Optical path length that realizes a requested pulse delay
    #[command(name = "laser-timing")]
    LaserTiming(RunArgs),
    /// Bichromatic spin-motion entangling gate over one closed loop
    #[command(name = "ms-gate")]
    MsGate(RunArgs),
    /// Beam transit geometry for a trap moving at constant speed
    #[command(name = "slide")]
    Slide(RunArgs),
    /// Duty-cycled drive seen by an ion circulating through a fixed beam
    #[command(name = "ring")]
    Ring(RunArgs),
    /// Stochastic tick record of the autonomous thermal clock
    #[command(name = "clock")]
    Clock(RunArgs),
    /// Photon-gated XY exchange between two cavity-coupled qubits
    #[command(name = "xy-gate")]
    XyGate(RunArgs),
    /// Print the config keys accepted by a subcommand
    Schema {
        /// One of the run subcommands, e.g. `dispersive-z`
        name: String,
    },
}

impl Command {
    fn run_parts(&self) -> Option<(&'static str, &RunArgs)> {
        match self {
            Command::DispersiveZ(a) => Some(("dispersive-z", a)),
            Command::FidelitySweep(a) => Some(("fidelity-sweep", a)),
            Command::RydbergCz(a) => Some(("rydberg-cz", a)),
            Command::LevinePichler(a) => Some(("levine-pichler", a)),
            Command::Ultrafast(a) => Some(("ultrafast", a)),
            Command::LaserTiming(a) => Some(("laser-timing", a)),
            Command::MsGate(a) => Some(("ms-gate", a)),
            Command::Slide(a) => Some(("slide", a)),
            Command::Ring(a) => Some(("ring", a)),
            Command::Clock(a) => Some(("clock", a)),
            Command::XyGate(a) => Some(("xy-gate", a)),
            Command::Schema { .. } => None,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let (name, args) = match &cli.command {
        Command::Schema { name } => {
            return match schema_help(name) {
                Some(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                None => {
                    eprintln!("unknown subcommand `{name}`");
                    ExitCode::from(1)
                }
            };
        }
        other => other.run_parts().expect("schema was handled above"),
    };

    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };
    let mut cfg: RunConfig = match parse_config(&text, name) {
        Ok(c) => c,
        Err(errors) => {
            eprintln!("{} problem(s) in {}:", errors.len(), args.config.display());
            for e in &errors {
                eprintln!("  {e}");
            }
            return ExitCode::from(1);
        }
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.out = args.out.clone();

    if let Some(n) = args.workers {
        // Build the global pool before any parallel work. A second attempt
        // (e.g. in tests invoking main twice) only warns.
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: worker pool already initialized: {e}");
        }
    }

    let table = match runners::run(&cfg) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", runners::error_label(&e));
            return ExitCode::from(runners::exit_code_for(&e) as u8);
        }
    };

    if args.regen_golden && !table.all_checks_pass() {
        eprintln!("refusing to regenerate golden output; failed checks:");
        for label in table.failed_checks() {
            eprintln!("  {label}");
        }
        return ExitCode::from(1);
    }

    let csv = table.to_csv();
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, csv) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{csv}"),
    }
    ExitCode::SUCCESS
}
