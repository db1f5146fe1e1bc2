use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

/// Simulations of a driven cavity electromechanical system coupled to single
/// NV spins: polariton spectra, enhanced spin-polariton coupling, Rabi
/// dynamics, the ac Stark shift, and the dissipative iSWAP gate study.
#[derive(Parser, Debug)]
#[command(name = "sim", version, about)]
struct Cli {
    /// Experiment to run: spectrum | coupling-map | rabi | iswap | stark |
    /// meanfield
    experiment: String,

    /// Configuration file (flat `key = value` with dotted sections); defaults
    /// reproduce the reference parameter sets when omitted
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory (falls back to $SIM_OUT_DIR, then the working
    /// directory)
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for sweep evaluation
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match polsim_cli::run(
        &cli.experiment,
        cli.config.as_deref(),
        cli.out.as_deref(),
        cli.threads.max(1),
    ) {
        Ok(path) => {
            println!("wrote {}", path.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("sim: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
