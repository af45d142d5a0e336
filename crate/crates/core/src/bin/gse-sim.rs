use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use gse::cli::{self, Mode};

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Spectrum,
    Sweep,
}

/// Steady-state emission of an open ultrastrongly coupled cavity.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Directory for the CSV output
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    mode: ModeArg,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mode = match args.mode {
        ModeArg::Spectrum => Mode::Spectrum,
        ModeArg::Sweep => Mode::Sweep,
    };
    match cli::run(&args.config, &args.out, mode) {
        Ok(path) => {
            println!("{}", path.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
