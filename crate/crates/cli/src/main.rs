mod args;
mod commands;
mod table;

use std::process::ExitCode;

use clap::Parser;
use pointnls::Error;

use args::{Cli, Command, Format};

const EXIT_DOMAIN: u8 = 2;
const EXIT_NO_CONVERGENCE: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    if e.is_domain_error() {
        EXIT_DOMAIN
    } else {
        EXIT_NO_CONVERGENCE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = serde_json::to_value(&cli).expect("configuration serializes");
    let outcome = match &cli.command {
        Command::State(a) => commands::state(a, config),
        Command::MassCurve(a) => commands::mass_curve(a, config),
        Command::Ground(a) => commands::ground(a, config),
        Command::Minimize(a) => commands::minimize_cmd(a, cli.seed, config),
        Command::Evolve(a) => commands::evolve_cmd(a, cli.seed, config),
        Command::Spectrum(a) => commands::spectrum(a, config),
        Command::CompareEnergy(a) => commands::compare_energy(a, config),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let text = match cli.format {
        Format::Csv => outcome.table.to_csv(),
        Format::Json => outcome.table.to_json(),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("error: cannot write output: {e}");
        return ExitCode::FAILURE;
    }
    match outcome.failure {
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        None => ExitCode::SUCCESS,
    }
}
