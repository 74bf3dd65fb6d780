use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use mdiag::{run, Cli, EXIT_MALFORMED};

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match run(&cli, &mut out) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e:#}");
            EXIT_MALFORMED
        }
    };
    let _ = out.flush();
    ExitCode::from(code as u8)
}
