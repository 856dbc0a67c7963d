use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use toric_gauss_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let out = run(Cli::parse());
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.stdout.as_bytes());
    let _ = stdout.flush();
    ExitCode::from(out.code)
}
