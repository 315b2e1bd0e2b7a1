use std::process::ExitCode;

use clap::Parser;
use tclgen_cli::{run, Cli};

fn main() -> ExitCode {
    tclgen_core::numerics::init_thread_pool();
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tclgen: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
