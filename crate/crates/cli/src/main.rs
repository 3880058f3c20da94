use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = esds_cli::Cli::parse();
    match esds_cli::run(cli, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // one line: the whole context chain joined
            eprintln!("esds: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
