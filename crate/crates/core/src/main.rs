use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = ddiq::cli::Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match ddiq::cli::run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
