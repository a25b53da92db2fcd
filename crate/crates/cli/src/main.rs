use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = crase_cli::Cli::parse();
    let stdout = std::io::stdout();
    let code = crase_cli::run(&cli, &mut stdout.lock());
    ExitCode::from(code)
}
