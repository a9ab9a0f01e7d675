mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use gossip_core::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let printed = match cli.format {
                Format::Text => stdout.write_all(out.text.as_bytes()),
                Format::Json => writeln!(stdout, "{}", out.json),
            };
            if printed.is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(u8::from(out.failed))
        }
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
