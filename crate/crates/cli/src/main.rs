use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lambda_abel_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(cli, &mut std::io::stdin().lock()) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let mut text = outcome.stdout;
    if !text.ends_with('\n') {
        text.push('\n');
    }
    let written = match &outcome.output {
        Some(p) if p.as_os_str() != "-" => std::fs::write(p, text),
        _ => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.code as u8)
}
