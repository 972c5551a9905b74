use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ordlam_cli::{run, Cli, UsageError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(r) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(r.text.as_bytes());
            ExitCode::from(r.violated as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<UsageError>().is_some() { 2 } else { 1 })
        }
    }
}
