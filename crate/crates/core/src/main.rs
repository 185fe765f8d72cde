use std::io::Write;
use std::process::ExitCode;

use anyhow::Context;

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = e.downcast_ref::<qarec::cli::CliError>().map_or(2, |c| c.exit_code());
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

fn run() -> anyhow::Result<()> {
    let mut out = std::io::stdout();
    qarec::cli::run(std::env::args_os(), &mut out, &mut std::io::stderr())?;
    out.flush().context("flushing stdout")
}
