//! `ffstat`: experiments on Frobenius traces of biquadratic curves.

mod args;
mod cache;
mod commands;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::{CliError, CliResult};

fn run(cli: &Cli) -> CliResult<()> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            return Err(CliError::config("threads", "must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::config("threads", e))?;
    }
    let env = std::env::var("FFSTAT_CACHE_DIR").ok();
    let cache_dir = cache::resolve_dir(cli.global.cache_dir.as_deref(), env.as_deref());
    let ctx = commands::Context::new(&cli.global, cache_dir)?;
    let table = commands::run(&ctx, &cli.command)?;
    match &cli.global.out {
        Some(path) => {
            let mut buf = Vec::new();
            table.write(cli.global.format, &mut buf)?;
            std::fs::write(path, buf)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            table.write(cli.global.format, &mut lock)?;
            lock.flush()?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
