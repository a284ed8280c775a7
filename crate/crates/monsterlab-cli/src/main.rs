use std::process::ExitCode;

use clap::Parser;
use monsterlab_cli::{listing, run, write_outcome, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.list {
        print!("{}", listing());
        return ExitCode::SUCCESS;
    }
    let precision = std::env::var("MONSTERLAB_PRECISION").ok();
    let result = RunConfig::from_cli(cli, precision.as_deref()).and_then(|cfg| {
        let out = run(&cfg)?;
        write_outcome(&cfg, &out)?;
        Ok(out.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
