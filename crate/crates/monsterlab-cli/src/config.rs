//! Command-line flags and the validated run configuration.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Result};
use clap::{Parser, ValueEnum};
use monsterlab::evalcore::parse_rational;
use monsterlab::Rational;

use crate::{pipelines, registry, render, suites};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Sample a function on a grid.
    Sample,
    /// Run a verification suite.
    Verify,
    /// Run a restriction pipeline on sampled data.
    Restrict,
    /// Run an extension pipeline on set-function data.
    Extend,
    /// Search monster witnesses and report their quotient signs.
    MonsterDemo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "monsterlab", version, about = "Pathological functions, perfect sets, restrictions and extensions")]
pub struct Cli {
    #[arg(value_enum, required_unless_present = "list")]
    pub command: Option<Command>,
    /// Function id (sample, restrict) or set-function id (extend).
    #[arg(long = "fn")]
    pub function: Option<String>,
    /// Verification suite name.
    #[arg(long)]
    pub suite: Option<String>,
    /// Restriction or extension pipeline.
    #[arg(long)]
    pub pipeline: Option<String>,
    /// Depth or resolution knob.
    #[arg(long)]
    pub depth: Option<u32>,
    /// Number of grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Interval `a:b`, rationals or decimals.
    #[arg(long, allow_hyphen_values = true)]
    pub interval: Option<String>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Input JSON (restrict, extend).
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Tolerance, rational or decimal.
    #[arg(long)]
    pub tol: Option<String>,
    /// Extra `key=value` parameters.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// List function ids, set-function ids, suites and pipelines, then exit.
    #[arg(long)]
    pub list: bool,
}

/// `key=value` parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params(pub BTreeMap<String, String>);

impl Params {
    pub fn get(&self, k: &str) -> Option<&str> {
        self.0.get(k).map(String::as_str)
    }

    pub fn rational(&self, k: &str) -> Result<Option<Rational>> {
        self.get(k).map(|v| parse_rational(v).map_err(|e| anyhow!("param {k}: {e}"))).transpose()
    }

    pub fn usize(&self, k: &str) -> Result<Option<usize>> {
        self.get(k).map(|v| v.parse().map_err(|_| anyhow!("param {k}: not a count: {v:?}"))).transpose()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub function: Option<String>,
    pub suite: Option<String>,
    pub pipeline: Option<String>,
    pub params: Params,
    pub input: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub depth: Option<u32>,
    pub grid: Option<usize>,
    pub interval: Option<(Rational, Rational)>,
    pub tol: Option<Rational>,
    /// Fractional digits of CSV decimals.
    pub precision: usize,
}

pub fn parse_interval(s: &str) -> Result<(Rational, Rational)> {
    let (a, b) = s.split_once(':').ok_or_else(|| anyhow!("interval must be a:b, got {s:?}"))?;
    let a = parse_rational(a).map_err(|e| anyhow!("interval: {e}"))?;
    let b = parse_rational(b).map_err(|e| anyhow!("interval: {e}"))?;
    if a >= b {
        bail!("interval needs a < b");
    }
    Ok((a, b))
}

impl RunConfig {
    /// Validates ids and knobs before anything is computed. `precision` comes from the
    /// environment (`MONSTERLAB_PRECISION`) and is passed in by the caller.
    pub fn from_cli(cli: Cli, precision: Option<&str>) -> Result<RunConfig> {
        let mut params = Params::default();
        for p in &cli.params {
            let (k, v) = p.split_once('=').ok_or_else(|| anyhow!("--param expects key=value, got {p:?}"))?;
            params.0.insert(k.trim().to_string(), v.trim().to_string());
        }
        let precision = match precision {
            Some(s) => s.trim().parse::<usize>().ok().filter(|&p| p <= 1000).ok_or_else(|| anyhow!("MONSTERLAB_PRECISION must be a count up to 1000, got {s:?}"))?,
            None => render::DEFAULT_PRECISION,
        };
        let command = cli.command.ok_or_else(|| anyhow!("missing command"))?;
        let default_format = match command {
            Command::Sample => Format::Csv,
            _ => Format::Json,
        };
        let cfg = RunConfig {
            command,
            function: cli.function,
            suite: cli.suite,
            pipeline: cli.pipeline,
            params,
            input: cli.input,
            out: cli.out,
            format: cli.format.unwrap_or(default_format),
            seed: cli.seed,
            depth: cli.depth,
            grid: cli.grid,
            interval: cli.interval.as_deref().map(parse_interval).transpose()?,
            tol: cli.tol.as_deref().map(|t| parse_rational(t).map_err(|e| anyhow!("--tol: {e}"))).transpose()?,
            precision,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(g) = self.grid {
            if g < 2 {
                bail!("--grid needs at least 2 points");
            }
        }
        if let Some(t) = &self.tol {
            if *t <= Rational::from_integer(0.into()) {
                bail!("--tol must be positive");
            }
        }
        match self.command {
            Command::Sample => {
                let f = self.function.as_deref().ok_or_else(|| anyhow!("sample needs --fn"))?;
                if !registry::is_function(f) {
                    bail!("unknown function id {f:?}");
                }
            }
            Command::Verify => {
                let s = self.suite.as_deref().ok_or_else(|| anyhow!("verify needs --suite"))?;
                if suites::find(s).is_none() {
                    bail!("unknown suite {s:?}");
                }
                if self.format != Format::Json {
                    bail!("verify reports are JSON");
                }
            }
            Command::Restrict | Command::Extend => {
                let restrict = self.command == Command::Restrict;
                let p = self.pipeline.as_deref().ok_or_else(|| anyhow!("missing --pipeline"))?;
                let known = if restrict { pipelines::RESTRICT.iter() } else { pipelines::EXTEND.iter() };
                if !known.clone().any(|(k, _)| *k == p) {
                    bail!("unknown pipeline {p:?}");
                }
                match (&self.function, &self.input) {
                    (Some(_), Some(_)) => bail!("give either --fn or --input"),
                    (None, None) => bail!("missing --fn or --input"),
                    (Some(f), None) if restrict && !registry::is_function(f) => bail!("unknown function id {f:?}"),
                    (Some(f), None) if !restrict && !registry::is_set_function(f) => bail!("unknown set function {f:?}"),
                    _ => {}
                }
                if self.format != Format::Json {
                    bail!("certificates are JSON");
                }
            }
            Command::MonsterDemo => {}
        }
        Ok(())
    }
}
