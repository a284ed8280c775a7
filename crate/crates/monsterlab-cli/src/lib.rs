//! Command-line front end: sampling, verification suites, restriction and extension
//! pipelines.
//!
//! [`run`] turns a validated [`RunConfig`] into output bytes; the binary only parses
//! flags, writes the bytes and maps the outcome to an exit status.

pub mod config;
pub mod pipelines;
pub mod registry;
pub mod render;
pub mod schema;
pub mod suites;

use std::fs;

use anyhow::{anyhow, Context, Result};
use monsterlab::evalcore::{f64_to_rational, format_rational, int, rational_to_f64};
use monsterlab::perfectsets::GapSet;
use monsterlab::restrict::SampledFunction;
use monsterlab::Rational;
use serde_json::{json, Value};

pub use config::{Cli, Command, Format, Params, RunConfig};

use registry::Evaluator;
use render::Row;

/// Bytes to write and whether a verification failed.
#[derive(Debug)]
pub struct Outcome {
    pub bytes: Vec<u8>,
    pub failed: bool,
}

pub const DEFAULT_GRID: usize = 257;

fn grid(cfg: &RunConfig) -> Vec<Rational> {
    let (a, b) = cfg.interval.clone().unwrap_or_else(|| (int(0), int(1)));
    let n = cfg.grid.unwrap_or(DEFAULT_GRID);
    let last = int(n as i64 - 1);
    (0..n).map(|i| &a + (&b - &a) * int(i as i64) / &last).collect()
}

/// Rows of `id` on the configured grid. Ball evaluators see the nearest `f64` to each
/// grid point, and that `f64` is what the row reports as `x`.
pub fn sample_rows(id: &str, cfg: &RunConfig) -> Result<Vec<Row>> {
    let ev = registry::evaluator(id, cfg.depth, &cfg.params)?;
    let mut rows = Vec::new();
    for x in grid(cfg) {
        let row = match &ev {
            Evaluator::Exact(f) => {
                let (value, radius) = f(&x);
                Row { x, value, radius }
            }
            Evaluator::Ball(f) => {
                let xf = rational_to_f64(&x);
                let b = f(xf).map_err(|e| anyhow!("{id} at {xf}: {e}"))?;
                if !b.is_finite() {
                    return Err(anyhow!("{id} at {xf}: no finite enclosure"));
                }
                Row { x: f64_to_rational(xf), value: f64_to_rational(b.center), radius: b.radius }
            }
        };
        rows.push(row);
    }
    Ok(rows)
}

fn rows_output(id: &str, cfg: &RunConfig, rows: &[Row]) -> Result<Vec<u8>> {
    match cfg.format {
        Format::Csv => render::csv(rows, cfg.precision),
        Format::Json => {
            let (a, b) = cfg.interval.clone().unwrap_or_else(|| (int(0), int(1)));
            Ok(render::json_bytes(&json!({
                "function": id,
                "interval": [format_rational(&a), format_rational(&b)],
                "grid": rows.len(),
                "rows": render::rows_json(rows),
            })))
        }
    }
}

fn read_json(path: &std::path::Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn sampled_input(cfg: &RunConfig) -> Result<SampledFunction> {
    if let Some(p) = &cfg.input {
        return schema::sampled_function(&read_json(p)?);
    }
    let id = cfg.function.as_deref().expect("validated");
    let rows = sample_rows(id, cfg)?;
    let domain = GapSet::interval(rows[0].x.clone(), rows[rows.len() - 1].x.clone()).map_err(|e| anyhow!("{e}"))?;
    let samples = rows
        .into_iter()
        .map(|r| monsterlab::restrict::Sample { x: r.x, value: r.value, radius: r.radius })
        .collect();
    SampledFunction::new(domain, samples, monsterlab::restrict::Interpolation::Formula(id.into())).map_err(|e| anyhow!("{e}"))
}

/// Runs a validated configuration.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let done = |v: Value| Outcome { bytes: render::json_bytes(&v), failed: false };
    match cfg.command {
        Command::Sample => {
            let id = cfg.function.as_deref().expect("validated");
            let rows = sample_rows(id, cfg)?;
            Ok(Outcome { bytes: rows_output(id, cfg, &rows)?, failed: false })
        }
        Command::Verify => {
            let name = cfg.suite.as_deref().expect("validated");
            let args = suites::SuiteArgs { depth: cfg.depth, seed: cfg.seed, tol: cfg.tol.clone(), params: &cfg.params };
            let v = suites::run(name, &args)?;
            let failed = v["failed"].as_u64() != Some(0);
            Ok(Outcome { bytes: render::json_bytes(&v), failed })
        }
        Command::Restrict => {
            let f = sampled_input(cfg)?;
            let mut v = pipelines::restrict(cfg.pipeline.as_deref().expect("validated"), &f, &cfg.params)?;
            v["source"] = source(cfg);
            Ok(done(v))
        }
        Command::Extend => {
            let f = match &cfg.input {
                Some(p) => schema::set_function(&read_json(p)?)?,
                None => registry::set_function(cfg.function.as_deref().expect("validated"), cfg.depth, &cfg.params)?,
            };
            let mut v = pipelines::extend(cfg.pipeline.as_deref().expect("validated"), &f, cfg.tol.as_ref(), &cfg.params)?;
            v["source"] = source(cfg);
            Ok(done(v))
        }
        Command::MonsterDemo => {
            let demo = pipelines::monster_demo()?;
            match cfg.format {
                Format::Json => Ok(done(demo.json)),
                Format::Csv => {
                    let mut params = cfg.params.clone();
                    params.0.insert("t".into(), format_rational(&f64_to_rational(demo.t)));
                    let cfg = RunConfig { params, ..cfg.clone() };
                    let rows = sample_rows("monster", &cfg)?;
                    Ok(Outcome { bytes: render::csv(&rows, cfg.precision)?, failed: false })
                }
            }
        }
    }
}

fn source(cfg: &RunConfig) -> Value {
    match (&cfg.input, &cfg.function) {
        (Some(p), _) => json!({"input": p.file_name().map(|n| n.to_string_lossy().into_owned())}),
        (None, Some(f)) => json!({"function": f, "depth": cfg.depth}),
        _ => Value::Null,
    }
}

/// Lines for `--list`.
pub fn listing() -> String {
    let mut s = String::from("functions (sample, restrict --fn):\n");
    for (k, d) in registry::FUNCTIONS {
        s += &format!("  {k:<18} {d}\n");
    }
    s += "set functions (extend --fn):\n";
    for (k, d) in registry::SET_FUNCTIONS {
        s += &format!("  {k:<18} {d}\n");
    }
    s += "suites (verify --suite):\n";
    for (k, d, _) in suites::SUITES {
        s += &format!("  {k:<18} {d}\n");
    }
    s += "restrict pipelines:\n";
    for (k, d) in pipelines::RESTRICT {
        s += &format!("  {k:<18} {d}\n");
    }
    s += "extend pipelines:\n";
    for (k, d) in pipelines::EXTEND {
        s += &format!("  {k:<18} {d}\n");
    }
    s
}

/// Writes the outcome to `--out` or standard output.
pub fn write_outcome(cfg: &RunConfig, out: &Outcome) -> Result<()> {
    match &cfg.out {
        Some(p) => fs::write(p, &out.bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(&out.bytes)?;
            so.flush()?;
            Ok(())
        }
    }
}
