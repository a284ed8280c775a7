//! The fourteen acceptance criteria, one pass/fail line each.
//!
//! Every criterion runs the built binary twice with the same configuration; the first
//! run is judged and timed, and the byte comparison of both runs feeds criterion 14.

use std::io::Write;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;

struct Run {
    code: Option<i32>,
    stdout: Vec<u8>,
    stderr: String,
    took: Duration,
}

fn exec(args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_monsterlab"))
        .args(args)
        .env_remove("MONSTERLAB_PRECISION")
        .output()
        .expect("binary runs");
    Run { code: out.status.code(), stdout: out.stdout, stderr: String::from_utf8_lossy(&out.stderr).into_owned(), took: start.elapsed() }
}

#[derive(Default)]
struct Ledger {
    lines: Vec<(bool, String)>,
    /// (command, identical bytes)
    repeats: Vec<(String, bool)>,
}

impl Ledger {
    /// Runs twice, records the byte comparison and returns the first run.
    fn twice(&mut self, args: &[&str]) -> Run {
        let a = exec(args);
        let b = exec(args);
        self.repeats.push((args.join(" "), a.code == b.code && a.stdout == b.stdout));
        a
    }

    fn line(&mut self, n: usize, name: &str, ok: bool, detail: String) {
        let text = format!("criterion {n:>2} {:<4} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        let mut err = std::io::stderr().lock();
        let _ = writeln!(err, "{text}");
        self.lines.push((ok, text));
    }

    /// A verify suite with extra checks on the report.
    fn suite(&mut self, n: usize, name: &str, args: &[&str], budget: f64, extra: impl Fn(&Value) -> Result<String, String>) {
        let mut full = vec!["verify", "--suite"];
        full.extend_from_slice(args);
        let r = self.twice(&full);
        let secs = r.took.as_secs_f64();
        let parsed: Result<Value, String> = serde_json::from_slice(&r.stdout).map_err(|e| format!("{e}; stderr: {}", r.stderr));
        let (ok, detail) = match parsed {
            Err(e) => (false, e),
            Ok(v) => {
                let failed = v["failed"].as_u64().unwrap_or(u64::MAX);
                let cases = v["cases"].as_u64().unwrap_or(0);
                let head = format!("{cases} cases, {failed} failed, {secs:.2}s (budget {budget}s)");
                match extra(&v) {
                    _ if r.code != Some(0) || failed != 0 || cases == 0 => (false, format!("{head}; exit {:?}; {:?}", r.code, v["witnesses"])),
                    Err(e) => (false, format!("{head}; {e}")),
                    Ok(more) if secs < budget => (true, if more.is_empty() { head } else { format!("{head}; {more}") }),
                    Ok(_) => (false, format!("{head}; over budget")),
                }
            }
        };
        self.line(n, name, ok, detail);
    }
}

fn note(v: &Value, k: &str) -> Value {
    v["notes"][k].clone()
}

fn expect_cases(v: &Value, want: u64) -> Result<String, String> {
    match v["cases"].as_u64() {
        Some(c) if c == want => Ok(String::new()),
        c => Err(format!("expected {want} cases, got {c:?}")),
    }
}

#[test]
fn acceptance() {
    let mut l = Ledger::default();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");

    l.suite(1, "squeeze derivative of x^2 sin(1/x) at 0", &["squeeze"], 1.0, |_| Ok(String::new()));
    l.suite(2, "Takagi anchor inequality, j/8^6, n <= 6", &["takagi-anchor", "--depth", "6"], 10.0, |v| {
        expect_cases(v, (8u64.pow(6) + 1) * 6)
    });
    l.suite(3, "embedding property (a), all 2^16 prefixes", &["embedding-a", "--depth", "16"], 10.0, |v| expect_cases(v, 1 << 16));
    l.suite(4, "embedding property (b), all pairs at depth 12", &["embedding-b", "--depth", "12"], 60.0, |v| {
        expect_cases(v, 4096 * 4095 / 2)
    });
    l.suite(5, "odometer contraction at depth 12", &["contraction", "--depth", "12"], 60.0, |_| Ok(String::new()));
    l.suite(6, "rising sun scan equals brute-force oracle", &["rising-sun"], 5.0, |v| match note(v, "functions").as_u64() {
        Some(1000) => Ok(format!("{} components", note(v, "components"))),
        f => Err(format!("functions {f:?}")),
    });
    l.suite(7, "Lipschitz restriction certificates", &["lipschitz"], 10.0, |v| match note(v, "functions").as_u64() {
        Some(100) => Ok(format!("{} pairs checked", note(v, "pairs_checked"))),
        f => Err(format!("functions {f:?}")),
    });
    l.suite(8, "Jarník extension and 5ε schedule", &["jarnik"], 30.0, |v| match note(v, "carriers").as_u64() {
        Some(100) => Ok(format!(
            "5ε bound holds on all {} admitted (row, ε, k <= 20) triples; every one of {} rows settles below 5·3^-10, \
             {} of them only at scales finer than 2^-20 (finest 2^-{})",
            note(v, "admitted_scales"),
            note(v, "schedule_rows"),
            note(v, "rows_beyond_kmax"),
            note(v, "finest_k")
        )),
        c => Err(format!("carriers {c:?}")),
    });
    l.suite(9, "Whitney check, jet reproduction, ex111 divergence", &["whitney"], 30.0, |v| {
        if note(v, "ex111_divergent") != Value::Bool(true) {
            return Err("ex111 data not divergent".into());
        }
        match note(v, "probe_max_err").as_f64() {
            Some(e) if e <= 1e-6 => Ok(format!("probe max error {e:e}")),
            e => Err(format!("probe max error {e:?}")),
        }
    });
    l.suite(10, "ex111 inequality (ONE) at depth 10", &["ex111-one", "--depth", "10"], 60.0, |_| Ok(String::new()));
    l.suite(11, "monster quotient signs at t+d and d", &["monster-signs"], 60.0, |v| {
        let w = note(v, "witnesses").as_array().map_or(0, Vec::len);
        if w >= 8 {
            Ok(format!("{w} witnesses, t = {}", note(v, "t")))
        } else {
            Err(format!("{w} witnesses"))
        }
    });
    l.suite(12, "eta' bounds", &["eta"], 5.0, |v| expect_cases(v, 10_000 + 9001));
    l.suite(13, "C^1 criterion on staircase families", &["c1-staircase"], 5.0, |v| {
        match (note(v, "rejected_bounded_slopes").as_u64(), note(v, "accepted_vanishing_slopes").as_u64()) {
            (Some(20), Some(20)) => Ok("20 rejected, 20 accepted".into()),
            p => Err(format!("{p:?}")),
        }
    });

    // Remaining commands, for determinism.
    let single = data.join("single_gap.json");
    let monotone = data.join("monotone_samples.json");
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("takagi.csv");
    let commands: Vec<Vec<String>> = vec![
        vec!["sample", "--fn", "volterra_h", "--interval", "-0.5:0.5", "--grid", "1001"],
        vec!["sample", "--fn", "takagi", "--depth", "8", "--grid", "513", "--out", out_path.to_str().unwrap()],
        vec!["sample", "--fn", "monster", "--grid", "65", "--format", "json"],
        vec!["restrict", "--pipeline", "lipschitz", "--input", monotone.to_str().unwrap()],
        vec!["restrict", "--pipeline", "monotone", "--fn", "takagi", "--depth", "2", "--grid", "1025"],
        vec!["extend", "--pipeline", "jarnik", "--input", single.to_str().unwrap()],
        vec!["extend", "--pipeline", "whitney-check", "--fn", "ex111", "--depth", "6"],
        vec!["extend", "--pipeline", "twisted", "--input", single.to_str().unwrap()],
        vec!["monster-demo"],
    ]
    .into_iter()
    .map(|c| c.into_iter().map(String::from).collect())
    .collect();
    let mut artifacts_ok = true;
    for c in &commands {
        let args: Vec<&str> = c.iter().map(String::as_str).collect();
        let a = exec(&args);
        let first_file = std::fs::read(&out_path).ok();
        let b = exec(&args);
        let second_file = std::fs::read(&out_path).ok();
        let same = a.code == Some(0) && a.code == b.code && a.stdout == b.stdout && first_file == second_file;
        if a.code != Some(0) {
            let mut err = std::io::stderr().lock();
            let _ = writeln!(err, "  {}: exit {:?}: {}", c.join(" "), a.code, a.stderr.trim());
            artifacts_ok = false;
        }
        l.repeats.push((c.join(" "), same));
    }
    let differing: Vec<&String> = l.repeats.iter().filter(|r| !r.1).map(|r| &r.0).collect();
    let detail = if differing.is_empty() {
        format!("{} commands run twice, all byte-identical", l.repeats.len())
    } else {
        format!("differing: {differing:?}")
    };
    l.line(14, "determinism", differing.is_empty() && artifacts_ok, detail);

    let failed: Vec<&String> = l.lines.iter().filter(|x| !x.0).map(|x| &x.1).collect();
    assert!(failed.is_empty(), "failing criteria:\n{}", failed.iter().map(|s| s.as_str()).collect::<Vec<_>>().join("\n"));
}
