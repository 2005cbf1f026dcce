//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Runs sequentially so the wall-clock limits measure one criterion at a time.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use lambda_abel_cli::verify::{run_suite, CheckResult, Suite, VerifyConfig};
use serde_json::Value;

struct Outcome {
    passed: bool,
    summary: String,
}

fn suite(s: Suite, count: u64, z_order: i64, lambda_order: usize) -> Vec<CheckResult> {
    run_suite(
        s,
        &VerifyConfig {
            suites: vec![s],
            count,
            z_order,
            lambda_order,
            seed: 1,
        },
    )
}

fn tally(checks: &[CheckResult], expected: usize) -> Outcome {
    let bad: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
    let mut summary = format!(
        "{}/{} checks passed",
        checks.len() - bad.len(),
        checks.len()
    );
    if let Some(c) = bad.first() {
        summary.push_str(&format!(
            "; first failure {} seed {}: {}",
            c.name,
            c.seed,
            c.detail.as_deref().unwrap_or("")
        ));
    }
    Outcome {
        passed: bad.is_empty() && checks.len() == expected,
        summary,
    }
}

fn companion_anchor() -> Outcome {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/companion.json");
    let out = Command::new(env!("CARGO_BIN_EXE_lambda-abel"))
        .args(["abelianize", "--in", path.to_str().unwrap()])
        .output()
        .expect("run binary");
    if !out.status.success() {
        return Outcome {
            passed: false,
            summary: String::from_utf8_lossy(&out.stderr).into_owned(),
        };
    }
    let v: Value = serde_json::from_slice(&out.stdout).expect("json output");
    let coeffs = v["scalar"]["a"]["coeffs"]
        .as_object()
        .cloned()
        .unwrap_or_default();
    let low: Vec<(String, String)> = coeffs
        .iter()
        .filter(|(k, _)| k.starts_with("0,") || k.starts_with("1,"))
        .map(|(k, c)| (k.clone(), c.as_str().unwrap_or("").to_string()))
        .collect();
    let want = vec![
        ("0,2".to_string(), "1/4".to_string()),
        ("1,-1".to_string(), "-1/2".to_string()),
    ];
    let window = (&v["truncation"]["zOrder"], &v["truncation"]["lambdaOrder"]);
    let passed = low == want && window == (&Value::from(12), &Value::from(6));
    Outcome {
        passed,
        summary: format!("λ⁰/λ¹ coefficients {low:?}"),
    }
}

fn residue_theorems() -> Outcome {
    tally(&suite(Suite::Residue, 100, 12, 6), 200)
}

fn round_trip() -> Outcome {
    tally(&suite(Suite::Roundtrip, 100, 12, 6), 100)
}

fn lattice_uniqueness() -> Outcome {
    let mut o = tally(&suite(Suite::LatticeUniqueness, 25, 4, 2), 25);
    o.summary
        .push_str(" (8 perturbations each, probed through λ²)");
    o
}

fn wasow_suite() -> Outcome {
    // 50 random instances plus the closed-form one
    tally(&suite(Suite::Wasow, 50, 12, 6), 51)
}

fn series_kernel() -> Outcome {
    let mut checks = suite(Suite::SeriesOracle, 250, 8, 4);
    let series = checks.len();
    checks.extend(suite(Suite::GaugeCocycle, 200, 8, 4));
    let mut o = tally(&checks, 1000 + 400);
    o.summary.push_str(&format!(
        " ({series} kernel cases, {} gauge checks)",
        checks.len() - series
    ));
    o
}

fn degeneration() -> Outcome {
    tally(&suite(Suite::HitchinShadow, 100, 12, 1), 200)
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 7] = [
        ("companion anchor", Duration::from_secs(1), companion_anchor),
        (
            "residue theorems",
            Duration::from_secs(60),
            residue_theorems,
        ),
        ("round trip", Duration::from_secs(120), round_trip),
        (
            "lattice uniqueness",
            Duration::from_secs(10),
            lattice_uniqueness,
        ),
        ("wasow suite", Duration::from_secs(10), wasow_suite),
        (
            "series kernel oracle",
            Duration::from_secs(30),
            series_kernel,
        ),
        ("degeneration", Duration::from_secs(10), degeneration),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let took = start.elapsed();
        let ok = o.passed && took < *limit;
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] criterion {}: {name}: {} in {:.2}s (limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            o.summary,
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
