use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use lambda_abel::scalar_gauge_equivalent;
use lambda_abel_cli::generate::{gen_random, GenConfig, Profile};
use lambda_abel_cli::instance::{parse_instance, to_json};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lambda-abel"))
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().expect("wait")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lambda-abel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn abelianize_companion() {
    let path = data("companion.json");
    let o = run(&["abelianize", "--in", path.to_str().unwrap()], None);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let coeffs = &v["scalar"]["a"]["coeffs"];
    assert_eq!(coeffs["1,-1"], "-1/2");
    assert_eq!(coeffs["0,2"], "1/4");
    assert_eq!(v["scalar"]["normalized"], true);
    assert!(v["witness"].is_array());
}

#[test]
fn abelianize_reads_stdin() {
    let text = std::fs::read_to_string(data("companion.json")).unwrap();
    let o = run(&["abelianize", "--lambda-order", "2"], Some(&text));
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["truncation"]["lambdaOrder"], 2);
    assert_eq!(v["scalar"]["a"]["coeffs"]["1,-1"], "-1/2");
}

#[test]
fn classify_degenerate_exits_2() {
    let path = data("degenerate.json");
    let o = run(&["classify", "--in", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stdout(&o).trim(), r#"{"class":"Degenerate"}"#);
}

#[test]
fn classify_ramified() {
    let path = data("companion.json");
    let o = run(&["classify", "--in", path.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"class":"SmoothRamified"}"#);
}

#[test]
fn deabelianize_then_abelianize() {
    let inst = gen_random(
        7,
        Profile::RamifiedScalar,
        GenConfig {
            z_order: 10,
            lambda_order: 4,
        },
    )
    .unwrap();
    let down = run(&["deabelianize"], Some(&to_json(&inst)));
    assert_eq!(
        down.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&down.stderr)
    );
    let matrix = parse_instance(&stdout(&down)).unwrap();
    assert!(matrix.matrix().unwrap().is_integral());
    assert!(matrix.phi.is_some());
    let up = run(&["abelianize"], Some(&stdout(&down)));
    assert_eq!(
        up.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&up.stderr)
    );
    let back = parse_instance(&stdout(&up)).unwrap();
    let r = scalar_gauge_equivalent(inst.scalar().unwrap(), back.scalar().unwrap());
    assert!(r.is_some());
}

#[test]
fn wasow_splits_unramified() {
    let inst = gen_random(
        3,
        Profile::UnramifiedMatrix,
        GenConfig {
            z_order: 6,
            lambda_order: 3,
        },
    )
    .unwrap();
    let o = run(&["wasow"], Some(&to_json(&inst)));
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["aPlus"].is_object() && v["aMinus"].is_object() && v["R"].is_array());
}

#[test]
fn wrong_curve_class_exits_2() {
    let inst = gen_random(
        3,
        Profile::UnramifiedMatrix,
        GenConfig {
            z_order: 6,
            lambda_order: 3,
        },
    )
    .unwrap();
    let o = run(&["abelianize"], Some(&to_json(&inst)));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_json_reports_position() {
    let o = run(&["abelianize"], Some("{\n  \"version\": 1,\n  oops\n}"));
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn invalid_instance_exits_1() {
    let text = std::fs::read_to_string(data("companion.json"))
        .unwrap()
        .replace("\"version\": 1", "\"version\": 2");
    assert_eq!(run(&["abelianize"], Some(&text)).status.code(), Some(1));
    let text = std::fs::read_to_string(data("companion.json"))
        .unwrap()
        .replace("\"0,0\": \"1\"", "\"0,0\": \"1/0\"");
    assert_eq!(run(&["abelianize"], Some(&text)).status.code(), Some(1));
}

#[test]
fn pole_cap_exhaustion_exits_3() {
    let inst = gen_random(
        7,
        Profile::RamifiedScalar,
        GenConfig {
            z_order: 10,
            lambda_order: 4,
        },
    )
    .unwrap();
    let o = run(&["deabelianize", "--pole-cap", "0"], Some(&to_json(&inst)));
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn generate_is_deterministic() {
    let args = [
        "generate",
        "--profile",
        "ramified-matrix",
        "--seed",
        "5",
        "--count",
        "3",
    ];
    let a = run(&args, None);
    let b = run(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 3);
    for line in stdout(&a).lines() {
        parse_instance(line).unwrap();
    }
}

#[test]
fn seed_sweep_gives_distinct_instances() {
    let cfg = GenConfig {
        z_order: 6,
        lambda_order: 3,
    };
    for profile in [
        Profile::RamifiedMatrix,
        Profile::RamifiedScalar,
        Profile::UnramifiedMatrix,
    ] {
        let mut seen = std::collections::HashSet::new();
        for seed in 1..=100 {
            let text = to_json(&gen_random(seed, profile, cfg).unwrap());
            assert_eq!(
                parse_instance(&text).unwrap(),
                parse_instance(&text).unwrap()
            );
            seen.insert(text);
        }
        assert_eq!(seen.len(), 100, "{profile:?}");
    }
}

#[test]
fn scalar_instances_are_normalized() {
    let inst = gen_random(
        1,
        Profile::RamifiedScalar,
        GenConfig {
            z_order: 8,
            lambda_order: 4,
        },
    )
    .unwrap();
    let s = inst.scalar().unwrap();
    assert!(s.normalized);
    let text = to_json(&inst);
    assert_eq!(to_json(&parse_instance(&text).unwrap()), text);
}

#[test]
fn verify_writes_report() {
    let out = temp("report.json");
    let o = run(
        &[
            "verify",
            "--count",
            "2",
            "--z-order",
            "6",
            "--lambda-order",
            "3",
            "--out",
            out.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["failed"], 0);
    let names: std::collections::BTreeSet<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    for suite in [
        "series-oracle",
        "gauge-cocycle",
        "wasow",
        "roundtrip",
        "residue",
        "lattice-uniqueness",
        "hitchin-shadow",
    ] {
        assert!(names.iter().any(|n| n.starts_with(suite)), "{suite}");
    }
}

#[test]
fn verify_human_output() {
    let o = run(
        &[
            "verify",
            "--suite",
            "series-oracle",
            "--count",
            "3",
            "--human",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PASS series-oracle/mul: 3/3 passed"));
}
