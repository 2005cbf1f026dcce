//! Property suites runnable from the shipped binary.

use clap::ValueEnum;
use lambda_abel::abelianize::perturbed_lattice_survives;
use lambda_abel::gauge::{gauge_matrix, gauge_raw, invert_matrix};
use lambda_abel::oracle::Dense;
use lambda_abel::rational::{format, int, rat};
use lambda_abel::spectral::sigma_conjugate_connection;
use lambda_abel::wasow::{diagonalize, split_unramified};
use lambda_abel::{
    forward_abelianize, pushforward_scalar, roundtrip_check, BiSeries, Chart, Laurent, Mat2,
    MatrixConnection, Rational, Truncation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::generate::{gen_random, GenConfig, Profile};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    SeriesOracle,
    GaugeCocycle,
    Wasow,
    Roundtrip,
    Residue,
    LatticeUniqueness,
    HitchinShadow,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::SeriesOracle,
        Suite::GaugeCocycle,
        Suite::Wasow,
        Suite::Roundtrip,
        Suite::Residue,
        Suite::LatticeUniqueness,
        Suite::HitchinShadow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::SeriesOracle => "series-oracle",
            Suite::GaugeCocycle => "gauge-cocycle",
            Suite::Wasow => "wasow",
            Suite::Roundtrip => "roundtrip",
            Suite::Residue => "residue",
            Suite::LatticeUniqueness => "lattice-uniqueness",
            Suite::HitchinShadow => "hitchin-shadow",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    pub count: u64,
    pub z_order: i64,
    pub lambda_order: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suites: Suite::ALL.to_vec(),
            count: 10,
            z_order: 8,
            lambda_order: 4,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub seed: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub total: usize,
    pub failed: usize,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    fn from_checks(mut checks: Vec<CheckResult>) -> Self {
        checks.sort_by(|a, b| (&a.name, a.seed).cmp(&(&b.name, b.seed)));
        let failed = checks.iter().filter(|c| !c.passed).count();
        VerifyReport {
            total: checks.len(),
            failed,
            passed: failed == 0,
            checks,
        }
    }

    /// Count per check name, then every failure in full.
    pub fn render_human(&self) -> String {
        let mut names: Vec<&str> = self.checks.iter().map(|c| c.name.as_str()).collect();
        names.dedup();
        let mut out = String::new();
        for n in names {
            let all: Vec<_> = self.checks.iter().filter(|c| c.name == n).collect();
            let bad = all.iter().filter(|c| !c.passed).count();
            let tag = if bad == 0 { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{tag} {n}: {}/{} passed\n",
                all.len() - bad,
                all.len()
            ));
        }
        for c in self.checks.iter().filter(|c| !c.passed) {
            out.push_str(&format!(
                "  seed {} {}: {}\n",
                c.seed,
                c.name,
                c.detail.as_deref().unwrap_or("")
            ));
            if let Some(x) = &c.counterexample {
                out.push_str(&format!("    {x}\n"));
            }
        }
        out.push_str(&format!("{} checks, {} failed\n", self.total, self.failed));
        out
    }
}

fn check(
    name: &str,
    seed: u64,
    passed: bool,
    detail: impl FnOnce() -> String,
    input: impl FnOnce() -> Value,
) -> CheckResult {
    let (detail, counterexample) = if passed {
        (None, None)
    } else {
        (Some(detail()), Some(input()))
    };
    CheckResult {
        name: name.into(),
        seed,
        passed,
        detail,
        counterexample,
    }
}

fn errored(name: &str, seed: u64, e: impl std::fmt::Display, input: Value) -> CheckResult {
    CheckResult {
        name: name.into(),
        seed,
        passed: false,
        detail: Some(e.to_string()),
        counterexample: Some(input),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn random_series(
    rng: &mut ChaCha8Rng,
    tr: Truncation,
    lo: i64,
    unit: bool,
    nilpotent: bool,
) -> BiSeries {
    let mut cs: Vec<((usize, i64), Rational)> = Vec::new();
    for i in 0..tr.lambda_order {
        for j in lo..tr.z_order {
            if (i, j) == (0, 0) && (unit || nilpotent) {
                continue;
            }
            if rng.gen_bool(0.4) {
                cs.push((
                    (i, j),
                    rat(rng.gen_range(-4..=4), [1, 2, 4][rng.gen_range(0..3)]),
                ));
            }
        }
    }
    if unit {
        let c = [-2, -1, 1, 2][rng.gen_range(0..4)];
        cs.push(((0, 0), int(c)));
    }
    BiSeries::from_coeffs(tr, Chart::Base, cs).expect("coefficients lie in the window")
}

fn series_oracle(cfg: &VerifyConfig, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.z_order.min(8);
    let l = cfg.lambda_order.min(4);
    let p = 2;
    let polar = Truncation {
        z_order: n,
        lambda_order: l,
        pole_cap: p,
    };
    let taylor = Truncation {
        pole_cap: 0,
        ..polar
    };
    let a = random_series(&mut rng, polar, -p, false, false);
    let b = random_series(&mut rng, polar, -p, false, false);
    let u = random_series(&mut rng, taylor, 0, true, false);
    let x = random_series(&mut rng, taylor, 0, false, true);
    let mut out = Vec::new();

    let dense = |s: &BiSeries, lo| Dense::from_series(s, lo, n).expect("window is known");
    let prod = a.mul(&b);
    let ok = prod
        .as_ref()
        .map_or(false, |pr| dense(&a, -p).mul(&dense(&b, -p)).matches(pr));
    out.push(check(
        "series-oracle/mul",
        seed,
        ok,
        || format!("{prod:?}"),
        || json!({"a": to_value(&a), "b": to_value(&b)}),
    ));

    let inv = u.invert();
    let ok = inv.as_ref().map_or(false, |v| {
        dense(&u, 0).inverse().map_or(false, |d| d.matches(v))
    });
    out.push(check(
        "series-oracle/invert",
        seed,
        ok,
        || format!("{inv:?}"),
        || json!({"a": to_value(&u)}),
    ));

    let e = x.exp_series();
    let de = dense(&x, 0).exp().expect("nilpotent input");
    let ok = e.as_ref().map_or(false, |v| de.matches(v));
    out.push(check(
        "series-oracle/exp",
        seed,
        ok,
        || format!("{e:?}"),
        || json!({"a": to_value(&x)}),
    ));

    let ok = match &e {
        Ok(ev) => match ev.log_series() {
            Ok(lg) => de.log().map_or(false, |d| d.matches(&lg)) && lg.agrees_with(&x),
            Err(_) => false,
        },
        Err(_) => false,
    };
    out.push(check(
        "series-oracle/log",
        seed,
        ok,
        || "log(exp x) differs from x or from the oracle".into(),
        || json!({"a": to_value(&x)}),
    ));
    out
}

fn random_gauge(rng: &mut ChaCha8Rng, tr: Truncation) -> Mat2<BiSeries> {
    let l = tr.lambda_order;
    let shifted = |rng: &mut ChaCha8Rng| {
        random_series(rng, tr, 0, false, false)
            .shift_x(1)
            .truncate_z(tr.z_order)
    };
    let m = Mat2::new(shifted(rng), shifted(rng), shifted(rng), shifted(rng));
    let c = |v: i64| BiSeries::exact_monomial(Chart::Base, int(v), 0, l);
    let k = rng.gen_range(-2..=2);
    let u = if rng.gen_bool(0.5) {
        Mat2::new(c(1), c(k), c(0), c(1))
    } else {
        Mat2::new(c(0), c(1), c(1), c(k))
    };
    u.mul(&Mat2::identity(Chart::Base, l).add(&m))
}

fn gauge_cocycle(cfg: &VerifyConfig, seed: u64) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.z_order.min(8);
    let l = cfg.lambda_order.min(4);
    let tr = Truncation {
        z_order: n,
        lambda_order: l,
        pole_cap: 1,
    };
    let taylor = Truncation { pole_cap: 0, ..tr };
    let a = Mat2::new(
        random_series(&mut rng, tr, -1, false, false),
        random_series(&mut rng, tr, -1, false, false),
        random_series(&mut rng, tr, -1, false, false),
        random_series(&mut rng, tr, -1, false, false),
    );
    let r1 = random_gauge(&mut rng, taylor);
    let r2 = random_gauge(&mut rng, taylor);
    let input = || json!({"A": to_value(&a), "R1": to_value(&r1), "R2": to_value(&r2)});
    let cocycle = (|| {
        let step = gauge_raw(&gauge_raw(&a, &r1)?, &r2)?;
        let once = gauge_raw(&a, &r1.mul(&r2))?;
        Ok::<_, lambda_abel::Error>(step.agrees_with(&once))
    })();
    let dlog = (|| {
        let tr = gauge_raw(&a, &r1)?.trace();
        let det = r1.det();
        let d = det
            .invert()?
            .mul(&det.differentiate())?
            .mul_lambda()
            .truncate_lambda(l);
        Ok::<_, lambda_abel::Error>(tr.agrees_with(&a.trace().add(&d)?))
    })();
    vec![
        match cocycle {
            Ok(ok) => check(
                "gauge-cocycle/cocycle",
                seed,
                ok,
                || "gauging twice differs from gauging by the product".into(),
                input,
            ),
            Err(e) => errored("gauge-cocycle/cocycle", seed, e, input()),
        },
        match dlog {
            Ok(ok) => check(
                "gauge-cocycle/trace-dlog",
                seed,
                ok,
                || "tr shifts by something other than λ dlog det".into(),
                input,
            ),
            Err(e) => errored("gauge-cocycle/trace-dlog", seed, e, input()),
        },
    ]
}

fn gen(
    cfg: &VerifyConfig,
    seed: u64,
    profile: Profile,
    lambda_order: usize,
) -> Result<crate::instance::InstanceFile, CliError> {
    gen_random(
        seed,
        profile,
        GenConfig {
            z_order: cfg.z_order,
            lambda_order,
        },
    )
}

fn wasow_case(cfg: &VerifyConfig, seed: u64) -> Vec<CheckResult> {
    let name = "wasow/unramified";
    let inst = match gen(cfg, seed, Profile::UnramifiedMatrix, cfg.lambda_order) {
        Ok(i) => i,
        Err(e) => return vec![errored(name, seed, e, Value::Null)],
    };
    let input = || to_value(&inst);
    let a = inst.matrix.as_ref().expect("matrix profile");
    match split_unramified(a) {
        Ok((_, _, r)) => {
            let rinv = invert_matrix(&r);
            let g = gauge_matrix(a, &r);
            let ok = r.is_integral()
                && rinv.as_ref().map_or(false, |x| x.is_integral())
                && g.as_ref()
                    .map_or(false, |g| g.a.e[0][1].is_zero() && g.a.e[1][0].is_zero());
            vec![check(
                name,
                seed,
                ok,
                || "defect or non-integral gauge".into(),
                input,
            )]
        }
        Err(e) => vec![errored(name, seed, e, input())],
    }
}

/// `[[1, λ], [0, −1]]` diagonalizes to `diag(1, −1)` with nothing above λ⁰.
pub fn wasow_closed_form(lambda_order: usize) -> CheckResult {
    let name = "wasow/closed-form";
    let tr = Truncation {
        z_order: 6,
        lambda_order,
        pole_cap: 0,
    };
    let s = |cs: &[((usize, i64), i64)]| {
        BiSeries::from_coeffs(tr, Chart::Base, cs.iter().map(|&(k, c)| (k, int(c))))
    };
    let build = || -> lambda_abel::Result<MatrixConnection> {
        let one = if lambda_order > 1 {
            s(&[((1, 0), 1)])?
        } else {
            s(&[])?
        };
        MatrixConnection::new(
            Mat2::new(s(&[((0, 0), 1)])?, one, s(&[])?, s(&[((0, 0), -1)])?),
            None,
        )
    };
    let a = build().expect("closed-form input");
    match diagonalize(&a) {
        Ok(res) => {
            let d = &res.d.a;
            let ok = d.e[0][1].is_zero()
                && d.e[1][0].is_zero()
                && d.e[0][0].coeffs().all(|(k, c)| k == (0, 0) && c == &int(1))
                && d.e[1][1]
                    .coeffs()
                    .all(|(k, c)| k == (0, 0) && c == &int(-1))
                && d.e[0][0].coeff(0, 0) == Some(int(1));
            check(
                name,
                0,
                ok,
                || format!("D = {}", to_value(d)),
                || to_value(&a),
            )
        }
        Err(e) => errored(name, 0, e, to_value(&a)),
    }
}

fn residue_case(cfg: &VerifyConfig, seed: u64) -> Vec<CheckResult> {
    let inst = match gen(cfg, seed, Profile::RamifiedMatrix, cfg.lambda_order) {
        Ok(i) => i,
        Err(e) => return vec![errored("residue/normal-form", seed, e, Value::Null)],
    };
    let input = || to_value(&inst);
    let a = inst.matrix.as_ref().expect("matrix profile");
    let l = cfg.lambda_order;
    let (s, _) = match forward_abelianize(a, &inst.curve) {
        Ok(x) => x,
        Err(e) => return vec![errored("residue/normal-form", seed, e, input())],
    };
    let expect = |r1: Rational| -> Vec<String> {
        (0..l)
            .map(|i| format(&if i == 1 { r1.clone() } else { int(0) }))
            .collect()
    };
    let fmt =
        |v: lambda_abel::Result<Vec<Rational>>| v.map(|v| v.iter().map(format).collect::<Vec<_>>());
    let res = fmt(s.a.residue_at_zero());
    let pair = fmt(sigma_conjugate_connection(&s.a)
        .and_then(|c| s.a.add(&c))
        .and_then(|p| p.residue_at_zero()));
    let want_res = expect(rat(-1, 2));
    let want_pair = expect(int(-1));
    vec![
        check(
            "residue/normal-form",
            seed,
            res.as_ref() == Ok(&want_res),
            || format!("residues {res:?}"),
            input,
        ),
        check(
            "residue/pair-trace",
            seed,
            pair.as_ref() == Ok(&want_pair),
            || format!("pair trace residues {pair:?}"),
            input,
        ),
    ]
}

fn roundtrip_case(
    cfg: &VerifyConfig,
    seed: u64,
    lambda_order: usize,
    name: &str,
) -> Vec<CheckResult> {
    let inst = match gen(cfg, seed, Profile::RamifiedScalar, lambda_order) {
        Ok(i) => i,
        Err(e) => return vec![errored(name, seed, e, Value::Null)],
    };
    let a = inst.scalar.as_ref().expect("scalar profile");
    match roundtrip_check(a) {
        Ok(rep) => vec![check(
            name,
            seed,
            rep.passed() && rep.witness.is_some(),
            || to_value(&rep).to_string(),
            || to_value(&inst),
        )],
        Err(e) => vec![errored(name, seed, e, to_value(&inst))],
    }
}

fn hitchin_case(cfg: &VerifyConfig, seed: u64) -> Vec<CheckResult> {
    let name = "hitchin-shadow/invariants";
    let inst = match gen(cfg, seed, Profile::RamifiedScalar, 1) {
        Ok(i) => i,
        Err(e) => return vec![errored(name, seed, e, Value::Null)],
    };
    let a = inst.scalar.as_ref().expect("scalar profile");
    let mut out = match pushforward_scalar(a) {
        Ok(pf) => {
            let ok = pf.higgs_l0.trace().agrees_with(inst.curve.t())
                && pf.higgs_l0.det().agrees_with(inst.curve.d());
            vec![check(
                name,
                seed,
                ok,
                || "higgsL0 invariants differ from (t, d)".into(),
                || to_value(&inst),
            )]
        }
        Err(e) => vec![errored(name, seed, e, to_value(&inst))],
    };
    out.extend(roundtrip_case(cfg, seed, 1, "hitchin-shadow/roundtrip"));
    out
}

/// The monomials `z^(−e) E_kl`, `e ∈ {1, 2}`.
pub fn probe_perturbations() -> Vec<Mat2<Laurent>> {
    let mut out = Vec::new();
    for k in 0..4 {
        for e in 1..=2 {
            let mut p = Mat2::<Laurent>::zero();
            p.e[k / 2][k % 2] = Laurent::exact_monomial(int(1), -e);
            out.push(p);
        }
    }
    out
}

fn lattice_case(cfg: &VerifyConfig, seed: u64) -> Vec<CheckResult> {
    let name = "lattice-uniqueness/probe";
    // An integral instance spans its own lattice; the constraints that rule
    // out a second one only appear at λ².
    let l = cfg.lambda_order.max(3);
    let inst = match gen(cfg, seed, Profile::RamifiedMatrix, l) {
        Ok(i) => i,
        Err(e) => return vec![errored(name, seed, e, Value::Null)],
    };
    let input = || to_value(&inst);
    let a = inst.matrix.as_ref().expect("matrix profile");
    let run = || -> lambda_abel::Result<(bool, Vec<usize>)> {
        let x1 = Mat2::zero();
        let base = perturbed_lattice_survives(a, &x1, &Mat2::zero())?;
        let mut survivors = Vec::new();
        for (i, p) in probe_perturbations().iter().enumerate() {
            if perturbed_lattice_survives(a, &x1, p)? {
                survivors.push(i);
            }
        }
        Ok((base, survivors))
    };
    match run() {
        Ok((base, survivors)) => {
            vec![check(
                name,
                seed,
                base && survivors.is_empty(),
                || {
                    format!("unperturbed lattice survives: {base}; surviving perturbations: {survivors:?}")
                },
                input,
            )]
        }
        Err(e) => vec![errored(name, seed, e, input())],
    }
}

fn run_case(suite: Suite, cfg: &VerifyConfig, seed: u64) -> Vec<CheckResult> {
    match suite {
        Suite::SeriesOracle => series_oracle(cfg, seed),
        Suite::GaugeCocycle => gauge_cocycle(cfg, seed),
        Suite::Wasow => wasow_case(cfg, seed),
        Suite::Roundtrip => roundtrip_case(cfg, seed, cfg.lambda_order, "roundtrip/equivalent"),
        Suite::Residue => residue_case(cfg, seed),
        Suite::LatticeUniqueness => lattice_case(cfg, seed),
        Suite::HitchinShadow => hitchin_case(cfg, seed),
    }
}

/// Runs one suite over seeds `seed .. seed + count`.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<CheckResult> {
    let mut out: Vec<CheckResult> = (0..cfg.count)
        .into_par_iter()
        .flat_map_iter(|k| run_case(suite, cfg, cfg.seed + k))
        .collect();
    if suite == Suite::Wasow {
        out.push(wasow_closed_form(cfg.lambda_order.max(3)));
    }
    out
}

pub fn verify_properties(cfg: &VerifyConfig) -> VerifyReport {
    let mut suites = cfg.suites.clone();
    suites.sort();
    suites.dedup();
    VerifyReport::from_checks(suites.into_iter().flat_map(|s| run_suite(s, cfg)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_is_sorted_and_counted() {
        let r = |name: &str, seed, passed| CheckResult {
            name: name.into(),
            seed,
            passed,
            detail: None,
            counterexample: None,
        };
        let rep =
            VerifyReport::from_checks(vec![r("b", 2, true), r("a", 3, false), r("b", 1, true)]);
        let order: Vec<_> = rep
            .checks
            .iter()
            .map(|c| (c.name.as_str(), c.seed))
            .collect();
        assert_eq!(order, [("a", 3), ("b", 1), ("b", 2)]);
        assert_eq!((rep.total, rep.failed, rep.passed), (3, 1, false));
        assert!(rep
            .render_human()
            .starts_with("FAIL a: 0/1 passed\nPASS b: 2/2 passed\n"));
    }

    #[test]
    fn closed_form_passes() {
        assert!(wasow_closed_form(4).passed);
    }

    #[test]
    fn perturbation_set() {
        let ps = probe_perturbations();
        assert_eq!(ps.len(), 8);
        assert!(ps
            .iter()
            .all(|p| p.entries().filter(|e| !e.is_zero()).count() == 1));
    }

    #[test]
    fn failing_check_keeps_counterexample() {
        let c = check("x", 1, false, || "why".into(), || json!({"a": 1}));
        assert_eq!(c.detail.as_deref(), Some("why"));
        assert_eq!(c.counterexample, Some(json!({"a": 1})));
    }
}
