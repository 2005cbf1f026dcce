//! Seeded random instances.

use clap::ValueEnum;
use lambda_abel::gauge::gauge_raw;
use lambda_abel::rational::{int, rat};
use lambda_abel::{
    BiSeries, Chart, CurveClass, Mat2, MatrixConnection, Rational, ScalarConnection, SpectralCurve,
    Truncation,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::instance::InstanceFile;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Profile {
    RamifiedMatrix,
    RamifiedScalar,
    UnramifiedMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub z_order: i64,
    pub lambda_order: usize,
}

const MAX_TRIES: usize = 256;
const CURVE_DEGREE: i64 = 3;
const DENSITY: f64 = 0.3;

fn small_int(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-4..=4)
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    let den = [1, 2, 4][rng.gen_range(0..3)];
    rat(rng.gen_range(-4..=4), den)
}

fn poly(n: i64, cs: &[i64]) -> Result<BiSeries, CliError> {
    let tr = Truncation::new(n, 1, 0)?;
    Ok(BiSeries::from_coeffs(
        tr,
        Chart::Base,
        cs.iter().enumerate().map(|(j, &c)| ((0, j as i64), int(c))),
    )?)
}

fn ramified_curve(rng: &mut ChaCha8Rng, n: i64) -> Result<SpectralCurve, CliError> {
    let deg = CURVE_DEGREE.min(n - 1) as usize;
    for _ in 0..MAX_TRIES {
        let t0 = [-2, 0, 2][rng.gen_range(0..3)];
        let mut t = vec![t0];
        let mut d = vec![t0 * t0 / 4];
        for _ in 0..deg {
            t.push(small_int(rng));
            d.push(small_int(rng));
        }
        // t² − 4d = (2t₀t₁ − 4d₁)z + O(z²)
        if deg == 0 || 2 * t[0] * t[1] - 4 * d[1] == 0 {
            continue;
        }
        let curve = SpectralCurve::new(poly(n, &t)?, poly(n, &d)?)?;
        if curve.classify()? == CurveClass::SmoothRamified {
            return Ok(curve);
        }
    }
    Err(CliError::Input(
        "could not draw a ramified curve; raise --z-order".into(),
    ))
}

fn unramified_curve(rng: &mut ChaCha8Rng, n: i64) -> Result<SpectralCurve, CliError> {
    let deg = CURVE_DEGREE.min(n - 1) as usize;
    for _ in 0..MAX_TRIES {
        let e1: i64 = rng.gen_range(-2..=2);
        let gap = [-2, -1, 1, 2][rng.gen_range(0..4)];
        let e2 = e1 + gap;
        let mut t = vec![e1 + e2];
        let mut d = vec![e1 * e2];
        for _ in 0..deg {
            t.push(small_int(rng));
            d.push(small_int(rng));
        }
        let curve = SpectralCurve::new(poly(n, &t)?, poly(n, &d)?)?;
        if curve.classify()? == CurveClass::Unramified {
            return Ok(curve);
        }
    }
    Err(CliError::Input("could not draw an unramified curve".into()))
}

/// Sparse random coefficients at λ-orders `1..l`, exponents `lo..n`.
fn random_tail(
    rng: &mut ChaCha8Rng,
    tr: Truncation,
    chart: Chart,
    lo: i64,
) -> Result<BiSeries, CliError> {
    let mut cs = Vec::new();
    for i in 1..tr.lambda_order {
        for j in lo..tr.z_order {
            if rng.gen_bool(DENSITY) {
                cs.push(((i, j), small_rational(rng)));
            }
        }
    }
    Ok(BiSeries::from_coeffs(tr, chart, cs)?)
}

/// Elementary integral gauges with determinant one.
fn unimodular(rng: &mut ChaCha8Rng, l: usize) -> Mat2<BiSeries> {
    let c = |v: i64, e: i64| BiSeries::exact_monomial(Chart::Base, int(v), e, l);
    let mut u = Mat2::identity(Chart::Base, l);
    for step in 0..3 {
        let k = rng.gen_range(-2..=2);
        let e = rng.gen_range(0..=1);
        let el = if step % 2 == 0 {
            Mat2::new(c(1, 0), c(k, e), c(0, 0), c(1, 0))
        } else {
            Mat2::new(c(1, 0), c(0, 0), c(k, e), c(1, 0))
        };
        u = u.mul(&el);
    }
    u
}

fn matrix_instance(
    rng: &mut ChaCha8Rng,
    cfg: GenConfig,
    curve: SpectralCurve,
) -> Result<InstanceFile, CliError> {
    let l = cfg.lambda_order;
    let tr = Truncation::new(cfg.z_order, l, 0)?;
    let zero = BiSeries::zero(Chart::Base, tr);
    let one = BiSeries::exact_monomial(Chart::Base, int(1), 0, l).truncate_z(cfg.z_order);
    let companion = Mat2::new(zero, curve.d().lift(l).neg(), one, curve.t().lift(l));
    let noise = Mat2::new(
        random_tail(rng, tr, Chart::Base, 0)?,
        random_tail(rng, tr, Chart::Base, 0)?,
        random_tail(rng, tr, Chart::Base, 0)?,
        random_tail(rng, tr, Chart::Base, 0)?,
    );
    let a = gauge_raw(&companion.add(&noise), &unimodular(rng, l))?;
    let a = a.map(|e| e.truncate_z(cfg.z_order));
    let m = MatrixConnection::new(a, Some(curve.clone()))?;
    Ok(InstanceFile::with_matrix(tr, curve, m))
}

fn scalar_instance(
    rng: &mut ChaCha8Rng,
    cfg: GenConfig,
    curve: SpectralCurve,
) -> Result<InstanceFile, CliError> {
    let l = cfg.lambda_order;
    let chart = curve.cover_chart()?;
    let n = chart.m_form.z_order();
    let tr = Truncation::new(n, l, 1)?;
    let mut a = chart
        .m_form
        .lift(l)
        .add(&random_tail(rng, tr, Chart::Cover, 0)?)?;
    if l > 1 {
        a = a.add(&BiSeries::from_coeffs(
            tr,
            Chart::Cover,
            [((1, -1), rat(-1, 2))],
        )?)?;
    }
    let s = ScalarConnection::new(a, curve)?;
    debug_assert!(s.normalized);
    Ok(InstanceFile::with_scalar(
        Truncation::new(cfg.z_order, l, 0)?,
        s,
    ))
}

/// Deterministic in `(seed, profile, cfg)`.
pub fn gen_random(seed: u64, profile: Profile, cfg: GenConfig) -> Result<InstanceFile, CliError> {
    Truncation::new(cfg.z_order, cfg.lambda_order, 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match profile {
        Profile::RamifiedMatrix => {
            let curve = ramified_curve(&mut rng, cfg.z_order)?;
            matrix_instance(&mut rng, cfg, curve)
        }
        Profile::UnramifiedMatrix => {
            let curve = unramified_curve(&mut rng, cfg.z_order)?;
            matrix_instance(&mut rng, cfg, curve)
        }
        Profile::RamifiedScalar => {
            let curve = ramified_curve(&mut rng, cfg.z_order)?;
            scalar_instance(&mut rng, cfg, curve)
        }
    }
}
