//! The integral lattice inside a pushed-forward connection.
//!
//! Order by order, `Φ = Π (I + λʲXⱼ)`. At order `j` the polar part of the
//! defect is removed by `Sⱼ` from the image of `ad C₀`; the commutant part
//! `Tⱼ = f + g·C₀'` is then fixed so that order `j + 1` stays solvable.

use num_traits::Zero;

use super::{LatticeResult, PushforwardResult};
use crate::error::{Error, Result};
use crate::gauge::{lambda_times, MatrixConnection};
use crate::matrix::Mat2;
use crate::rational::{int, rat};
use crate::series::{BiSeries, Chart, Laurent};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeStep {
    pub lambda_order: usize,
    pub s: Mat2<Laurent>,
    pub f: Laurent,
    pub g: Laurent,
    pub x: Mat2<Laurent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pivot {
    Beta,
    Gamma,
    Alpha,
}

fn no_lattice(j: usize, reason: &str) -> Error {
    Error::NoLattice {
        lambda_order: j,
        reason: reason.into(),
    }
}

fn need_polar(x: &Laurent, what: &str) -> Result<()> {
    if x.prec() < 0 {
        Err(Error::InsufficientPrecision(format!(
            "polar part of {what} lies outside the window"
        )))
    } else {
        Ok(())
    }
}

fn tr(m: &Mat2<Laurent>) -> Laurent {
    m.trace()
}

/// `C₀ − (tr C₀/2)·I`.
fn traceless(c0: &Mat2<Laurent>) -> Mat2<Laurent> {
    let shift = c0.trace().scale(&rat(1, 2));
    Mat2::new(
        c0.e[0][0].sub(&shift),
        c0.e[0][1].clone(),
        c0.e[1][0].clone(),
        c0.e[1][1].sub(&shift),
    )
}

/// A unit entry of the traceless part, first in (1,2), (2,1), (1,1) order.
fn choose_pivot(c: &Mat2<Laurent>) -> Result<Pivot> {
    let alpha = &c.e[0][0];
    let beta = &c.e[0][1];
    let gamma = &c.e[1][0];
    [
        (beta, Pivot::Beta),
        (gamma, Pivot::Gamma),
        (alpha, Pivot::Alpha),
    ]
    .into_iter()
    .filter(|(x, _)| x.leading().map_or(false, |(v, _)| v == 0))
    .map(|(_, p)| p)
    .next()
    .ok_or(Error::NotRegular)
}

/// Polar `S` with `pol(M + [C₀', S]) = 0`.
fn solve_image(
    m: &Mat2<Laurent>,
    c: &Mat2<Laurent>,
    pivot: Pivot,
    j: usize,
) -> Result<Mat2<Laurent>> {
    for x in m.entries() {
        need_polar(x, "the defect")?;
    }
    let z = Laurent::exact_zero();
    let alpha = &c.e[0][0];
    let pol_div = |x: &Laurent, d: &Laurent| -> Result<Laurent> {
        let q = x.mul(&d.inv()?);
        need_polar(&q, "the defect")?;
        Ok(q.polar_part())
    };
    let s = match pivot {
        Pivot::Gamma => {
            let g = &c.e[1][0];
            Mat2::new(
                z.clone(),
                pol_div(&m.e[0][0], g)?,
                z,
                pol_div(&m.e[1][0], g)?,
            )
        }
        Pivot::Beta => {
            let b = &c.e[0][1];
            Mat2::new(
                z.clone(),
                z,
                pol_div(&m.e[0][0], b)?.neg(),
                pol_div(&m.e[0][1], b)?.neg(),
            )
        }
        Pivot::Alpha => {
            let a2 = alpha.scale(&int(2));
            Mat2::new(
                z.clone(),
                pol_div(&m.e[0][1], &a2)?.neg(),
                pol_div(&m.e[1][0], &a2)?,
                z,
            )
        }
    };
    let rest = m.add(&c.commutator(&s));
    if !rest.polar_part().is_zero() {
        return Err(no_lattice(
            j,
            "defect is not in the image of ad C0 modulo integral matrices",
        ));
    }
    Ok(s)
}

/// Polar `g` with `pol(q + ½g'·disc + ¼g·disc') = 0`.
fn solve_commutant(q: &Laurent, disc: &Laurent, cap: i64, j: usize) -> Result<Laurent> {
    need_polar(q, "the trace pairing")?;
    let u0 = match disc.leading() {
        Some((1, c)) => c.clone(),
        _ => {
            return Err(Error::ConditionViolated(
                "discriminant has no simple zero".into(),
            ))
        }
    };
    let ddisc = disc.deriv();
    let apply = |g: &Laurent| {
        g.deriv()
            .mul(disc)
            .scale(&rat(1, 2))
            .add(&g.mul(&ddisc).scale(&rat(1, 4)))
    };
    let needed = q.polar_part().pole_order();
    if needed > cap {
        return Err(Error::PoleCapExceeded { needed, cap });
    }
    let mut g = Laurent::exact_zero();
    for m in (1..=needed).rev() {
        let r = q.add(&apply(&g));
        let c = r.coeff(-m).expect("polar window is known");
        if c.is_zero() {
            continue;
        }
        let lead = &u0 * int(1 - 2 * m) / int(4);
        g = g.add(&Laurent::exact_monomial(-c / lead, -m));
    }
    if !q.add(&apply(&g)).polar_part().is_zero() {
        return Err(no_lattice(
            j + 1,
            "commutant equation has no polar solution",
        ));
    }
    Ok(g)
}

/// `G⁻¹CG + λG⁻¹G'` for `G = I + N` with `N` divisible by λ.
pub(crate) fn gauge_unipotent(c: &Mat2<BiSeries>, n: &Mat2<BiSeries>) -> Mat2<BiSeries> {
    let chart = c.e[0][0].chart();
    let l = c.lambda_order();
    let id = Mat2::identity(chart, l);
    let g = id.add(n);
    let mut ginv = id.clone();
    let mut term = id;
    for _ in 1..l {
        term = term.mul(n).neg();
        if term.is_zero() {
            break;
        }
        ginv = ginv.add(&term);
    }
    let drift = ginv.mul(&n.deriv()).map(lambda_times);
    ginv.mul(c).mul(&g).add(&drift)
}

fn embed(x: &Mat2<Laurent>, j: usize, l: usize, chart: Chart) -> Mat2<BiSeries> {
    let mut orders = vec![Mat2::<Laurent>::zero(); l];
    orders[j] = x.clone();
    Mat2::from_orders(chart, &orders)
}

fn max_pole(m: &Mat2<Laurent>) -> i64 {
    m.entries().map(Laurent::pole_order).max().unwrap_or(0)
}

/// Runs steps `1..=last`, returning them with the gauged connection and `Φ`.
fn run_steps(
    pf: &PushforwardResult,
    cap: i64,
    last: usize,
) -> Result<(Vec<LatticeStep>, Mat2<BiSeries>, Mat2<BiSeries>)> {
    let au = &pf.au.a;
    let chart = pf.au.chart;
    let l = au.lambda_order();
    let c0 = au.order(0);
    if !c0.is_integral() {
        return Err(no_lattice(0, "Higgs part is not integral"));
    }
    let c0p = traceless(&c0);
    let pivot = choose_pivot(&c0p)?;
    let disc = c0p.det().scale(&int(-4));
    let mut c = au.clone();
    let mut phi = Mat2::identity(chart, l);
    let mut steps = Vec::new();
    for j in 1..=last.min(l - 1) {
        let m = c.order(j);
        let s = solve_image(&m, &c0p, pivot, j)?;
        let mut f = Laurent::exact_zero();
        let mut g = Laurent::exact_zero();
        if j + 1 < l {
            let next = c.order(j + 1);
            let c1 = c.order(1);
            let sc = s.commutator(&c0p);
            let mut q = tr(&next.mul(&c0p))
                .add(&tr(&c1.mul(&sc)))
                .add(&tr(&s.deriv().mul(&c0p)));
            if j == 1 {
                q = q.add(&tr(&s.mul(&sc).mul(&c0p)));
            }
            g = solve_commutant(&q, &disc, cap, j)?;
            let trace_src = tr(&next).add(&tr(&s).deriv());
            need_polar(&trace_src, "the trace")?;
            f = trace_src
                .polar_part()
                .integ()
                .map_err(|_| no_lattice(j + 1, "trace has a residue that no gauge can remove"))?
                .scale(&rat(-1, 2));
        }
        let fi = Mat2::diag(f.clone(), f.clone(), Laurent::exact_zero());
        let x = s.add(&fi).add(&c0p.map(|e| e.mul(&g)));
        let needed = max_pole(&x);
        if needed > cap {
            return Err(Error::PoleCapExceeded { needed, cap });
        }
        let n = embed(&x, j, l, chart);
        c = gauge_unipotent(&c, &n);
        phi = phi.add(&phi.mul(&n));
        steps.push(LatticeStep {
            lambda_order: j,
            s,
            f,
            g,
            x,
        });
    }
    Ok((steps, c, phi))
}

/// Runs the construction and returns each step alongside the result.
pub fn lattice_steps(
    pf: &PushforwardResult,
    cap: i64,
) -> Result<(Vec<LatticeStep>, LatticeResult)> {
    let l = pf.au.lambda_order();
    let (steps, c, phi) = run_steps(pf, cap, l)?;
    if let Some(bad) = (0..l).find(|&k| !c.order(k).is_integral()) {
        return Err(no_lattice(bad, "gauged connection is not integral"));
    }
    let a_integral = MatrixConnection {
        chart: pf.au.chart,
        a: c,
        curve: pf.au.curve.clone(),
    };
    Ok((steps, LatticeResult { phi, a_integral }))
}

/// Only the λ¹ step; it already depends on the λ² data through `g` and `f`.
pub fn first_lattice_step(pf: &PushforwardResult, cap: i64) -> Result<LatticeStep> {
    if pf.au.lambda_order() < 2 {
        return Err(Error::InvalidTruncation(
            "there is no λ¹ step below λ-order 2".into(),
        ));
    }
    let (mut steps, _, _) = run_steps(pf, cap, 1)?;
    Ok(steps.remove(0))
}

pub fn find_integral_lattice_with_cap(pf: &PushforwardResult, cap: i64) -> Result<LatticeResult> {
    lattice_steps(pf, cap).map(|(_, r)| r)
}

/// Starts with pole cap `2Λ` and doubles it once if that is not enough.
pub fn find_integral_lattice(pf: &PushforwardResult) -> Result<LatticeResult> {
    let cap = 2 * pf.au.lambda_order() as i64;
    match find_integral_lattice_with_cap(pf, cap) {
        Err(Error::PoleCapExceeded { .. }) => find_integral_lattice_with_cap(pf, 2 * cap),
        other => other,
    }
}

/// Whether gauging `a` by `I + λ(X₁ + P)` keeps the λ¹ term integral and
/// leaves a λ² term that later steps could still repair: those steps move
/// the λ² term inside the image of `ad C₀`, which fixes `tr C₂` and `tr(C₂C₀')`.
pub fn perturbed_lattice_survives(
    a: &MatrixConnection,
    x1: &Mat2<Laurent>,
    p: &Mat2<Laurent>,
) -> Result<bool> {
    let l = a.lambda_order();
    if l < 3 {
        return Err(Error::InvalidTruncation(
            "the probe needs λ-order at least 3".into(),
        ));
    }
    let a3 = a.a.truncate_lambda(3);
    let c0p = traceless(&a3.order(0));
    let n = embed(&x1.add(p), 1, 3, a.chart);
    let c = gauge_unipotent(&a3, &n);
    let c1 = c.order(1);
    let c2 = c.order(2);
    for x in c1.entries() {
        need_polar(x, "the λ¹ term")?;
    }
    let t = tr(&c2);
    let tc = tr(&c2.mul(&c0p));
    need_polar(&t, "the trace")?;
    need_polar(&tc, "the trace pairing")?;
    Ok(c1.is_integral() && t.is_integral() && tc.is_integral())
}
