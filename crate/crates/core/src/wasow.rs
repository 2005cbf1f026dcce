//! Order-by-order diagonalization of `λ d/dx + A` with regular semisimple `A₀`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge::{gauge_raw, spectral_invariants, GaugeMatrix, MatrixConnection};
use crate::matrix::Mat2;
use crate::rational::rat;
use crate::series::{BiSeries, Laurent};
use crate::spectral::CurveClass;

/// Which eigenvalue branch sits in entry (1,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheets {
    PlusMinus,
    MinusPlus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalizationResult {
    pub r: GaugeMatrix,
    pub d: MatrixConnection,
    pub sheets: Sheets,
}

fn is_offdiag_zero(a: &Mat2<BiSeries>) -> bool {
    a.e[0][1].is_zero() && a.e[1][0].is_zero()
}

fn sheets_of(sep: &Laurent) -> Result<Sheets> {
    match sep.leading() {
        None => Err(Error::NotSemisimple),
        Some((_, c)) if c > &num_traits::Zero::zero() => Ok(Sheets::PlusMinus),
        Some(_) => Ok(Sheets::MinusPlus),
    }
}

fn col_val(c: &[&Laurent; 2]) -> i64 {
    c.iter()
        .filter(|x| !x.is_zero())
        .map(|x| x.val_bound())
        .min()
        .unwrap_or(i64::MAX)
}

/// Eigenvector of `[[p,q],[r,s]]` for `ξ`: `(q, ξ−p)` or `(ξ−s, r)`, whichever
/// has the smaller valuation.
pub(crate) fn eigen_column(m: &Mat2<Laurent>, xi: &Laurent) -> Result<[Laurent; 2]> {
    let [[p, q], [r, s]] = &m.e;
    let first = [q.clone(), xi.sub(p)];
    let second = [xi.sub(s), r.clone()];
    let v1 = col_val(&[&first[0], &first[1]]);
    let v2 = col_val(&[&second[0], &second[1]]);
    if v1 == i64::MAX && v2 == i64::MAX {
        return Err(Error::NotSemisimple);
    }
    Ok(if v1 <= v2 { first } else { second })
}

pub fn diagonalize(a: &MatrixConnection) -> Result<DiagonalizationResult> {
    let l = a.lambda_order();
    let chart = a.chart;
    let a0 = a.a.order(0);
    let [[p, q], [r, s]] = &a0.e;
    if is_offdiag_zero(&a.a) {
        let sheets = sheets_of(&p.sub(s))?;
        return Ok(DiagonalizationResult {
            r: Mat2::identity(chart, l),
            d: a.clone(),
            sheets,
        });
    }
    let (r0, sep, sheets) = if q.is_zero() && r.is_zero() {
        let sep = p.sub(s);
        (Mat2::<Laurent>::one(), sep.clone(), sheets_of(&sep)?)
    } else {
        let disc = p.sub(s).mul(&p.sub(s)).add(&q.mul(r).scale(&rat(4, 1)));
        if disc.is_zero() {
            return Err(Error::NotSemisimple);
        }
        let delta = disc.sqrt()?;
        let half = rat(1, 2);
        let tr = p.add(s);
        let plus = tr.add(&delta).scale(&half);
        let minus = tr.sub(&delta).scale(&half);
        let [a1, b1] = eigen_column(&a0, &plus)?;
        let [a2, b2] = eigen_column(&a0, &minus)?;
        (Mat2::new(a1, a2, b1, b2), delta, Sheets::PlusMinus)
    };
    if chart == crate::series::Chart::Base && a.is_integral() && sep.val_bound() != 0 {
        return Err(Error::SeparationNotUnit);
    }
    let r0 = Mat2::<BiSeries>::from_orders(chart, &[r0]).lift(l);
    let b = gauge_raw(&a.a, &r0)?;
    let (t, d) = diagonalize_split(&b)?;
    Ok(DiagonalizationResult {
        r: r0.mul(&t),
        d: MatrixConnection {
            chart,
            a: d,
            curve: a.curve.clone(),
        },
        sheets,
    })
}

/// Diagonalizes `B` whose λ⁰ part is already diagonal. Returns `(T, D)` with
/// `T ≡ I` at λ⁰ and `T⁻¹BT + λT⁻¹T' = D`.
pub(crate) fn diagonalize_split(b: &Mat2<BiSeries>) -> Result<(Mat2<BiSeries>, Mat2<BiSeries>)> {
    let chart = b.e[0][0].chart();
    let l = b.lambda_order();
    let bs: Vec<Mat2<Laurent>> = (0..l).map(|k| b.order(k)).collect();
    let b0 = &bs[0];
    if !(b0.e[0][1].is_zero() && b0.e[1][0].is_zero()) {
        return Err(Error::NotSemisimple);
    }
    let sep = b0.e[0][0].sub(&b0.e[1][1]);
    if sep.is_zero() {
        return Err(Error::NotSemisimple);
    }
    let sep_inv = sep.inv()?;
    let zero = Laurent::exact_zero();
    let mut ts: Vec<Mat2<Laurent>> = vec![Mat2::one()];
    // λ⁰ of D is B₀ itself: its off-diagonal entries are zero within their window.
    let mut ds: Vec<Mat2<Laurent>> = vec![b0.clone()];
    for k in 1..l {
        let mut e = bs[k].add(&ts[k - 1].deriv());
        for i in 1..k {
            e = e.add(&bs[i].mul(&ts[k - i])).sub(&ts[i].mul(&ds[k - i]));
        }
        let t12 = e.e[0][1].mul(&sep_inv).neg();
        let t21 = e.e[1][0].mul(&sep_inv);
        let tk = Mat2::new(zero.clone(), t12, t21, zero.clone());
        let dk = e.add(&b0.mul(&tk)).sub(&tk.mul(b0));
        debug_assert!(dk.e[0][1].is_zero() && dk.e[1][0].is_zero());
        ts.push(tk);
        ds.push(dk);
    }
    Ok((Mat2::from_orders(chart, &ts), Mat2::from_orders(chart, &ds)))
}

/// Splits an unramified connection into its two scalar eigen-connections.
pub fn split_unramified(a: &MatrixConnection) -> Result<(BiSeries, BiSeries, GaugeMatrix)> {
    let curve = a
        .curve
        .as_ref()
        .ok_or_else(|| Error::InvalidCurve("no spectral curve attached".into()))?;
    let class = curve.classify()?;
    if class != CurveClass::Unramified {
        return Err(Error::WrongCurveClass {
            expected: CurveClass::Unramified,
            found: class,
        });
    }
    spectral_invariants(a)?;
    let res = diagonalize(a)?;
    let [[d1, _], [_, d2]] = res.d.a.e;
    Ok(match res.sheets {
        Sheets::PlusMinus => (d1, d2, res.r),
        Sheets::MinusPlus => (d2, d1, res.r),
    })
}
