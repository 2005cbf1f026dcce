use num_integer::Integer;

use super::{normalize_scalar, ScalarConnection};
use crate::error::{Error, Result};
use crate::gauge::{gauge_raw, spectral_invariants, GaugeMatrix, MatrixConnection};
use crate::matrix::Mat2;
use crate::rational::{int, rat, Rational};
use crate::series::{BiSeries, Chart, Laurent};
use crate::spectral::{CurveClass, SpectralCurve};
use crate::wasow::{diagonalize_split, eigen_column};

/// Abelianizes an integral matrix connection: returns the normalized scalar
/// connection on the cover and the gauge taking the pulled-back matrix to
/// `diag(a, −a(−ẑ))`.
pub fn forward_abelianize(
    a: &MatrixConnection,
    curve: &SpectralCurve,
) -> Result<(ScalarConnection, GaugeMatrix)> {
    if a.chart != Chart::Base {
        return Err(Error::ChartMismatch);
    }
    if !a.is_integral() {
        return Err(Error::NotIntegral);
    }
    let class = curve.classify()?;
    if class != CurveClass::SmoothRamified {
        return Err(Error::WrongCurveClass {
            expected: CurveClass::SmoothRamified,
            found: class,
        });
    }
    spectral_invariants(&MatrixConnection {
        curve: Some(curve.clone()),
        ..a.clone()
    })?;
    let chart = curve.cover_chart()?;
    let l = a.lambda_order();
    let jac = chart.jacobian.lift(l);
    let pulled =
        a.a.try_map(|x| Ok::<_, Error>(x.substitute(&chart.z_of_zhat)?.times(&jac)))?;

    // σ-equivariant eigenbasis: the second column is the first at −ẑ.
    let a0 = pulled.order(0);
    let [c0, c1] = eigen_column(&a0, chart.m_form.order(0))?;
    let r0 = Mat2::new(c0.clone(), c0.reflect(), c1.clone(), c1.reflect());
    let det_val = match r0.det().leading() {
        Some((v, _)) => v,
        None => return Err(Error::NotInvertible),
    };
    let r0 = Mat2::<BiSeries>::from_orders(Chart::Cover, &[r0]).lift(l);
    let b = gauge_raw(&pulled, &r0)?;
    let (t, d) = diagonalize_split(&b)?;
    let r = r0.mul(&t);
    let a_raw = d.e[0][0].clone();
    if !d.e[1][1].agrees_with(&a_raw.reflect().neg()) {
        return Err(Error::ConditionViolated(
            "diagonal pair is not σ-conjugate".into(),
        ));
    }

    // res(a₁) = val(det R₀)/2; the twist by ẑ^(−k) moves it to −1/2.
    if det_val.is_even() {
        return Err(Error::ConditionViolated(format!(
            "eigenbasis determinant has even valuation {det_val}"
        )));
    }
    let k = (det_val + 1) / 2;
    if l > 1 {
        let a1 = a_raw.order(1);
        if a1.pole_order() > 1 {
            return Err(Error::ConditionViolated(format!(
                "λ¹ coefficient has a pole of order {}",
                a1.pole_order()
            )));
        }
        let rho = a1.residue().ok_or_else(|| {
            Error::InsufficientPrecision("λ¹ residue lies outside the window".into())
        })?;
        if rho + rat(1, 2) != int(k) {
            return Err(Error::ConditionViolated(
                "λ¹ residue plus 1/2 is not the lattice twist".into(),
            ));
        }
    }
    let shift =
        BiSeries::from_orders(Chart::Cover, vec![Laurent::exact_monomial(int(-k), -1)]).lift(l);
    let twisted = a_raw.plus(&crate::gauge::lambda_times(&shift));
    let (normal, rs) = normalize_scalar(&twisted, curve)?;

    let sign: Rational = if k.is_even() { int(1) } else { int(-1) };
    let zk = Laurent::exact_monomial(int(1), -k);
    let twist1 = BiSeries::from_orders(Chart::Cover, vec![zk.clone()])
        .lift(l)
        .times(&rs);
    let twist2 = BiSeries::from_orders(Chart::Cover, vec![zk.scale(&sign)])
        .lift(l)
        .times(&rs.reflect());
    let zero = BiSeries::from_orders(Chart::Cover, vec![Laurent::exact_zero(); l]);
    let witness = r.mul(&Mat2::diag(twist1, twist2, zero));
    Ok((normal, witness))
}
