use super::{PushforwardResult, ScalarConnection};
use crate::error::{Error, NormalizeFailure, Result};
use crate::gauge::{lambda_times, MatrixConnection};
use crate::matrix::Mat2;
use crate::series::BiSeries;

/// Matrix of `λ d + a dẑ` on the base module with basis `{1, ẑ}`.
pub fn pushforward_scalar(a: &ScalarConnection) -> Result<PushforwardResult> {
    let chart = a.curve.cover_chart()?;
    let l = a.lambda_order();
    if !a.a.order(0).agrees_with(chart.m_form.order(0)) {
        return Err(Error::NonNormalizable(NormalizeFailure::WrongHiggsPart));
    }
    let jinv = chart.jacobian.invert()?.lift(l);
    // ∇(1) = a/J dz,  ∇(ẑ) = (λ + aẑ)/J dz
    let e1 = a.a.times(&jinv);
    let e2 = lambda_times(&jinv).plus(&e1.shift_x(1));
    let descend = |e: &BiSeries| -> Result<(BiSeries, BiSeries)> {
        let (even, odd) = e.split_even_odd()?;
        Ok((even.substitute(&chart.disc)?, odd.substitute(&chart.disc)?))
    };
    let (e1_even, e1_odd) = descend(&e1)?;
    let (e2_even, e2_odd) = descend(&e2)?;
    let au = Mat2::new(e1_even, e2_even, e1_odd, e2_odd);
    let higgs_l0 = au.truncate_lambda(1);
    let tr = higgs_l0.trace();
    let det = higgs_l0.det();
    if !higgs_l0.is_integral() || !tr.agrees_with(a.curve.t()) || !det.agrees_with(a.curve.d()) {
        return Err(Error::CurveMismatch);
    }
    Ok(PushforwardResult {
        au: MatrixConnection::new(au, Some(a.curve.clone()))?,
        higgs_l0,
    })
}
