use super::{normal_form_violation, ScalarConnection};
use crate::error::{Error, NormalizeFailure, Result};
use crate::gauge::{gauge_scalar, ScalarGauge};
use crate::series::{BiSeries, Laurent};
use crate::spectral::SpectralCurve;

/// Gauges away every pole of order ≥ 2 above λ¹, leaving residues
/// `(0, −1/2, 0, …)` and simple poles only.
pub fn normalize_scalar(
    a_raw: &BiSeries,
    curve: &SpectralCurve,
) -> Result<(ScalarConnection, ScalarGauge)> {
    let chart = curve.cover_chart()?;
    if a_raw.chart() != crate::series::Chart::Cover {
        return Err(Error::ChartMismatch);
    }
    if !a_raw.order(0).agrees_with(chart.m_form.order(0)) {
        return Err(Error::NonNormalizable(NormalizeFailure::WrongHiggsPart));
    }
    if let Some(fail) = normal_form_violation(a_raw)? {
        return Err(Error::NonNormalizable(fail));
    }
    let l = a_raw.lambda_order();
    // s = Σ λⁱρᵢ with ρᵢ' = −(part of a_{i+1} with poles of order ≥ 2).
    let mut s = vec![Laurent::exact_zero(); l];
    for i in 1..l.saturating_sub(1) {
        let deep = Laurent::from_terms(
            a_raw
                .order(i + 1)
                .terms()
                .filter(|(e, _)| *e <= -2)
                .map(|(e, c)| (e, c.clone())),
            crate::series::EXACT,
        );
        s[i] = deep
            .integ()
            .expect("no residue in the deep polar part")
            .neg();
    }
    let s = BiSeries::from_orders(a_raw.chart(), s);
    let r = s.exp_series()?;
    let a = a_raw
        .plus(&s.differentiate().mul_lambda())
        .truncate_lambda(l);
    debug_assert!(gauge_scalar(a_raw, &r).map_or(true, |g| g.agrees_with(&a)));
    Ok((ScalarConnection::new(a, curve.clone())?, r))
}

/// A witness `r` with `gauge_scalar(a, r) = b`, when one exists.
pub fn scalar_gauge_equivalent(a: &ScalarConnection, b: &ScalarConnection) -> Option<ScalarGauge> {
    if a.curve != b.curve || a.a.chart() != b.a.chart() {
        return None;
    }
    let l = a.lambda_order().min(b.lambda_order());
    let diff = b.a.truncate_lambda(l).minus(&a.a.truncate_lambda(l));
    if !diff.order(0).is_zero() {
        return None;
    }
    if l == 1 {
        return Some(BiSeries::one(a.a.chart(), 1));
    }
    let s = diff.div_lambda().ok()?;
    if !s.is_integral() || s.orders().iter().any(|o| o.prec() < 0) {
        return None;
    }
    // The top λ-order of r never reaches λ r'/r below λ^Λ; pad it with zero.
    let mut orders = s.antidifferentiate().ok()?.into_orders();
    orders.push(Laurent::exact_zero());
    BiSeries::from_orders(a.a.chart(), orders).exp_series().ok()
}
