//! λ-connection matrices and the λ-gauge action.
//!
//! A connection is `∇ = (λ d/dx + A) dx` on column vectors; a frame change
//! `R` acts by `A ↦ R⁻¹AR + λR⁻¹R'`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::rational::{rat, Rational};
use crate::series::{BiSeries, Chart};
use crate::spectral::SpectralCurve;

pub type GaugeMatrix = Mat2<BiSeries>;
pub type ScalarGauge = BiSeries;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixConnection {
    pub chart: Chart,
    #[serde(rename = "A")]
    pub a: Mat2<BiSeries>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curve: Option<SpectralCurve>,
}

impl MatrixConnection {
    pub fn new(a: Mat2<BiSeries>, curve: Option<SpectralCurve>) -> Result<Self> {
        let chart = a.e[0][0].chart();
        if a.entries().any(|s| s.chart() != chart) {
            return Err(Error::ChartMismatch);
        }
        Ok(MatrixConnection { chart, a, curve })
    }

    pub fn lambda_order(&self) -> usize {
        self.a.lambda_order()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integral()
    }
}

impl<'de> Deserialize<'de> for MatrixConnection {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            chart: Chart,
            #[serde(rename = "A")]
            a: Mat2<BiSeries>,
            #[serde(default)]
            curve: Option<SpectralCurve>,
        }
        let raw = Raw::deserialize(de)?;
        let m = MatrixConnection::new(raw.a, raw.curve).map_err(serde::de::Error::custom)?;
        if m.chart != raw.chart {
            return Err(serde::de::Error::custom(
                "entry charts differ from the declared chart",
            ));
        }
        Ok(m)
    }
}

fn check_charts<'a>(chart: Chart, it: impl IntoIterator<Item = &'a BiSeries>) -> Result<()> {
    if it.into_iter().all(|s| s.chart() == chart) {
        Ok(())
    } else {
        Err(Error::ChartMismatch)
    }
}

/// `λ·x` keeping the λ-order.
pub(crate) fn lambda_times(x: &BiSeries) -> BiSeries {
    x.mul_lambda().truncate_lambda(x.lambda_order())
}

/// `R⁻¹` through the adjugate.
pub fn invert_matrix(r: &Mat2<BiSeries>) -> Result<Mat2<BiSeries>> {
    let det = r.det();
    if det.order(0).is_zero() {
        return Err(Error::NotInvertible);
    }
    let dinv = det.invert().map_err(|e| match e {
        Error::NotAUnit => Error::NotInvertible,
        other => other,
    })?;
    Ok(r.adj().scale(&dinv))
}

/// `R⁻¹AR + λR⁻¹R'` on raw matrices.
pub fn gauge_raw(a: &Mat2<BiSeries>, r: &Mat2<BiSeries>) -> Result<Mat2<BiSeries>> {
    let chart = a.e[0][0].chart();
    check_charts(chart, a.entries().chain(r.entries()))?;
    let rinv = invert_matrix(r)?;
    let conj = rinv.mul(a).mul(r);
    let drift = rinv.mul(&r.deriv()).map(lambda_times);
    Ok(conj.add(&drift))
}

pub fn gauge_matrix(a: &MatrixConnection, r: &GaugeMatrix) -> Result<MatrixConnection> {
    Ok(MatrixConnection {
        chart: a.chart,
        a: gauge_raw(&a.a, r)?,
        curve: a.curve.clone(),
    })
}

/// `a + λ r⁻¹ r'`.
pub fn gauge_scalar(a: &BiSeries, r: &ScalarGauge) -> Result<BiSeries> {
    if a.chart() != r.chart() {
        return Err(Error::ChartMismatch);
    }
    let dlog = r.invert()?.times(&r.differentiate());
    Ok(a.plus(&dlog.mul_lambda()).truncate_lambda(a.lambda_order()))
}

/// Writes `B = f·I + g·A₀` for `B` commuting with the regular element `A₀`.
pub fn commutant_decompose(
    b: &Mat2<BiSeries>,
    a0: &Mat2<BiSeries>,
) -> Result<(BiSeries, BiSeries)> {
    let chart = a0.e[0][0].chart();
    check_charts(chart, a0.entries().chain(b.entries()))?;
    let half = rat(1, 2);
    let shift = a0.trace().scale(&half);
    let alpha = a0.e[0][0].minus(&shift);
    let beta = &a0.e[0][1];
    let gamma = &a0.e[1][0];
    // Pivot on the entry of A₀ − (tr/2)I of least valuation, in the order (1,2), (2,1), (1,1).
    let candidates = [(beta, 0usize), (gamma, 1), (&alpha, 2)];
    let pivot = candidates
        .iter()
        .filter(|(s, _)| !s.order(0).is_zero())
        .min_by_key(|(s, k)| (s.order(0).val_bound(), *k))
        .ok_or(Error::NotRegular)?;
    if !b.commutator(a0).is_zero() {
        return Err(Error::NotInCommutant);
    }
    let inv = pivot.0.invert()?;
    let g = match pivot.1 {
        0 => b.e[0][1].times(&inv),
        1 => b.e[1][0].times(&inv),
        _ => b.e[0][0].minus(&b.e[1][1]).times(&inv).scale(&half),
    };
    let f = b.trace().minus(&g.times(&a0.trace())).scale(&half);
    let rebuilt = Mat2::identity(chart, f.lambda_order())
        .scale(&f)
        .add(&a0.scale(&g));
    if !rebuilt.agrees_with(b) {
        return Err(Error::NotInCommutant);
    }
    Ok((f, g))
}

/// Trace and determinant of the full matrix; checked against an attached curve at λ⁰.
pub fn spectral_invariants(a: &MatrixConnection) -> Result<(BiSeries, BiSeries)> {
    let tr = a.a.trace();
    let det = a.a.det();
    if let Some(curve) = &a.curve {
        if a.chart != Chart::Base
            || !tr.lambda_zero().agrees_with(curve.t())
            || !det.lambda_zero().agrees_with(curve.d())
        {
            return Err(Error::CurveMismatch);
        }
    }
    Ok((tr, det))
}

/// Entrywise residue sequences.
pub fn matrix_residue(a: &MatrixConnection) -> Result<Mat2<Vec<Rational>>> {
    let [[p, q], [r, s]] = &a.a.e;
    Ok(Mat2 {
        e: [
            [p.residue_at_zero()?, q.residue_at_zero()?],
            [r.residue_at_zero()?, s.residue_at_zero()?],
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::series::Truncation;

    fn s(l: usize, p: i64, cs: &[((usize, i64), i64)]) -> BiSeries {
        BiSeries::from_ints(Truncation::new(6, l, p).unwrap(), Chart::Base, cs).unwrap()
    }

    fn mat(l: usize, p: i64, e: [&[((usize, i64), i64)]; 4]) -> Mat2<BiSeries> {
        Mat2::new(s(l, p, e[0]), s(l, p, e[1]), s(l, p, e[2]), s(l, p, e[3]))
    }

    fn conn(m: Mat2<BiSeries>) -> MatrixConnection {
        MatrixConnection::new(m, None).unwrap()
    }

    #[test]
    fn identity_gauge() {
        let a = conn(mat(
            3,
            0,
            [&[((0, 0), 1)], &[((1, 2), 3)], &[((0, 1), -1)], &[]],
        ));
        let g = gauge_matrix(&a, &Mat2::identity(Chart::Base, 3)).unwrap();
        assert!(g.a.agrees_with(&a.a));
    }

    #[test]
    fn diagonal_gauge() {
        let a = conn(mat(2, 1, [&[((0, 0), 2)], &[], &[], &[((0, 1), 5)]]));
        let r = mat(2, 0, [&[((0, 0), 1)], &[], &[], &[((0, 1), 1)]]);
        let g = gauge_matrix(&a, &r).unwrap();
        assert!(g.a.e[0][0].agrees_with(&a.a.e[0][0]));
        assert!(g.a.e[0][1].is_zero() && g.a.e[1][0].is_zero());
        let want = s(2, 1, &[((0, 1), 5), ((1, -1), 1)]);
        assert!(g.a.e[1][1].agrees_with(&want));
        assert_eq!(g.a.e[1][1].coeff(1, -1), Some(int(1)));
    }

    #[test]
    fn singular_gauge_is_rejected() {
        let a = conn(mat(1, 0, [&[], &[], &[], &[]]));
        let r = mat(
            1,
            0,
            [
                &[((0, 0), 1)],
                &[((0, 0), 1)],
                &[((0, 0), 1)],
                &[((0, 0), 1)],
            ],
        );
        assert_eq!(gauge_matrix(&a, &r), Err(Error::NotInvertible));
    }

    #[test]
    fn scalar_gauge_examples() {
        let a = s(3, 1, &[((0, 0), 1), ((1, -1), 2)]).with_chart(Chart::Cover);
        let one = BiSeries::one(Chart::Cover, 3);
        assert_eq!(gauge_scalar(&a, &one).unwrap(), a);
        let zh = s(3, 0, &[((0, 1), 1)]).with_chart(Chart::Cover);
        let b = gauge_scalar(&a, &zh).unwrap();
        assert_eq!(b.coeff(1, -1), Some(int(3)));
        let zero = BiSeries::zero(Chart::Cover, Truncation::new(6, 3, 0).unwrap());
        let e = s(3, 0, &[((0, 1), 1)])
            .with_chart(Chart::Cover)
            .exp_series()
            .unwrap();
        let c = gauge_scalar(&zero, &e).unwrap();
        assert!(c.agrees_with(&BiSeries::lambda_power(Chart::Cover, 1, 3)));
        assert_eq!(c.z_order(), 5);
    }

    #[test]
    fn commutant_examples() {
        let a0 = mat(1, 1, [&[], &[((0, 1), 1)], &[((0, 0), 1)], &[]]);
        let (f, g) = commutant_decompose(&a0, &a0).unwrap();
        assert!(f.is_zero());
        assert!(g.agrees_with(&BiSeries::one(Chart::Base, 1)));
        let id = Mat2::identity(Chart::Base, 1);
        let (f, g) = commutant_decompose(&id, &a0).unwrap();
        assert!(f.agrees_with(&BiSeries::one(Chart::Base, 1)));
        assert!(g.is_zero());
        let zinv = s(1, 1, &[((0, -1), 1)]);
        let b = a0.scale(&zinv);
        let (f, g) = commutant_decompose(&b, &a0).unwrap();
        assert!(f.is_zero());
        assert!(g.agrees_with(&zinv));

        let scalar = Mat2::identity(Chart::Base, 1);
        assert_eq!(commutant_decompose(&a0, &scalar), Err(Error::NotRegular));
        let other = mat(1, 0, [&[((0, 0), 1)], &[], &[], &[]]);
        assert_eq!(commutant_decompose(&other, &a0), Err(Error::NotInCommutant));
    }

    #[test]
    fn invariants_and_residues() {
        let curve = SpectralCurve::from_ints(6, &[0], &[0, -1]).unwrap();
        let a = MatrixConnection::new(
            mat(1, 0, [&[], &[((0, 1), 1)], &[((0, 0), 1)], &[]]),
            Some(curve),
        )
        .unwrap();
        let (tr, det) = spectral_invariants(&a).unwrap();
        assert!(tr.is_zero());
        assert_eq!(det.coeffs().collect::<Vec<_>>(), vec![((0, 1), &int(-1))]);
        let bad_curve = SpectralCurve::from_ints(6, &[0], &[0, 0, -1]).unwrap();
        let bad = MatrixConnection {
            curve: Some(bad_curve),
            ..a.clone()
        };
        assert_eq!(spectral_invariants(&bad), Err(Error::CurveMismatch));

        let id = conn(Mat2::identity(Chart::Base, 1).map(|s| s.truncate_z(6)));
        let (tr, det) = spectral_invariants(&id).unwrap();
        assert_eq!(tr.coeff(0, 0), Some(int(2)));
        assert_eq!(det.coeff(0, 0), Some(int(1)));

        let r = conn(mat(1, 1, [&[((0, -1), 1)], &[], &[], &[]]));
        let res = matrix_residue(&r).unwrap();
        assert_eq!(res.e[0][0], vec![int(1)]);
        assert_eq!(res.e[1][1], vec![int(0)]);
        assert!(matrix_residue(&a)
            .unwrap()
            .entries()
            .flatten()
            .all(|c| c == &int(0)));
    }
}
