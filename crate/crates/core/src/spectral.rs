//! Spectral curves `ξ² − tξ + d = 0` and the ramified double cover chart.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, rat};
use crate::series::{BiSeries, Chart, Laurent, Truncation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveClass {
    SmoothRamified,
    Unramified,
    Degenerate,
}

impl CurveClass {
    pub fn name(self) -> &'static str {
        match self {
            CurveClass::SmoothRamified => "SmoothRamified",
            CurveClass::Unramified => "Unramified",
            CurveClass::Degenerate => "Degenerate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralCurve {
    t: BiSeries,
    d: BiSeries,
}

impl SpectralCurve {
    /// `t` and `d` must be λ-independent Taylor series in the base chart.
    pub fn new(t: BiSeries, d: BiSeries) -> Result<Self> {
        for (name, s) in [("t", &t), ("d", &d)] {
            if s.chart() != Chart::Base {
                return Err(Error::InvalidCurve(format!("{name} is not a series in z")));
            }
            if !s.is_lambda_free() {
                return Err(Error::InvalidCurve(format!("{name} depends on λ")));
            }
            if !s.is_integral() {
                return Err(Error::InvalidCurve(format!("{name} has a pole")));
            }
        }
        Ok(SpectralCurve {
            t: t.lambda_zero().with_pole_cap(0),
            d: d.lambda_zero().with_pole_cap(0),
        })
    }

    /// Curve from integer coefficient lists `t = Σ tᵢ zⁱ`, `d = Σ dᵢ zⁱ`.
    pub fn from_ints(z_order: i64, t: &[i64], d: &[i64]) -> Result<Self> {
        let tr = Truncation::new(z_order, 1, 0)?;
        let mk = |cs: &[i64]| {
            BiSeries::from_coeffs(
                tr,
                Chart::Base,
                cs.iter().enumerate().map(|(i, &c)| ((0, i as i64), int(c))),
            )
        };
        Self::new(mk(t)?, mk(d)?)
    }

    pub fn t(&self) -> &BiSeries {
        &self.t
    }

    pub fn d(&self) -> &BiSeries {
        &self.d
    }

    pub fn truncation(&self) -> Truncation {
        Truncation {
            z_order: self.t.z_order().min(self.d.z_order()),
            lambda_order: 1,
            pole_cap: 0,
        }
    }

    /// `t² − 4d`.
    pub fn discriminant(&self) -> BiSeries {
        self.t.times(&self.t).minus(&self.d.scale(&int(4)))
    }

    pub fn classify(&self) -> Result<CurveClass> {
        let disc = self.discriminant();
        let o = disc.order(0);
        match o.leading() {
            Some((0, _)) => Ok(CurveClass::Unramified),
            Some((1, _)) => Ok(CurveClass::SmoothRamified),
            Some(_) => Ok(CurveClass::Degenerate),
            None if o.prec() >= 2 => Ok(CurveClass::Degenerate),
            None => Err(Error::InsufficientPrecision(
                "discriminant vanishes through the whole window".into(),
            )),
        }
    }

    pub fn cover_chart(&self) -> Result<CoverChart> {
        CoverChart::build(self)
    }
}

impl<'de> Deserialize<'de> for SpectralCurve {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            t: BiSeries,
            d: BiSeries,
        }
        let raw = Raw::deserialize(de)?;
        SpectralCurve::new(raw.t, raw.d).map_err(serde::de::Error::custom)
    }
}

/// The chart `ẑ² = t² − 4d` on the double cover, with everything pulled back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverChart {
    pub z_of_zhat: BiSeries,
    pub jacobian: BiSeries,
    /// `u` with `t² − 4d = z·u`.
    pub disc_unit: BiSeries,
    pub disc: BiSeries,
    /// `t(z(ẑ))`.
    pub t_pullback: BiSeries,
    /// `d(z(ẑ))`.
    pub d_pullback: BiSeries,
    /// Coefficient of the canonical form against `dẑ`.
    pub m_form: BiSeries,
}

impl CoverChart {
    pub fn build(curve: &SpectralCurve) -> Result<Self> {
        let class = curve.classify()?;
        if class != CurveClass::SmoothRamified {
            return Err(Error::WrongCurveClass {
                expected: CurveClass::SmoothRamified,
                found: class,
            });
        }
        let disc = curve.discriminant();
        let disc_unit = disc.shift_x(-1);
        let zhat_sq = BiSeries::from_orders(Chart::Cover, vec![Laurent::exact_monomial(int(1), 2)]);
        let z_of_zhat = disc.revert()?.substitute(&zhat_sq)?;
        let jacobian = z_of_zhat.differentiate();
        let t_pullback = curve.t.substitute(&z_of_zhat)?;
        let d_pullback = curve.d.substitute(&z_of_zhat)?;
        let xi_plus = Self::branch(&t_pullback, 1);
        let m_form = xi_plus.times(&jacobian);
        Ok(CoverChart {
            z_of_zhat,
            jacobian,
            disc_unit,
            disc,
            t_pullback,
            d_pullback,
            m_form,
        })
    }

    fn branch(t_pullback: &BiSeries, sign: i64) -> BiSeries {
        let zhat = BiSeries::from_orders(Chart::Cover, vec![Laurent::exact_monomial(int(sign), 1)]);
        t_pullback.plus(&zhat).scale(&rat(1, 2))
    }

    /// `ξ₊ = (t + ẑ)/2`, against `dz`.
    pub fn xi_plus(&self) -> BiSeries {
        Self::branch(&self.t_pullback, 1)
    }

    /// `ξ₋ = (t − ẑ)/2`, against `dz`.
    pub fn xi_minus(&self) -> BiSeries {
        Self::branch(&self.t_pullback, -1)
    }
}

/// `f(ẑ) ↦ f(−ẑ)`.
pub fn sigma_conjugate(f: &BiSeries) -> Result<BiSeries> {
    if f.chart() != Chart::Cover {
        return Err(Error::ChartMismatch);
    }
    Ok(f.reflect())
}

/// Coefficient of `σ*(a dẑ)` against `dẑ`, i.e. `−a(−ẑ)`.
pub fn sigma_conjugate_connection(a: &BiSeries) -> Result<BiSeries> {
    Ok(sigma_conjugate(a)?.neg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::Rational;

    fn hat(cs: &[(usize, i64, Rational)], n: i64, l: usize, p: i64) -> BiSeries {
        BiSeries::from_coeffs(
            Truncation::new(n, l, p).unwrap(),
            Chart::Cover,
            cs.iter().map(|(i, j, c)| ((*i, *j), c.clone())),
        )
        .unwrap()
    }

    #[test]
    fn classification() {
        let c = |t: &[i64], d: &[i64]| {
            SpectralCurve::from_ints(6, t, d)
                .unwrap()
                .classify()
                .unwrap()
        };
        assert_eq!(c(&[0], &[0, -1]), CurveClass::SmoothRamified);
        assert_eq!(c(&[0], &[-1]), CurveClass::Unramified);
        assert_eq!(c(&[0, 1], &[0]), CurveClass::Degenerate);
        assert_eq!(c(&[0], &[0]), CurveClass::Degenerate);
        let tiny = SpectralCurve::from_ints(1, &[0], &[0]).unwrap();
        assert!(matches!(
            tiny.classify(),
            Err(Error::InsufficientPrecision(_))
        ));
    }

    #[test]
    fn square_root_cover() {
        let curve = SpectralCurve::from_ints(6, &[0], &[0, -1]).unwrap();
        let ch = curve.cover_chart().unwrap();
        assert_eq!(
            ch.z_of_zhat.coeffs().collect::<Vec<_>>(),
            vec![((0, 2), &rat(1, 4))]
        );
        assert_eq!(
            ch.jacobian.coeffs().collect::<Vec<_>>(),
            vec![((0, 1), &rat(1, 2))]
        );
        assert_eq!(
            ch.m_form.coeffs().collect::<Vec<_>>(),
            vec![((0, 2), &rat(1, 4))]
        );
        assert_eq!(ch.z_of_zhat.z_order(), 12);
    }

    #[test]
    fn binomial_cover() {
        let curve = SpectralCurve::from_ints(6, &[0], &[0, -1, -1]).unwrap();
        let ch = curve.cover_chart().unwrap();
        // z = (√(1+ẑ²) − 1)/2
        assert_eq!(ch.z_of_zhat.coeff(0, 2), Some(rat(1, 4)));
        assert_eq!(ch.z_of_zhat.coeff(0, 4), Some(rat(-1, 16)));
        assert_eq!(ch.z_of_zhat.coeff(0, 6), Some(rat(1, 32)));
        assert_eq!(ch.z_of_zhat.coeff(0, 8), Some(rat(-5, 256)));
        assert_eq!(ch.z_of_zhat.coeff(0, 5), Some(rat(0, 1)));
        let back = curve.discriminant().substitute(&ch.z_of_zhat).unwrap();
        assert!(back.agrees_with(&hat(&[(0, 2, rat(1, 1))], 12, 1, 0)));
    }

    #[test]
    fn unramified_cover_is_rejected() {
        let curve = SpectralCurve::from_ints(6, &[0], &[-1]).unwrap();
        assert_eq!(
            curve.cover_chart(),
            Err(Error::WrongCurveClass {
                expected: CurveClass::SmoothRamified,
                found: CurveClass::Unramified
            })
        );
    }

    #[test]
    fn conjugation() {
        let z = hat(&[(0, 1, rat(1, 1))], 6, 1, 0);
        assert_eq!(sigma_conjugate(&z).unwrap(), z.neg());
        let e = hat(&[(0, 2, rat(1, 1)), (0, 0, rat(1, 1))], 6, 1, 0);
        assert_eq!(sigma_conjugate(&e).unwrap(), e);
        let f = hat(&[(0, -1, rat(1, 1)), (1, 3, rat(1, 1))], 6, 2, 1);
        assert_eq!(sigma_conjugate(&f).unwrap(), f.neg());

        let a = hat(&[(0, 2, rat(1, 4)), (1, -1, rat(-1, 2))], 6, 2, 1);
        let b = sigma_conjugate_connection(&a).unwrap();
        assert_eq!(b, hat(&[(0, 2, rat(-1, 4)), (1, -1, rat(-1, 2))], 6, 2, 1));
        assert_eq!(b.residue_at_zero().unwrap(), vec![rat(0, 1), rat(-1, 2)]);
        assert_eq!(sigma_conjugate_connection(&b).unwrap(), a);
        assert!(sigma_conjugate(&BiSeries::one(Chart::Base, 1)).is_err());
    }
}
