//! Matrix λ-connections on the disc versus scalar λ-connections on the cover.

mod forward;
mod lattice;
mod normalize;
mod pushforward;
mod roundtrip;
#[cfg(test)]
mod tests;

pub use forward::forward_abelianize;
pub use lattice::{
    find_integral_lattice, find_integral_lattice_with_cap, first_lattice_step, lattice_steps,
    perturbed_lattice_survives, LatticeStep,
};
pub use normalize::{normalize_scalar, scalar_gauge_equivalent};
pub use pushforward::pushforward_scalar;
pub use roundtrip::{roundtrip_check, RoundtripReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, NormalizeFailure, Result};
use crate::gauge::{GaugeMatrix, MatrixConnection};
use crate::matrix::Mat2;
use crate::rational::rat;
use crate::series::{BiSeries, Chart};
use crate::spectral::SpectralCurve;

/// `λ d/dẑ + a` on the cover, with `a` the coefficient against `dẑ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScalarConnection {
    pub curve: SpectralCurve,
    pub a: BiSeries,
    pub normalized: bool,
}

impl ScalarConnection {
    /// Checks the λ⁰ part against the canonical form and records normalization.
    pub fn new(a: BiSeries, curve: SpectralCurve) -> Result<Self> {
        if a.chart() != Chart::Cover {
            return Err(Error::ChartMismatch);
        }
        let chart = curve.cover_chart()?;
        if !a.order(0).agrees_with(chart.m_form.order(0)) {
            return Err(Error::NonNormalizable(NormalizeFailure::WrongHiggsPart));
        }
        let normalized = is_normal_form(&a)?;
        Ok(ScalarConnection {
            curve,
            a,
            normalized,
        })
    }

    pub fn lambda_order(&self) -> usize {
        self.a.lambda_order()
    }
}

/// First clause of the normalizability condition that `a` violates, ignoring the λ⁰ part.
pub(crate) fn normal_form_violation(a: &BiSeries) -> Result<Option<NormalizeFailure>> {
    let residues = a.residue_at_zero()?;
    if a.lambda_order() > 1 {
        let a1 = a.order(1);
        if a1.pole_order() > 1 {
            return Ok(Some(NormalizeFailure::LambdaOnePoleTooDeep {
                pole_order: a1.pole_order(),
            }));
        }
        if residues[1] != rat(-1, 2) {
            return Ok(Some(NormalizeFailure::LambdaOneResidue {
                residue: crate::rational::format(&residues[1]),
            }));
        }
    }
    for (i, r) in residues.iter().enumerate().skip(2) {
        if r != &rat(0, 1) {
            return Ok(Some(NormalizeFailure::HigherResidue {
                lambda_order: i,
                residue: crate::rational::format(r),
            }));
        }
    }
    Ok(None)
}

/// Normalizable, and every λ-order has at most a simple pole.
pub(crate) fn is_normal_form(a: &BiSeries) -> Result<bool> {
    Ok(normal_form_violation(a)?.is_none() && a.orders()[1..].iter().all(|o| o.pole_order() <= 1))
}

impl<'de> Deserialize<'de> for ScalarConnection {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            curve: SpectralCurve,
            a: BiSeries,
            #[serde(default)]
            normalized: Option<bool>,
        }
        let raw = Raw::deserialize(de)?;
        let s = ScalarConnection::new(raw.a, raw.curve).map_err(serde::de::Error::custom)?;
        if raw.normalized == Some(true) && !s.normalized {
            return Err(serde::de::Error::custom(
                "connection is marked normalized but is not",
            ));
        }
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PushforwardResult {
    #[serde(rename = "Au")]
    pub au: MatrixConnection,
    #[serde(rename = "higgsL0")]
    pub higgs_l0: Mat2<BiSeries>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeResult {
    #[serde(rename = "Phi")]
    pub phi: GaugeMatrix,
    #[serde(rename = "Aintegral")]
    pub a_integral: MatrixConnection,
}
