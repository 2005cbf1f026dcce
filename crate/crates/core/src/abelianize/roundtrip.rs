use serde::Serialize;

use super::{
    find_integral_lattice, forward_abelianize, pushforward_scalar, scalar_gauge_equivalent,
    ScalarConnection,
};
use crate::error::Result;
use crate::gauge::{gauge_scalar, ScalarGauge};
use crate::rational::{format, Rational};
use crate::spectral::sigma_conjugate_connection;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RoundtripReport {
    pub equivalent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<ScalarGauge>,
    /// `gauge_scalar(input, witness)` agrees with the returned connection.
    pub regauged_matches: bool,
    pub higgs_matches_curve: bool,
    pub lattice_integral: bool,
    pub residues: Vec<String>,
    pub pair_trace_residues: Vec<String>,
    pub returned: ScalarConnection,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.equivalent
            && self.regauged_matches
            && self.higgs_matches_curve
            && self.lattice_integral
    }
}

/// Pushes forward, finds the lattice, abelianizes again, and compares.
pub fn roundtrip_check(a: &ScalarConnection) -> Result<RoundtripReport> {
    let pf = pushforward_scalar(a)?;
    let higgs_matches_curve =
        pf.higgs_l0.trace().agrees_with(a.curve.t()) && pf.higgs_l0.det().agrees_with(a.curve.d());
    let lat = find_integral_lattice(&pf)?;
    let lattice_integral = lat.a_integral.is_integral();
    let (back, _) = forward_abelianize(&lat.a_integral, &a.curve)?;
    let witness = scalar_gauge_equivalent(a, &back);
    let regauged_matches = match &witness {
        Some(r) => gauge_scalar(&a.a, r).map_or(false, |g| g.agrees_with(&back.a)),
        None => false,
    };
    let fmt = |v: Vec<Rational>| v.iter().map(format).collect::<Vec<_>>();
    let residues = back.a.residue_at_zero()?;
    let pair = back
        .a
        .plus(&sigma_conjugate_connection(&back.a)?)
        .residue_at_zero()?;
    Ok(RoundtripReport {
        equivalent: witness.is_some(),
        witness,
        regauged_matches,
        higgs_matches_curve,
        lattice_integral,
        residues: fmt(residues),
        pair_trace_residues: fmt(pair),
        returned: back,
    })
}
