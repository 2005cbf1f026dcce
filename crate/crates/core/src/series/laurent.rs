//! Single-variable truncated Laurent series with an honest precision.
//!
//! A value is known exactly for every exponent below `prec`; terms that are
//! not stored are zero. Exponents at or above `prec` are unknown. Exact
//! values (finite polynomials that are genuinely known to all orders) carry
//! the sentinel precision [`EXACT`].

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

/// Precision sentinel for exactly known values.
pub const EXACT: i64 = 1 << 40;

pub(crate) fn padd(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        (a + b).min(EXACT)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent {
    terms: BTreeMap<i64, Rational>,
    prec: i64,
}

impl Laurent {
    pub fn zero(prec: i64) -> Self {
        Laurent {
            terms: BTreeMap::new(),
            prec: prec.min(EXACT),
        }
    }

    pub fn exact_zero() -> Self {
        Self::zero(EXACT)
    }

    pub fn monomial(c: Rational, exp: i64, prec: i64) -> Self {
        Self::from_terms([(exp, c)], prec)
    }

    pub fn exact_monomial(c: Rational, exp: i64) -> Self {
        Self::monomial(c, exp, EXACT)
    }

    /// Builds a series, summing repeated exponents and dropping zeros and
    /// anything at or above `prec`.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Rational)>, prec: i64) -> Self {
        let prec = prec.min(EXACT);
        let mut map: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            if e >= prec || c.is_zero() {
                continue;
            }
            *map.entry(e).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Laurent { terms: map, prec }
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `None` when the exponent is beyond the known window.
    pub fn coeff(&self, exp: i64) -> Option<Rational> {
        if exp >= self.prec {
            None
        } else {
            Some(self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero))
        }
    }

    pub fn leading(&self) -> Option<(i64, &Rational)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Lower bound for the true valuation.
    pub fn val_bound(&self) -> i64 {
        self.min_exp().unwrap_or(self.prec)
    }

    /// True when no nonzero coefficient is known.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of poles actually present.
    pub fn pole_order(&self) -> i64 {
        self.min_exp().map_or(0, |e| (-e).max(0))
    }

    pub fn is_integral(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 0)
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        Laurent {
            terms: self
                .terms
                .range(..prec)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec,
        }
    }

    /// Terms with exponent below zero.
    pub fn polar_part(&self) -> Self {
        Laurent {
            terms: self
                .terms
                .range(..0)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            prec: EXACT,
        }
    }

    /// Residue: the `x⁻¹` coefficient, `None` if not known.
    pub fn residue(&self) -> Option<Rational> {
        self.coeff(-1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        Self::from_terms(
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (*e, c.clone())),
            prec,
        )
    }

    pub fn neg(&self) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            prec: self.prec,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::exact_zero();
        }
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect(),
            prec: self.prec,
        }
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        Laurent {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            prec: padd(self.prec, k),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = padd(self.prec, other.val_bound()).min(padd(other.prec, self.val_bound()));
        let mut acc: BTreeMap<i64, Rational> = BTreeMap::new();
        for (i, a) in &self.terms {
            for (j, b) in &other.terms {
                let e = i + j;
                if e >= prec {
                    break;
                }
                let p = a * b;
                match acc.get_mut(&e) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(e, p);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Laurent { terms: acc, prec }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::exact_monomial(Rational::one(), 0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn deriv(&self) -> Self {
        Laurent {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (e - 1, c * int(*e)))
                .collect(),
            prec: padd(self.prec, -1),
        }
    }

    /// Primitive with zero constant term; fails on a nonzero residue.
    pub fn integ(&self) -> std::result::Result<Self, IntegError> {
        match self.residue() {
            None => return Err(IntegError::UnknownResidue),
            Some(r) if !r.is_zero() => return Err(IntegError::Residue),
            _ => {}
        }
        Ok(Laurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e + 1, c / int(e + 1)))
                .collect(),
            prec: padd(self.prec, 1),
        })
    }

    /// Multiplicative inverse over the Laurent field.
    pub fn inv(&self) -> Result<Self> {
        let (v, c) = self.leading().ok_or(Error::NotAUnit)?;
        let cinv = c.recip();
        if self.is_exact() {
            if self.terms.len() == 1 {
                return Ok(Self::exact_monomial(cinv, -v));
            }
            return Err(Error::InsufficientPrecision(
                "inverse of an exact non-monomial needs a finite window".into(),
            ));
        }
        // self = c x^v (1 + h); h_k known for k < rel.
        let rel = self.prec - v;
        let h: Vec<Rational> = (0..rel)
            .map(|k| {
                self.terms
                    .get(&(v + k))
                    .map_or_else(Rational::zero, |a| a * &cinv)
            })
            .collect();
        let mut e: Vec<Rational> = Vec::with_capacity(rel.max(0) as usize);
        for k in 0..rel {
            if k == 0 {
                e.push(Rational::one());
                continue;
            }
            let mut s = Rational::zero();
            for i in 1..=k {
                let hi = &h[i as usize];
                if !hi.is_zero() {
                    s -= hi * &e[(k - i) as usize];
                }
            }
            e.push(s);
        }
        Ok(Self::from_terms(
            e.into_iter()
                .enumerate()
                .map(|(k, ek)| (k as i64 - v, ek * &cinv)),
            self.prec - 2 * v,
        ))
    }

    /// `exp(self)` for a series of positive valuation.
    pub fn exp(&self) -> Result<Self> {
        if self.val_bound() < 1 {
            return Err(Error::NotTopologicallyNilpotent);
        }
        if self.is_zero() {
            return Ok(Self::exact_monomial(Rational::one(), 0).truncate(self.prec));
        }
        if self.is_exact() {
            return Err(Error::InsufficientPrecision(
                "exponential of an exact series needs a finite window".into(),
            ));
        }
        // E' = a' E  =>  n E_n = Σ_{k=1}^{n} k a_k E_{n-k}.
        let n_max = self.prec;
        let mut e: Vec<Rational> = vec![Rational::one()];
        for n in 1..n_max {
            let mut s = Rational::zero();
            for (k, ak) in self.terms.range(1..=n) {
                s += ak * int(*k) * &e[(n - k) as usize];
            }
            e.push(s / int(n));
        }
        Ok(Self::from_terms(
            e.into_iter().enumerate().map(|(k, c)| (k as i64, c)),
            self.prec,
        ))
    }

    /// `log(self)` for a Taylor series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        match self.leading() {
            None => return Err(Error::NotAUnit),
            Some((v, _)) if v != 0 => return Err(Error::NotAUnit),
            Some((_, c)) if !c.is_one() => {
                return Err(Error::NonRationalLogarithm(crate::rational::format(c)))
            }
            _ => {}
        }
        let q = self.deriv().mul(&self.inv()?);
        q.integ().map_err(|_| Error::NotAUnit)
    }

    /// Square root of a series with even valuation and a square leading
    /// coefficient; the root has positive leading coefficient.
    pub fn sqrt(&self) -> Result<Self> {
        let (v, c) = self
            .leading()
            .ok_or_else(|| Error::IrrationalSplitting("square root of zero".into()))?;
        if v % 2 != 0 {
            return Err(Error::IrrationalSplitting(format!("odd valuation {v}")));
        }
        let root = crate::rational::sqrt_exact(c).ok_or_else(|| {
            Error::IrrationalSplitting(format!(
                "leading coefficient {} is not a rational square",
                crate::rational::format(c)
            ))
        })?;
        let m = v / 2;
        if self.is_exact() && self.terms.len() == 1 {
            return Ok(Self::exact_monomial(root, m));
        }
        if self.is_exact() {
            return Err(Error::InsufficientPrecision(
                "square root of an exact non-monomial needs a finite window".into(),
            ));
        }
        let cinv = c.recip();
        let rel = self.prec - v;
        let h: Vec<Rational> = (0..rel)
            .map(|k| {
                self.terms
                    .get(&(v + k))
                    .map_or_else(Rational::zero, |a| a * &cinv)
            })
            .collect();
        // S² = 1 + h.
        let mut s: Vec<Rational> = Vec::new();
        let half = crate::rational::rat(1, 2);
        for n in 0..rel {
            if n == 0 {
                s.push(Rational::one());
                continue;
            }
            let mut acc = h[n as usize].clone();
            for i in 1..n {
                acc -= &s[i as usize] * &s[(n - i) as usize];
            }
            s.push(acc * &half);
        }
        Ok(Self::from_terms(
            s.into_iter()
                .enumerate()
                .map(|(k, sk)| (k as i64 + m, sk * &root)),
            self.prec - m,
        ))
    }

    /// `f(-x)`.
    pub fn reflect(&self) -> Self {
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c } else { c.clone() }))
                .collect(),
            prec: self.prec,
        }
    }

    /// Coefficientwise equality on the common known window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let prec = self.prec.min(other.prec);
        let a = self.terms.range(..prec);
        let b = other.terms.range(..prec);
        a.eq(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegError {
    Residue,
    UnknownResidue,
}
