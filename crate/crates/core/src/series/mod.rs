//! Truncated bivariate series in `C((x))[[λ]]` with exact coefficients.
//!
//! Each λ-order is a [`Laurent`] carrying its own precision. The pole cap is
//! bookkeeping: it bounds the poles a value is allowed to hold and grows
//! under multiplication.

mod json;
mod laurent;

pub use laurent::{IntegError, Laurent, EXACT};

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chart {
    /// Base coordinate `z`.
    #[serde(rename = "z")]
    Base,
    /// Cover coordinate `ẑ`.
    #[serde(rename = "zh")]
    Cover,
}

impl Chart {
    pub fn tag(self) -> &'static str {
        match self {
            Chart::Base => "z",
            Chart::Cover => "zh",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Truncation {
    pub z_order: i64,
    pub lambda_order: usize,
    pub pole_cap: i64,
}

impl Truncation {
    pub fn new(z_order: i64, lambda_order: usize, pole_cap: i64) -> Result<Self> {
        let t = Truncation {
            z_order,
            lambda_order,
            pole_cap,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.z_order < 1 {
            return Err(Error::InvalidTruncation(format!(
                "zOrder {} < 1",
                self.z_order
            )));
        }
        if self.lambda_order < 1 {
            return Err(Error::InvalidTruncation(
                "lambdaOrder must be at least 1".into(),
            ));
        }
        if self.pole_cap < 0 {
            return Err(Error::InvalidTruncation(format!(
                "poleCap {} < 0",
                self.pole_cap
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiSeries {
    chart: Chart,
    pole_cap: i64,
    orders: Vec<Laurent>,
}

impl BiSeries {
    /// Builds a series from `(λ-exponent, x-exponent) → coefficient` entries.
    pub fn from_coeffs(
        trunc: Truncation,
        chart: Chart,
        coeffs: impl IntoIterator<Item = ((usize, i64), Rational)>,
    ) -> Result<Self> {
        trunc.validate()?;
        let mut buckets: Vec<Vec<(i64, Rational)>> = vec![Vec::new(); trunc.lambda_order];
        for ((i, j), c) in coeffs {
            if i >= trunc.lambda_order || j < -trunc.pole_cap || j >= trunc.z_order {
                return Err(Error::OutsideWindow {
                    lambda_exp: i,
                    x_exp: j,
                });
            }
            buckets[i].push((j, c));
        }
        Ok(BiSeries {
            chart,
            pole_cap: trunc.pole_cap,
            orders: buckets
                .into_iter()
                .map(|b| Laurent::from_terms(b, trunc.z_order))
                .collect(),
        })
    }

    /// Convenience for integer coefficients.
    pub fn from_ints(
        trunc: Truncation,
        chart: Chart,
        coeffs: &[((usize, i64), i64)],
    ) -> Result<Self> {
        Self::from_coeffs(trunc, chart, coeffs.iter().map(|&(k, c)| (k, int(c))))
    }

    /// Wraps per-order Laurent data; the pole cap is fitted to the data.
    pub fn from_orders(chart: Chart, orders: Vec<Laurent>) -> Self {
        assert!(!orders.is_empty(), "a series needs at least one λ-order");
        let pole_cap = orders.iter().map(Laurent::pole_order).max().unwrap_or(0);
        BiSeries {
            chart,
            pole_cap,
            orders,
        }
    }

    pub fn zero(chart: Chart, trunc: Truncation) -> Self {
        BiSeries {
            chart,
            pole_cap: trunc.pole_cap,
            orders: vec![Laurent::zero(trunc.z_order); trunc.lambda_order],
        }
    }

    /// Exact `c·x^e`, independent of λ, with `lambda_order` orders.
    pub fn exact_monomial(chart: Chart, c: Rational, e: i64, lambda_order: usize) -> Self {
        let mut orders = vec![Laurent::exact_zero(); lambda_order];
        orders[0] = Laurent::exact_monomial(c, e);
        Self::from_orders(chart, orders)
    }

    pub fn one(chart: Chart, lambda_order: usize) -> Self {
        Self::exact_monomial(chart, Rational::one(), 0, lambda_order)
    }

    /// Exact `λ^i`.
    pub fn lambda_power(chart: Chart, i: usize, lambda_order: usize) -> Self {
        let mut orders = vec![Laurent::exact_zero(); lambda_order];
        if i < lambda_order {
            orders[i] = Laurent::exact_monomial(Rational::one(), 0);
        }
        Self::from_orders(chart, orders)
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn pole_cap(&self) -> i64 {
        self.pole_cap
    }

    pub fn lambda_order(&self) -> usize {
        self.orders.len()
    }

    /// The honest z-order: every coefficient below it is known at every λ-order.
    pub fn z_order(&self) -> i64 {
        self.orders.iter().map(Laurent::prec).min().unwrap_or(EXACT)
    }

    pub fn truncation(&self) -> Truncation {
        Truncation {
            z_order: self.z_order(),
            lambda_order: self.lambda_order(),
            pole_cap: self.pole_cap,
        }
    }

    pub fn order(&self, i: usize) -> &Laurent {
        &self.orders[i]
    }

    pub fn orders(&self) -> &[Laurent] {
        &self.orders
    }

    pub fn into_orders(self) -> Vec<Laurent> {
        self.orders
    }

    /// `None` outside the known window.
    pub fn coeff(&self, i: usize, j: i64) -> Option<Rational> {
        self.orders.get(i).and_then(|o| o.coeff(j))
    }

    /// All stored nonzero coefficients, ordered by `(i, j)`.
    pub fn coeffs(&self) -> impl Iterator<Item = ((usize, i64), &Rational)> + '_ {
        self.orders
            .iter()
            .enumerate()
            .flat_map(|(i, o)| o.terms().map(move |(j, c)| ((i, j), c)))
    }

    pub fn is_zero(&self) -> bool {
        self.orders.iter().all(Laurent::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.orders.iter().all(Laurent::is_integral)
    }

    /// Largest pole actually present.
    pub fn pole_order(&self) -> i64 {
        self.orders
            .iter()
            .map(Laurent::pole_order)
            .max()
            .unwrap_or(0)
    }

    /// True when every λ-order above zero is known to vanish.
    pub fn is_lambda_free(&self) -> bool {
        self.orders[1..].iter().all(Laurent::is_zero)
    }

    pub fn with_chart(mut self, chart: Chart) -> Self {
        self.chart = chart;
        self
    }

    pub fn with_pole_cap(mut self, cap: i64) -> Self {
        self.pole_cap = cap.max(self.pole_order());
        self
    }

    pub fn truncate_lambda(&self, lambda_order: usize) -> Self {
        let l = lambda_order.clamp(1, self.lambda_order());
        BiSeries {
            chart: self.chart,
            pole_cap: self.pole_cap,
            orders: self.orders[..l].to_vec(),
        }
    }

    pub fn truncate_z(&self, z_order: i64) -> Self {
        self.map_orders(|o| o.truncate(z_order))
    }

    /// Extends a λ-independent series by exact zero orders.
    pub fn lift(&self, lambda_order: usize) -> Self {
        let mut orders = self.orders.clone();
        orders.truncate(lambda_order.max(1));
        while orders.len() < lambda_order {
            orders.push(Laurent::exact_zero());
        }
        BiSeries {
            chart: self.chart,
            pole_cap: self.pole_cap,
            orders,
        }
    }

    /// The λ⁰ part as a one-order series.
    pub fn lambda_zero(&self) -> Self {
        self.truncate_lambda(1)
    }

    pub(crate) fn map_orders(&self, f: impl Fn(&Laurent) -> Laurent) -> Self {
        Self::from_orders(self.chart, self.orders.iter().map(f).collect())
            .with_pole_cap(self.pole_cap)
    }

    fn check_chart(&self, other: &Self) -> Result<()> {
        if self.chart == other.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        Ok(self.plus(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        Ok(self.minus(other))
    }

    pub fn neg(&self) -> Self {
        self.map_orders(Laurent::neg)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_chart(other)?;
        Ok(self.times(other))
    }

    pub(crate) fn plus(&self, other: &Self) -> Self {
        let l = self.lambda_order().min(other.lambda_order());
        let orders = (0..l)
            .map(|i| self.orders[i].add(&other.orders[i]))
            .collect();
        Self::from_orders(self.chart, orders).with_pole_cap(self.pole_cap.max(other.pole_cap))
    }

    pub(crate) fn minus(&self, other: &Self) -> Self {
        self.plus(&other.neg())
    }

    pub(crate) fn times(&self, other: &Self) -> Self {
        let l = self.lambda_order().min(other.lambda_order());
        let orders = (0..l)
            .map(|k| {
                let mut acc = self.orders[0].mul(&other.orders[k]);
                for i in 1..=k {
                    acc = acc.add(&self.orders[i].mul(&other.orders[k - i]));
                }
                acc
            })
            .collect();
        Self::from_orders(self.chart, orders).with_pole_cap(self.pole_cap + other.pole_cap)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map_orders(|o| o.scale(c))
    }

    /// Multiplication by `x^k`.
    pub fn shift_x(&self, k: i64) -> Self {
        Self::from_orders(self.chart, self.orders.iter().map(|o| o.shift(k)).collect())
    }

    /// Multiplication by λ; the λ-order grows by one.
    pub fn mul_lambda(&self) -> Self {
        let mut orders = Vec::with_capacity(self.orders.len() + 1);
        orders.push(Laurent::exact_zero());
        orders.extend(self.orders.iter().cloned());
        BiSeries {
            chart: self.chart,
            pole_cap: self.pole_cap,
            orders,
        }
    }

    /// Division by λ of a series whose λ⁰ part vanishes; the λ-order drops by one.
    pub fn div_lambda(&self) -> Result<Self> {
        if !self.orders[0].is_zero() {
            return Err(Error::ConditionViolated("λ⁰ part is not zero".into()));
        }
        if self.orders.len() < 2 {
            return Err(Error::InvalidTruncation(
                "cannot divide a λ-order 1 series by λ".into(),
            ));
        }
        Ok(BiSeries {
            chart: self.chart,
            pole_cap: self.pole_cap,
            orders: self.orders[1..].to_vec(),
        })
    }

    /// Multiplicative inverse: leading-term division at λ⁰, then the λ-adic
    /// recursion `b_k = −b₀ Σ_{i≥1} a_i b_{k−i}`.
    pub fn invert(&self) -> Result<Self> {
        if self.orders[0].is_zero() {
            return Err(Error::NotAUnit);
        }
        let b0 = self.orders[0].inv()?;
        let mut b = vec![b0.clone()];
        for k in 1..self.lambda_order() {
            let mut acc = Laurent::exact_zero();
            for i in 1..=k {
                acc = acc.add(&self.orders[i].mul(&b[k - i]));
            }
            b.push(b0.mul(&acc).neg());
        }
        Ok(Self::from_orders(self.chart, b))
    }

    pub fn differentiate(&self) -> Self {
        Self::from_orders(self.chart, self.orders.iter().map(Laurent::deriv).collect())
    }

    pub fn antidifferentiate(&self) -> Result<Self> {
        let orders = self
            .orders
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.integ().map_err(|e| match e {
                    IntegError::Residue => Error::ResidueObstruction { lambda_order: i },
                    IntegError::UnknownResidue => Error::InsufficientPrecision(format!(
                        "residue at λ-order {i} lies outside the window"
                    )),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_orders(self.chart, orders))
    }

    /// Exponential of a series whose λ⁰ part has positive valuation.
    pub fn exp_series(&self) -> Result<Self> {
        let head = self.orders[0].exp()?;
        let l = self.lambda_order();
        let mut tail = self.clone();
        tail.orders[0] = Laurent::exact_zero();
        // Σ_{m<Λ} tail^m / m!, which terminates since tail is divisible by λ.
        let mut sum = Self::one(self.chart, l);
        let mut power = Self::one(self.chart, l);
        for m in 1..l {
            power = power
                .times(&tail)
                .scale(&Rational::new(1.into(), (m as i64).into()));
            sum = sum.plus(&power);
        }
        let head = Self::from_orders(self.chart, vec![head]).lift(l);
        Ok(head.times(&sum))
    }

    /// Logarithm of a series `1 + h` with `h(x, 0)` of positive valuation.
    pub fn log_series(&self) -> Result<Self> {
        let head = self.orders[0].log()?;
        let l = self.lambda_order();
        let a0 = Self::from_orders(self.chart, vec![self.orders[0].clone()]).lift(l);
        let c = a0.invert()?.times(&self.minus(&a0));
        let mut sum = Self::from_orders(self.chart, vec![head]).lift(l);
        let mut power = Self::one(self.chart, l);
        for m in 1..l {
            power = power.times(&c);
            let sign = if m % 2 == 1 { 1 } else { -1 };
            sum = sum.plus(&power.scale(&Rational::new(sign.into(), (m as i64).into())));
        }
        Ok(sum)
    }

    /// `f(g(x))` where `g` is λ-independent with positive valuation.
    pub fn substitute(&self, g: &Self) -> Result<Self> {
        if !g.is_lambda_free() {
            return Err(Error::IllFormedSubstitution(
                "inner series depends on λ".into(),
            ));
        }
        let g0 = &g.orders[0];
        let v = match g0.leading() {
            Some((v, _)) if v >= 1 => v,
            Some((v, _)) => {
                return Err(Error::IllFormedSubstitution(format!(
                    "inner valuation {v} < 1"
                )))
            }
            None => return Err(Error::IllFormedSubstitution("inner series is zero".into())),
        };
        let orders = self
            .orders
            .iter()
            .map(|f| substitute_laurent(f, g0, v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_orders(g.chart, orders))
    }

    /// Compositional inverse of a λ-independent series with a simple zero.
    pub fn revert(&self) -> Result<Self> {
        if !self.is_lambda_free() {
            return Err(Error::NotSimpleZero);
        }
        let g = &self.orders[0];
        let c = match g.leading() {
            Some((1, c)) => c.clone(),
            _ => return Err(Error::NotSimpleZero),
        };
        let w = if g.is_exact() && g.num_terms() == 1 {
            Laurent::exact_monomial(c.recip(), 1)
        } else if g.is_exact() {
            return Err(Error::InsufficientPrecision(
                "reversion of an exact polynomial needs a finite window".into(),
            ));
        } else {
            // Lagrange: [x^n] W = (1/n) [x^{n-1}] (x/g)^n.
            let rel = g.prec() - 1;
            let h = g.shift(-1).inv()?;
            let mut power = Laurent::exact_monomial(Rational::one(), 0);
            let mut terms = Vec::new();
            for n in 1..=rel {
                power = power.mul(&h).truncate(rel);
                if let Some(cn) = power.coeff(n - 1) {
                    terms.push((n, cn / int(n)));
                }
            }
            Laurent::from_terms(terms, g.prec())
        };
        Ok(Self::from_orders(self.chart, vec![w]).lift(self.lambda_order()))
    }

    /// `f(ẑ) = even(ẑ²) + ẑ·odd(ẑ²)`; both parts are returned in the base variable.
    pub fn split_even_odd(&self) -> Result<(Self, Self)> {
        if self.chart != Chart::Cover {
            return Err(Error::ChartMismatch);
        }
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for o in &self.orders {
            let p = o.prec();
            let (pe, po) = if p >= EXACT {
                (EXACT, EXACT)
            } else {
                ((p + 1).div_euclid(2), p.div_euclid(2))
            };
            let mut e = Vec::new();
            let mut d = Vec::new();
            for (j, c) in o.terms() {
                if j.rem_euclid(2) == 0 {
                    e.push((j.div_euclid(2), c.clone()));
                } else {
                    d.push(((j - 1).div_euclid(2), c.clone()));
                }
            }
            even.push(Laurent::from_terms(e, pe));
            odd.push(Laurent::from_terms(d, po));
        }
        Ok((
            Self::from_orders(Chart::Base, even),
            Self::from_orders(Chart::Base, odd),
        ))
    }

    /// `f(−x)`.
    pub fn reflect(&self) -> Self {
        self.map_orders(Laurent::reflect)
    }

    /// The `x⁻¹` coefficient at each λ-order.
    pub fn residue_at_zero(&self) -> Result<Vec<Rational>> {
        self.orders
            .iter()
            .enumerate()
            .map(|(i, o)| {
                o.residue().ok_or_else(|| {
                    Error::InsufficientPrecision(format!(
                        "residue at λ-order {i} lies outside the window"
                    ))
                })
            })
            .collect()
    }

    /// Equality on the common known window and common λ-orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.chart == other.chart
            && self
                .orders
                .iter()
                .zip(&other.orders)
                .all(|(a, b)| a.agrees_with(b))
    }
}

fn substitute_laurent(f: &Laurent, g: &Laurent, v: i64) -> Result<Laurent> {
    let rel = g.prec() - v;
    let mut target = if f.is_exact() {
        EXACT
    } else {
        v.saturating_mul(f.prec()).min(EXACT)
    };
    if !g.is_exact() {
        if let Some(e) = f.terms().map(|(e, _)| e).filter(|&e| e != 0).min() {
            target = target.min(e * v + rel);
        }
    }
    let one = Laurent::exact_monomial(Rational::one(), 0);
    let mut pos = vec![one.clone()];
    let mut neg = vec![one];
    let ginv = if f.min_exp().unwrap_or(0) < 0 {
        Some(g.inv()?)
    } else {
        None
    };
    let mut acc = Laurent::zero(target);
    for (e, c) in f.terms() {
        if e.saturating_mul(v) >= target {
            break;
        }
        let k = e.unsigned_abs() as usize;
        let (powers, base) = if e >= 0 {
            (&mut pos, g)
        } else {
            (&mut neg, ginv.as_ref().unwrap())
        };
        while powers.len() <= k {
            let next = powers.last().unwrap().mul(base).truncate(target);
            powers.push(next);
        }
        acc = acc.add(&powers[k].scale(c));
    }
    Ok(acc.truncate(target))
}
