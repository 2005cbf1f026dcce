//! Dense reference arithmetic, used to cross-check the sparse kernel.
//!
//! Coefficients live in a rectangular array indexed by λ-order and exponent.
//! Every operation is the schoolbook double loop; nothing is shared with
//! [`crate::series`] beyond reading coefficients out.

use num_traits::{One, Zero};

use crate::rational::{int, Rational};
use crate::series::BiSeries;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dense {
    /// Smallest exponent stored.
    pub lo: i64,
    /// Coefficients are known for exponents `< hi`.
    pub hi: i64,
    pub c: Vec<Vec<Rational>>,
}

impl Dense {
    pub fn zeros(lambda_order: usize, lo: i64, hi: i64) -> Self {
        let w = (hi - lo).max(0) as usize;
        Dense {
            lo,
            hi,
            c: vec![vec![Rational::zero(); w]; lambda_order],
        }
    }

    pub fn one(lambda_order: usize, hi: i64) -> Self {
        let mut d = Self::zeros(lambda_order, 0, hi);
        if hi > 0 {
            d.c[0][0] = Rational::one();
        }
        d
    }

    /// Reads `[lo, hi)` out of `s`; `None` if part of that window is unknown.
    pub fn from_series(s: &BiSeries, lo: i64, hi: i64) -> Option<Self> {
        let mut d = Self::zeros(s.lambda_order(), lo, hi);
        for (i, row) in d.c.iter_mut().enumerate() {
            for (k, slot) in row.iter_mut().enumerate() {
                *slot = s.coeff(i, lo + k as i64)?;
            }
        }
        Some(d)
    }

    pub fn lambda_order(&self) -> usize {
        self.c.len()
    }

    pub fn get(&self, i: usize, j: i64) -> Rational {
        if j < self.lo || j >= self.hi {
            return Rational::zero();
        }
        self.c[i][(j - self.lo) as usize].clone()
    }

    pub fn add(&self, o: &Dense) -> Dense {
        let lo = self.lo.min(o.lo);
        let hi = self.hi.min(o.hi);
        let mut r = Self::zeros(self.lambda_order().min(o.lambda_order()), lo, hi);
        for i in 0..r.lambda_order() {
            for j in lo..hi {
                r.c[i][(j - lo) as usize] = self.get(i, j) + o.get(i, j);
            }
        }
        r
    }

    pub fn scale(&self, k: &Rational) -> Dense {
        let mut r = self.clone();
        for row in &mut r.c {
            for x in row {
                *x = &*x * k;
            }
        }
        r
    }

    /// Schoolbook product; the window is what both factors determine.
    pub fn mul(&self, o: &Dense) -> Dense {
        let l = self.lambda_order().min(o.lambda_order());
        let lo = self.lo + o.lo;
        let hi = (self.hi + o.lo).min(o.hi + self.lo);
        let mut r = Self::zeros(l, lo, hi);
        for i1 in 0..l {
            for i2 in 0..l - i1 {
                for j1 in self.lo..self.hi {
                    let a = self.get(i1, j1);
                    if a.is_zero() {
                        continue;
                    }
                    for j2 in o.lo..o.hi {
                        let j = j1 + j2;
                        if j >= hi {
                            break;
                        }
                        r.c[i1 + i2][(j - lo) as usize] += &a * o.get(i2, j2);
                    }
                }
            }
        }
        r
    }

    /// Inverse of a power series with nonzero constant term, by solving
    /// `self · b = 1` one coefficient at a time in (λ, x) order.
    pub fn inverse(&self) -> Option<Dense> {
        if self.lo != 0 || self.hi <= 0 || self.get(0, 0).is_zero() {
            return None;
        }
        let l = self.lambda_order();
        let c00 = self.get(0, 0);
        let mut b = Self::zeros(l, 0, self.hi);
        for i in 0..l {
            for j in 0..self.hi {
                let mut acc = if i == 0 && j == 0 {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                for i1 in 0..=i {
                    for j1 in 0..=j {
                        if i1 == 0 && j1 == 0 {
                            continue;
                        }
                        acc -= self.get(i1, j1) * b.get(i - i1, j - j1);
                    }
                }
                b.c[i][j as usize] = acc / &c00;
            }
        }
        Some(b)
    }

    fn nilpotent_bound(&self) -> usize {
        self.lambda_order() + self.hi.max(0) as usize
    }

    /// `Σ xᵏ/k!` for `x` with no constant term.
    pub fn exp(&self) -> Option<Dense> {
        if self.lo < 0 || !self.get(0, 0).is_zero() {
            return None;
        }
        let x = self.with_lo(0);
        let mut sum = Self::one(x.lambda_order(), x.hi);
        let mut power = sum.clone();
        for k in 1..=x.nilpotent_bound() {
            power = power
                .mul(&x)
                .scale(&Rational::new(1.into(), (k as i64).into()));
            sum = sum.add(&power);
        }
        Some(sum)
    }

    /// `Σ (−1)^{k+1} (x−1)ᵏ/k` for `x` with constant term 1.
    pub fn log(&self) -> Option<Dense> {
        if self.lo < 0 || self.get(0, 0) != Rational::one() {
            return None;
        }
        let u = self
            .with_lo(0)
            .add(&Self::one(self.lambda_order(), self.hi).scale(&int(-1)));
        let mut sum = Self::zeros(u.lambda_order(), 0, u.hi);
        let mut power = Self::one(u.lambda_order(), u.hi);
        for k in 1..=u.nilpotent_bound() {
            power = power.mul(&u);
            let sign = if k % 2 == 1 { 1 } else { -1 };
            sum = sum.add(&power.scale(&Rational::new(sign.into(), (k as i64).into())));
        }
        Some(sum)
    }

    fn with_lo(&self, lo: i64) -> Dense {
        let mut r = Self::zeros(self.lambda_order(), lo, self.hi);
        for i in 0..self.lambda_order() {
            for j in lo..self.hi {
                r.c[i][(j - lo) as usize] = self.get(i, j);
            }
        }
        r
    }

    /// Whether `s` knows and matches every coefficient of this window.
    pub fn matches(&self, s: &BiSeries) -> bool {
        (0..self.lambda_order())
            .all(|i| (self.lo..self.hi).all(|j| s.coeff(i, j) == Some(self.get(i, j))))
    }
}
