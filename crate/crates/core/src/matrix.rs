//! Dense 2×2 matrices over a series ring.

use serde::{Deserialize, Serialize};

use crate::series::{BiSeries, Laurent};

/// The ring operations a matrix entry needs.
pub trait Entry: Clone {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn deriv(&self) -> Self;
}

impl Entry for Laurent {
    fn add(&self, other: &Self) -> Self {
        Laurent::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Laurent::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Laurent::mul(self, other)
    }
    fn neg(&self) -> Self {
        Laurent::neg(self)
    }
    fn deriv(&self) -> Self {
        Laurent::deriv(self)
    }
}

// Chart agreement is checked once at the public entry points.
impl Entry for BiSeries {
    fn add(&self, other: &Self) -> Self {
        self.plus(other)
    }
    fn sub(&self, other: &Self) -> Self {
        self.minus(other)
    }
    fn mul(&self, other: &Self) -> Self {
        self.times(other)
    }
    fn neg(&self) -> Self {
        BiSeries::neg(self)
    }
    fn deriv(&self) -> Self {
        self.differentiate()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat2<T> {
    pub e: [[T; 2]; 2],
}

impl<T> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 {
            e: [[a, b], [c, d]],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.e[i][j]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        let [[a, b], [c, d]] = &self.e;
        Mat2 {
            e: [[f(a), f(b)], [f(c), f(d)]],
        }
    }

    pub fn try_map<U, E>(&self, f: impl Fn(&T) -> Result<U, E>) -> Result<Mat2<U>, E> {
        let [[a, b], [c, d]] = &self.e;
        Ok(Mat2 {
            e: [[f(a)?, f(b)?], [f(c)?, f(d)?]],
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.e.iter().flatten()
    }
}

impl<T: Entry> Mat2<T> {
    pub fn diag(a: T, d: T, zero: T) -> Self {
        Mat2::new(a, zero.clone(), zero, d)
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        Mat2 {
            e: [
                [
                    f(&self.e[0][0], &other.e[0][0]),
                    f(&self.e[0][1], &other.e[0][1]),
                ],
                [
                    f(&self.e[1][0], &other.e[1][0]),
                    f(&self.e[1][1], &other.e[1][1]),
                ],
            ],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, T::add)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, T::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(T::neg)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let a = &self.e;
        let b = &other.e;
        let dot = |i: usize, j: usize| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        Mat2 {
            e: [[dot(0, 0), dot(0, 1)], [dot(1, 0), dot(1, 1)]],
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn trace(&self) -> T {
        self.e[0][0].add(&self.e[1][1])
    }

    pub fn det(&self) -> T {
        self.e[0][0]
            .mul(&self.e[1][1])
            .sub(&self.e[0][1].mul(&self.e[1][0]))
    }

    /// Adjugate: `M·adj(M) = det(M)·I`.
    pub fn adj(&self) -> Self {
        let [[a, b], [c, d]] = &self.e;
        Mat2::new(d.clone(), b.neg(), c.neg(), a.clone())
    }

    pub fn deriv(&self) -> Self {
        self.map(T::deriv)
    }

    /// `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn diagonal_part(&self, zero: &T) -> Self {
        Mat2::new(
            self.e[0][0].clone(),
            zero.clone(),
            zero.clone(),
            self.e[1][1].clone(),
        )
    }
}

impl Mat2<Laurent> {
    pub fn is_zero(&self) -> bool {
        self.entries().all(Laurent::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.entries().all(Laurent::is_integral)
    }

    pub fn one() -> Self {
        let one = Laurent::exact_monomial(num_traits::One::one(), 0);
        Mat2::diag(one.clone(), one, Laurent::exact_zero())
    }

    pub fn zero() -> Self {
        Mat2::diag(
            Laurent::exact_zero(),
            Laurent::exact_zero(),
            Laurent::exact_zero(),
        )
    }

    pub fn polar_part(&self) -> Self {
        self.map(Laurent::polar_part)
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.entries()
            .zip(other.entries())
            .all(|(a, b)| a.agrees_with(b))
    }

    pub fn prec(&self) -> i64 {
        self.entries().map(Laurent::prec).min().unwrap()
    }
}

impl Mat2<BiSeries> {
    pub fn identity(chart: crate::series::Chart, lambda_order: usize) -> Self {
        let z = BiSeries::from_orders(chart, vec![Laurent::exact_zero(); lambda_order]);
        Mat2::diag(
            BiSeries::one(chart, lambda_order),
            BiSeries::one(chart, lambda_order),
            z,
        )
    }

    pub fn lambda_order(&self) -> usize {
        self.entries().map(BiSeries::lambda_order).min().unwrap()
    }

    /// Coefficient matrix at λ-order `i`.
    pub fn order(&self, i: usize) -> Mat2<Laurent> {
        self.map(|s| s.order(i).clone())
    }

    /// Reassembles a matrix from its λ-order coefficients.
    pub fn from_orders(chart: crate::series::Chart, orders: &[Mat2<Laurent>]) -> Self {
        let pick = |i: usize, j: usize| {
            BiSeries::from_orders(chart, orders.iter().map(|m| m.e[i][j].clone()).collect())
        };
        Mat2::new(pick(0, 0), pick(0, 1), pick(1, 0), pick(1, 1))
    }

    pub fn is_integral(&self) -> bool {
        self.entries().all(BiSeries::is_integral)
    }

    pub fn is_zero(&self) -> bool {
        self.entries().all(BiSeries::is_zero)
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.entries()
            .zip(other.entries())
            .all(|(a, b)| a.agrees_with(b))
    }

    pub fn z_order(&self) -> i64 {
        self.entries().map(BiSeries::z_order).min().unwrap()
    }

    pub fn truncate_lambda(&self, l: usize) -> Self {
        self.map(|s| s.truncate_lambda(l))
    }

    pub fn lift(&self, l: usize) -> Self {
        self.map(|s| s.lift(l))
    }
}
