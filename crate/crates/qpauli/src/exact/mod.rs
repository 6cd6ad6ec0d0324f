//! Exact scalar, polynomial, and formal-series arithmetic.
//!
//! Everything here is exact: scalars are arbitrary-precision rationals,
//! optionally carrying the interpolation parameter `t` as a polynomial
//! variable, and series are truncated power series over those scalars.

pub mod comb;
mod poly4;
mod rational;
mod series;
mod tpoly;

pub use poly4::{Expt, Poly4, Poly4Q, Poly4T, MAX_TOTAL_DEGREE};
pub use rational::Rational;
pub use series::{arcsinh_series, series_arcsinh, FormalSeries, SeriesQ, SeriesT};
pub use tpoly::TPoly;

use std::fmt;

/// Coefficient ring shared by polynomials and formal series: exact rationals
/// or exact polynomials in `t`.
pub trait Scalar:
    Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_rational(r: Rational) -> Self;
    fn mul_rational(&self, r: &Rational) -> Self;
    /// Exact division by a nonzero rational; panics on zero (caller bug).
    fn div_rational(&self, r: &Rational) -> Self;
    /// `Some` iff the value is free of `t`.
    fn as_rational(&self) -> Option<Rational>;
    /// Numeric value with `t` bound to the given float.
    fn to_f64_at(&self, t: f64) -> f64;
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        self * r
    }
    fn div_rational(&self, r: &Rational) -> Self {
        self * &r.inv().expect("division by zero rational")
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn to_f64_at(&self, _t: f64) -> f64 {
        self.to_f64()
    }
}

impl Scalar for TPoly {
    fn zero() -> Self {
        TPoly::zero()
    }
    fn one() -> Self {
        TPoly::one()
    }
    fn is_zero(&self) -> bool {
        TPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_rational(r: Rational) -> Self {
        TPoly::constant(r)
    }
    fn mul_rational(&self, r: &Rational) -> Self {
        self.scale(r)
    }
    fn div_rational(&self, r: &Rational) -> Self {
        TPoly::div_rational(self, r).expect("division by zero rational")
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_constant()
    }
    fn to_f64_at(&self, t: f64) -> f64 {
        self.eval_f64(t)
    }
}
