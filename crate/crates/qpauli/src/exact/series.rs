//! Truncated formal power series with exact coefficients.
//!
//! Used for the `1/xi` Laurent expansions of Cauchy transforms: the series
//! indeterminate `u` stands for `1/xi` throughout, and all ring operations
//! are exact up to the stored truncation order.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{comb, Rational, Scalar, TPoly};

/// Power series truncated after `u^order`, stored densely.
#[derive(Clone, PartialEq, Debug)]
pub struct FormalSeries<C: Scalar> {
    coeffs: Vec<C>,
}

pub type SeriesQ = FormalSeries<Rational>;
pub type SeriesT = FormalSeries<TPoly>;

impl<C: Scalar> FormalSeries<C> {
    pub fn zero(order: usize) -> Self {
        FormalSeries {
            coeffs: vec![C::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        let mut s = FormalSeries::zero(order);
        s.coeffs[0] = C::one();
        s
    }

    /// The monomial `c * u^n`.
    pub fn monomial(order: usize, n: usize, c: C) -> Self {
        assert!(n <= order, "monomial degree beyond truncation order");
        let mut s = FormalSeries::zero(order);
        s.coeffs[n] = c;
        s
    }

    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        FormalSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &C {
        &self.coeffs[n]
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot extend a truncated series");
        FormalSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| self.coeffs[n].add(&rhs.coeffs[n]))
            .collect();
        FormalSeries { coeffs }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|n| self.coeffs[n].sub(&rhs.coeffs[n]))
            .collect();
        FormalSeries { coeffs }
    }

    pub fn neg(&self) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut coeffs = vec![C::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        FormalSeries { coeffs }
    }

    pub fn scale(&self, c: &C) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&C::from_rational(r.clone()))
    }

    /// Multiplicative inverse; requires the constant term to be a nonzero
    /// `t`-free rational.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.coeffs[0]
            .as_rational()
            .filter(|r| !r.is_zero())
            .ok_or_else(|| {
                Error::SeriesPrecondition(
                    "inverse requires a nonzero rational constant term".into(),
                )
            })?;
        let c0_inv = c0.inv()?;
        let order = self.order();
        let mut out = vec![C::zero(); order + 1];
        out[0] = C::from_rational(c0_inv.clone());
        for n in 1..=order {
            let mut acc = C::zero();
            for i in 1..=n {
                acc = acc.add(&self.coeffs[i].mul(&out[n - i]));
            }
            out[n] = acc.neg().mul_rational(&c0_inv);
        }
        Ok(FormalSeries { coeffs: out })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Square root of a series with constant term exactly 1. Squaring the
    /// result recovers the input up to truncation.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].sub(&C::one()).is_zero() {
            return Err(Error::SeriesPrecondition(
                "square root requires constant term 1".into(),
            ));
        }
        let order = self.order();
        let mut out = vec![C::zero(); order + 1];
        out[0] = C::one();
        let half = Rational::new(1, 2);
        for n in 1..=order {
            let mut acc = self.coeffs[n].clone();
            for i in 1..n {
                acc = acc.sub(&out[i].mul(&out[n - i]));
            }
            out[n] = acc.mul_rational(&half);
        }
        Ok(FormalSeries { coeffs: out })
    }

    /// Logarithm of a series with constant term exactly 1.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].sub(&C::one()).is_zero() {
            return Err(Error::SeriesPrecondition(
                "logarithm requires constant term 1".into(),
            ));
        }
        let order = self.order();
        // log(f)' = f'/f, integrated termwise
        let q = self.derivative().mul(&self.truncate(order.saturating_sub(1)).inv()?);
        let mut out = vec![C::zero(); order + 1];
        for n in 1..=order {
            out[n] = q.coeffs[n - 1].div_rational(&Rational::from_int(n as i64));
        }
        Ok(FormalSeries { coeffs: out })
    }

    /// Derivative with respect to the indeterminate `u`; the truncation
    /// order drops by one.
    pub fn derivative(&self) -> Self {
        let order = self.order();
        if order == 0 {
            return FormalSeries::zero(0);
        }
        let coeffs = (1..=order)
            .map(|n| self.coeffs[n].mul_rational(&Rational::from_int(n as i64)))
            .collect();
        FormalSeries { coeffs }
    }

    /// Substitutes `inner` (of positive valuation) into `self`; `self` must
    /// carry at least as many coefficients as `inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::SeriesPrecondition(
                "composition requires an inner series of positive valuation".into(),
            ));
        }
        if self.order() < inner.order() {
            return Err(Error::SeriesPrecondition(format!(
                "outer series order {} too short for inner order {}",
                self.order(),
                inner.order()
            )));
        }
        let order = inner.order();
        let mut acc = FormalSeries::zero(order);
        for n in (0..=order).rev() {
            acc = acc.mul(inner);
            acc.coeffs[0] = acc.coeffs[0].add(&self.coeffs[n]);
        }
        Ok(acc)
    }

    /// For `G(xi) = sum g_n u^n` with `u = 1/xi`, the series of `dG/dxi`:
    /// the coefficient of `u^(n+1)` is `-n * g_n`. The result carries one
    /// more exact coefficient than the input.
    pub fn xi_derivative(&self) -> Self {
        let order = self.order();
        let mut coeffs = vec![C::zero(); order + 2];
        for (n, g) in self.coeffs.iter().enumerate() {
            coeffs[n + 1] = g.mul_rational(&Rational::from_int(-(n as i64)));
        }
        FormalSeries { coeffs }
    }

    /// Inverse of [`FormalSeries::xi_derivative`]: recovers `G` (vanishing at
    /// infinity) from the series of `dG/dxi`. Requires a vanishing `u^1`
    /// coefficient, since that term would integrate to a logarithm.
    pub fn xi_antiderivative(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() || (self.order() >= 1 && !self.coeffs[1].is_zero()) {
            return Err(Error::SeriesPrecondition(
                "antiderivative requires valuation >= 2 in 1/xi".into(),
            ));
        }
        let order = self.order() - 1;
        let mut coeffs = vec![C::zero(); order + 1];
        for n in 1..=order {
            coeffs[n] = self.coeffs[n + 1]
                .div_rational(&Rational::from_int(-(n as i64)));
        }
        Ok(FormalSeries { coeffs })
    }

    /// Numeric Horner evaluation at complex `u`, with `t` bound.
    pub fn eval_complex(&self, u: Complex64, t: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c.to_f64_at(t);
        }
        acc
    }
}

/// Maclaurin series of `arcsinh(y)` up to `y^order`:
/// `sum_n (-1)^n (2n)! / (4^n (n!)^2 (2n+1)) * y^(2n+1)`.
pub fn arcsinh_series(order: usize) -> SeriesQ {
    let mut coeffs = vec![Rational::zero(); order + 1];
    let mut n = 0usize;
    while 2 * n + 1 <= order {
        let num = comb::factorial(2 * n as u64);
        let mut den = comb::factorial(n as u64);
        den = &den * &den;
        den *= num_bigint::BigInt::from(4).pow(n as u32);
        den *= num_bigint::BigInt::from(2 * n as u64 + 1);
        let mut c = Rational::from_parts(num, den).expect("positive denominator");
        if n % 2 == 1 {
            c = -c;
        }
        coeffs[2 * n + 1] = c;
        n += 1;
    }
    FormalSeries::from_coeffs(coeffs)
}

/// Applies the arcsinh Maclaurin series to a series of positive valuation.
pub fn series_arcsinh<C: Scalar>(s: &FormalSeries<C>) -> Result<FormalSeries<C>> {
    let outer = arcsinh_series(s.order());
    let outer = FormalSeries::from_coeffs(
        (0..=s.order())
            .map(|n| C::from_rational(outer.coeff(n).clone()))
            .collect(),
    );
    outer.compose(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u(order: usize) -> SeriesQ {
        FormalSeries::monomial(order, 1, Rational::one())
    }

    #[test]
    fn sqrt_of_one_minus_four_u() {
        // sqrt(1 - 4u) = 1 - 2u - 2u^2 - 4u^3 - ...
        let s = FormalSeries::one(3).sub(&u(3).scale_rational(&Rational::from_int(4)));
        let r = s.sqrt().unwrap();
        assert_eq!(r.coeff(0), &Rational::one());
        assert_eq!(r.coeff(1), &Rational::from_int(-2));
        assert_eq!(r.coeff(2), &Rational::from_int(-2));
        assert_eq!(r.coeff(3), &Rational::from_int(-4));
        assert_eq!(r.mul(&r), s);
    }

    #[test]
    fn log_of_one_minus_u() {
        let s = FormalSeries::one(2).sub(&u(2));
        let l = s.log().unwrap();
        assert_eq!(l.coeff(0), &Rational::zero());
        assert_eq!(l.coeff(1), &Rational::from_int(-1));
        assert_eq!(l.coeff(2), &Rational::new(-1, 2));
    }

    #[test]
    fn arcsinh_low_coefficients() {
        let s = arcsinh_series(5);
        assert_eq!(s.coeff(1), &Rational::one());
        assert_eq!(s.coeff(3), &Rational::new(-1, 6));
        assert_eq!(s.coeff(5), &Rational::new(3, 40));
    }

    #[test]
    fn valuation_errors_are_explicit() {
        let s = u(4);
        assert!(s.sqrt().is_err());
        assert!(s.log().is_err());
        assert!(s.inv().is_err());
        let unit: SeriesQ = FormalSeries::one(4);
        assert!(unit.compose(&unit).is_err());
    }

    #[test]
    fn inverse_contract() {
        let s = FormalSeries::from_coeffs(vec![
            Rational::from_int(-1),
            Rational::one(),
            Rational::new(3, 7),
            Rational::from_int(2),
        ]);
        let inv = s.inv().unwrap();
        assert_eq!(s.mul(&inv), FormalSeries::one(3));
    }

    #[test]
    fn xi_derivative_round_trip() {
        let g = FormalSeries::from_coeffs(vec![
            Rational::zero(),
            Rational::one(),
            Rational::new(1, 4),
            Rational::new(1, 8),
        ]);
        let dg = g.xi_derivative();
        assert_eq!(dg.coeff(2), &Rational::from_int(-1));
        assert_eq!(dg.coeff(3), &Rational::new(-1, 2));
        assert_eq!(dg.xi_antiderivative().unwrap(), g);
    }

    fn unit_series(order: usize) -> impl Strategy<Value = SeriesQ> {
        proptest::collection::vec((-5i64..=5, 1i64..=6), order)
            .prop_map(move |tail| {
                let mut coeffs = vec![Rational::one()];
                coeffs.extend(tail.into_iter().map(|(n, d)| Rational::new(n, d)));
                FormalSeries::from_coeffs(coeffs)
            })
    }

    proptest! {
        #[test]
        fn sqrt_squares_back(s in unit_series(7)) {
            let r = s.sqrt().unwrap();
            prop_assert_eq!(r.mul(&r), s);
        }

        #[test]
        fn inv_multiplies_to_one(s in unit_series(7)) {
            let i = s.inv().unwrap();
            prop_assert_eq!(s.mul(&i), FormalSeries::one(7));
        }
    }
}
