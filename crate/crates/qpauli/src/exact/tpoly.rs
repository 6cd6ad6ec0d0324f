//! Univariate polynomials in the interpolation parameter `t`.
//!
//! Moment identities for the interpolating variables must hold identically in
//! `t`, so `t` is carried as a polynomial variable rather than a number.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::exact::Rational;

/// Dense polynomial in `t` with exact rational coefficients.
///
/// Invariant: no trailing zero coefficients (the zero polynomial stores an
/// empty vector).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TPoly {
    coeffs: Vec<Rational>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        TPoly::constant(Rational::one())
    }

    pub fn constant(r: Rational) -> Self {
        let mut p = TPoly { coeffs: vec![r] };
        p.normalize();
        p
    }

    /// The variable `t` itself.
    pub fn var() -> Self {
        TPoly {
            coeffs: vec![Rational::zero(), Rational::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = TPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    /// `Some` iff the polynomial is constant (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc * t + c;
        }
        acc
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.to_f64();
        }
        acc
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return TPoly::zero();
        }
        TPoly {
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn div_rational(&self, r: &Rational) -> Result<Self> {
        Ok(self.scale(&r.inv()?))
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        TPoly::from_coeffs(coeffs)
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        TPoly::from_coeffs(coeffs)
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        if self.is_zero() || rhs.is_zero() {
            return TPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += &(a * b);
            }
        }
        TPoly::from_coeffs(coeffs)
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*t")?,
                _ => write!(f, "{c}*t^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        // (1 - t^2) * (1 + t) = 1 + t - t^2 - t^3
        let one = TPoly::one();
        let t = TPoly::var();
        let s = &one - &(&t * &t);
        let p = &s * &(&one + &t);
        assert_eq!(p.coeff(0), Rational::one());
        assert_eq!(p.coeff(1), Rational::one());
        assert_eq!(p.coeff(2), Rational::from_int(-1));
        assert_eq!(p.coeff(3), Rational::from_int(-1));
        assert_eq!(p.eval(&Rational::new(1, 2)), Rational::new(9, 8));
        assert!(p.as_constant().is_none());
        assert_eq!(s.eval(&Rational::one()), Rational::zero());
    }

    #[test]
    fn normalization_strips_trailing_zeros() {
        let p = TPoly::from_coeffs(vec![Rational::one(), Rational::zero(), Rational::zero()]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(p.as_constant(), Some(Rational::one()));
        let z = &p - &TPoly::one();
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
    }
}
