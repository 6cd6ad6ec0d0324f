//! Sparse exact polynomials in the sphere coordinates `a, b, c, d`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exact::{Rational, Scalar, TPoly};

/// Exponent vector `(e_a, e_b, e_c, e_d)`.
pub type Expt = [u16; 4];

/// Guard against runaway symbolic expansion; the heaviest supported
/// computations stay well below this (total degree `2k <= 24`).
pub const MAX_TOTAL_DEGREE: u32 = 64;

/// Sparse polynomial in `a, b, c, d` over an exact coefficient ring.
///
/// Invariant: no stored zero coefficients; the term map is ordered, so
/// iteration and equality are canonical.
#[derive(Clone, PartialEq)]
pub struct Poly4<C: Scalar> {
    terms: BTreeMap<Expt, C>,
}

/// Polynomial with plain rational coefficients.
pub type Poly4Q = Poly4<Rational>;
/// Polynomial whose coefficients carry the parameter `t`.
pub type Poly4T = Poly4<TPoly>;

pub(crate) fn expt_degree(e: &Expt) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

impl<C: Scalar> Poly4<C> {
    pub fn zero() -> Self {
        Poly4 {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Poly4::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Poly4::monomial([0, 0, 0, 0], c)
    }

    /// The coordinate with the given axis: 0 = a, 1 = b, 2 = c, 3 = d.
    pub fn var(axis: usize) -> Self {
        assert!(axis < 4, "coordinate axis out of range");
        let mut e = [0u16; 4];
        e[axis] = 1;
        Poly4::monomial(e, C::one())
    }

    pub fn monomial(e: Expt, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly4 { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expt, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Expt) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(expt_degree).max().unwrap_or(0)
    }

    fn insert_term(&mut self, e: Expt, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly4::zero();
        }
        let mut out = Poly4::zero();
        for (e, v) in &self.terms {
            out.insert_term(*e, v.mul(c));
        }
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&C::from_rational(r.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly4::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Complete ordered term list `(monomial, coefficient)`, ready for
    /// term-by-term integration.
    pub fn term_list(&self) -> Vec<(Expt, C)> {
        self.terms.iter().map(|(e, c)| (*e, c.clone())).collect()
    }

    /// Substitutes `d^2 -> 1 - a^2 - b^2 - c^2` until no term has `e_d >= 2`;
    /// this is reduction modulo the unit-sphere relation.
    pub fn reduce_sphere(&self) -> Self {
        let mut out = Poly4::zero();
        // 1 - a^2 - b^2 - c^2
        let mut sub = Poly4::constant(C::one());
        for axis in 0..3 {
            let mut e = [0u16; 4];
            e[axis] = 2;
            sub = &sub - &Poly4::monomial(e, C::one());
        }
        for (e, c) in &self.terms {
            let q = e[3] / 2;
            let r = e[3] % 2;
            let reduced = sub.pow(q as u32);
            let base = Poly4::monomial([e[0], e[1], e[2], r], c.clone());
            out = &out + &(&base * &reduced);
        }
        out
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> Poly4<D> {
        let mut out = Poly4::zero();
        for (e, c) in &self.terms {
            out.insert_term(*e, f(c));
        }
        out
    }

    pub fn eval_f64(&self, p: [f64; 4], t: f64) -> f64 {
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mut m = c.to_f64_at(t);
            for axis in 0..4 {
                for _ in 0..e[axis] {
                    m *= p[axis];
                }
            }
            acc += m;
        }
        acc
    }
}

impl Poly4Q {
    /// Lifts rational coefficients into the `t`-polynomial ring.
    pub fn lift(&self) -> Poly4T {
        self.map_coeffs(|c| TPoly::constant(c.clone()))
    }
}

impl<C: Scalar> Add for &Poly4<C> {
    type Output = Poly4<C>;
    fn add(self, rhs: &Poly4<C>) -> Poly4<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, c.clone());
        }
        out
    }
}

impl<C: Scalar> Sub for &Poly4<C> {
    type Output = Poly4<C>;
    fn sub(self, rhs: &Poly4<C>) -> Poly4<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(*e, c.neg());
        }
        out
    }
}

impl<C: Scalar> Mul for &Poly4<C> {
    type Output = Poly4<C>;
    fn mul(self, rhs: &Poly4<C>) -> Poly4<C> {
        let mut out = Poly4::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                let d = expt_degree(&e);
                assert!(
                    d <= MAX_TOTAL_DEGREE,
                    "polynomial degree {d} exceeds the degree cap {MAX_TOTAL_DEGREE}"
                );
                out.insert_term(e, ca.mul(cb));
            }
        }
        out
    }
}

impl<C: Scalar> Neg for &Poly4<C> {
    type Output = Poly4<C>;
    fn neg(self) -> Poly4<C> {
        let mut out = Poly4::zero();
        for (e, c) in &self.terms {
            out.insert_term(*e, c.neg());
        }
        out
    }
}

impl<C: Scalar> fmt::Display for Poly4<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        const NAMES: [char; 4] = ['a', 'b', 'c', 'd'];
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for axis in 0..4 {
                match e[axis] {
                    0 => {}
                    1 => write!(f, "*{}", NAMES[axis])?,
                    n => write!(f, "*{}^{}", NAMES[axis], n)?,
                }
            }
        }
        Ok(())
    }
}

impl<C: Scalar> fmt::Debug for Poly4<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
