//! The four combinatorial identities underlying the interpolation
//! transforms, checked in exact integer/rational and formal-series
//! arithmetic.

use num_bigint::BigInt;

use crate::exact::{comb, FormalSeries, Rational, SeriesQ};

/// `sum_{m=0}^{q/2} C(2p+q, 2p+2m) C(p+m, p) = 2^{q-1} (2p+q)/(p+q) C(p+q, q)`
/// for `p + q > 0`.
pub fn binomial_halfsum_identity(p: u64, q: u64) -> bool {
    assert!(p + q > 0);
    let mut lhs = Rational::zero();
    for m in 0..=(q / 2) {
        let term = comb::binomial(2 * p + q, 2 * p + 2 * m) * comb::binomial(p + m, p);
        lhs = lhs + Rational::from_bigint(term);
    }
    let pow = if q >= 1 {
        Rational::from_bigint(BigInt::from(2).pow((q - 1) as u32))
    } else {
        Rational::new(1, 2)
    };
    let rhs = pow
        * Rational::from_parts(((2 * p + q) as i64).into(), ((p + q) as i64).into()).unwrap()
        * Rational::from_bigint(comb::binomial(p + q, q));
    lhs == rhs
}

/// `sum_{r=0}^{q} (2p+2r)!(2p+2q-2r)! / (r!(q-r)!(p+r)!(p+q-r)!)
///  = 4^q/q! * (2p)!(2p+q)!/(p!p!)`.
pub fn factorial_convolution_identity(p: u64, q: u64) -> bool {
    let mut lhs = Rational::zero();
    for r in 0..=q {
        let num = comb::factorial(2 * p + 2 * r) * comb::factorial(2 * p + 2 * q - 2 * r);
        let den = comb::factorial(r)
            * comb::factorial(q - r)
            * comb::factorial(p + r)
            * comb::factorial(p + q - r);
        lhs = lhs + Rational::from_parts(num, den).unwrap();
    }
    let rhs = Rational::from_parts(
        BigInt::from(4).pow(q as u32) * comb::factorial(2 * p) * comb::factorial(2 * p + q),
        comb::factorial(q) * comb::factorial(p).pow(2),
    )
    .unwrap();
    lhs == rhs
}

/// `sum_q u^{p+q} (2p+q)/(p+q) C(p+q, p) = u^p (2-u)/(1-u)^{p+1}` as formal
/// series in `u = 1/xi`, for `p >= 1`.
pub fn geometric_family_identity(p: u64, order: usize) -> bool {
    assert!(p >= 1);
    let mut lhs = vec![Rational::zero(); order + 1];
    for q in 0.. {
        let n = p as usize + q as usize;
        if n > order {
            break;
        }
        lhs[n] = Rational::from_parts(((2 * p + q) as i64).into(), ((p + q) as i64).into())
            .unwrap()
            * Rational::from_bigint(comb::binomial(p + q, p));
    }
    let lhs: SeriesQ = FormalSeries::from_coeffs(lhs);

    let one = SeriesQ::one(order);
    let u = SeriesQ::monomial(order, 1, Rational::one());
    let two = one.scale_rational(&Rational::from_int(2));
    let mut rhs = two.sub(&u);
    let inv = one.sub(&u).inv().expect("unit constant term");
    for _ in 0..=p {
        rhs = rhs.mul(&inv);
    }
    rhs = rhs.mul(&SeriesQ::monomial(order, p as usize, Rational::one()));
    lhs == rhs
}

/// `sum_p C(2p, p) x^p = 1/sqrt(1-4x)` as formal series.
pub fn central_binomial_identity(order: usize) -> bool {
    let lhs: SeriesQ = FormalSeries::from_coeffs(
        (0..=order)
            .map(|p| Rational::from_bigint(comb::binomial(2 * p as u64, p as u64)))
            .collect(),
    );
    let one = SeriesQ::one(order);
    let x4 = SeriesQ::monomial(order, 1, Rational::from_int(4));
    let rhs = one
        .sub(&x4)
        .sqrt()
        .expect("unit constant term")
        .inv()
        .expect("unit constant term");
    lhs == rhs
}
