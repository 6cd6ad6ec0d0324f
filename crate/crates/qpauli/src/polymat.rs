//! Small helpers for 4x4 matrices with polynomial entries.

use crate::exact::{Poly4, Rational, Scalar};

pub type PolyMat4<C> = [[Poly4<C>; 4]; 4];

pub fn add<C: Scalar>(a: &PolyMat4<C>, b: &PolyMat4<C>) -> PolyMat4<C> {
    std::array::from_fn(|r| std::array::from_fn(|c| &a[r][c] + &b[r][c]))
}

pub fn scale<C: Scalar>(a: &PolyMat4<C>, s: &C) -> PolyMat4<C> {
    std::array::from_fn(|r| std::array::from_fn(|c| a[r][c].scale(s)))
}

pub fn scale_rational<C: Scalar>(a: &PolyMat4<C>, s: &Rational) -> PolyMat4<C> {
    std::array::from_fn(|r| std::array::from_fn(|c| a[r][c].scale_rational(s)))
}

pub fn mul<C: Scalar>(a: &PolyMat4<C>, b: &PolyMat4<C>) -> PolyMat4<C> {
    std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let mut acc = Poly4::zero();
            for s in 0..4 {
                acc = &acc + &(&a[r][s] * &b[s][c]);
            }
            acc
        })
    })
}

pub fn trace<C: Scalar>(a: &PolyMat4<C>) -> Poly4<C> {
    let mut acc = Poly4::zero();
    for d in 0..4 {
        acc = &acc + &a[d][d];
    }
    acc
}

/// Characteristic polynomial coefficients of `det(y I - M)` by the
/// Faddeev-LeVerrier recurrence; `coeffs[i]` multiplies `y^i`, with
/// `coeffs[4] = 1`.
pub fn charpoly<C: Scalar>(m: &PolyMat4<C>) -> [Poly4<C>; 5] {
    let mut coeffs: [Poly4<C>; 5] = std::array::from_fn(|_| Poly4::zero());
    coeffs[4] = Poly4::one();
    let mut n = m.clone();
    let mut c_prev = trace(&n).scale_rational(&Rational::from_int(-1));
    coeffs[3] = c_prev.clone();
    for step in 2..=4u32 {
        // N_{step} = M (N_{step-1} + c_{step-1} I)
        let mut shifted = n.clone();
        for d in 0..4 {
            shifted[d][d] = &shifted[d][d] + &c_prev;
        }
        n = mul(m, &shifted);
        let c = trace(&n)
            .scale_rational(&Rational::from_parts((-1).into(), (step as i64).into()).unwrap());
        coeffs[4 - step as usize] = c.clone();
        c_prev = c;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Poly4Q;

    #[test]
    fn charpoly_of_diagonal_matrix() {
        // diag(a^2, b^2, 0, 0): det(y - M) = y^2 (y - a^2)(y - b^2)
        let mut m: PolyMat4<Rational> =
            std::array::from_fn(|_| std::array::from_fn(|_| Poly4::zero()));
        m[0][0] = Poly4::monomial([2, 0, 0, 0], Rational::one());
        m[1][1] = Poly4::monomial([0, 2, 0, 0], Rational::one());
        let p = charpoly(&m);
        let a2 = Poly4Q::monomial([2, 0, 0, 0], Rational::one());
        let b2 = Poly4Q::monomial([0, 2, 0, 0], Rational::one());
        assert_eq!(p[4], Poly4Q::one());
        assert_eq!(p[3], -&(&a2 + &b2));
        assert_eq!(p[2], &a2 * &b2);
        assert!(p[1].is_zero());
        assert!(p[0].is_zero());
    }
}
