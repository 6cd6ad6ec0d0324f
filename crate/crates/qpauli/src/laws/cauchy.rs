//! Cauchy transforms: closed-form numeric evaluation and exact formal
//! `1/xi` expansions.
//!
//! Branch conventions: principal square root and logarithm everywhere, with
//! `arcsinh(z) = log(z + sqrt(1 + z^2))`; the upper half-plane is the
//! canonical evaluation domain. For the four-way interpolant only the
//! derivative of the transform has a closed form, so its evaluator and
//! series produce `G'`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{comb, FormalSeries, Rational, SeriesT, TPoly};
use crate::laws::{VariableKind, VariableSpec};

/// Principal square root, rejecting arguments on the cut `(-inf, 0)`.
fn checked_sqrt(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::BranchCut);
    }
    Ok(z.sqrt())
}

/// Principal logarithm, rejecting arguments on the cut `(-inf, 0]`.
fn checked_ln(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::BranchCut);
    }
    Ok(z.ln())
}

fn arcsinh(z: Complex64) -> Result<Complex64> {
    checked_ln(z + checked_sqrt(Complex64::new(1.0, 0.0) + z * z)?)
}

/// `arcsinh(sqrt(x)/2)/sqrt(x)`: even in `sqrt(x)`, so the root may be
/// taken on either branch and only the cut of the arcsinh itself (real
/// `x <= -4`) survives; near zero the Maclaurin tail avoids cancellation.
fn arcsinh_ratio(x: Complex64) -> Result<Complex64> {
    if x.norm() < 1e-4 {
        let c0 = Complex64::new(1.0, 0.0);
        return Ok(0.5 * (c0 - x / 24.0 + x * x * (3.0 / 640.0)));
    }
    let w = x.sqrt();
    Ok(arcsinh(0.5 * w)? / w)
}

/// Closed-form Cauchy transform at a complex point; for the four-way
/// interpolant this evaluates `G'` instead.
pub fn cauchy_closed(spec: &VariableSpec, xi: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let singular = |d: Complex64| d.norm() == 0.0;
    match spec.kind {
        VariableKind::M1 => {
            let d = xi * xi - xi;
            if singular(d) {
                return Err(Error::BranchCut);
            }
            Ok(one / xi + one / (4.0 * d))
        }
        VariableKind::M2 => {
            if singular(xi) {
                return Err(Error::BranchCut);
            }
            Ok(0.5 * (one / xi - checked_ln(one - one / xi)?))
        }
        VariableKind::M4 => {
            if singular(xi) {
                return Err(Error::BranchCut);
            }
            Ok(2.0 * (one - checked_sqrt(one - one / xi)?))
        }
        VariableKind::Wt => {
            let t = spec.t_f64()?;
            let d = xi * xi - xi;
            if singular(d) {
                return Err(Error::BranchCut);
            }
            let x = (1.0 - t * t) / d;
            if singular(4.0 * one + x) {
                return Err(Error::BranchCut);
            }
            // arcsinh(sqrt(x)/2)/sqrt(4x + x^2) continued as the pairing
            // arcsinh_ratio(x) / sqrt(4 + x)
            let factor = arcsinh_ratio(x)? / checked_sqrt(4.0 * one + x)?;
            Ok(0.5 / xi + ((one - 2.0 * xi) / (-d)) * factor)
        }
        VariableKind::Vt => {
            let t = spec.t_f64()?;
            let s = 1.0 - t * t;
            let d = xi * xi - xi * xi * xi;
            let q = xi - xi * xi;
            let denom = q - s / 4.0;
            if singular(d) || singular(denom) {
                return Err(Error::BranchCut);
            }
            let root = checked_sqrt(q / denom)?;
            Ok(0.5 * (2.0 * xi - one) / d * root)
        }
        VariableKind::M3 | VariableKind::N3 => Err(Error::NoClosedForm(
            "Cauchy transform of M3/N3 (only moments are available)",
        )),
    }
}

fn u_monomial(order: usize, n: usize) -> SeriesT {
    FormalSeries::monomial(order, n, TPoly::one())
}

fn rational_series(order: usize, f: impl Fn(usize) -> Rational) -> SeriesT {
    FormalSeries::from_coeffs((0..=order).map(|n| TPoly::constant(f(n))).collect())
}

fn one_minus_t_squared() -> TPoly {
    let t = TPoly::var();
    &TPoly::one() - &(&t * &t)
}

/// Exact `1/xi` expansion of the closed-form transform, with coefficients
/// polynomial in `t` where the variable carries the parameter. For the
/// four-way interpolant the expansion is that of `G'`.
pub fn cauchy_series(kind: VariableKind, order: usize) -> Result<SeriesT> {
    let one = FormalSeries::one(order);
    let u = u_monomial(order, 1);
    match kind {
        VariableKind::M1 => {
            // u + u^2/4 * 1/(1-u)
            let geo = one.sub(&u).inv()?;
            Ok(u.add(
                &u_monomial(order, 2)
                    .scale_rational(&Rational::new(1, 4))
                    .mul(&geo),
            ))
        }
        VariableKind::M2 => {
            // (u - log(1-u)) / 2
            let log = one.sub(&u).log()?;
            Ok(u.sub(&log).scale_rational(&Rational::new(1, 2)))
        }
        VariableKind::M4 => {
            // 2 (1 - sqrt(1-u))
            let root = one.sub(&u).sqrt()?;
            Ok(one.sub(&root).scale_rational(&Rational::from_int(2)))
        }
        VariableKind::Wt => {
            // x = (1-t^2) u^2 / (1-u), of valuation 2
            let x = FormalSeries::monomial(order, 2, one_minus_t_squared())
                .mul(&one.sub(&u).inv()?);
            // S(x) = sum (-1)^n (2n)!/(16^n (n!)^2 (2n+1)) x^n, so that
            // arcsinh(sqrt(x)/2)/sqrt(4x+x^2) = S(x) / (4 sqrt(1+x/4))
            let s_outer = rational_series(order, |n| {
                let num = comb::factorial(2 * n as u64);
                let den = num_bigint::BigInt::from(16).pow(n as u32)
                    * comb::factorial(n as u64).pow(2)
                    * num_bigint::BigInt::from(2 * n as u64 + 1);
                let c = Rational::from_parts(num, den).expect("positive denominator");
                if n % 2 == 1 {
                    -c
                } else {
                    c
                }
            });
            let s_of_x = s_outer.compose(&x)?;
            let inv_root = one
                .add(&x.scale_rational(&Rational::new(1, 4)))
                .sqrt()?
                .inv()?;
            // A(u) = u (u - 2) / (u - 1), the series of (1-2xi)/(xi-xi^2)
            let two = one.scale_rational(&Rational::from_int(2));
            let a = u.mul(&u.sub(&two)).mul(&u.sub(&one).inv()?);
            Ok(u.scale_rational(&Rational::new(1, 2)).add(
                &a.mul(&s_of_x)
                    .mul(&inv_root)
                    .scale_rational(&Rational::new(1, 4)),
            ))
        }
        VariableKind::Vt => {
            // G' = 1/2 * u^2 (2-u)/(u-1) * sqrt((u-1)/(u-1-s u^2/4))
            let u_minus_one = u.sub(&one);
            let denom = u_minus_one.sub(&FormalSeries::monomial(
                order,
                2,
                one_minus_t_squared().scale(&Rational::new(1, 4)),
            ));
            let root = u_minus_one.mul(&denom.inv()?).sqrt()?;
            let two = one.scale_rational(&Rational::from_int(2));
            let front = u_monomial(order, 2)
                .mul(&two.sub(&u))
                .mul(&u_minus_one.inv()?);
            Ok(front.mul(&root).scale_rational(&Rational::new(1, 2)))
        }
        VariableKind::M3 | VariableKind::N3 => Err(Error::NoClosedForm(
            "Cauchy series of M3/N3 (only moments are available)",
        )),
    }
}

/// The two-by-two block expansion: the Cauchy transform of a random matrix
/// with characteristic polynomial `y^2 - B y + C`, from the exact joint
/// moments `m(q, p) = integral of B^q C^p`:
/// `1/xi + 1/(2 xi) sum_{p+q>0} (-1)^p xi^{-2p-q} (2p+q)/(p+q) C(p+q, q) m(q, p)`.
pub fn lemma71_series<F>(joint_moment: F, order: usize) -> SeriesT
where
    F: Fn(u32, u32) -> TPoly,
{
    let mut coeffs = vec![TPoly::zero(); order + 1];
    if order >= 1 {
        coeffs[1] = TPoly::one();
    }
    for p in 0u32.. {
        if 2 * p as usize + 1 > order {
            break;
        }
        for q in 0u32.. {
            let power = 2 * p as usize + q as usize + 1;
            if power > order {
                break;
            }
            if p + q == 0 {
                continue;
            }
            let front = Rational::from_parts(((2 * p + q) as i64).into(), ((p + q) as i64).into())
                .expect("p+q > 0")
                * Rational::from_bigint(comb::binomial((p + q) as u64, q as u64))
                * Rational::new(1, 2);
            let signed = if p % 2 == 1 { -front } else { front };
            let term = joint_moment(q, p).scale(&signed);
            coeffs[power] = &coeffs[power] + &term;
        }
    }
    FormalSeries::from_coeffs(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Poly4, Poly4T};
    use crate::haar::integrate_poly;
    use crate::laws::exact_moments_up_to;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn spec_t(kind: VariableKind, num: i64, den: i64) -> VariableSpec {
        VariableSpec::new(kind, Some(q(num, den))).unwrap()
    }

    #[test]
    fn g4_at_two() {
        let spec = VariableSpec::plain(VariableKind::M4);
        let v = cauchy_closed(&spec, Complex64::new(2.0, 0.0)).unwrap();
        let expected = 2.0 * (1.0 - (0.5f64).sqrt());
        assert!((v.re - expected).abs() < 1e-12);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn branch_cut_is_an_error() {
        let spec = VariableSpec::plain(VariableKind::M4);
        // inside the support, exactly on the real axis
        assert!(matches!(
            cauchy_closed(&spec, Complex64::new(0.5, 0.0)),
            Err(Error::BranchCut)
        ));
        assert!(cauchy_closed(&spec, Complex64::new(0.5, 1e-9)).is_ok());
        let m3 = VariableSpec::plain(VariableKind::M3);
        assert!(matches!(
            cauchy_closed(&m3, Complex64::new(2.0, 0.0)),
            Err(Error::NoClosedForm(_))
        ));
    }

    fn sample_points() -> Vec<Complex64> {
        vec![
            Complex64::new(2.0, 0.7),
            Complex64::new(-1.3, 2.0),
            Complex64::new(0.5, 3.0),
            Complex64::new(3.0, -0.4),
            Complex64::new(-0.2, 0.9),
        ]
    }

    #[test]
    fn wt_collapses_to_g2_and_g1() {
        for xi in sample_points() {
            let w0 = cauchy_closed(&spec_t(VariableKind::Wt, 0, 1), xi).unwrap();
            let g2 = cauchy_closed(&VariableSpec::plain(VariableKind::M2), xi).unwrap();
            assert!((w0 - g2).norm() < 1e-12, "t=0 xi={xi}");
            let w1 = cauchy_closed(&spec_t(VariableKind::Wt, 1, 1), xi).unwrap();
            let g1 = cauchy_closed(&VariableSpec::plain(VariableKind::M1), xi).unwrap();
            assert!((w1 - g1).norm() < 1e-12, "t=1 xi={xi}");
        }
    }

    #[test]
    fn closed_forms_match_series_numerically() {
        // at moderately large |xi| the truncated series pins both the closed
        // forms and their branch choices
        let xi = Complex64::new(3.0, 1.5);
        let u = 1.0 / xi;
        for kind in [VariableKind::M1, VariableKind::M2, VariableKind::M4] {
            let series = cauchy_series(kind, 40).unwrap();
            let closed = cauchy_closed(&VariableSpec::plain(kind), xi).unwrap();
            assert!(
                (series.eval_complex(u, 0.0) - closed).norm() < 1e-13,
                "{kind}"
            );
        }
        for t in [q(0, 1), q(3, 10), q(9, 10), q(1, 1)] {
            let tf = t.to_f64();
            let wt = VariableSpec::new(VariableKind::Wt, Some(t.clone())).unwrap();
            let series = cauchy_series(VariableKind::Wt, 40).unwrap();
            let closed = cauchy_closed(&wt, xi).unwrap();
            assert!(
                (series.eval_complex(u, tf) - closed).norm() < 1e-13,
                "wt t={tf}"
            );
            let vt = VariableSpec::new(VariableKind::Vt, Some(t)).unwrap();
            let series = cauchy_series(VariableKind::Vt, 40).unwrap();
            let closed = cauchy_closed(&vt, xi).unwrap();
            assert!(
                (series.eval_complex(u, tf) - closed).norm() < 1e-13,
                "vt t={tf}"
            );
        }
    }

    #[test]
    fn wt_series_leading_coefficients() {
        let s = cauchy_series(VariableKind::Wt, 4).unwrap();
        assert!(s.coeff(0).is_zero());
        assert_eq!(s.coeff(1).as_constant().unwrap(), Rational::one());
        // mean of the interpolant is 1/4 identically in t
        assert_eq!(s.coeff(2).as_constant().unwrap(), q(1, 4));
    }

    #[test]
    fn vt_gprime_leading_coefficients() {
        let s = cauchy_series(VariableKind::Vt, 4).unwrap();
        assert!(s.coeff(0).is_zero());
        assert!(s.coeff(1).is_zero());
        assert_eq!(s.coeff(2).as_constant().unwrap(), q(-1, 1));
        // coefficient of xi^{-3} is -2 m_1 = -1/2
        assert_eq!(s.coeff(3).as_constant().unwrap(), q(-1, 2));
    }

    #[test]
    fn series_coefficients_are_moments() {
        // coefficient of u^{k+1} equals the k-th moment, identically in t
        let order = 6usize;
        let s = cauchy_series(VariableKind::Wt, order + 1).unwrap();
        let moments = exact_moments_up_to(VariableKind::Wt, order as u32, 12).unwrap();
        for k in 1..=order {
            assert_eq!(s.coeff(k + 1), &moments[k - 1], "wt k={k}");
        }
        // for the derivative series: coefficient of u^{k+2} is -(k+1) m_k
        let dv = cauchy_series(VariableKind::Vt, order + 2).unwrap();
        let vmoments = exact_moments_up_to(VariableKind::Vt, order as u32, 12).unwrap();
        for k in 1..=order {
            let expected = vmoments[k - 1].scale(&Rational::from_int(-(k as i64 + 1)));
            assert_eq!(dv.coeff(k + 2), &expected, "vt k={k}");
        }
    }

    #[test]
    fn endpoint_collapse_at_series_level() {
        let order = 10;
        let wt = cauchy_series(VariableKind::Wt, order).unwrap();
        let g2 = cauchy_series(VariableKind::M2, order).unwrap();
        let g1 = cauchy_series(VariableKind::M1, order).unwrap();
        for n in 0..=order {
            assert_eq!(
                wt.coeff(n).eval(&Rational::zero()),
                g2.coeff(n).as_constant().unwrap()
            );
            assert_eq!(
                wt.coeff(n).eval(&Rational::one()),
                g1.coeff(n).as_constant().unwrap()
            );
        }
        let vt = cauchy_series(VariableKind::Vt, order).unwrap();
        let dg2 = g2.xi_derivative().truncate(order);
        let dg4 = cauchy_series(VariableKind::M4, order)
            .unwrap()
            .xi_derivative()
            .truncate(order);
        for n in 0..=order {
            assert_eq!(
                vt.coeff(n).eval(&Rational::one()),
                dg2.coeff(n).as_constant().unwrap()
            );
            assert_eq!(
                vt.coeff(n).eval(&Rational::zero()),
                dg4.coeff(n).as_constant().unwrap()
            );
        }
    }

    #[test]
    fn lemma71_deterministic_blocks() {
        // B = 1, C = 0: eigenvalues 0 and 1, G = (1/xi + 1/(xi-1))/2
        let order = 12;
        let s = lemma71_series(
            |_q_pow, p_pow| {
                if p_pow == 0 {
                    TPoly::one()
                } else {
                    TPoly::zero()
                }
            },
            order,
        );
        for n in 0..=order {
            let expected = match n {
                0 => Rational::zero(),
                1 => Rational::one(),
                _ => q(1, 2),
            };
            assert_eq!(s.coeff(n).as_constant().unwrap(), expected, "n={n}");
        }

        // B = 0, C = -1: eigenvalues +-1, G = xi/(xi^2-1)
        let s = lemma71_series(
            |q_pow, p_pow| {
                if q_pow == 0 {
                    TPoly::constant(if p_pow % 2 == 1 {
                        Rational::from_int(-1)
                    } else {
                        Rational::one()
                    })
                } else {
                    TPoly::zero()
                }
            },
            order,
        );
        for n in 0..=order {
            let expected = if n % 2 == 1 {
                Rational::one()
            } else {
                Rational::zero()
            };
            assert_eq!(s.coeff(n).as_constant().unwrap(), expected, "n={n}");
        }
    }

    #[test]
    fn lemma71_matches_vt_block() {
        // B = a^2 + b^2, C = (1-t^2) a^2 b^2: the first block of the
        // four-way interpolant; differentiating its transform must match
        // the closed-form G' series
        let order = 9;
        let s_param = one_minus_t_squared();
        let joint = |q_pow: u32, p_pow: u32| -> TPoly {
            let ab: Poly4T = &Poly4::monomial([2, 0, 0, 0], TPoly::one())
                + &Poly4::monomial([0, 2, 0, 0], TPoly::one());
            let a2b2: Poly4T = Poly4::monomial([2, 2, 0, 0], TPoly::one());
            let poly = &ab.pow(q_pow) * &a2b2.pow(p_pow);
            let mut sp = TPoly::one();
            for _ in 0..p_pow {
                sp = &sp * &s_param;
            }
            &integrate_poly(&poly) * &sp
        };
        let g = lemma71_series(joint, order);
        let gprime = g.xi_derivative().truncate(order);
        let closed = cauchy_series(VariableKind::Vt, order).unwrap();
        for n in 0..=order {
            assert_eq!(gprime.coeff(n), closed.coeff(n), "n={n}");
        }
    }
}
