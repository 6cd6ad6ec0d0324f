//! Spectral laws of the diagonal-coordinate variables: exact moments,
//! closed spectral laws, Cauchy transforms, numerical Stieltjes inversion,
//! and Monte Carlo cross-checks.

pub mod cauchy;
pub mod density;
pub mod identities;
pub mod mc;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::exact::{Poly4, Rational, TPoly};
use crate::haar::integrate_poly;
use crate::nc::catalan;
use crate::pauli::{projection_matrix, PauliIndex};
use crate::polymat::{self, PolyMat4};

/// The diagonal-coordinate variables whose laws the crate computes.
///
/// `M_s` is the average of the first `s` diagonal generators under the
/// normalized trace; `N3 = 3 M3`; `w_t` interpolates `M2 -> M1` and `v_t`
/// interpolates `M4 -> M2` as `t` runs from 0 to 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VariableKind {
    M1,
    M2,
    M3,
    M4,
    N3,
    Wt,
    Vt,
}

impl VariableKind {
    pub fn requires_t(self) -> bool {
        matches!(self, VariableKind::Wt | VariableKind::Vt)
    }

    pub fn name(self) -> &'static str {
        match self {
            VariableKind::M1 => "m1",
            VariableKind::M2 => "m2",
            VariableKind::M3 => "m3",
            VariableKind::M4 => "m4",
            VariableKind::N3 => "n3",
            VariableKind::Wt => "wt",
            VariableKind::Vt => "vt",
        }
    }

    /// Default cap on exact moment orders: the ninth power of the trace-one
    /// interpolant already expands to degree-18 polynomials.
    pub fn moment_order_cap(self) -> u32 {
        match self {
            VariableKind::M3 | VariableKind::N3 => 9,
            _ => 12,
        }
    }
}

impl fmt::Display for VariableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VariableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m1" => Ok(VariableKind::M1),
            "m2" => Ok(VariableKind::M2),
            "m3" => Ok(VariableKind::M3),
            "m4" => Ok(VariableKind::M4),
            "n3" => Ok(VariableKind::N3),
            "wt" => Ok(VariableKind::Wt),
            "vt" => Ok(VariableKind::Vt),
            other => Err(Error::InvalidArgument(format!(
                "unknown variable {other:?} (expected m1|m2|m3|m4|n3|wt|vt)"
            ))),
        }
    }
}

/// A variable together with its parameter value, where one is required.
#[derive(Clone, Debug)]
pub struct VariableSpec {
    pub kind: VariableKind,
    pub t: Option<Rational>,
}

impl VariableSpec {
    pub fn new(kind: VariableKind, t: Option<Rational>) -> Result<Self> {
        if kind.requires_t() && t.is_none() {
            return Err(Error::MissingParameter(kind.name()));
        }
        Ok(VariableSpec { kind, t })
    }

    pub fn plain(kind: VariableKind) -> Self {
        VariableSpec { kind, t: None }
    }

    pub fn t_value(&self) -> Result<&Rational> {
        self.t
            .as_ref()
            .ok_or(Error::MissingParameter(self.kind.name()))
    }

    pub fn t_f64(&self) -> Result<f64> {
        Ok(self.t_value()?.to_f64())
    }
}

fn lifted_projection(i: u8, j: u8) -> PolyMat4<TPoly> {
    let p = projection_matrix(PauliIndex::new(i), PauliIndex::new(j));
    std::array::from_fn(|r| std::array::from_fn(|c| p[r][c].lift()))
}

/// The model matrix with `t` kept symbolic.
pub fn model_matrix_symbolic(kind: VariableKind) -> PolyMat4<TPoly> {
    let pi = lifted_projection;
    let half = Rational::new(1, 2);
    let third = Rational::new(1, 3);
    let quarter = Rational::new(1, 4);
    match kind {
        VariableKind::M1 => pi(1, 1),
        VariableKind::M2 => polymat::scale_rational(&polymat::add(&pi(1, 1), &pi(2, 2)), &half),
        VariableKind::M3 => polymat::scale_rational(&n3_matrix(), &third),
        VariableKind::N3 => n3_matrix(),
        VariableKind::M4 => {
            let sum = polymat::add(
                &polymat::add(&pi(1, 1), &pi(2, 2)),
                &polymat::add(&pi(3, 3), &pi(4, 4)),
            );
            polymat::scale_rational(&sum, &quarter)
        }
        VariableKind::Wt => {
            let t = TPoly::var();
            let plus = (&TPoly::one() + &t).scale(&half);
            let minus = (&TPoly::one() - &t).scale(&half);
            polymat::add(
                &polymat::scale(&pi(1, 1), &plus),
                &polymat::scale(&pi(2, 2), &minus),
            )
        }
        VariableKind::Vt => {
            let t = TPoly::var();
            let plus = (&TPoly::one() + &t).scale(&quarter);
            let minus = (&TPoly::one() - &t).scale(&quarter);
            polymat::add(
                &polymat::scale(&polymat::add(&pi(1, 1), &pi(2, 2)), &plus),
                &polymat::scale(&polymat::add(&pi(3, 3), &pi(4, 4)), &minus),
            )
        }
    }
}

fn n3_matrix() -> PolyMat4<TPoly> {
    polymat::add(
        &polymat::add(&lifted_projection(2, 2), &lifted_projection(3, 3)),
        &lifted_projection(4, 4),
    )
}

/// The model matrix at the spec's parameter value.
pub fn model_matrix(spec: &VariableSpec) -> Result<PolyMat4<TPoly>> {
    let sym = model_matrix_symbolic(spec.kind);
    if !spec.kind.requires_t() {
        return Ok(sym);
    }
    let t = spec.t_value()?;
    Ok(std::array::from_fn(|r| {
        std::array::from_fn(|c| sym[r][c].map_coeffs(|p| TPoly::constant(p.eval(t))))
    }))
}

/// Exact moments `integral of tr(M^j)` for `j = 1..=kmax`, as polynomials
/// in `t` (constant for the `t`-free variables). The normalized-trace
/// convention (matrix trace over 4) applies throughout.
pub fn exact_moments_up_to(kind: VariableKind, kmax: u32, cap: u32) -> Result<Vec<TPoly>> {
    if kmax > cap {
        return Err(Error::OrderOutOfRange {
            k: kmax as usize,
            limit: cap as usize,
        });
    }
    let m = model_matrix_symbolic(kind);
    let quarter = Rational::new(1, 4);
    let mut power = m.clone();
    let mut out = Vec::with_capacity(kmax as usize);
    for j in 1..=kmax {
        if j > 1 {
            power = polymat::mul(&power, &m);
        }
        let tr = polymat::trace(&power).scale_rational(&quarter);
        out.push(integrate_poly(&tr));
    }
    Ok(out)
}

/// Exact `k`-th moment under the default order cap.
pub fn exact_moment(kind: VariableKind, k: u32) -> Result<TPoly> {
    let mut v = exact_moments_up_to(kind, k, kind.moment_order_cap())?;
    v.pop().ok_or(Error::OrderOutOfRange { k: 0, limit: 0 })
}

/// Exact `k`-th moment evaluated at the spec's parameter.
pub fn exact_moment_value(spec: &VariableSpec, k: u32) -> Result<Rational> {
    let sym = exact_moment(spec.kind, k)?;
    match (&spec.t, sym.as_constant()) {
        (_, Some(c)) => Ok(c),
        (Some(t), None) => Ok(sym.eval(t)),
        (None, None) => Err(Error::MissingParameter(spec.kind.name())),
    }
}

/// Characteristic polynomial `det(y I - M)` with coefficients reduced
/// modulo the unit-sphere relation; `coeffs[i]` multiplies `y^i`.
pub fn charpoly(kind: VariableKind) -> [Poly4<TPoly>; 5] {
    let m = model_matrix_symbolic(kind);
    let raw = polymat::charpoly(&m);
    std::array::from_fn(|i| raw[i].reduce_sphere())
}

/// Continuous parts that appear in the closed spectral laws.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ContinuousPart {
    None,
    /// Lebesgue measure on `[0, 1]`.
    Lebesgue01,
    /// Free Poisson law compressed to `[0, 1]`, density `2/pi sqrt(1/x - 1)`.
    FreePoisson01,
}

/// Spectral law with exact atoms and an optional named continuous part.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralLaw {
    pub atoms: Vec<(Rational, Rational)>,
    pub continuous: ContinuousPart,
    pub continuous_weight: Rational,
}

impl SpectralLaw {
    pub fn total_mass(&self) -> Rational {
        let mut acc = self.continuous_weight.clone();
        for (_, w) in &self.atoms {
            acc += w;
        }
        acc
    }

    /// `k`-th moment; `k = 0` returns the total mass.
    pub fn moment(&self, k: u32) -> Rational {
        let mut acc = Rational::zero();
        for (x, w) in &self.atoms {
            if k == 0 {
                acc += w;
            } else {
                acc += &(w * &x.powi(k));
            }
        }
        let cont = match self.continuous {
            ContinuousPart::None => Rational::zero(),
            ContinuousPart::Lebesgue01 => {
                Rational::from_parts(1.into(), (k as i64 + 1).into()).unwrap()
            }
            ContinuousPart::FreePoisson01 => {
                Rational::from_bigint(catalan(k as usize)) * Rational::new(1, 4).powi(k)
            }
        };
        acc + &self.continuous_weight * &cont
    }
}

/// The closed laws `(1 - s/4) delta_0 + (s/4) mu_s` for `s = 1, 2, 4`, with
/// `mu_1 = delta_1`, `mu_2` Lebesgue on `[0,1]`, `mu_4` the compressed free
/// Poisson law. There is no closed form for `s = 3`.
pub fn theorem51_law(s: u32) -> Result<SpectralLaw> {
    match s {
        1 => Ok(SpectralLaw {
            atoms: vec![
                (Rational::zero(), Rational::new(3, 4)),
                (Rational::one(), Rational::new(1, 4)),
            ],
            continuous: ContinuousPart::None,
            continuous_weight: Rational::zero(),
        }),
        2 => Ok(SpectralLaw {
            atoms: vec![(Rational::zero(), Rational::new(1, 2))],
            continuous: ContinuousPart::Lebesgue01,
            continuous_weight: Rational::new(1, 2),
        }),
        4 => Ok(SpectralLaw {
            atoms: Vec::new(),
            continuous: ContinuousPart::FreePoisson01,
            continuous_weight: Rational::one(),
        }),
        3 => Err(Error::NoClosedForm(
            "the law of M3 (only moments are available)",
        )),
        other => Err(Error::InvalidArgument(format!(
            "s must be one of 1, 2, 4 (got {other})"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Poly4T;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn tmono(e: [u16; 4], c: Rational) -> Poly4T {
        Poly4::monomial(e, TPoly::constant(c))
    }

    #[test]
    fn m4_is_diagonal_of_squares() {
        let m = model_matrix_symbolic(VariableKind::M4);
        for r in 0..4 {
            for c in 0..4 {
                if r == c {
                    let mut e = [0u16; 4];
                    e[r] = 2;
                    assert_eq!(m[r][c], tmono(e, Rational::one()));
                } else {
                    assert!(m[r][c].is_zero(), "off-diagonal ({r},{c})");
                }
            }
        }
    }

    #[test]
    fn m2_is_block_diagonal() {
        let m = model_matrix_symbolic(VariableKind::M2);
        assert_eq!(m[0][1], tmono([1, 1, 0, 0], Rational::one()));
        assert!(m[0][2].is_zero());
        assert!(m[0][3].is_zero());
        assert!(m[1][2].is_zero());
        assert_eq!(m[2][3], tmono([0, 0, 1, 1], Rational::one()));
    }

    #[test]
    fn n3_matches_displayed_matrix() {
        let m = model_matrix_symbolic(VariableKind::N3);
        assert_eq!(m[0][0], tmono([2, 0, 0, 0], q(3, 1)));
        assert_eq!(m[0][1], tmono([1, 1, 0, 0], q(-1, 1)));
        assert_eq!(m[0][2], tmono([1, 0, 1, 0], q(-1, 1)));
        assert_eq!(m[2][3], tmono([0, 0, 1, 1], q(-1, 1)));
        assert_eq!(m[3][3], tmono([0, 0, 0, 2], q(3, 1)));
    }

    #[test]
    fn w1_collapses_to_pi11() {
        let spec = VariableSpec::new(VariableKind::Wt, Some(Rational::one())).unwrap();
        let m = model_matrix(&spec).unwrap();
        let p11 = lifted_projection(1, 1);
        assert_eq!(m, p11);
        assert!(VariableSpec::new(VariableKind::Wt, None).is_err());
    }

    #[test]
    fn n3_moment_table() {
        let moments = exact_moments_up_to(VariableKind::N3, 9, 9).unwrap();
        let expected = [
            q(3, 4),
            q(5, 4),
            q(5, 2),
            q(109, 20),
            q(25, 2),
            q(4157, 140),
            q(1449, 20),
            q(75877, 420),
            q(64223, 140),
        ];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(
                moments[i].as_constant().unwrap(),
                e.clone(),
                "moment {}",
                i + 1
            );
        }
    }

    #[test]
    fn first_moments_pin_normalization() {
        assert_eq!(
            exact_moment(VariableKind::M2, 2).unwrap().as_constant().unwrap(),
            q(1, 6)
        );
        assert_eq!(
            exact_moment(VariableKind::M3, 2).unwrap().as_constant().unwrap(),
            q(5, 36)
        );
        assert!(matches!(
            exact_moment(VariableKind::N3, 10),
            Err(Error::OrderOutOfRange { .. })
        ));
    }

    #[test]
    fn theorem51_moments() {
        for k in 1..=10 {
            assert_eq!(theorem51_law(1).unwrap().moment(k), q(1, 4));
            assert_eq!(
                theorem51_law(2).unwrap().moment(k),
                Rational::from_parts(1.into(), (2 * (k as i64 + 1)).into()).unwrap()
            );
            assert_eq!(
                theorem51_law(4).unwrap().moment(k),
                Rational::from_bigint(catalan(k as usize)) * q(1, 4).powi(k)
            );
        }
        for s in [1, 2, 4] {
            assert_eq!(theorem51_law(s).unwrap().total_mass(), Rational::one());
        }
        assert!(matches!(
            theorem51_law(3),
            Err(Error::NoClosedForm(_))
        ));
        assert!(theorem51_law(5).is_err());
    }

    #[test]
    fn exact_moments_match_closed_laws() {
        for (kind, s) in [
            (VariableKind::M1, 1),
            (VariableKind::M2, 2),
            (VariableKind::M4, 4),
        ] {
            let law = theorem51_law(s).unwrap();
            let moments = exact_moments_up_to(kind, 10, 12).unwrap();
            for (i, m) in moments.iter().enumerate() {
                assert_eq!(
                    m.as_constant().unwrap(),
                    law.moment(i as u32 + 1),
                    "s={s} k={}",
                    i + 1
                );
            }
        }
    }

    #[test]
    fn prop62_moments_differ() {
        // second moment of M3 vs the naive mixture (3/4) law(a^2+b^2+c^2)
        let m3 = exact_moment(VariableKind::M3, 2).unwrap().as_constant().unwrap();
        assert_eq!(m3, q(5, 36));
        let mut p = Poly4::<Rational>::zero();
        for axis in 0..3 {
            let v = Poly4::<Rational>::var(axis);
            p = &p + &(&v * &v);
        }
        let mixture = q(3, 4) * integrate_poly(&p.pow(2));
        assert_eq!(mixture, q(15, 32));
        assert_ne!(m3, mixture);
    }

    #[test]
    fn charpoly_m3_displayed_form() {
        let p = charpoly(VariableKind::M3);
        assert_eq!(p[4], Poly4::one());
        assert_eq!(p[3], -&Poly4::one());
        // K = 8/9 (a^2b^2 + a^2c^2 + a^2d^2 + b^2c^2 + b^2d^2 + c^2d^2)
        let mut k_expected = Poly4T::zero();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mut e = [0u16; 4];
                e[i] = 2;
                e[j] = 2;
                k_expected = &k_expected + &tmono(e, q(8, 9));
            }
        }
        assert_eq!(p[2], k_expected.reduce_sphere());
        // L = 16/27 (a^2b^2c^2 + a^2b^2d^2 + a^2c^2d^2 + b^2c^2d^2)
        let mut l_expected = Poly4T::zero();
        for skip in 0..4 {
            let mut e = [2u16; 4];
            e[skip] = 0;
            l_expected = &l_expected + &tmono(e, q(16, 27));
        }
        assert_eq!(p[1], -&l_expected.reduce_sphere());
        assert!(p[0].is_zero());
    }

    #[test]
    fn charpoly_wt_displayed_form() {
        // y^2 (y^2 - y + (1-t^2)(a^2+b^2)(c^2+d^2))
        let p = charpoly(VariableKind::Wt);
        assert!(p[0].is_zero());
        assert!(p[1].is_zero());
        assert_eq!(p[3], -&Poly4::one());
        let s = &TPoly::one() - &(&TPoly::var() * &TPoly::var());
        let ab: Poly4T = &Poly4::monomial([2, 0, 0, 0], TPoly::one())
            + &Poly4::monomial([0, 2, 0, 0], TPoly::one());
        let cd: Poly4T = &Poly4::monomial([0, 0, 2, 0], TPoly::one())
            + &Poly4::monomial([0, 0, 0, 2], TPoly::one());
        let expected = (&ab * &cd).scale(&s);
        assert_eq!(p[2], expected.reduce_sphere());
    }

    #[test]
    fn charpoly_vt_is_product_of_blocks() {
        // Q1(y) = y^2 - (a^2+b^2) y + (1-t^2) a^2 b^2, Q2 the c,d analogue
        let p = charpoly(VariableKind::Vt);
        let s = &TPoly::one() - &(&TPoly::var() * &TPoly::var());
        let q1 = [
            Poly4::monomial([2, 2, 0, 0], s.clone()),
            -&(&Poly4::monomial([2, 0, 0, 0], TPoly::one())
                + &Poly4::monomial([0, 2, 0, 0], TPoly::one())),
            Poly4T::one(),
        ];
        let q2 = [
            Poly4::monomial([0, 0, 2, 2], s.clone()),
            -&(&Poly4::monomial([0, 0, 2, 0], TPoly::one())
                + &Poly4::monomial([0, 0, 0, 2], TPoly::one())),
            Poly4T::one(),
        ];
        // multiply the two quadratics in y
        let mut product: [Poly4T; 5] = std::array::from_fn(|_| Poly4::zero());
        for (i, a) in q1.iter().enumerate() {
            for (j, b) in q2.iter().enumerate() {
                product[i + j] = &product[i + j] + &(a * b);
            }
        }
        for i in 0..5 {
            assert_eq!(p[i], product[i].reduce_sphere(), "coefficient of y^{i}");
        }
    }

    #[test]
    fn wt_moment_is_quarter_at_order_one() {
        let m1 = exact_moment(VariableKind::Wt, 1).unwrap();
        assert_eq!(m1.as_constant().unwrap(), q(1, 4));
        let vt1 = exact_moment(VariableKind::Vt, 1).unwrap();
        assert_eq!(vt1.as_constant().unwrap(), q(1, 4));
    }

    #[test]
    fn wt_endpoints_match_m_variables() {
        for k in 1..=6u32 {
            let wt = exact_moment(VariableKind::Wt, k).unwrap();
            let m2 = exact_moment(VariableKind::M2, k).unwrap().as_constant().unwrap();
            let m1 = exact_moment(VariableKind::M1, k).unwrap().as_constant().unwrap();
            assert_eq!(wt.eval(&Rational::zero()), m2);
            assert_eq!(wt.eval(&Rational::one()), m1);
            let vt = exact_moment(VariableKind::Vt, k).unwrap();
            let m4 = exact_moment(VariableKind::M4, k).unwrap().as_constant().unwrap();
            assert_eq!(vt.eval(&Rational::zero()), m4);
            assert_eq!(vt.eval(&Rational::one()), m2);
        }
    }
}
