//! Named verification suites behind the `verify` subcommand: exact checks
//! with pass/fail results and timings.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::haar::seeded_rng;
use crate::laws::cauchy::{cauchy_closed, cauchy_series};
use crate::laws::{exact_moments_up_to, identities, theorem51_law, VariableKind, VariableSpec};
use crate::nc::{catalan, enumerate_nc};
use crate::pauli::{expand_cxc, pauli_product, PauliIndex, SignedPauli};
use crate::s4;
use crate::tensor::{
    apply_r, apply_r_star, c_p_vector, e_via_integration, fixed_point_projection, omega,
    scalar_product, MultiIndex, PauliTensor,
};
use crate::weingarten::{gram, verify_faithfulness};

/// Result of one named check.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

fn run_check(name: &str, checks: &mut Vec<Check>, f: impl FnOnce() -> Result<String>) {
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(detail) => (true, detail),
        Err(e) => (false, e.to_string()),
    };
    checks.push(Check {
        name: name.to_string(),
        passed,
        detail,
        elapsed: start.elapsed(),
    });
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Suite {
    Algebra,
    Faithfulness,
    Laws,
    Identities,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "algebra" => Ok(Suite::Algebra),
            "faithfulness" => Ok(Suite::Faithfulness),
            "laws" => Ok(Suite::Laws),
            "identities" => Ok(Suite::Identities),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!(
                "unknown suite {other:?} (expected algebra|faithfulness|laws|identities|all)"
            ))),
        }
    }
}

/// Runs the selected suite; `max_k` bounds every order-indexed family.
pub fn run_suite(suite: Suite, max_k: usize) -> Vec<Check> {
    let mut checks = Vec::new();
    match suite {
        Suite::Algebra => algebra_suite(max_k, &mut checks),
        Suite::Faithfulness => faithfulness_suite(max_k, &mut checks),
        Suite::Laws => laws_suite(&mut checks),
        Suite::Identities => identities_suite(&mut checks),
        Suite::All => {
            algebra_suite(max_k, &mut checks);
            faithfulness_suite(max_k, &mut checks);
            laws_suite(&mut checks);
            identities_suite(&mut checks);
        }
    }
    checks
}

/// Renders the pass/fail table.
pub fn format_table(checks: &[Check]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(5);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  {:<6}  {:>9}  detail", "check", "status", "time");
    for c in checks {
        let _ = writeln!(
            out,
            "{:<width$}  {:<6}  {:>7.2}ms  {}",
            c.name,
            if c.passed { "pass" } else { "FAIL" },
            c.elapsed.as_secs_f64() * 1e3,
            c.detail,
        );
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    let _ = writeln!(
        out,
        "{} checks, {} passed, {} failed",
        checks.len(),
        checks.len() - failed,
        failed
    );
    out
}

fn algebra_suite(max_k: usize, checks: &mut Vec<Check>) {
    run_check("pauli-sign-table", checks, || {
        for i in PauliIndex::ALL {
            for j in PauliIndex::ALL {
                for k in PauliIndex::ALL {
                    let left = pauli_product(i, j).mul(SignedPauli { sign: 1, index: k });
                    let right = SignedPauli { sign: 1, index: i }.mul(pauli_product(j, k));
                    ensure(left == right, || format!("associativity at ({i:?},{j:?},{k:?})"))?;
                }
                ensure(expand_cxc(i, j).is_signed_permutation(), || {
                    format!("expansion ({i:?},{j:?}) is not a signed permutation")
                })?;
            }
        }
        Ok("64 triples associative; 16 expansions are signed permutations".into())
    });

    let chain_k = max_k.min(6);
    run_check("r-chain-identity", checks, || {
        for k in 1..=chain_k {
            let lhs = apply_r(&c_p_vector(crate::nc::NCPartition::singletons(k).as_set()));
            let rhs = omega(&crate::nc::NCPartition::full(k));
            ensure(lhs == rhs, || format!("chain identity failed at k={k}"))?;
        }
        Ok(format!("R(c_0k) = 2 f12...f(k-1)k for k <= {chain_k}"))
    });

    run_check("r-kreweras-identity", checks, || {
        let mut count = 0usize;
        for k in 1..=chain_k {
            for p in enumerate_nc(k)? {
                let lhs = apply_r(&c_p_vector(p.as_set()));
                let rhs = omega(&p.kreweras());
                ensure(lhs == rhs, || format!("R(c_p) != omega(p^c) at k={k} p={p}"))?;
                count += 1;
            }
        }
        Ok(format!("R(c_p) = omega(p^c) on {count} partitions, k <= {chain_k}"))
    });

    let pair_k = max_k.min(4);
    run_check("r-pairing-law", checks, || {
        for k in 1..=pair_k {
            for i in MultiIndex::all(k) {
                let ri = apply_r(&PauliTensor::basis(i));
                let partners: Vec<MultiIndex> = PauliIndex::ALL
                    .into_iter()
                    .map(|s| crate::tensor::oplus(i, s))
                    .collect();
                for j in MultiIndex::all(k) {
                    let v = scalar_product(&ri, &apply_r(&PauliTensor::basis(j)))?;
                    let expected = if partners.contains(&j) {
                        Rational::new(1, 4)
                    } else {
                        Rational::zero()
                    };
                    ensure(v == expected, || format!("pairing law at k={k}"))?;
                }
            }
        }
        Ok(format!("<R c_i, R c_j> in {{0, 1/4}} with the 4-to-1 pairing, k <= {pair_k}"))
    });

    let proj_k = max_k.min(5);
    run_check("projection-fixes-cp", checks, || {
        for k in 1..=proj_k {
            let e = fixed_point_projection(k)?;
            for p in enumerate_nc(k)? {
                let cp = c_p_vector(p.as_set());
                let image = apply_r_star(&e.apply(&apply_r(&cp))?);
                ensure(image == cp, || format!("R*ER(c_p) != c_p at k={k} p={p}"))?;
            }
        }
        Ok(format!("R*ER fixes every c_p, k <= {proj_k}"))
    });

    run_check("projection-structure", checks, || {
        for k in 1..=proj_k {
            let e = fixed_point_projection(k)?;
            // Gram of the R*-transported spanning vectors equals the omega
            // Gram: exactly the algebraic content of idempotence
            let n = e.partitions().len();
            let transported: Vec<PauliTensor> =
                e.omegas().iter().map(apply_r_star).collect();
            for p in 0..n {
                for q in 0..n {
                    let h = scalar_product(&transported[p], &transported[q])?;
                    ensure(&h == e.gram().get(p, q), || {
                        format!("transported Gram mismatch at k={k} ({p},{q})")
                    })?;
                }
            }
            ensure(e.weights().is_symmetric(), || format!("weights not symmetric at k={k}"))?;
            ensure(e.rank() == usize::try_from(catalan(k)).unwrap(), || {
                format!("rank != C_k at k={k}")
            })?;
        }
        // dense cross-check at small k
        for k in 1..=proj_k.min(3) {
            let t = fixed_point_projection(k)?.dense();
            ensure(t.matrix.is_symmetric(), || format!("E not symmetric at k={k}"))?;
            ensure(t.matrix.mul(&t.matrix) == t.matrix, || {
                format!("E not idempotent at k={k}")
            })?;
            ensure(t.matrix.rank() == usize::try_from(catalan(k)).unwrap(), || {
                format!("dense rank != C_k at k={k}")
            })?;
        }
        Ok(format!("projection idempotent, self-adjoint, rank C_k, k <= {proj_k}"))
    });

    let oracle_k = max_k.min(3);
    run_check("expectation-oracle", checks, || {
        for k in 1..=oracle_k {
            let via_gram = fixed_point_projection(k)?.dense();
            let via_integration = e_via_integration(k);
            ensure(via_gram.matrix == via_integration.matrix, || {
                format!("Gram and integration expectations differ at k={k}")
            })?;
        }
        Ok(format!("both expectation constructions agree entrywise, k <= {oracle_k}"))
    });

    let gram_k = max_k.min(4);
    run_check("gram-bruteforce", checks, || {
        for k in 1..=gram_k {
            let g = gram(k)?;
            for (pi, p) in g.partitions().iter().enumerate() {
                for (qi, q) in g.partitions().iter().enumerate() {
                    let count = MultiIndex::all(k)
                        .filter(|i| p.delta(i).unwrap() && q.delta(i).unwrap())
                        .count();
                    ensure(g.matrix().get(pi, qi) == &Rational::from_int(count as i64), || {
                        format!("Gram entry mismatch at k={k}")
                    })?;
                }
            }
        }
        Ok(format!("Gram entries equal brute-force index counts, k <= {gram_k}"))
    });
}

fn faithfulness_suite(max_k: usize, checks: &mut Vec<Check>) {
    for k in 1..=max_k {
        run_check(&format!("faithfulness-k{k}"), checks, || {
            let report = verify_faithfulness(k)?;
            if report.pass() {
                Ok(format!(
                    "{} moment pairs equal exactly",
                    report.entries_compared
                ))
            } else {
                let (i, j, p, u) = report.first_mismatch.clone().expect("failing report");
                Err(Error::InvalidArgument(format!(
                    "mismatch at i={i:?} j={j:?}: model {p} vs weingarten {u} \
                     (max |diff| {})",
                    report.max_abs_discrepancy
                )))
            }
        });
    }
}

fn laws_suite(checks: &mut Vec<Check>) {
    run_check("n3-moment-table", checks, || {
        let expected = [
            (3, 4),
            (5, 4),
            (5, 2),
            (109, 20),
            (25, 2),
            (4157, 140),
            (1449, 20),
            (75877, 420),
            (64223, 140),
        ];
        let moments = exact_moments_up_to(VariableKind::N3, 9, 9)?;
        for (i, (n, d)) in expected.into_iter().enumerate() {
            let got = moments[i].as_constant().expect("t-free");
            ensure(got == Rational::new(n, d), || {
                format!("moment {} is {}, want {}/{}", i + 1, got, n, d)
            })?;
        }
        Ok("nine exact moments reproduced".into())
    });

    run_check("closed-law-moments", checks, || {
        for (kind, s) in [
            (VariableKind::M1, 1),
            (VariableKind::M2, 2),
            (VariableKind::M4, 4),
        ] {
            let law = theorem51_law(s)?;
            let moments = exact_moments_up_to(kind, 10, 12)?;
            for (i, m) in moments.iter().enumerate() {
                ensure(
                    m.as_constant().expect("t-free") == law.moment(i as u32 + 1),
                    || format!("s={s} moment {}", i + 1),
                )?;
            }
        }
        Ok("M1, M2, M4 moments match the closed laws, k <= 10".into())
    });

    run_check("middle-average-counterexample", checks, || {
        let m3 = exact_moments_up_to(VariableKind::M3, 2, 9)?[1]
            .as_constant()
            .expect("t-free");
        ensure(m3 == Rational::new(5, 36), || format!("second moment {m3}"))?;
        let mut p = crate::exact::Poly4Q::zero();
        for axis in 0..3 {
            let v = crate::exact::Poly4Q::var(axis);
            p = &p + &(&v * &v);
        }
        let mixture = Rational::new(3, 4) * crate::haar::integrate_poly(&p.pow(2));
        ensure(mixture == Rational::new(15, 32), || format!("mixture moment {mixture}"))?;
        ensure(m3 != mixture, || "moments unexpectedly equal".into())?;
        Ok("5/36 vs 15/32: the naive mixture is ruled out".into())
    });

    run_check("interpolation-series", checks, || {
        let order = 9usize;
        let wt = cauchy_series(VariableKind::Wt, order + 1)?;
        let wt_moments = exact_moments_up_to(VariableKind::Wt, order as u32 - 1, 12)?;
        for k in 1..order {
            ensure(wt.coeff(k + 1) == &wt_moments[k - 1], || {
                format!("wt series coefficient k={k}")
            })?;
        }
        let vt = cauchy_series(VariableKind::Vt, order + 2)?;
        let vt_moments = exact_moments_up_to(VariableKind::Vt, order as u32 - 1, 12)?;
        for k in 1..order {
            let expected = vt_moments[k - 1].scale(&Rational::from_int(-(k as i64 + 1)));
            ensure(vt.coeff(k + 2) == &expected, || {
                format!("vt derivative series coefficient k={k}")
            })?;
        }
        Ok("series coefficients equal exact moments identically in t, k <= 8".into())
    });

    run_check("endpoint-collapse", checks, || {
        let order = 12;
        let wt = cauchy_series(VariableKind::Wt, order)?;
        let g1 = cauchy_series(VariableKind::M1, order)?;
        let g2 = cauchy_series(VariableKind::M2, order)?;
        for n in 0..=order {
            ensure(
                wt.coeff(n).eval(&Rational::zero())
                    == g2.coeff(n).as_constant().expect("t-free"),
                || format!("wt(0) vs G2 at u^{n}"),
            )?;
            ensure(
                wt.coeff(n).eval(&Rational::one())
                    == g1.coeff(n).as_constant().expect("t-free"),
                || format!("wt(1) vs G1 at u^{n}"),
            )?;
        }
        let vt = cauchy_series(VariableKind::Vt, order)?;
        let dg2 = g2.xi_derivative().truncate(order);
        let dg4 = cauchy_series(VariableKind::M4, order)?
            .xi_derivative()
            .truncate(order);
        for n in 0..=order {
            ensure(
                vt.coeff(n).eval(&Rational::one())
                    == dg2.coeff(n).as_constant().expect("t-free"),
                || format!("vt(1) vs G2' at u^{n}"),
            )?;
            ensure(
                vt.coeff(n).eval(&Rational::zero())
                    == dg4.coeff(n).as_constant().expect("t-free"),
                || format!("vt(0) vs G4' at u^{n}"),
            )?;
        }
        // numeric agreement at sampled complex points
        let xi = num_complex::Complex64::new(2.2, 1.1);
        for (t, kind) in [(Rational::zero(), VariableKind::M2), (Rational::one(), VariableKind::M1)]
        {
            let wt_spec = VariableSpec::new(VariableKind::Wt, Some(t))?;
            let a = cauchy_closed(&wt_spec, xi)?;
            let b = cauchy_closed(&VariableSpec::plain(kind), xi)?;
            ensure((a - b).norm() < 1e-12, || format!("closed-form collapse vs {kind}"))?;
        }
        Ok("series and closed forms collapse to G1/G2/G4 at the endpoints".into())
    });

    run_check("symmetric-group-baseline", checks, || {
        let mut rng = seeded_rng(2024, 0);
        for _ in 0..100 {
            let mut t: Vec<Rational> = (0..3)
                .map(|_| Rational::new(rng.gen_range(-6..=6), rng.gen_range(1..=6)))
                .collect();
            let mut rest = Rational::one();
            for w in &t {
                rest -= w;
            }
            t.push(rest);
            let t: [Rational; 4] = t.try_into().expect("four weights");
            let brute = s4::classical_law(&t)?;
            ensure(brute == s4::classical_law_closed_form(&t)?, || {
                "brute-force law differs from the closed form".into()
            })?;
        }
        let m1 = s4::classical_law(&[
            Rational::one(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        ])?;
        ensure(
            m1.atoms()
                == [
                    (Rational::zero(), Rational::new(18, 24)),
                    (Rational::one(), Rational::new(6, 24)),
                ],
            || "m1 law mismatch".into(),
        )?;
        Ok("100 random weight vectors and the four pinned laws".into())
    });
}

fn identities_suite(checks: &mut Vec<Check>) {
    run_check("binomial-halfsum", checks, || {
        for p in 0..=20u64 {
            for q in 0..=20u64 {
                if p + q == 0 {
                    continue;
                }
                ensure(identities::binomial_halfsum_identity(p, q), || {
                    format!("failed at p={p} q={q}")
                })?;
            }
        }
        Ok("p, q <= 20".into())
    });
    run_check("factorial-convolution", checks, || {
        for p in 0..=20u64 {
            for q in 0..=20u64 {
                ensure(identities::factorial_convolution_identity(p, q), || {
                    format!("failed at p={p} q={q}")
                })?;
            }
        }
        Ok("p, q <= 20".into())
    });
    run_check("geometric-family", checks, || {
        for p in 1..=20u64 {
            ensure(identities::geometric_family_identity(p, 30), || {
                format!("failed at p={p}")
            })?;
        }
        Ok("p <= 20, series order 30".into())
    });
    run_check("central-binomial", checks, || {
        ensure(identities::central_binomial_identity(30), || {
            "series order 30".into()
        })?;
        Ok("series order 30".into())
    });
}
