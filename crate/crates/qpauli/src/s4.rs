//! Exact laws of weighted diagonal sums over the classical symmetric group
//! on four points: the commutative baseline for the quantum computations.
//!
//! The group is enumerated literally (24 permutations); the value of the
//! weighted diagonal sum at a permutation is the sum of the weights of its
//! fixed points.

use crate::error::{Error, Result};
use crate::exact::Rational;

/// Permutation of `{1..4}` as its image array.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Permutation4 {
    images: [u8; 4],
}

impl Permutation4 {
    pub fn image(&self, i: u8) -> u8 {
        self.images[(i - 1) as usize]
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=4u8).filter(|&i| self.image(i) == i)
    }
}

/// All 24 permutations, in lexicographic order of image arrays.
pub fn all_permutations() -> Vec<Permutation4> {
    let mut out = Vec::with_capacity(24);
    let mut values = [1u8, 2, 3, 4];
    permute(&mut values, 0, &mut out);
    out.sort_by_key(|p| p.images);
    out
}

fn permute(values: &mut [u8; 4], start: usize, out: &mut Vec<Permutation4>) {
    if start == 4 {
        out.push(Permutation4 { images: *values });
        return;
    }
    for i in start..4 {
        values.swap(start, i);
        permute(values, start + 1, out);
        values.swap(start, i);
    }
}

/// Purely atomic law: sorted `(location, weight)` pairs with positive
/// weights summing to one; for the group laws every weight is a multiple
/// of `1/24`.
#[derive(Clone, PartialEq, Debug)]
pub struct AtomicLaw {
    atoms: Vec<(Rational, Rational)>,
}

impl AtomicLaw {
    /// Merges equal locations, drops zero weights, sorts by location.
    pub fn from_atoms(mut atoms: Vec<(Rational, Rational)>) -> Self {
        atoms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Rational, Rational)> = Vec::new();
        for (x, w) in atoms {
            if w.is_zero() {
                continue;
            }
            match merged.last_mut() {
                Some((lx, lw)) if *lx == x => *lw += &w,
                _ => merged.push((x, w)),
            }
        }
        AtomicLaw { atoms: merged }
    }

    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    pub fn total_mass(&self) -> Rational {
        let mut acc = Rational::zero();
        for (_, w) in &self.atoms {
            acc += w;
        }
        acc
    }

    /// `k`-th moment; `k = 0` gives the total mass.
    pub fn moment(&self, k: u32) -> Rational {
        let mut acc = Rational::zero();
        for (x, w) in &self.atoms {
            if k == 0 {
                acc += w;
            } else {
                acc += &(w * &x.powi(k));
            }
        }
        acc
    }
}

fn check_weights(t: &[Rational; 4]) -> Result<()> {
    let mut sum = Rational::zero();
    for w in t {
        sum += w;
    }
    if !sum.is_one() {
        return Err(Error::InvalidArgument(format!(
            "diagonal weights must sum to 1, got {sum}"
        )));
    }
    Ok(())
}

/// Law of the weighted diagonal sum by brute force over the 24 group
/// elements: the value at a permutation is the weight-sum of its fixed
/// points, each carrying mass `1/24`.
pub fn classical_law(t: &[Rational; 4]) -> Result<AtomicLaw> {
    check_weights(t)?;
    let w24 = Rational::new(1, 24);
    let atoms = all_permutations()
        .into_iter()
        .map(|sigma| {
            let mut value = Rational::zero();
            for i in sigma.fixed_points() {
                value += &t[(i - 1) as usize];
            }
            (value, w24.clone())
        })
        .collect();
    Ok(AtomicLaw::from_atoms(atoms))
}

/// The closed-form mixture
/// `(9 delta_0 + delta_1 + 2 sum_i delta_{t_i} + sum_{i<j} delta_{t_i+t_j}) / 24`,
/// atoms merged where locations coincide.
pub fn classical_law_closed_form(t: &[Rational; 4]) -> Result<AtomicLaw> {
    check_weights(t)?;
    let mut atoms = vec![
        (Rational::zero(), Rational::new(9, 24)),
        (Rational::one(), Rational::new(1, 24)),
    ];
    for ti in t {
        atoms.push((ti.clone(), Rational::new(2, 24)));
    }
    for i in 0..4 {
        for j in (i + 1)..4 {
            atoms.push((&t[i] + &t[j], Rational::new(1, 24)));
        }
    }
    Ok(AtomicLaw::from_atoms(atoms))
}

/// Moments of an atomic law (weighted power sums of the locations).
pub fn classical_moments(law: &AtomicLaw, k: u32) -> Rational {
    law.moment(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::seeded_rng;
    use rand::Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn law(ts: [(i64, i64); 4]) -> AtomicLaw {
        let t = ts.map(|(n, d)| q(n, d));
        let brute = classical_law(&t).unwrap();
        let closed = classical_law_closed_form(&t).unwrap();
        assert_eq!(brute, closed);
        brute
    }

    #[test]
    fn corollary_laws() {
        // m1: (18 delta_0 + 6 delta_1)/24
        let m1 = law([(1, 1), (0, 1), (0, 1), (0, 1)]);
        assert_eq!(
            m1.atoms(),
            &[(q(0, 1), q(18, 24)), (q(1, 1), q(6, 24))]
        );
        // m2: (14 delta_0 + 8 delta_{1/2} + 2 delta_1)/24
        let m2 = law([(1, 2), (1, 2), (0, 1), (0, 1)]);
        assert_eq!(
            m2.atoms(),
            &[
                (q(0, 1), q(14, 24)),
                (q(1, 2), q(8, 24)),
                (q(1, 1), q(2, 24)),
            ]
        );
        // m3: (11 delta_0 + 9 delta_{1/3} + 3 delta_{2/3} + delta_1)/24
        let m3 = law([(1, 3), (1, 3), (1, 3), (0, 1)]);
        assert_eq!(
            m3.atoms(),
            &[
                (q(0, 1), q(11, 24)),
                (q(1, 3), q(9, 24)),
                (q(2, 3), q(3, 24)),
                (q(1, 1), q(1, 24)),
            ]
        );
        // m4: (9 delta_0 + 8 delta_{1/4} + 6 delta_{1/2} + delta_1)/24
        let m4 = law([(1, 4), (1, 4), (1, 4), (1, 4)]);
        assert_eq!(
            m4.atoms(),
            &[
                (q(0, 1), q(9, 24)),
                (q(1, 4), q(8, 24)),
                (q(1, 2), q(6, 24)),
                (q(1, 1), q(1, 24)),
            ]
        );
    }

    #[test]
    fn moments_of_corollary_laws() {
        let m1 = law([(1, 1), (0, 1), (0, 1), (0, 1)]);
        for k in 1..=6 {
            assert_eq!(classical_moments(&m1, k), q(1, 4));
        }
        let m4 = law([(1, 4), (1, 4), (1, 4), (1, 4)]);
        assert_eq!(classical_moments(&m4, 1), q(1, 4));
        let m2 = law([(1, 2), (1, 2), (0, 1), (0, 1)]);
        assert_eq!(classical_moments(&m2, 2), q(1, 6));
        assert_eq!(m2.total_mass(), Rational::one());
    }

    #[test]
    fn fixed_point_census() {
        // 24 = 9 (none) + 8 (one) + 6 (two) + 1 (four)
        let mut census = [0usize; 5];
        for sigma in all_permutations() {
            census[sigma.fixed_points().count()] += 1;
        }
        assert_eq!(census, [9, 8, 6, 0, 1]);
    }

    #[test]
    fn bruteforce_matches_closed_form_on_random_weights() {
        let mut rng = seeded_rng(2024, 0);
        for _ in 0..100 {
            let mut t: Vec<Rational> = (0..3)
                .map(|_| q(rng.gen_range(-6..=6), rng.gen_range(1..=6)))
                .collect();
            let mut rest = Rational::one();
            for w in &t {
                rest -= w;
            }
            t.push(rest);
            let t: [Rational; 4] = t.try_into().unwrap();
            let brute = classical_law(&t).unwrap();
            assert_eq!(brute, classical_law_closed_form(&t).unwrap());
            assert_eq!(brute.total_mass(), Rational::one());
            // the mean is 1/4 regardless of the weights
            assert_eq!(brute.moment(1), q(1, 4));
        }
    }

    #[test]
    fn weight_constraint_is_enforced() {
        let t = [q(1, 2), q(1, 2), q(1, 2), q(0, 1)];
        assert!(classical_law(&t).is_err());
    }
}
