//! The sign algebra of the Pauli matrices `c1..c4`.
//!
//! `c1` is the unit and `c2, c3, c4` multiply like the quaternions `i, j, k`.
//! Only signs and indices are ever tracked: conjugating the symbolic point
//! `x = a c1 + b c2 + c c3 + d c4` by Pauli matrices permutes the
//! coordinates `(a, b, c, d)` up to signs, so the whole model lives over
//! real rationals and no complex scalar appears anywhere in the crate.

use crate::exact::{Poly4, Poly4Q, Rational};

/// Index of a Pauli matrix, in `{1, 2, 3, 4}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PauliIndex(u8);

impl PauliIndex {
    pub const ALL: [PauliIndex; 4] = [
        PauliIndex(1),
        PauliIndex(2),
        PauliIndex(3),
        PauliIndex(4),
    ];

    pub fn new(v: u8) -> Self {
        assert!((1..=4).contains(&v), "Pauli index must be in 1..=4");
        PauliIndex(v)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Zero-based value, for table and tensor indexing.
    pub fn slot(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn from_slot(s: usize) -> Self {
        PauliIndex::new(s as u8 + 1)
    }
}

/// A Pauli matrix up to sign: `sign * c_index`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SignedPauli {
    pub sign: i8,
    pub index: PauliIndex,
}

impl SignedPauli {
    fn new(sign: i8, index: u8) -> Self {
        SignedPauli {
            sign,
            index: PauliIndex::new(index),
        }
    }

    pub fn mul(self, rhs: SignedPauli) -> SignedPauli {
        let p = pauli_product(self.index, rhs.index);
        SignedPauli {
            sign: self.sign * rhs.sign * p.sign,
            index: p.index,
        }
    }

    pub fn star(self) -> SignedPauli {
        let s = pauli_star(self.index);
        SignedPauli {
            sign: self.sign * s.sign,
            index: s.index,
        }
    }
}

/// Quaternion sign table: `PRODUCT[i-1][j-1] = (sign, m)` with
/// `c_i c_j = sign * c_m`.
const PRODUCT: [[(i8, u8); 4]; 4] = [
    [(1, 1), (1, 2), (1, 3), (1, 4)],
    [(1, 2), (-1, 1), (1, 4), (-1, 3)],
    [(1, 3), (-1, 4), (-1, 1), (1, 2)],
    [(1, 4), (1, 3), (-1, 2), (-1, 1)],
];

pub fn pauli_product(i: PauliIndex, j: PauliIndex) -> SignedPauli {
    let (sign, m) = PRODUCT[i.slot()][j.slot()];
    SignedPauli::new(sign, m)
}

/// Adjoint: `c1* = c1`, `c_i* = -c_i` for `i = 2, 3, 4`.
pub fn pauli_star(i: PauliIndex) -> SignedPauli {
    SignedPauli {
        sign: if i.value() == 1 { 1 } else { -1 },
        index: i,
    }
}

/// `c_i c_j*` as a signed Pauli, the building block of the cyclic map `R`.
pub fn pauli_mul_star(i: PauliIndex, j: PauliIndex) -> SignedPauli {
    let sj = pauli_star(j);
    let p = pauli_product(i, j);
    SignedPauli {
        sign: sj.sign * p.sign,
        index: p.index,
    }
}

/// Coordinates of `c_i x c_j` for `x = a c1 + b c2 + c c3 + d c4`:
/// a signed permutation of `(a, b, c, d)`.
///
/// `slots[m]` is `(sign, source)` meaning the coefficient of `c_{m+1}` is
/// `sign * x_{source}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SignedCoordinateVector {
    pub slots: [(i8, usize); 4],
}

impl SignedCoordinateVector {
    /// Each source coordinate must fill exactly one output slot.
    pub fn is_signed_permutation(&self) -> bool {
        let mut seen = [false; 4];
        for &(sign, src) in &self.slots {
            if sign.abs() != 1 || src > 3 || seen[src] {
                return false;
            }
            seen[src] = true;
        }
        true
    }

    /// The symbolic coordinate polynomial of an output slot.
    pub fn slot_poly(&self, m: usize) -> Poly4Q {
        let (sign, src) = self.slots[m];
        let v: Poly4Q = Poly4::var(src);
        if sign < 0 {
            -&v
        } else {
            v
        }
    }
}

/// Expands `c_i x c_j` in the Pauli basis by composing `c_i c_m c_j` for
/// each source coordinate slot `m`.
pub fn expand_cxc(i: PauliIndex, j: PauliIndex) -> SignedCoordinateVector {
    let mut slots = [(0i8, 0usize); 4];
    for m in PauliIndex::ALL {
        let left = pauli_product(i, m);
        let full = SignedPauli { sign: left.sign, index: left.index }
            .mul(SignedPauli { sign: 1, index: j });
        slots[full.index.slot()] = (full.sign, m.slot());
    }
    let v = SignedCoordinateVector { slots };
    debug_assert!(v.is_signed_permutation());
    v
}

/// The model projection `pi_ij(x)`: rank-one projection onto `c_i x c_j`,
/// whose entries are the quadratic monomials `v_l v_m` of the signed
/// coordinate vector. Symmetric, with matrix trace `a^2+b^2+c^2+d^2`.
pub fn projection_matrix(i: PauliIndex, j: PauliIndex) -> [[Poly4Q; 4]; 4] {
    let v = expand_cxc(i, j);
    std::array::from_fn(|l| std::array::from_fn(|m| &v.slot_poly(l) * &v.slot_poly(m)))
}

/// Sum of matrix products along tensor legs: the map `rho(x)` with
/// `x c_j x* = sum_m rho[m][j] c_m`; entries are quadratic in `a,b,c,d` and
/// the first column is `(a^2+b^2+c^2+d^2, 0, 0, 0)`.
pub fn adjoint_rotation() -> [[Poly4Q; 4]; 4] {
    let mut rho: [[Poly4Q; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| Poly4::zero()));
    for j in PauliIndex::ALL {
        for u in PauliIndex::ALL {
            for v in PauliIndex::ALL {
                // x c_j x* = sum_{u,v} x_u x_v s_v (c_u c_j c_v)
                let star_sign = pauli_star(v).sign;
                let prod = pauli_product(u, j).mul(SignedPauli { sign: 1, index: v });
                let mut e = [0u16; 4];
                e[u.slot()] += 1;
                e[v.slot()] += 1;
                let coeff = Rational::from_int((star_sign * prod.sign) as i64);
                let term = Poly4::monomial(e, coeff);
                rho[prod.index.slot()][j.slot()] =
                    &rho[prod.index.slot()][j.slot()] + &term;
            }
        }
    }
    rho
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Poly4Q;
    use num_complex::Complex64;

    fn idx(v: u8) -> PauliIndex {
        PauliIndex::new(v)
    }

    /// The concrete 2x2 complex Pauli matrices, used only as a test oracle
    /// for the sign table.
    fn pauli_matrix(i: PauliIndex) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let im = Complex64::new(0.0, 1.0);
        match i.value() {
            1 => [[l, o], [o, l]],
            2 => [[im, o], [o, -im]],
            3 => [[o, l], [-l, o]],
            4 => [[o, im], [im, o]],
            _ => unreachable!(),
        }
    }

    fn matmul(a: [[Complex64; 2]; 2], b: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                for k in 0..2 {
                    out[r][c] += a[r][k] * b[k][c];
                }
            }
        }
        out
    }

    #[test]
    fn product_table_matches_quaternion_relations() {
        assert_eq!(pauli_product(idx(2), idx(3)), SignedPauli::new(1, 4));
        assert_eq!(pauli_product(idx(3), idx(2)), SignedPauli::new(-1, 4));
        assert_eq!(pauli_product(idx(3), idx(4)), SignedPauli::new(1, 2));
        assert_eq!(pauli_product(idx(4), idx(2)), SignedPauli::new(1, 3));
        assert_eq!(pauli_product(idx(3), idx(3)), SignedPauli::new(-1, 1));
        for j in PauliIndex::ALL {
            assert_eq!(pauli_product(idx(1), j), SignedPauli { sign: 1, index: j });
            assert_eq!(pauli_product(j, idx(1)), SignedPauli { sign: 1, index: j });
        }
    }

    #[test]
    fn product_table_matches_complex_matrices() {
        for i in PauliIndex::ALL {
            for j in PauliIndex::ALL {
                let p = pauli_product(i, j);
                let lhs = matmul(pauli_matrix(i), pauli_matrix(j));
                let rhs = pauli_matrix(p.index);
                for r in 0..2 {
                    for c in 0..2 {
                        let expected = rhs[r][c] * p.sign as f64;
                        assert!((lhs[r][c] - expected).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_all_triples() {
        for i in PauliIndex::ALL {
            for j in PauliIndex::ALL {
                for k in PauliIndex::ALL {
                    let ij = pauli_product(i, j);
                    let jk = pauli_product(j, k);
                    let left = ij.mul(SignedPauli { sign: 1, index: k });
                    let right = SignedPauli { sign: 1, index: i }.mul(jk);
                    assert_eq!(left, right);
                }
            }
        }
    }

    #[test]
    fn anti_commutation() {
        for i in 2..=4u8 {
            for j in 2..=4u8 {
                if i == j {
                    continue;
                }
                let ij = pauli_product(idx(i), idx(j));
                let ji = pauli_product(idx(j), idx(i));
                assert_eq!(ij.index, ji.index);
                assert_eq!(ij.sign, -ji.sign);
            }
        }
    }

    #[test]
    fn star_values() {
        assert_eq!(pauli_star(idx(1)), SignedPauli::new(1, 1));
        assert_eq!(pauli_star(idx(2)), SignedPauli::new(-1, 2));
        assert_eq!(pauli_star(idx(4)), SignedPauli::new(-1, 4));
    }

    #[test]
    fn expand_identity_case() {
        let v = expand_cxc(idx(1), idx(1));
        assert_eq!(v.slots, [(1, 0), (1, 1), (1, 2), (1, 3)]);
    }

    #[test]
    fn expand_c2_x_c2() {
        // c2 x c2 = -a c1 - b c2 + c c3 + d c4: the global sign is immaterial
        // to the projection, whose sign pattern is pinned below.
        let v = expand_cxc(idx(2), idx(2));
        assert_eq!(v.slots, [(-1, 0), (-1, 1), (1, 2), (1, 3)]);
    }

    #[test]
    fn expansions_are_signed_permutations() {
        for i in PauliIndex::ALL {
            for j in PauliIndex::ALL {
                assert!(expand_cxc(i, j).is_signed_permutation());
            }
        }
    }

    #[test]
    fn expand_round_trips_through_products() {
        // c_i c_m c_j recomputed from the sign table must match each slot
        for i in PauliIndex::ALL {
            for j in PauliIndex::ALL {
                let v = expand_cxc(i, j);
                for m in PauliIndex::ALL {
                    let direct = pauli_product(i, m).mul(SignedPauli { sign: 1, index: j });
                    let (sign, src) = v.slots[direct.index.slot()];
                    assert_eq!(src, m.slot());
                    assert_eq!(sign, direct.sign);
                }
            }
        }
    }

    fn mono(e: [u16; 4], c: i64) -> Poly4Q {
        Poly4::monomial(e, Rational::from_int(c))
    }

    #[test]
    fn projection_pi11_matches_display() {
        let p = projection_matrix(idx(1), idx(1));
        assert_eq!(p[0][0], mono([2, 0, 0, 0], 1)); // a^2
        assert_eq!(p[0][1], mono([1, 1, 0, 0], 1)); // ab
        assert_eq!(p[0][2], mono([1, 0, 1, 0], 1)); // ac
        assert_eq!(p[0][3], mono([1, 0, 0, 1], 1)); // ad
        assert_eq!(p[3][3], mono([0, 0, 0, 2], 1)); // d^2
    }

    #[test]
    fn projection_pi33_sign_pattern() {
        let p = projection_matrix(idx(3), idx(3));
        // rows: (a^2,-ab,ac,-ad), (-ab,b^2,-bc,bd), (ac,-bc,c^2,-cd), (-ad,bd,-cd,d^2)
        let signs = [
            [1, -1, 1, -1],
            [-1, 1, -1, 1],
            [1, -1, 1, -1],
            [-1, 1, -1, 1],
        ];
        let coords = [
            [[2, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 0, 0, 1]],
            [[1, 1, 0, 0], [0, 2, 0, 0], [0, 1, 1, 0], [0, 1, 0, 1]],
            [[1, 0, 1, 0], [0, 1, 1, 0], [0, 0, 2, 0], [0, 0, 1, 1]],
            [[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 2]],
        ];
        for l in 0..4 {
            for m in 0..4 {
                let e = [
                    coords[l][m][0] as u16,
                    coords[l][m][1] as u16,
                    coords[l][m][2] as u16,
                    coords[l][m][3] as u16,
                ];
                assert_eq!(p[l][m], mono(e, signs[l][m]), "entry ({l},{m})");
            }
        }
    }

    #[test]
    fn projection_pi22_sign_pattern() {
        let p = projection_matrix(idx(2), idx(2));
        assert_eq!(p[0][2], mono([1, 0, 1, 0], -1)); // -ac
        assert_eq!(p[0][3], mono([1, 0, 0, 1], -1)); // -ad
        assert_eq!(p[2][3], mono([0, 0, 1, 1], 1)); // cd
        assert_eq!(p[0][1], mono([1, 1, 0, 0], 1)); // ab
    }

    #[test]
    fn projection_trace_is_unit_norm() {
        for i in PauliIndex::ALL {
            for j in PauliIndex::ALL {
                let p = projection_matrix(i, j);
                let mut tr = Poly4Q::zero();
                for l in 0..4 {
                    tr = &tr + &p[l][l];
                }
                let mut norm = Poly4Q::zero();
                for axis in 0..4 {
                    let v: Poly4Q = Poly4::var(axis);
                    norm = &norm + &(&v * &v);
                }
                assert_eq!(tr, norm);
            }
        }
    }

    #[test]
    fn projection_idempotent_modulo_sphere() {
        for i in PauliIndex::ALL {
            for j in PauliIndex::ALL {
                let p = projection_matrix(i, j);
                for l in 0..4 {
                    for m in 0..4 {
                        assert_eq!(p[l][m], p[m][l]);
                        let mut entry = Poly4Q::zero();
                        for s in 0..4 {
                            entry = &entry + &(&p[l][s] * &p[s][m]);
                        }
                        assert_eq!(
                            entry.reduce_sphere(),
                            p[l][m].reduce_sphere(),
                            "pi_{}{} square mismatch at ({l},{m})",
                            i.value(),
                            j.value()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn adjoint_rotation_structure() {
        let rho = adjoint_rotation();
        let mut norm = Poly4Q::zero();
        for axis in 0..4 {
            let v: Poly4Q = Poly4::var(axis);
            norm = &norm + &(&v * &v);
        }
        assert_eq!(rho[0][0], norm);
        for m in 1..4 {
            assert!(rho[m][0].is_zero(), "column 1 must be (norm,0,0,0)");
            assert!(rho[0][m].is_zero(), "row 1 must vanish off the unit");
        }
        // columns are orthonormal after reduction by the sphere relation
        for j in 0..4 {
            for j2 in 0..4 {
                let mut dot = Poly4Q::zero();
                for m in 0..4 {
                    dot = &dot + &(&rho[m][j] * &rho[m][j2]);
                }
                let expected = if j == j2 {
                    Poly4Q::one()
                } else {
                    Poly4Q::zero()
                };
                assert_eq!(dot.reduce_sphere(), expected);
            }
        }
        // at x = c1 (a=1, b=c=d=0) the rotation is the identity
        for m in 0..4 {
            for j in 0..4 {
                let v = rho[m][j].eval_f64([1.0, 0.0, 0.0, 0.0], 0.0);
                assert_eq!(v, if m == j { 1.0 } else { 0.0 });
            }
        }
    }
}
