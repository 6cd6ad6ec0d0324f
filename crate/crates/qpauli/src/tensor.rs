//! Exact linear algebra on tensor powers of the Pauli basis: the cyclic map
//! `R` and its adjoint, the invariant two-leg element `f`, the partition
//! vectors `c_p` and `omega(p)`, and two independent constructions of the
//! fixed-point expectation `E` of the tensor-power adjoint action.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Poly4Q, Rational};
use crate::haar::integrate_poly;
use crate::linalg::QMatrix;
use crate::nc::{enumerate_nc_capped, NCPartition, SetPartition};
use crate::pauli::{adjoint_rotation, pauli_mul_star, pauli_star, PauliIndex};

/// Multi-index in `{1..4}^k`, packed two bits per leg.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex {
    len: u8,
    code: u32,
}

impl MultiIndex {
    pub fn from_slice(values: &[u8]) -> Self {
        assert!(values.len() <= 16, "multi-index too long");
        let mut code = 0u32;
        for (l, &v) in values.iter().enumerate() {
            assert!((1..=4).contains(&v), "multi-index entries must be 1..=4");
            code |= ((v - 1) as u32) << (2 * l);
        }
        MultiIndex {
            len: values.len() as u8,
            code,
        }
    }

    /// Multi-index with the given dense code in `0..4^k`; leg 0 occupies the
    /// least-significant bits, so codes enumerate multi-indices with the
    /// first leg varying fastest.
    pub fn from_code(k: usize, code: usize) -> Self {
        debug_assert!(code < 4usize.pow(k as u32));
        MultiIndex {
            len: k as u8,
            code: code as u32,
        }
    }

    pub fn code(&self) -> usize {
        self.code as usize
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, leg: usize) -> PauliIndex {
        debug_assert!(leg < self.len());
        PauliIndex::new(((self.code >> (2 * leg)) & 3) as u8 + 1)
    }

    pub fn with_leg(&self, leg: usize, v: PauliIndex) -> Self {
        let cleared = self.code & !(3 << (2 * leg));
        MultiIndex {
            len: self.len,
            code: cleared | (((v.value() - 1) as u32) << (2 * leg)),
        }
    }

    pub fn repeated(k: usize, v: PauliIndex) -> Self {
        let mut m = MultiIndex::from_code(k, 0);
        for leg in 0..k {
            m = m.with_leg(leg, v);
        }
        m
    }

    pub fn all(k: usize) -> impl Iterator<Item = MultiIndex> {
        (0..4usize.pow(k as u32)).map(move |code| MultiIndex::from_code(k, code))
    }

    pub fn to_vec(&self) -> Vec<u8> {
        (0..self.len()).map(|l| self.get(l).value()).collect()
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for l in 0..self.len() {
            if l > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.get(l).value())?;
        }
        write!(f, ")")
    }
}

/// Sparse exact vector over the orthonormal Pauli product basis
/// `c_i = c_{i_1} (x) ... (x) c_{i_k}`.
///
/// All coefficients are real rationals; no zero coefficient is stored.
#[derive(Clone, PartialEq)]
pub struct PauliTensor {
    k: usize,
    coeffs: BTreeMap<MultiIndex, Rational>,
}

impl PauliTensor {
    pub fn zero(k: usize) -> Self {
        PauliTensor {
            k,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn basis(m: MultiIndex) -> Self {
        let mut t = PauliTensor::zero(m.len());
        t.add_term(m, Rational::one());
        t
    }

    /// The algebra unit `c1 (x) ... (x) c1`.
    pub fn unit(k: usize) -> Self {
        PauliTensor::basis(MultiIndex::repeated(k, PauliIndex::new(1)))
    }

    pub fn legs(&self) -> usize {
        self.k
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, m: &MultiIndex) -> Rational {
        self.coeffs.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.coeffs.iter()
    }

    pub fn add_term(&mut self, m: MultiIndex, r: Rational) {
        debug_assert_eq!(m.len(), self.k);
        if r.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&m) {
            Some(c) => {
                *c += &r;
                if c.is_zero() {
                    self.coeffs.remove(&m);
                }
            }
            None => {
                self.coeffs.insert(m, r);
            }
        }
    }

    pub fn add(&self, rhs: &PauliTensor) -> Result<PauliTensor> {
        check_legs(self, rhs)?;
        let mut out = self.clone();
        for (m, r) in &rhs.coeffs {
            out.add_term(*m, r.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &PauliTensor) -> Result<PauliTensor> {
        check_legs(self, rhs)?;
        let mut out = self.clone();
        for (m, r) in &rhs.coeffs {
            out.add_term(*m, -r);
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> PauliTensor {
        if r.is_zero() {
            return PauliTensor::zero(self.k);
        }
        PauliTensor {
            k: self.k,
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, c * r)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl fmt::Debug for PauliTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})c{m:?}")?;
        }
        Ok(())
    }
}

fn check_legs(u: &PauliTensor, v: &PauliTensor) -> Result<()> {
    if u.k != v.k {
        return Err(Error::LegMismatch {
            left: u.k,
            right: v.k,
        });
    }
    Ok(())
}

/// Scalar product in the orthonormal Pauli basis: the coefficient-wise dot
/// product (all coefficients are real).
pub fn scalar_product(u: &PauliTensor, v: &PauliTensor) -> Result<Rational> {
    check_legs(u, v)?;
    let (small, large) = if u.num_terms() <= v.num_terms() {
        (u, v)
    } else {
        (v, u)
    };
    let mut acc = Rational::zero();
    for (m, c) in &small.coeffs {
        if let Some(d) = large.coeffs.get(m) {
            acc += &(c * d);
        }
    }
    Ok(acc)
}

/// Image of a basis vector under `R`, as `(sign, index)` with
/// `R(c_i) = sign/2 * c_m`: leg `l` of `m` is the index of
/// `c_{i_l} c_{i_{l+1}}^*` taken cyclically. For `k = 1` this degenerates to
/// `R(c_i) = c_i c_i^* / 2 = c_1 / 2`.
pub fn r_image_of_basis(i: MultiIndex) -> (i8, MultiIndex) {
    let k = i.len();
    let mut sign = 1i8;
    let mut m = MultiIndex::from_code(k, 0);
    for l in 0..k {
        let next = i.get((l + 1) % k);
        let p = pauli_mul_star(i.get(l), next);
        sign *= p.sign;
        m = m.with_leg(l, p.index);
    }
    (sign, m)
}

/// The cyclic-difference map `R`, extended linearly.
pub fn apply_r(v: &PauliTensor) -> PauliTensor {
    let half = Rational::new(1, 2);
    let mut out = PauliTensor::zero(v.k);
    for (i, c) in &v.coeffs {
        let (sign, m) = r_image_of_basis(*i);
        let mut r = c * &half;
        if sign < 0 {
            r = -r;
        }
        out.add_term(m, r);
    }
    out
}

/// The four preimages of a basis vector under the 4-to-1 index map of `R`,
/// or `None` when the vector is orthogonal to the image of `R`.
///
/// Given the target `m` and a first leg `s`, the remaining legs are forced:
/// `i_{l+1}` is the index of `c_{m_l}^* c_{i_l}`; the construction is then
/// validated by mapping forward again.
pub fn r_preimages_of_basis(m: MultiIndex) -> Option<[(i8, MultiIndex); 4]> {
    let k = m.len();
    let mut out = [(0i8, m); 4];
    for (slot, s) in PauliIndex::ALL.into_iter().enumerate() {
        let mut i = MultiIndex::from_code(k, 0).with_leg(0, s);
        let mut current = s;
        for l in 0..k.saturating_sub(1) {
            let star = pauli_star(m.get(l));
            let next = crate::pauli::pauli_product(star.index, current);
            i = i.with_leg(l + 1, next.index);
            current = next.index;
        }
        let (sign, image) = r_image_of_basis(i);
        if image != m {
            return None;
        }
        out[slot] = (sign, i);
    }
    Some(out)
}

/// Exact adjoint of [`apply_r`] with respect to [`scalar_product`].
pub fn apply_r_star(v: &PauliTensor) -> PauliTensor {
    let half = Rational::new(1, 2);
    let mut out = PauliTensor::zero(v.k);
    for (m, c) in &v.coeffs {
        let Some(preimages) = r_preimages_of_basis(*m) else {
            continue;
        };
        for (sign, i) in preimages {
            let mut r = c * &half;
            if sign < 0 {
                r = -r;
            }
            out.add_term(i, r);
        }
    }
    out
}

/// The pairing `j = i (+) s`: the unique multi-index with first leg `s`
/// whose `R`-image coincides with that of `i`.
pub fn oplus(i: MultiIndex, s: PauliIndex) -> MultiIndex {
    let (_, m) = r_image_of_basis(i);
    let preimages = r_preimages_of_basis(m).expect("image of R has preimages");
    preimages[s.slot()].1
}

/// The invariant two-leg element `f = sum_i c_i (x) c_i^*`, i.e.
/// `c1 (x) c1 - c2 (x) c2 - c3 (x) c3 - c4 (x) c4`.
pub fn f_element() -> PauliTensor {
    let mut f = PauliTensor::zero(2);
    for i in PauliIndex::ALL {
        let sign = pauli_star(i).sign;
        f.add_term(
            MultiIndex::from_slice(&[i.value(), i.value()]),
            Rational::from_int(sign as i64),
        );
    }
    f
}

/// Algebra product in the tensor power, computed legwise through the Pauli
/// sign table.
pub fn tensor_multiply(u: &PauliTensor, v: &PauliTensor) -> Result<PauliTensor> {
    check_legs(u, v)?;
    let k = u.k;
    let mut out = PauliTensor::zero(k);
    for (i, ci) in &u.coeffs {
        for (j, cj) in &v.coeffs {
            let mut sign = 1i8;
            let mut m = MultiIndex::from_code(k, 0);
            for l in 0..k {
                let p = crate::pauli::pauli_product(i.get(l), j.get(l));
                sign *= p.sign;
                m = m.with_leg(l, p.index);
            }
            let mut r = ci * cj;
            if sign < 0 {
                r = -r;
            }
            out.add_term(m, r);
        }
    }
    Ok(out)
}

/// Places an `m`-leg tensor on the given legs (1-based, strictly increasing)
/// of a `k`-leg space, with the unit on all other legs.
pub fn leg_embed(v: &PauliTensor, positions: &[usize], k: usize) -> Result<PauliTensor> {
    if positions.len() != v.k {
        return Err(Error::LegMismatch {
            left: positions.len(),
            right: v.k,
        });
    }
    for w in positions.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidArgument(
                "leg positions must be strictly increasing".into(),
            ));
        }
    }
    if positions.iter().any(|&p| p == 0 || p > k) {
        return Err(Error::InvalidArgument(format!(
            "leg positions must lie in 1..={k}"
        )));
    }
    let mut out = PauliTensor::zero(k);
    for (m, c) in &v.coeffs {
        let mut target = MultiIndex::repeated(k, PauliIndex::new(1));
        for (l, &pos) in positions.iter().enumerate() {
            target = target.with_leg(pos - 1, m.get(l));
        }
        out.add_term(target, c.clone());
    }
    Ok(out)
}

/// The partition vector `c_p = sum_j delta_{pj} c_j`, with exactly
/// `4^{#blocks}` terms.
pub fn c_p_vector(p: &SetPartition) -> PauliTensor {
    let k = p.ground_size();
    let blocks = p.blocks();
    let nb = blocks.len();
    let mut out = PauliTensor::zero(k);
    for assignment in 0..4usize.pow(nb as u32) {
        let mut m = MultiIndex::from_code(k, 0);
        let mut a = assignment;
        for block in blocks {
            let v = PauliIndex::from_slot(a % 4);
            a /= 4;
            for &e in block {
                m = m.with_leg(e - 1, v);
            }
        }
        out.add_term(m, Rational::one());
    }
    out
}

/// `omega(p) = 2 * prod_blocks prod_consecutive f_{j_r, j_{r+1}}`: the chain
/// of embedded `f` factors along each block; singleton blocks contribute
/// nothing.
pub fn omega(p: &NCPartition) -> PauliTensor {
    let k = p.ground_size();
    let f = f_element();
    let mut acc = PauliTensor::unit(k).scale(&Rational::from_int(2));
    for block in p.blocks() {
        for w in block.windows(2) {
            let factor = leg_embed(&f, &[w[0], w[1]], k).expect("block legs are valid");
            acc = tensor_multiply(&acc, &factor).expect("legs agree");
        }
    }
    acc
}

/// Dense operator on the `4^k`-dimensional tensor space, indexed by
/// [`MultiIndex::code`].
pub struct TensorOperator {
    pub k: usize,
    pub matrix: QMatrix,
}

impl TensorOperator {
    pub fn apply(&self, v: &PauliTensor) -> Result<PauliTensor> {
        if v.legs() != self.k {
            return Err(Error::LegMismatch {
                left: self.k,
                right: v.legs(),
            });
        }
        let mut out = PauliTensor::zero(self.k);
        for (m, c) in v.terms() {
            for row in 0..self.matrix.rows() {
                let a = self.matrix.get(row, m.code());
                if !a.is_zero() {
                    out.add_term(MultiIndex::from_code(self.k, row), a * c);
                }
            }
        }
        Ok(out)
    }
}

/// The fixed-point expectation `E` in factored form: the orthogonal
/// projection onto `span{omega(p) : p in NC(k)}`, built from the exact Gram
/// matrix of the `omega` vectors.
pub struct InvariantProjection {
    k: usize,
    partitions: Vec<NCPartition>,
    omegas: Vec<PauliTensor>,
    gram: QMatrix,
    /// Inverse Gram matrix: the mixing weights of `sum W_pq |w_p><w_q|`.
    weights: QMatrix,
}

impl InvariantProjection {
    pub fn legs(&self) -> usize {
        self.k
    }

    pub fn partitions(&self) -> &[NCPartition] {
        &self.partitions
    }

    pub fn omegas(&self) -> &[PauliTensor] {
        &self.omegas
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn weights(&self) -> &QMatrix {
        &self.weights
    }

    /// Rank of the projection; equals the Catalan number `C_k` whenever the
    /// Gram matrix inverted (which construction guarantees).
    pub fn rank(&self) -> usize {
        self.partitions.len()
    }

    pub fn apply(&self, v: &PauliTensor) -> Result<PauliTensor> {
        if v.legs() != self.k {
            return Err(Error::LegMismatch {
                left: self.k,
                right: v.legs(),
            });
        }
        let n = self.partitions.len();
        let dots: Vec<Rational> = self
            .omegas
            .iter()
            .map(|w| scalar_product(w, v).expect("legs agree"))
            .collect();
        let mut out = PauliTensor::zero(self.k);
        for p in 0..n {
            let mut coeff = Rational::zero();
            for (q, d) in dots.iter().enumerate() {
                if !d.is_zero() {
                    coeff += &(self.weights.get(p, q) * d);
                }
            }
            if coeff.is_zero() {
                continue;
            }
            for (m, c) in self.omegas[p].terms() {
                out.add_term(*m, &coeff * c);
            }
        }
        Ok(out)
    }

    /// Materializes the projection as a dense `4^k x 4^k` matrix.
    pub fn dense(&self) -> TensorOperator {
        let dim = 4usize.pow(self.k as u32);
        let mut m = QMatrix::zeros(dim, dim);
        let n = self.partitions.len();
        for p in 0..n {
            for q in 0..n {
                let w = self.weights.get(p, q);
                if w.is_zero() {
                    continue;
                }
                for (mi, ci) in self.omegas[p].terms() {
                    let wc = w * ci;
                    for (mj, cj) in self.omegas[q].terms() {
                        m.add_assign_at(mi.code(), mj.code(), &(&wc * cj));
                    }
                }
            }
        }
        TensorOperator {
            k: self.k,
            matrix: m,
        }
    }
}

/// Builds `E` as the Gram-weighted projection onto the `omega(p)` span.
///
/// A singular Gram matrix would mean the `omega` vectors degenerate; that is
/// a loud failure, never regularized.
pub fn fixed_point_projection(k: usize) -> Result<InvariantProjection> {
    let partitions = enumerate_nc_capped(k, crate::nc::DEFAULT_ENUMERATION_CAP)?;
    let omegas: Vec<PauliTensor> = partitions.iter().map(omega).collect();
    let n = partitions.len();
    let mut gram = QMatrix::zeros(n, n);
    for p in 0..n {
        for q in p..n {
            let v = scalar_product(&omegas[p], &omegas[q]).expect("legs agree");
            gram.set(p, q, v.clone());
            gram.set(q, p, v);
        }
    }
    let weights = gram.invert_fraction_free()?;
    Ok(InvariantProjection {
        k,
        partitions,
        omegas,
        gram,
        weights,
    })
}

/// Independent oracle for [`fixed_point_projection`]: every entry of `E` is
/// an exact sphere integral of a product of adjoint-rotation entries,
/// `<E c_j, c_i> = integral of prod_l rho_{i_l j_l}`.
pub fn e_via_integration(k: usize) -> TensorOperator {
    let rho = adjoint_rotation();
    let dim = 4usize.pow(k as u32);
    let mut m = QMatrix::zeros(dim, dim);
    for i in MultiIndex::all(k) {
        for j in MultiIndex::all(k) {
            let mut poly = Poly4Q::one();
            let mut zero = false;
            for l in 0..k {
                let entry = &rho[i.get(l).slot()][j.get(l).slot()];
                if entry.is_zero() {
                    zero = true;
                    break;
                }
                poly = &poly * entry;
            }
            if zero {
                continue;
            }
            let v = integrate_poly(&poly);
            if !v.is_zero() {
                m.set(i.code(), j.code(), v);
            }
        }
    }
    TensorOperator { k, matrix: m }
}
