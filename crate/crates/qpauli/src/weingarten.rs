//! The combinatorial pipeline for Haar moments of the generators, and the
//! exact moment-matrix comparison against the Pauli-model pipeline.
//!
//! The Gram matrix of the partition vectors has entries `4^{#blocks(p v q)}`;
//! its exact inverse is the Weingarten matrix, and generator moments are
//! double sums of Weingarten weights against block-constancy indicators.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{Poly4Q, Rational};
use crate::haar::integrate_poly;
use crate::linalg::QMatrix;
use crate::nc::{enumerate_nc_capped, NCPartition};
use crate::pauli::projection_matrix;
use crate::tensor::{c_p_vector, fixed_point_projection, r_image_of_basis, MultiIndex};

/// Gram matrix of the partition vectors in canonical `NC(k)` order.
pub struct GramMatrix {
    k: usize,
    partitions: Vec<NCPartition>,
    matrix: QMatrix,
}

impl GramMatrix {
    pub fn order(&self) -> usize {
        self.k
    }

    pub fn partitions(&self) -> &[NCPartition] {
        &self.partitions
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }
}

/// Builds the exact Gram matrix: entry `(p, q) = 4^{#blocks(p v q)}`, the
/// number of multi-indices compatible with both partitions.
pub fn gram(k: usize) -> Result<GramMatrix> {
    let partitions = enumerate_nc_capped(k, crate::nc::DEFAULT_ENUMERATION_CAP)?;
    let n = partitions.len();
    let mut matrix = QMatrix::zeros(n, n);
    for p in 0..n {
        for q in p..n {
            let join = partitions[p].as_set().join(partitions[q].as_set())?;
            let v = Rational::from_int(4).powi(join.num_blocks() as u32);
            matrix.set(p, q, v.clone());
            matrix.set(q, p, v);
        }
    }
    Ok(GramMatrix {
        k,
        partitions,
        matrix,
    })
}

/// Exact inverse of the Gram matrix.
pub fn weingarten_matrix(k: usize) -> Result<QMatrix> {
    gram(k)?.matrix().invert_fraction_free()
}

/// Precomputed Weingarten data for moment evaluation at a fixed order.
pub struct WeingartenTable {
    partitions: Vec<NCPartition>,
    weingarten: QMatrix,
}

impl WeingartenTable {
    pub fn new(k: usize) -> Result<Self> {
        let g = gram(k)?;
        let weingarten = g.matrix().invert_fraction_free()?;
        Ok(WeingartenTable {
            partitions: g.partitions,
            weingarten,
        })
    }

    pub fn partitions(&self) -> &[NCPartition] {
        &self.partitions
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.weingarten
    }

    /// `integral of u_{i_1 j_1} ... u_{i_k j_k}` as the Weingarten double
    /// sum over compatible partition pairs.
    pub fn moment(&self, i: &MultiIndex, j: &MultiIndex) -> Result<Rational> {
        if i.len() != j.len() {
            return Err(Error::LengthMismatch {
                index_len: j.len(),
                ground: i.len(),
            });
        }
        let mut acc = Rational::zero();
        for (p, pp) in self.partitions.iter().enumerate() {
            if !pp.delta(i)? {
                continue;
            }
            for (q, qq) in self.partitions.iter().enumerate() {
                if qq.delta(j)? {
                    acc += self.weingarten.get(p, q);
                }
            }
        }
        Ok(acc)
    }

    /// Dense `4^k x 4^k` moment matrix `U`, assembled as the sum of
    /// Weingarten-weighted outer products of partition indicator vectors.
    pub fn dense(&self, k: usize) -> QMatrix {
        let dim = 4usize.pow(k as u32);
        let mut u = QMatrix::zeros(dim, dim);
        let supports: Vec<Vec<usize>> = self
            .partitions
            .iter()
            .map(|p| {
                c_p_vector(p.as_set())
                    .terms()
                    .map(|(m, _)| m.code())
                    .collect()
            })
            .collect();
        for (p, sp) in supports.iter().enumerate() {
            for (q, sq) in supports.iter().enumerate() {
                let w = self.weingarten.get(p, q);
                if w.is_zero() {
                    continue;
                }
                for &i in sp {
                    for &j in sq {
                        u.add_assign_at(i, j, w);
                    }
                }
            }
        }
        u
    }
}

/// One-shot Haar moment of a product of generators.
pub fn haar_moment_u(i: &MultiIndex, j: &MultiIndex) -> Result<Rational> {
    WeingartenTable::new(i.len())?.moment(i, j)
}

/// Which of the two exact model pipelines evaluates the moment.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ModelPipeline {
    /// Expand the product of projection matrices symbolically and integrate.
    Polynomial,
    /// Evaluate `<R* E R (c_j), c_i>` through the tensor calculus.
    Operator,
}

/// Haar moment of the model projections `integral of pi_{i_1 j_1} ... pi_{i_k j_k}`
/// under the normalized trace.
pub fn model_moment(i: &MultiIndex, j: &MultiIndex, pipeline: ModelPipeline) -> Result<Rational> {
    if i.len() != j.len() {
        return Err(Error::LengthMismatch {
            index_len: j.len(),
            ground: i.len(),
        });
    }
    let k = i.len();
    match pipeline {
        ModelPipeline::Polynomial => Ok(model_moment_polynomial(i, j)),
        ModelPipeline::Operator => {
            let e = fixed_point_projection(k)?;
            let table = OperatorMoments::new(&e);
            Ok(table.moment(i, j))
        }
    }
}

fn model_moment_polynomial(i: &MultiIndex, j: &MultiIndex) -> Rational {
    let k = i.len();
    let mut product = projection_matrix(i.get(0), j.get(0));
    for l in 1..k {
        let next = projection_matrix(i.get(l), j.get(l));
        product = crate::polymat::mul(&product, &next);
    }
    let mut trace = Poly4Q::zero();
    for d in 0..4 {
        trace = &trace + &product[d][d];
    }
    integrate_poly(&trace.scale_rational(&Rational::new(1, 4)))
}

/// Dense evaluation of `<R* E R (c_j), c_i>` for every index pair: since
/// `R` maps each basis vector to a signed half basis vector, the moment is
/// `sign_i sign_j / 4` times an entry of the dense `E`.
struct OperatorMoments {
    images: Vec<(i8, usize)>,
    e_dense: QMatrix,
}

impl OperatorMoments {
    fn new(e: &crate::tensor::InvariantProjection) -> Self {
        let k = e.legs();
        let images: Vec<(i8, usize)> = MultiIndex::all(k)
            .map(|m| {
                let (sign, image) = r_image_of_basis(m);
                (sign, image.code())
            })
            .collect();
        OperatorMoments {
            images,
            e_dense: e.dense().matrix,
        }
    }

    fn moment(&self, i: &MultiIndex, j: &MultiIndex) -> Rational {
        let (si, mi) = self.images[i.code()];
        let (sj, mj) = self.images[j.code()];
        let quarter = Rational::new((si * sj) as i64, 4);
        &quarter * self.e_dense.get(mi, mj)
    }
}

/// Outcome of the exact moment-matrix comparison `P = U` at a fixed order.
#[derive(Clone, Debug)]
pub struct MomentMatrixReport {
    pub k: usize,
    pub entries_compared: usize,
    /// Exact rational, zero iff the pipelines agree everywhere.
    pub max_abs_discrepancy: Rational,
    /// First offending pair `(i, j, model value, weingarten value)`.
    pub first_mismatch: Option<(Vec<u8>, Vec<u8>, Rational, Rational)>,
    pub elapsed: Duration,
}

impl MomentMatrixReport {
    pub fn pass(&self) -> bool {
        self.max_abs_discrepancy.is_zero()
    }
}

/// Compares the Pauli-model moment to the Weingarten moment for every pair
/// of multi-indices of length `k`, exactly.
pub fn verify_faithfulness(k: usize) -> Result<MomentMatrixReport> {
    let start = Instant::now();
    let e = fixed_point_projection(k)?;
    let ops = OperatorMoments::new(&e);
    let table = WeingartenTable::new(k)?;
    let u = table.dense(k);
    let dim = 4usize.pow(k as u32);

    struct RowResult {
        max_abs: Rational,
        mismatch: Option<(usize, usize, Rational, Rational)>,
    }

    let rows: Vec<RowResult> = (0..dim)
        .into_par_iter()
        .map(|icode| {
            let i = MultiIndex::from_code(k, icode);
            let mut max_abs = Rational::zero();
            let mut mismatch = None;
            for jcode in 0..dim {
                let j = MultiIndex::from_code(k, jcode);
                let p = ops.moment(&i, &j);
                let uv = u.get(icode, jcode);
                if &p != uv {
                    let diff = (&p - uv).abs();
                    if diff > max_abs {
                        max_abs = diff;
                    }
                    if mismatch.is_none() {
                        mismatch = Some((icode, jcode, p, uv.clone()));
                    }
                }
            }
            RowResult { max_abs, mismatch }
        })
        .collect();

    let mut max_abs = Rational::zero();
    let mut first = None;
    for row in rows {
        if row.max_abs > max_abs {
            max_abs = row.max_abs;
        }
        if first.is_none() {
            if let Some((ic, jc, p, uv)) = row.mismatch {
                first = Some((
                    MultiIndex::from_code(k, ic).to_vec(),
                    MultiIndex::from_code(k, jc).to_vec(),
                    p,
                    uv,
                ));
            }
        }
    }

    Ok(MomentMatrixReport {
        k,
        entries_compared: dim * dim,
        max_abs_discrepancy: max_abs,
        first_mismatch: first,
        elapsed: start.elapsed(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::seeded_rng;
    use crate::nc::enumerate_nc;
    use rand::Rng;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn mi(v: &[u8]) -> MultiIndex {
        MultiIndex::from_slice(v)
    }

    #[test]
    fn gram_small_orders() {
        let g1 = gram(1).unwrap();
        assert_eq!(g1.matrix(), &QMatrix::from_rows(vec![vec![q(4, 1)]]));

        // order (0_2, 1_2)
        let g2 = gram(2).unwrap();
        assert_eq!(
            g2.matrix(),
            &QMatrix::from_rows(vec![
                vec![q(16, 1), q(4, 1)],
                vec![q(4, 1), q(4, 1)],
            ])
        );

        // k=3 entry (0_3, 1_3): only constant multi-indices
        let g3 = gram(3).unwrap();
        let i0 = g3
            .partitions()
            .iter()
            .position(|p| p.num_blocks() == 3)
            .unwrap();
        let i1 = g3
            .partitions()
            .iter()
            .position(|p| p.num_blocks() == 1)
            .unwrap();
        assert_eq!(g3.matrix().get(i0, i1), &q(4, 1));
    }

    #[test]
    fn gram_matches_bruteforce_counting() {
        for k in 1..=4 {
            let g = gram(k).unwrap();
            for (pi, p) in g.partitions().iter().enumerate() {
                for (qi, qq) in g.partitions().iter().enumerate() {
                    let count = MultiIndex::all(k)
                        .filter(|i| p.delta(i).unwrap() && qq.delta(i).unwrap())
                        .count();
                    assert_eq!(
                        g.matrix().get(pi, qi),
                        &Rational::from_int(count as i64),
                        "k={k} p={p} q={qq}"
                    );
                }
            }
        }
    }

    #[test]
    fn weingarten_inverse_contract() {
        assert_eq!(
            weingarten_matrix(1).unwrap(),
            QMatrix::from_rows(vec![vec![q(1, 4)]])
        );
        assert_eq!(
            weingarten_matrix(2).unwrap(),
            QMatrix::from_rows(vec![
                vec![q(4, 48), q(-4, 48)],
                vec![q(-4, 48), q(16, 48)],
            ])
        );
        for k in 1..=6 {
            let g = gram(k).unwrap();
            let w = g.matrix().invert_fraction_free().unwrap();
            let n = g.partitions().len();
            assert_eq!(w.mul(g.matrix()), QMatrix::identity(n), "k={k}");
        }
    }

    #[test]
    fn haar_moment_examples() {
        assert_eq!(haar_moment_u(&mi(&[1]), &mi(&[1])).unwrap(), q(1, 4));
        // orthogonal row projections multiply to zero
        assert_eq!(haar_moment_u(&mi(&[1, 1]), &mi(&[1, 2])).unwrap(), q(0, 1));
        // the diagonal pair u_11 u_22
        assert_eq!(haar_moment_u(&mi(&[1, 2]), &mi(&[1, 2])).unwrap(), q(1, 12));
        assert!(haar_moment_u(&mi(&[1]), &mi(&[1, 1])).is_err());
    }

    #[test]
    fn row_sums_telescope() {
        // sum_j integral(u_{1j} u_22) = integral(u_22) = 1/4, and the k=3
        // analogue: rows of a magic unitary sum to one
        let t2 = WeingartenTable::new(2).unwrap();
        let mut acc = Rational::zero();
        for j1 in 1..=4u8 {
            acc += &t2.moment(&mi(&[1, 2]), &mi(&[j1, 2])).unwrap();
        }
        assert_eq!(acc, q(1, 4));

        let t3 = WeingartenTable::new(3).unwrap();
        let mut acc3 = Rational::zero();
        for j1 in 1..=4u8 {
            acc3 += &t3.moment(&mi(&[1, 2, 3]), &mi(&[j1, 2, 3])).unwrap();
        }
        assert_eq!(acc3, t2.moment(&mi(&[2, 3]), &mi(&[2, 3])).unwrap());
    }

    #[test]
    fn alphabet_permutation_symmetry() {
        // relabeling {1..4} simultaneously in i and j leaves moments fixed
        let table = WeingartenTable::new(3).unwrap();
        let sigma = [3u8, 1, 4, 2];
        let apply = |m: &MultiIndex| {
            let v: Vec<u8> = m.to_vec().iter().map(|&x| sigma[(x - 1) as usize]).collect();
            MultiIndex::from_slice(&v)
        };
        let mut rng = seeded_rng(5, 0);
        for _ in 0..200 {
            let i = MultiIndex::from_code(3, rng.gen_range(0..64));
            let j = MultiIndex::from_code(3, rng.gen_range(0..64));
            assert_eq!(
                table.moment(&i, &j).unwrap(),
                table.moment(&apply(&i), &apply(&j)).unwrap()
            );
        }
    }

    #[test]
    fn model_moment_k1_is_quarter() {
        for i in 1..=4u8 {
            for j in 1..=4u8 {
                for pipeline in [ModelPipeline::Polynomial, ModelPipeline::Operator] {
                    assert_eq!(
                        model_moment(&mi(&[i]), &mi(&[j]), pipeline).unwrap(),
                        q(1, 4)
                    );
                }
            }
        }
    }

    #[test]
    fn model_moment_examples() {
        // orthogonal magic-basis vectors: pi_11 pi_12 has zero trace
        for pipeline in [ModelPipeline::Polynomial, ModelPipeline::Operator] {
            assert_eq!(
                model_moment(&mi(&[1, 1]), &mi(&[1, 2]), pipeline).unwrap(),
                q(0, 1)
            );
            // tr(pi_11 pi_22) integrates to 1/12
            assert_eq!(
                model_moment(&mi(&[1, 2]), &mi(&[1, 2]), pipeline).unwrap(),
                q(1, 12)
            );
        }
    }

    #[test]
    fn pipelines_agree_exhaustively_small_k() {
        for k in 1..=2 {
            let e = fixed_point_projection(k).unwrap();
            let ops = OperatorMoments::new(&e);
            for i in MultiIndex::all(k) {
                for j in MultiIndex::all(k) {
                    assert_eq!(
                        model_moment_polynomial(&i, &j),
                        ops.moment(&i, &j),
                        "k={k} i={i:?} j={j:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn pipelines_agree_on_sampled_pairs_k3() {
        let e = fixed_point_projection(3).unwrap();
        let ops = OperatorMoments::new(&e);
        let mut rng = seeded_rng(17, 0);
        for _ in 0..100 {
            let i = MultiIndex::from_code(3, rng.gen_range(0..64));
            let j = MultiIndex::from_code(3, rng.gen_range(0..64));
            assert_eq!(model_moment_polynomial(&i, &j), ops.moment(&i, &j));
        }
    }

    #[test]
    fn faithfulness_small_orders() {
        for k in 1..=3 {
            let report = verify_faithfulness(k).unwrap();
            assert!(report.pass(), "k={k}: {report:?}");
            assert_eq!(report.entries_compared, 16usize.pow(k as u32));
            assert!(report.first_mismatch.is_none());
        }
    }

    #[test]
    fn prop_41_identity() {
        // R* E R (c_p) = c_p for all noncrossing p
        for k in 1..=4 {
            let e = fixed_point_projection(k).unwrap();
            for p in enumerate_nc(k).unwrap() {
                let cp = c_p_vector(p.as_set());
                let image = crate::tensor::apply_r_star(
                    &e.apply(&crate::tensor::apply_r(&cp)).unwrap(),
                );
                assert_eq!(image, cp, "k={k} p={p}");
            }
        }
    }
}
