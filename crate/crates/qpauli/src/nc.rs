//! Set partitions, non-crossing partitions, Kreweras complements, and the
//! block-constancy indicator used by the Weingarten sums.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::comb;
use crate::tensor::MultiIndex;

/// Default cap for `enumerate_nc` (`C_10 = 16796`).
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// Partition of `{1..k}` into disjoint nonempty blocks.
///
/// Canonical form: each block sorted ascending, blocks ordered by minimum
/// element. The derived `Ord` on that representation fixes the canonical
/// enumeration order used for all matrix layouts.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn from_blocks(k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; k + 1];
        let mut count = 0usize;
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &e in block {
                if e == 0 || e > k {
                    return Err(Error::InvalidPartition(format!(
                        "element {e} outside 1..={k}"
                    )));
                }
                if seen[e] {
                    return Err(Error::InvalidPartition(format!("element {e} repeated")));
                }
                seen[e] = true;
                count += 1;
            }
        }
        if count != k {
            return Err(Error::InvalidPartition(format!(
                "blocks cover {count} of {k} elements"
            )));
        }
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        Ok(SetPartition { k, blocks })
    }

    /// The trivial partition `0_k` of all singletons.
    pub fn singletons(k: usize) -> Self {
        SetPartition {
            k,
            blocks: (1..=k).map(|e| vec![e]).collect(),
        }
    }

    /// The rough partition `1_k` with a single block.
    pub fn full(k: usize) -> Self {
        SetPartition {
            k,
            blocks: vec![(1..=k).collect()],
        }
    }

    pub fn ground_size(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block id of each element, indexed `0..k` for elements `1..=k`.
    pub fn block_ids(&self) -> Vec<usize> {
        let mut ids = vec![0usize; self.k];
        for (b, block) in self.blocks.iter().enumerate() {
            for &e in block {
                ids[e - 1] = b;
            }
        }
        ids
    }

    /// True iff no `a < b < c < d` has `a, c` in one block and `b, d` in
    /// another: checked pairwise by looking for an alternating pattern.
    pub fn is_noncrossing(&self) -> bool {
        for (x, bx) in self.blocks.iter().enumerate() {
            for by in self.blocks.iter().skip(x + 1) {
                let mut merged: Vec<(usize, bool)> = bx
                    .iter()
                    .map(|&e| (e, false))
                    .chain(by.iter().map(|&e| (e, true)))
                    .collect();
                merged.sort_unstable();
                let switches = merged
                    .windows(2)
                    .filter(|w| w[0].1 != w[1].1)
                    .count();
                if switches >= 3 {
                    return false;
                }
            }
        }
        true
    }

    /// Indicator that the multi-index is constant on every block.
    pub fn delta(&self, j: &MultiIndex) -> Result<bool> {
        if j.len() != self.k {
            return Err(Error::LengthMismatch {
                index_len: j.len(),
                ground: self.k,
            });
        }
        Ok(self.blocks.iter().all(|block| {
            let first = j.get(block[0] - 1);
            block.iter().all(|&e| j.get(e - 1) == first)
        }))
    }

    /// Smallest partition refined by neither input: connected components of
    /// the union of the two block graphs.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        if self.k != other.k {
            return Err(Error::LengthMismatch {
                index_len: other.k,
                ground: self.k,
            });
        }
        let mut uf = UnionFind::new(self.k);
        for part in [self, other] {
            for block in &part.blocks {
                for w in block.windows(2) {
                    uf.union(w[0] - 1, w[1] - 1);
                }
            }
        }
        Ok(uf.into_partition())
    }
}

impl fmt::Display for SetPartition {
    /// Text format used by the CLI and JSON output: `{1,5}{2}{3,4}{6}`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in &self.blocks {
            write!(f, "{{")?;
            for (i, e) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "}}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.is_empty() && !s.ends_with('}') {
            return Err(Error::InvalidPartition(format!(
                "unterminated block in {s:?}"
            )));
        }
        let mut blocks = Vec::new();
        let mut max = 0usize;
        for piece in s.split_terminator('}') {
            let piece = piece.trim();
            let inner = piece.strip_prefix('{').ok_or_else(|| {
                Error::InvalidPartition(format!("expected '{{' in {s:?}"))
            })?;
            let mut block = Vec::new();
            for tok in inner.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let e: usize = tok.parse().map_err(|_| {
                    Error::InvalidPartition(format!("bad element {tok:?}"))
                })?;
                max = max.max(e);
                block.push(e);
            }
            if !block.is_empty() {
                blocks.push(block);
            }
        }
        SetPartition::from_blocks(max, blocks)
    }
}

/// A partition validated to be non-crossing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NCPartition(SetPartition);

impl NCPartition {
    pub fn new(p: SetPartition) -> Result<Self> {
        if !p.is_noncrossing() {
            return Err(Error::InvalidPartition(format!("{p} is crossing")));
        }
        Ok(NCPartition(p))
    }

    pub fn singletons(k: usize) -> Self {
        NCPartition(SetPartition::singletons(k))
    }

    pub fn full(k: usize) -> Self {
        NCPartition(SetPartition::full(k))
    }

    pub fn as_set(&self) -> &SetPartition {
        &self.0
    }

    pub fn ground_size(&self) -> usize {
        self.0.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.0.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.0.num_blocks()
    }

    pub fn delta(&self, j: &MultiIndex) -> Result<bool> {
        self.0.delta(j)
    }

    /// Kreweras complement on the interleaved point set `1,1',...,k,k'`,
    /// relabeled back to `{1..k}`.
    ///
    /// Primed points `i'` and `j'` (for `i < j`) can be joined without
    /// crossing `p` exactly when every block of `p` is contained in or
    /// disjoint from the interval `[i+1, j]`; the complement is the
    /// partition into the equivalence classes of that relation (the faces
    /// of the planar diagram of `p`).
    pub fn kreweras(&self) -> NCPartition {
        let k = self.0.k;
        let mut uf = UnionFind::new(k);
        for i in 1..=k {
            'pair: for j in (i + 1)..=k {
                for block in &self.0.blocks {
                    let inside = block.iter().any(|&e| e > i && e <= j);
                    let outside = block.iter().any(|&e| e <= i || e > j);
                    if inside && outside {
                        continue 'pair;
                    }
                }
                uf.union(i - 1, j - 1);
            }
        }
        let complement = uf.into_partition();
        debug_assert!(complement.is_noncrossing());
        NCPartition(complement)
    }

    /// The union of `p` on `{1..k}` and `q` primed, on the interleaved set
    /// `1, 1', 2, 2', ..., k, k'`, tested for crossings: the defining
    /// compatibility of the Kreweras complement.
    pub fn interleaved_union_noncrossing(&self, primed: &NCPartition) -> bool {
        let k = self.0.k;
        assert_eq!(primed.ground_size(), k);
        // position of i is 2i-1, position of i' is 2i
        let mut blocks: Vec<Vec<usize>> = self
            .0
            .blocks
            .iter()
            .map(|b| b.iter().map(|&e| 2 * e - 1).collect())
            .collect();
        blocks.extend(
            primed
                .blocks()
                .iter()
                .map(|b| b.iter().map(|&e| 2 * e).collect::<Vec<_>>()),
        );
        SetPartition::from_blocks(2 * k, blocks)
            .expect("interleaving is a partition")
            .is_noncrossing()
    }
}

impl fmt::Display for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for NCPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All non-crossing partitions of `{1..k}` in canonical order; there are
/// exactly `C_k` of them.
pub fn enumerate_nc(k: usize) -> Result<Vec<NCPartition>> {
    enumerate_nc_capped(k, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_nc_capped(k: usize, cap: usize) -> Result<Vec<NCPartition>> {
    if k == 0 || k > cap {
        return Err(Error::OrderOutOfRange { k, limit: cap });
    }
    let mut parts: Vec<NCPartition> = nc_blocks(&(1..=k).collect::<Vec<_>>())
        .into_iter()
        .map(|blocks| {
            NCPartition(
                SetPartition::from_blocks(k, blocks).expect("generated blocks partition 1..k"),
            )
        })
        .collect();
    parts.sort();
    Ok(parts)
}

/// Recursive interval decomposition. The block of the least element splits
/// the remaining elements into independent gaps (between consecutive block
/// elements, plus the tail); every non-crossing partition arises exactly
/// once from a choice of that block and non-crossing partitions of the gaps.
fn nc_blocks(elements: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if elements.is_empty() {
        return vec![Vec::new()];
    }
    let first = elements[0];
    let rest = &elements[1..];
    let mut out = Vec::new();
    for choice in subsets(rest) {
        let mut block = vec![first];
        block.extend(choice.iter().copied());
        let mut gaps: Vec<Vec<usize>> = vec![Vec::new(); block.len()];
        for &e in rest {
            if choice.contains(&e) {
                continue;
            }
            let below = block.iter().filter(|&&b| b < e).count();
            gaps[below - 1].push(e);
        }
        let mut partials: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for gap in &gaps {
            let sub = nc_blocks(gap);
            let mut next = Vec::with_capacity(partials.len() * sub.len());
            for p in &partials {
                for s in &sub {
                    let mut combined = p.clone();
                    combined.extend(s.iter().cloned());
                    next.push(combined);
                }
            }
            partials = next;
        }
        out.extend(partials);
    }
    out
}

fn subsets(elements: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &e in elements {
        let mut extended: Vec<Vec<usize>> = out
            .iter()
            .map(|s| {
                let mut s = s.clone();
                s.push(e);
                s
            })
            .collect();
        out.append(&mut extended);
    }
    out
}

/// All set partitions of `{1..k}` via restricted growth strings; used as the
/// exhaustive oracle for the non-crossing enumeration.
pub fn enumerate_set_partitions(k: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; k];
    loop {
        let nb = rgs.iter().copied().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nb];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        out.push(SetPartition::from_blocks(k, blocks).expect("rgs is a partition"));
        // next restricted growth string
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if i == 0 {
                return out;
            }
            let prefix_max = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for v in rgs[i + 1..].iter_mut() {
                    *v = 0;
                }
                break;
            }
        }
    }
}

/// Catalan number `C_k = (2k)! / (k! (k+1)!)`.
pub fn catalan(k: usize) -> BigInt {
    let n = comb::factorial(2 * k as u64);
    n / (comb::factorial(k as u64) * comb::factorial(k as u64 + 1))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[rb] = ra;
        }
    }

    fn into_partition(mut self) -> SetPartition {
        let n = self.parent.len();
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for e in 0..n {
            let root = self.find(e);
            groups.entry(root).or_default().push(e + 1);
        }
        SetPartition::from_blocks(n, groups.into_values().collect())
            .expect("union-find classes partition the ground set")
    }
}
