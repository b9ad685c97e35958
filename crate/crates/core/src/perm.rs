//! Permutations of the natural numbers that map every block of a partition
//! onto itself.
//!
//! Such a permutation is fixed by its partition and one finite permutation
//! per block. Rule-based variants compute a term from the position
//! `(L, R, R')` alone, so no block is ever materialized except for order
//! computations.

use std::sync::Arc;

use crate::diagonals::index_to_pair;
use crate::error::{Error, Result};
use crate::partition::{Family, PartialSumTable, PartitionSpec, Position};

/// Largest block `block_order` will materialize by default.
pub const DEFAULT_BLOCK_CAP: u64 = 1_000_000;

/// Blocks inspected when checking that one partition refines another
/// during composition.
pub const COMPOSE_REFINEMENT_HORIZON: u64 = 256;

/// How each block is permuted.
#[derive(Debug, Clone)]
pub enum Rule {
    Identity,
    /// `p(R) = R'`: each block read backwards.
    Reversal,
    /// The first half of a block is reversed to the front, the rest follows
    /// in order from 1: `3,1,2`, `7,6,5,1,2,3,4`, ...
    HalfShuffle,
    /// Cyclic shift of each block by `pivot + 1` with `pivot = floor((4L-1)/2)`;
    /// needs `b_s = 4s - 1`.
    Rotation,
    /// In-block images, one-based, for the leading blocks. Later blocks are
    /// left fixed.
    ExplicitBlocks(Vec<Vec<u64>>),
    /// `outer(inner(n))`.
    Composition(Box<IntraBlockPermutation>, Box<IntraBlockPermutation>),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Identity => "identity",
            Rule::Reversal => "reversal",
            Rule::HalfShuffle => "half-shuffle",
            Rule::Rotation => "rotation",
            Rule::ExplicitBlocks(_) => "explicit",
            Rule::Composition(..) => "composition",
        }
    }
}

fn supports_rotation(spec: &PartitionSpec) -> bool {
    matches!(
        spec.family(),
        Family::Linear { p1: 4, p0: -1 }
            | Family::MergedDiagonals {
                d: 2,
                start_first: true
            }
    )
}

/// Checks that `images` is a permutation of `1..=images.len()`.
pub fn check_images(images: &[u64]) -> Result<()> {
    let len = images.len() as u64;
    let mut seen = vec![false; images.len()];
    for (i, &p) in images.iter().enumerate() {
        if p == 0 || p > len {
            return Err(Error::domain(format!(
                "image {p} at position {} is outside 1..={len}",
                i + 1
            )));
        }
        if std::mem::replace(&mut seen[(p - 1) as usize], true) {
            return Err(Error::domain(format!("image {p} repeated")));
        }
    }
    Ok(())
}

/// Expands cycle notation over `1..=len` to one-line images.
pub fn cycles_to_images(len: u64, cycles: &[Vec<u64>]) -> Result<Vec<u64>> {
    let mut images: Vec<u64> = (1..=len).collect();
    let mut used = vec![false; len as usize];
    for cycle in cycles {
        for (k, &x) in cycle.iter().enumerate() {
            if x == 0 || x > len {
                return Err(Error::domain(format!("cycle element {x} outside 1..={len}")));
            }
            if std::mem::replace(&mut used[(x - 1) as usize], true) {
                return Err(Error::domain(format!("{x} appears in two cycles")));
            }
            images[(x - 1) as usize] = cycle[(k + 1) % cycle.len()];
        }
    }
    Ok(images)
}

/// Cycle decomposition of one-line images, fixed points included.
pub fn cycles(images: &[u64]) -> Vec<Vec<u64>> {
    let mut seen = vec![false; images.len()];
    let mut out = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x as u64 + 1);
            x = (images[x] - 1) as usize;
        }
        out.push(cycle);
    }
    out
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> Option<u64> {
    (a / gcd(a, b)).checked_mul(b)
}

/// Order of a permutation given by one-line images: the LCM of its cycle
/// lengths.
pub fn permutation_order(images: &[u64]) -> Result<u64> {
    cycles(images)
        .iter()
        .try_fold(1u64, |acc, c| lcm(acc, c.len() as u64))
        .ok_or(Error::Overflow("permutation order"))
}

/// Whether every `B_beta(k)`, `k <= horizon`, is also a partial sum of
/// `gamma`, i.e. each block of `beta` is a union of blocks of `gamma`.
///
/// An explicit `beta` is checked only over its own blocks; a partial sum
/// that overflows ends the check.
pub fn refines(gamma: &PartialSumTable, beta: &PartialSumTable, horizon: u64) -> bool {
    let horizon = beta.spec().block_count().map_or(horizon, |c| c.min(horizon));
    for k in 1..=horizon {
        let Ok(end) = beta.partial_sum(k) else {
            break;
        };
        match gamma.locate(end) {
            Ok(p) if p.right == 1 => {}
            _ => return false,
        }
    }
    true
}

/// Lengths and orders of the leading blocks of a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderReport {
    pub horizon_blocks: u64,
    /// LCM of `per_block_orders`; `None` once it leaves 64 bits.
    pub lcm: Option<u64>,
    /// The LCM did not change over the trailing `ceil(horizon/2)` blocks.
    pub stabilized: bool,
    pub per_block_orders: Vec<u64>,
}

/// A partition together with a rule permuting each of its blocks.
#[derive(Debug, Clone)]
pub struct IntraBlockPermutation {
    beta: Arc<PartialSumTable>,
    rule: Rule,
    cap: u64,
}

impl IntraBlockPermutation {
    pub fn new(beta: PartitionSpec, rule: Rule) -> Result<Self> {
        Self::with_table(Arc::new(PartialSumTable::new(beta)), rule)
    }

    pub fn with_table(beta: Arc<PartialSumTable>, rule: Rule) -> Result<Self> {
        match &rule {
            Rule::Rotation if !supports_rotation(beta.spec()) => {
                return Err(Error::domain("rotation is defined for b_s = 4s - 1 only"));
            }
            Rule::ExplicitBlocks(blocks) => {
                for (k, images) in blocks.iter().enumerate() {
                    let len = beta.block_length(k as u64 + 1)?;
                    if images.len() as u64 != len {
                        return Err(Error::domain(format!(
                            "block {} has length {len}, got {} images",
                            k + 1,
                            images.len()
                        )));
                    }
                    check_images(images)?;
                }
            }
            _ => {}
        }
        Ok(IntraBlockPermutation {
            beta,
            rule,
            cap: DEFAULT_BLOCK_CAP,
        })
    }

    pub fn identity(beta: Arc<PartialSumTable>) -> Self {
        IntraBlockPermutation {
            beta,
            rule: Rule::Identity,
            cap: DEFAULT_BLOCK_CAP,
        }
    }

    /// Sets the largest block `block_order` may materialize.
    pub fn with_block_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn beta(&self) -> &Arc<PartialSumTable> {
        &self.beta
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    /// One-based image of in-block offset `pos.left`, for non-composite
    /// rules.
    fn image_in_block(&self, pos: &Position) -> u64 {
        let (r, rp) = (pos.left, pos.right);
        match &self.rule {
            Rule::Identity | Rule::Composition(..) => r,
            Rule::Reversal => rp,
            Rule::HalfShuffle => {
                if rp > r {
                    rp
                } else {
                    r - (r + rp - 1) / 2
                }
            }
            Rule::Rotation => {
                let pivot = (4 * pos.block - 1) / 2;
                if r < rp {
                    r + pivot + 1
                } else {
                    r - pivot
                }
            }
            Rule::ExplicitBlocks(blocks) => match blocks.get((pos.block - 1) as usize) {
                Some(images) => images[(r - 1) as usize],
                None => r,
            },
        }
    }

    /// `a(n)`.
    pub fn term(&self, n: u64) -> Result<u64> {
        if let Rule::Composition(outer, inner) = &self.rule {
            return outer.term(inner.term(n)?);
        }
        let pos = self.beta.locate(n)?;
        Ok(pos.block_start() + self.image_in_block(&pos))
    }

    /// `f ∘ g`. The partitions must agree or one must refine the other; the
    /// result permutes the blocks of the coarser one.
    pub fn compose(f: &Self, g: &Self) -> Result<Self> {
        let beta = if f.beta.spec() == g.beta.spec()
            || refines(&g.beta, &f.beta, COMPOSE_REFINEMENT_HORIZON)
        {
            f.beta.clone()
        } else if refines(&f.beta, &g.beta, COMPOSE_REFINEMENT_HORIZON) {
            g.beta.clone()
        } else {
            return Err(Error::domain(
                "cannot compose permutations over incompatible partitions",
            ));
        };
        Ok(IntraBlockPermutation {
            beta,
            rule: Rule::Composition(Box::new(f.clone()), Box::new(g.clone())),
            cap: f.cap.min(g.cap),
        })
    }

    /// `self^e` by repeated squaring; `self^0` is the identity.
    pub fn power(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.beta.clone());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Self::compose(&acc, &base).expect("same partition");
            }
            e >>= 1;
            if e > 0 {
                base = Self::compose(&base, &base).expect("same partition");
            }
        }
        acc
    }

    /// In-block images of block `k`, one-based.
    pub fn block_images(&self, k: u64) -> Result<Vec<u64>> {
        let len = self.beta.block_length(k)?;
        if len > self.cap {
            return Err(Error::Resource {
                requested: len,
                cap: self.cap,
            });
        }
        let range = self.beta.block_range(k)?;
        let start = range.start() - 1;
        range
            .map(|n| {
                let a = self.term(n)?;
                match a.checked_sub(start) {
                    Some(p) if p >= 1 && p <= len => Ok(p),
                    _ => Err(Error::domain(format!("a({n}) = {a} leaves block {k}"))),
                }
            })
            .collect()
    }

    /// Order of the permutation acting on block `k`.
    pub fn block_order(&self, k: u64) -> Result<u64> {
        permutation_order(&self.block_images(k)?)
    }

    /// Per-block orders and their LCM over blocks `1..=horizon`.
    pub fn sequence_order(&self, horizon: u64) -> Result<OrderReport> {
        let mut per_block_orders = Vec::with_capacity(horizon as usize);
        let mut lcm_acc = Some(1u64);
        let tail_from = horizon - horizon.div_ceil(2) + 1;
        let mut lcm_at_tail = None;
        for k in 1..=horizon {
            let o = self.block_order(k)?;
            per_block_orders.push(o);
            lcm_acc = lcm_acc.and_then(|l| lcm(l, o));
            if k == tail_from {
                lcm_at_tail = lcm_acc;
            }
        }
        Ok(OrderReport {
            horizon_blocks: horizon,
            lcm: lcm_acc,
            stabilized: lcm_acc.is_some() && lcm_acc == lcm_at_tail,
            per_block_orders,
        })
    }
}

/// Closed form of the rotation permutation over `b_s = 4s - 1`:
/// `((i+j-1)^2 + i - j + 3 + 2(i+j-1)(-1)^(i+j)) / 2` with `(i, j)` the
/// diagonal coordinates of `n`.
pub fn term_closed_rotation(n: u64) -> Result<u64> {
    let p = index_to_pair(n)?;
    let (i, j) = (p.i as i128, p.j as i128);
    let s = i + j - 1;
    let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
    let a = (s * s + i - j + 3 + 2 * s * sign) / 2;
    u64::try_from(a).map_err(|_| Error::Overflow("rotation term"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta() -> Arc<PartialSumTable> {
        Arc::new(PartialSumTable::new(PartitionSpec::linear(4, -1).unwrap()))
    }

    fn perm(rule: Rule) -> IntraBlockPermutation {
        IntraBlockPermutation::with_table(beta(), rule).unwrap()
    }

    fn first(p: &IntraBlockPermutation, count: u64) -> Vec<u64> {
        (1..=count).map(|n| p.term(n).unwrap()).collect()
    }

    #[test]
    fn golden_rows() {
        assert_eq!(
            first(&perm(Rule::Reversal), 21),
            [3, 2, 1, 10, 9, 8, 7, 6, 5, 4, 21, 20, 19, 18, 17, 16, 15, 14, 13, 12, 11]
        );
        assert_eq!(
            first(&perm(Rule::HalfShuffle), 21),
            [3, 1, 2, 10, 9, 8, 4, 5, 6, 7, 21, 20, 19, 18, 17, 11, 12, 13, 14, 15, 16]
        );
        assert_eq!(
            first(&perm(Rule::Rotation), 21),
            [3, 1, 2, 8, 9, 10, 4, 5, 6, 7, 17, 18, 19, 20, 21, 11, 12, 13, 14, 15, 16]
        );
    }

    #[test]
    fn rotation_needs_its_partition() {
        let spec = PartitionSpec::naturals();
        assert!(matches!(
            IntraBlockPermutation::new(spec, Rule::Rotation),
            Err(Error::Domain(_))
        ));
        let diag = PartitionSpec::merged_diagonals(2, true).unwrap();
        let p = IntraBlockPermutation::new(diag, Rule::Rotation).unwrap();
        assert_eq!(p.term(7).unwrap(), 4);
    }

    #[test]
    fn closed_rotation() {
        assert_eq!(term_closed_rotation(1).unwrap(), 3);
        assert_eq!(term_closed_rotation(4).unwrap(), 8);
        assert_eq!(term_closed_rotation(11).unwrap(), 17);
        let p = perm(Rule::Rotation);
        for n in 1..=10_000 {
            assert_eq!(term_closed_rotation(n).unwrap(), p.term(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn orders() {
        let rev = perm(Rule::Reversal);
        let r = rev.sequence_order(20).unwrap();
        assert_eq!((r.lcm, r.stabilized), (Some(2), true));

        let hs = perm(Rule::HalfShuffle);
        assert_eq!(hs.block_order(1).unwrap(), 3);
        assert_eq!(hs.block_order(2).unwrap(), 12);
        let r = hs.sequence_order(20).unwrap();
        assert_eq!((r.lcm, r.stabilized), (Some(12), true));

        let rot = perm(Rule::Rotation);
        let r = rot.sequence_order(10).unwrap();
        let lengths: Vec<u64> = (1..=10).map(|s| 4 * s - 1).collect();
        assert_eq!(r.per_block_orders, lengths);
        assert!(!r.stabilized);
    }

    #[test]
    fn powers() {
        let rev = perm(Rule::Reversal);
        let id = rev.power(2);
        assert!((1..=10_000).all(|n| id.term(n).unwrap() == n));

        let hs = perm(Rule::HalfShuffle);
        let p12 = hs.power(12);
        let end = hs.beta().partial_sum(50).unwrap();
        assert!((1..=end).all(|n| p12.term(n).unwrap() == n));
        assert!((1..=end).any(|n| hs.power(6).term(n).unwrap() != n));
    }

    #[test]
    fn cyclic_group_law() {
        let hs = perm(Rule::HalfShuffle);
        for a in 0..=5 {
            for b in 0..=5 {
                let lhs = IntraBlockPermutation::compose(&hs.power(a), &hs.power(b)).unwrap();
                let rhs = hs.power(a + b);
                for n in 1..=1000 {
                    assert_eq!(lhs.term(n).unwrap(), rhs.term(n).unwrap());
                }
            }
        }
    }

    #[test]
    fn block_cap() {
        let p = perm(Rule::Reversal).with_block_cap(5);
        assert_eq!(p.block_order(1), Ok(2));
        assert_eq!(p.block_order(2), Err(Error::Resource { requested: 7, cap: 5 }));
    }

    #[test]
    fn refinement() {
        let t = |spec: PartitionSpec| PartialSumTable::new(spec);
        let ones = t(PartitionSpec::ones());
        let b = t(PartitionSpec::linear(4, -1).unwrap());
        assert!(refines(&ones, &b, 100));
        assert!(refines(&b, &b, 100));
        let two = t(PartitionSpec::constant(2).unwrap());
        let three = t(PartitionSpec::constant(3).unwrap());
        assert!(!refines(&two, &three, 10));
        let six = t(PartitionSpec::constant(6).unwrap());
        assert!(refines(&two, &six, 100));
    }

    #[test]
    fn refined_composition() {
        // gamma = 1,2 | 3 | 4,5,6 ... refines beta = 3,3,...
        let gamma = Arc::new(PartialSumTable::new(
            PartitionSpec::explicit(vec![2, 1, 1, 2, 3, 3]).unwrap(),
        ));
        let beta = Arc::new(PartialSumTable::new(
            PartitionSpec::explicit(vec![3, 3, 6]).unwrap(),
        ));
        let mu = IntraBlockPermutation::with_table(gamma.clone(), Rule::Reversal).unwrap();
        let alpha = IntraBlockPermutation::with_table(beta.clone(), Rule::HalfShuffle).unwrap();
        // mu is intra-block for beta as well
        let as_beta = IntraBlockPermutation::with_table(
            beta.clone(),
            Rule::ExplicitBlocks((1..=3).map(|k| mu.block_images_over(&beta, k)).collect()),
        )
        .unwrap();
        for n in 1..=12 {
            assert_eq!(as_beta.term(n).unwrap(), mu.term(n).unwrap());
        }
        let c = IntraBlockPermutation::compose(&alpha, &mu).unwrap();
        assert_eq!(c.beta().spec(), beta.spec());
        for k in 1..=3 {
            check_images(&c.block_images(k).unwrap()).unwrap();
        }
        let bad = IntraBlockPermutation::with_table(
            Arc::new(PartialSumTable::new(PartitionSpec::constant(2).unwrap())),
            Rule::Reversal,
        )
        .unwrap();
        let three = IntraBlockPermutation::with_table(
            Arc::new(PartialSumTable::new(PartitionSpec::constant(3).unwrap())),
            Rule::Reversal,
        )
        .unwrap();
        assert!(matches!(
            IntraBlockPermutation::compose(&bad, &three),
            Err(Error::Domain(_))
        ));
    }

    impl IntraBlockPermutation {
        /// Images of this permutation restricted to block `k` of `other`.
        fn block_images_over(&self, other: &PartialSumTable, k: u64) -> Vec<u64> {
            let range = other.block_range(k).unwrap();
            let start = range.start() - 1;
            range.map(|n| self.term(n).unwrap() - start).collect()
        }
    }

    #[test]
    fn explicit_blocks_and_cycles() {
        let images = cycles_to_images(7, &[vec![1, 3, 2], vec![5, 7]]).unwrap();
        assert_eq!(images, [3, 1, 2, 4, 7, 6, 5]);
        assert_eq!(permutation_order(&images).unwrap(), 6);
        let p = perm(Rule::ExplicitBlocks(vec![vec![2, 3, 1], images]));
        assert_eq!(first(&p, 12), [2, 3, 1, 6, 4, 5, 7, 10, 9, 8, 11, 12]);
        assert!(IntraBlockPermutation::with_table(beta(), Rule::ExplicitBlocks(vec![vec![1, 1, 2]])).is_err());
        assert!(cycles_to_images(3, &[vec![1, 2], vec![2, 3]]).is_err());
    }
}
