//! Generalized reluctant sequences.
//!
//! Row `k` holds the prefix `a_1 .. a_{B(k)}` of a source sequence repeated
//! `q` times (the reversed variant reverses the prefix first). The rows form
//! an irregular array whose block lengths are `c_s = q B(s)`, with partial
//! sums `C(s)`; locating `n` there gives the source index
//! `m = 1 + (R - 1) mod B(L)`, or `1 + (R' - 1) mod B(L)` when reversed.

use std::fmt;
use std::sync::Arc;

use crate::closed_forms::{ceil_corrected, cubic_largest_root, ClosedFormResult};
use crate::error::{Error, Result};
use crate::partition::{Family, PartialSumTable, PartitionSpec, Position, PrefixCache};

/// Longest row `row` will materialize by default.
pub const DEFAULT_ROW_CAP: u64 = 1_000_000;

/// A source sequence `a_1, a_2, ...` read by index.
pub trait TermSource: Send + Sync {
    fn term(&self, m: u64) -> Result<i64>;
}

impl<F> TermSource for F
where
    F: Fn(u64) -> Result<i64> + Send + Sync,
{
    fn term(&self, m: u64) -> Result<i64> {
        self(m)
    }
}

/// `a_m = m`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Naturals;

impl TermSource for Naturals {
    fn term(&self, m: u64) -> Result<i64> {
        i64::try_from(m).map_err(|_| Error::Overflow("term"))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ConstantTerms(pub i64);

impl TermSource for ConstantTerms {
    fn term(&self, _m: u64) -> Result<i64> {
        Ok(self.0)
    }
}

/// A finite list; reading past its end is a domain error.
#[derive(Debug, Clone)]
pub struct ListTerms(pub Vec<i64>);

impl TermSource for ListTerms {
    fn term(&self, m: u64) -> Result<i64> {
        m.checked_sub(1)
            .and_then(|i| self.0.get(i as usize))
            .copied()
            .ok_or_else(|| Error::domain(format!("source list has no term {m}")))
    }
}

/// Partial sums `C(s)` of `c_s = q B(s)`, cached append-only.
#[derive(Debug, Clone)]
pub struct ZetaTable {
    beta: Arc<PartialSumTable>,
    q: u64,
    cap: u64,
    cache: PrefixCache,
}

impl ZetaTable {
    pub fn new(beta: Arc<PartialSumTable>, q: u64) -> Self {
        let cap = beta
            .spec()
            .block_count()
            .unwrap_or(crate::partition::DEFAULT_CACHE_BLOCKS);
        ZetaTable {
            beta,
            q,
            cap,
            cache: PrefixCache::default(),
        }
    }

    /// `c_s = q B(s)`.
    pub fn block_length(&self, s: u64) -> Result<u64> {
        if s == 0 {
            return Err(Error::domain("block indices start at 1"));
        }
        self.beta
            .partial_sum(s)?
            .checked_mul(self.q)
            .ok_or(Error::Overflow("row length"))
    }

    fn extend(&self, s_target: u64, n_target: u64) -> Result<()> {
        if self
            .cache
            .extend(self.cap, s_target, n_target, |s| self.block_length(s))?
        {
            Ok(())
        } else if self.beta.spec().family().is_explicit() {
            Err(Error::domain(format!(
                "index {n_target} lies past the last row of the explicit partition"
            )))
        } else {
            Err(Error::Resource {
                requested: s_target.min(self.cap.saturating_add(1)),
                cap: self.cap,
            })
        }
    }

    /// `C(s)`, `C(0) = 0`.
    pub fn partial_sum(&self, s: u64) -> Result<u64> {
        self.extend(s, u64::MAX)?;
        Ok(self.cache.get(s).expect("extended"))
    }

    /// Row, left and right offsets of `n` in the reluctant array.
    pub fn locate(&self, n: u64) -> Result<Position> {
        if n == 0 {
            return Err(Error::domain("indices start at 1"));
        }
        self.extend(u64::MAX, n)?;
        Ok(self.cache.position(n).expect("extended"))
    }
}

/// Oracle and (where one exists) closed-form row of an index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaLocation {
    pub oracle: Position,
    pub closed: Option<ClosedFormResult>,
}

/// Closed `C(s)` for the families with a closed-form row locator.
#[derive(Debug, Clone, Copy)]
enum ClosedZeta {
    /// `b_s = p`: `C(s) = pq s(s+1)/2`.
    Constant { p: u64 },
    /// `b_s = p1 s`: `C(s) = p1 q s(s+1)(s+2)/6`.
    Linear { p1: u64 },
    /// `B(s) = p^s`: `C(s) = pq(p^s - 1)/(p - 1)`.
    Powers { p: u64 },
}

impl ClosedZeta {
    fn for_family(family: &Family) -> Option<Self> {
        match *family {
            Family::Constant { p0 } => Some(ClosedZeta::Constant { p: p0 as u64 }),
            Family::Linear { p1, p0: 0 } => Some(ClosedZeta::Linear { p1: p1 as u64 }),
            Family::GeometricPowers { m } => Some(ClosedZeta::Powers { p: m as u64 }),
            _ => None,
        }
    }

    fn sum(self, q: u64, s: u64) -> Result<u64> {
        let (q, s) = (q as u128, s as u128);
        let value = match self {
            ClosedZeta::Constant { p } => (p as u128 * q).checked_mul(s * (s + 1) / 2),
            ClosedZeta::Linear { p1 } => {
                (p1 as u128 * q).checked_mul(s * (s + 1) * (s + 2) / 6)
            }
            ClosedZeta::Powers { p } => u32::try_from(s)
                .ok()
                .and_then(|s| (p as u128).checked_pow(s))
                .and_then(|ps| (p as u128 * q).checked_mul((ps - 1) / (p as u128 - 1))),
        };
        value
            .and_then(|v| u64::try_from(v).ok())
            .ok_or(Error::Overflow("row partial sum"))
    }

    fn raw_root(self, q: u64, n: u64) -> f64 {
        let (q, n) = (q as f64, n as f64);
        match self {
            ClosedZeta::Constant { p } => {
                let pq = p as f64 * q;
                (-pq + (8.0 * n * pq + pq * pq).sqrt()) / (2.0 * pq)
            }
            ClosedZeta::Linear { p1 } => {
                // x^3 + 3x^2 + 2x - 6n/(p1 q) = 0
                let v = 162.0 * n / (p1 as f64 * q);
                cubic_largest_root(1.0, 3.0, -3.0, v).x
            }
            ClosedZeta::Powers { p } => {
                let p = p as f64;
                (n * (p - 1.0) / (p * q) + 1.0).ln() / p.ln()
            }
        }
    }
}

/// Source sequence, partition, repetition count and direction of a
/// generalized reluctant sequence.
#[derive(Clone)]
pub struct ReluctantSpec {
    alpha: Arc<dyn TermSource>,
    beta: Arc<PartialSumTable>,
    q: u64,
    reversed: bool,
    zeta: Arc<ZetaTable>,
    row_cap: u64,
}

impl fmt::Debug for ReluctantSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ReluctantSpec")
            .field("beta", self.beta.spec())
            .field("q", &self.q)
            .field("reversed", &self.reversed)
            .finish_non_exhaustive()
    }
}

impl ReluctantSpec {
    pub fn new(
        alpha: impl TermSource + 'static,
        beta: PartitionSpec,
        q: u64,
        reversed: bool,
    ) -> Result<Self> {
        Self::with_table(Arc::new(alpha), Arc::new(PartialSumTable::new(beta)), q, reversed)
    }

    pub fn with_table(
        alpha: Arc<dyn TermSource>,
        beta: Arc<PartialSumTable>,
        q: u64,
        reversed: bool,
    ) -> Result<Self> {
        if q == 0 {
            return Err(Error::domain("repetition count q must be at least 1"));
        }
        let zeta = Arc::new(ZetaTable::new(beta.clone(), q));
        Ok(ReluctantSpec {
            alpha,
            beta,
            q,
            reversed,
            zeta,
            row_cap: DEFAULT_ROW_CAP,
        })
    }

    /// Plain reluctant sequence of the naturals over `beta`.
    pub fn naturals(beta: PartitionSpec, q: u64, reversed: bool) -> Result<Self> {
        Self::new(Naturals, beta, q, reversed)
    }

    pub fn with_row_cap(mut self, cap: u64) -> Self {
        self.row_cap = cap;
        self
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn reversed(&self) -> bool {
        self.reversed
    }

    pub fn beta(&self) -> &Arc<PartialSumTable> {
        &self.beta
    }

    pub fn zeta(&self) -> &ZetaTable {
        &self.zeta
    }

    /// Index into the source sequence for `n`, with `n`'s row position.
    pub fn source_index(&self, n: u64) -> Result<(Position, u64)> {
        let pos = self.zeta.locate(n)?;
        let prefix = self.beta.partial_sum(pos.block)?;
        let offset = if self.reversed { pos.right } else { pos.left };
        Ok((pos, 1 + (offset - 1) % prefix))
    }

    /// `omega(n)`, or `omega'(n)` for the reversed variant.
    pub fn omega(&self, n: u64) -> Result<i64> {
        let (_, m) = self.source_index(n)?;
        self.alpha.term(m)
    }

    /// Row of `n` by search, plus the closed form when `beta` is constant,
    /// `p1 s`, or has `B(s) = p^s`.
    pub fn zeta_locate(&self, n: u64) -> Result<ZetaLocation> {
        let oracle = self.zeta.locate(n)?;
        let closed = match ClosedZeta::for_family(self.beta.spec().family()) {
            Some(cz) => Some(ceil_corrected(n, cz.raw_root(self.q, n), |s| {
                cz.sum(self.q, s)
            })?),
            None => None,
        };
        Ok(ZetaLocation { oracle, closed })
    }

    /// Row `k`: the prefix `a_1 .. a_{B(k)}` (reversed if requested)
    /// repeated `q` times.
    pub fn row(&self, k: u64) -> Result<Vec<i64>> {
        let len = self.zeta.block_length(k)?;
        if len > self.row_cap {
            return Err(Error::Resource {
                requested: len,
                cap: self.row_cap,
            });
        }
        let prefix = self.beta.partial_sum(k)?;
        let mut once = (1..=prefix)
            .map(|m| self.alpha.term(m))
            .collect::<Result<Vec<_>>>()?;
        if self.reversed {
            once.reverse();
        }
        Ok(once.repeat(self.q as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(beta: PartitionSpec, q: u64, reversed: bool) -> ReluctantSpec {
        ReluctantSpec::naturals(beta, q, reversed).unwrap()
    }

    fn stream(s: &ReluctantSpec, count: u64) -> Vec<i64> {
        (1..=count).map(|n| s.omega(n).unwrap()).collect()
    }

    #[test]
    fn omega_examples() {
        let c2 = PartitionSpec::constant(2).unwrap();
        assert_eq!(spec(c2.clone(), 3, false).omega(10), Ok(4));
        assert_eq!(spec(c2, 3, true).omega(1), Ok(2));
        assert_eq!(spec(PartitionSpec::ones(), 1, false).omega(5), Ok(2));
    }

    #[test]
    fn rows() {
        let c2 = PartitionSpec::constant(2).unwrap();
        assert_eq!(spec(c2.clone(), 3, false).row(1).unwrap(), [1, 2, 1, 2, 1, 2]);
        assert_eq!(
            spec(c2, 3, true).row(2).unwrap(),
            [4, 3, 2, 1, 4, 3, 2, 1, 4, 3, 2, 1]
        );
        let lin = PartitionSpec::linear(2, 0).unwrap();
        assert_eq!(spec(lin.clone(), 3, false).row(1).unwrap(), [1, 2, 1, 2, 1, 2]);
        assert_eq!(spec(lin, 3, true).row(2).unwrap(), [6, 5, 4, 3, 2, 1].repeat(3));
        let pow = PartitionSpec::geometric_powers(2).unwrap();
        assert_eq!(spec(pow.clone(), 3, false).row(2).unwrap(), [1, 2, 3, 4].repeat(3));
        assert_eq!(spec(pow, 3, true).row(1).unwrap(), [2, 1, 2, 1, 2, 1]);
    }

    #[test]
    fn row_cap() {
        let s = spec(PartitionSpec::constant(2).unwrap(), 3, false).with_row_cap(10);
        assert!(s.row(1).is_ok());
        assert_eq!(s.row(2), Err(Error::Resource { requested: 12, cap: 10 }));
    }

    #[test]
    fn zeta_examples() {
        let check = |beta: PartitionSpec, n: u64, block: u64, left: u64| {
            let z = spec(beta, 3, false).zeta_locate(n).unwrap();
            assert_eq!((z.oracle.block, z.oracle.left), (block, left));
            assert_eq!(z.closed.unwrap().block, block);
        };
        check(PartitionSpec::constant(2).unwrap(), 7, 2, 1);
        check(PartitionSpec::linear(2, 0).unwrap(), 6, 1, 6);
        check(PartitionSpec::geometric_powers(2).unwrap(), 19, 3, 1);
    }

    #[test]
    fn closed_rows_match_oracle() {
        for p in 1..=6u64 {
            for q in 1..=5u64 {
                let betas = [
                    PartitionSpec::constant(p as i64).unwrap(),
                    PartitionSpec::linear(p as i64, 0).unwrap(),
                    PartitionSpec::geometric_powers(p as i64 + 1).unwrap(),
                ];
                for beta in betas {
                    let s = spec(beta, q, false);
                    for n in 1..=3000 {
                        let z = s.zeta_locate(n).unwrap();
                        assert_eq!(z.closed.unwrap().block, z.oracle.block, "p={p} q={q} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn rows_concatenate_to_stream() {
        let betas = [
            PartitionSpec::constant(3).unwrap(),
            PartitionSpec::linear(2, 0).unwrap(),
            PartitionSpec::geometric_powers(3).unwrap(),
        ];
        for beta in betas {
            for reversed in [false, true] {
                let s = spec(beta.clone(), 2, reversed);
                let mut rows = Vec::new();
                let mut k = 1;
                while rows.len() < 10_000 {
                    rows.extend(s.row(k).unwrap());
                    k += 1;
                }
                assert_eq!(stream(&s, 10_000), rows[..10_000]);
            }
        }
    }

    #[test]
    fn specializes_to_reluctant() {
        let plain = spec(PartitionSpec::ones(), 1, false);
        let rev = spec(PartitionSpec::ones(), 1, true);
        for n in 1..=10_000u64 {
            let t = crate::diagonals::index_to_pair(n).unwrap();
            assert_eq!(plain.omega(n).unwrap() as u64, t.i);
            assert_eq!(rev.omega(n).unwrap() as u64, t.j);
        }
    }

    #[test]
    fn mirror_within_one_copy() {
        let s = spec(PartitionSpec::constant(2).unwrap(), 3, false);
        let r = spec(PartitionSpec::constant(2).unwrap(), 3, true);
        let mut checked = 0;
        for n in 1..=5000 {
            let (pos, m) = s.source_index(n).unwrap();
            let (_, m_rev) = r.source_index(n).unwrap();
            let b = s.beta().partial_sum(pos.block).unwrap();
            if (pos.left - 1) % b + (pos.right - 1) % b == b - 1 {
                assert_eq!(m + m_rev, b + 1);
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn custom_sources() {
        let squares = |m: u64| Ok((m * m) as i64);
        let s = ReluctantSpec::new(squares, PartitionSpec::ones(), 1, false).unwrap();
        assert_eq!((1..=6).map(|n| s.omega(n).unwrap()).collect::<Vec<_>>(), [1, 1, 4, 1, 4, 9]);
        let list = ReluctantSpec::new(ListTerms(vec![7, 8]), PartitionSpec::ones(), 1, false).unwrap();
        assert_eq!(list.omega(3), Ok(8));
        assert!(matches!(list.omega(6), Err(Error::Domain(_))));
        let c = ReluctantSpec::new(ConstantTerms(-1), PartitionSpec::ones(), 2, true).unwrap();
        assert_eq!(c.omega(100), Ok(-1));
        assert!(ReluctantSpec::naturals(PartitionSpec::ones(), 0, false).is_err());
    }

    #[test]
    fn explicit_partition_ends() {
        let s = spec(PartitionSpec::explicit(vec![1, 2]).unwrap(), 1, false);
        // rows of 1 and 3 terms
        assert_eq!(stream(&s, 4), [1, 1, 2, 3]);
        assert!(matches!(s.omega(5), Err(Error::Domain(_))));
    }
}
