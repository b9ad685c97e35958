//! Partitioning sequences, their exact partial sums, and the search-based
//! locator that every closed form is checked against.
//!
//! A partitioning sequence `b_1, b_2, ...` of positive integers cuts the
//! natural numbers into consecutive blocks. With `B(0) = 0` and
//! `B(s) = B(s-1) + b_s`, index `n` lives in block `L` exactly when
//! `B(L-1) < n <= B(L)`; its offsets are `R = n - B(L-1)` from the left and
//! `R' = B(L) + 1 - n` from the right.

use std::fmt;

use parking_lot::RwLock;

use crate::error::{Error, Result};

/// Number of blocks whose partial sums are cached by recurrence before the
/// table switches to evaluating the exact closed form directly.
pub const DEFAULT_CACHE_BLOCKS: u64 = 1 << 20;

/// The shape of a partitioning sequence.
///
/// Parametric families carry their integer coefficients; `Explicit` holds a
/// finite list of block lengths.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    /// `b_s = p0`.
    Constant { p0: i64 },
    /// `b_s = p1 s + p0`.
    Linear { p1: i64, p0: i64 },
    /// `b_s = p2 s^2 + p1 s + p0`.
    Quadratic { p2: i64, p1: i64, p0: i64 },
    /// `b_s = p3 s^3 + p2 s^2 + p1 s + p0`.
    Cubic { p3: i64, p2: i64, p1: i64, p0: i64 },
    /// `b_s = (m-1) m^(s-1)`, so `B(s) = m^s - 1`.
    Geometric { m: i64 },
    /// `b_1 = m`, `b_s = m^s - m^(s-1)`, so `B(s) = m^s`.
    GeometricPowers { m: i64 },
    /// Polygonal numbers `((m-2)s^2 - (m-4)s)/2`.
    Polygonal { m: i64 },
    /// Centered polygonal numbers `m(s^2-s)/2 + 1`.
    CenteredPolygonal { m: i64 },
    /// Pyramidal numbers `s(s+1)((m-2)s - (m-5))/6`.
    Pyramidal { m: i64 },
    /// `d` adjacent diagonals of the regular array merged into one block,
    /// starting either with the first diagonal or after it.
    MergedDiagonals { d: i64, start_first: bool },
    /// A finite list of block lengths.
    Explicit(Vec<i64>),
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Ok,
    Violation {
        /// First block index with `b_s < 1`, or `None` for a bad parameter.
        s: Option<u64>,
        reason: String,
    },
}

impl Validation {
    pub fn is_ok(&self) -> bool {
        matches!(self, Validation::Ok)
    }
}

fn checked_poly(coeffs: &[i64], s: i128) -> Option<i128> {
    // Horner, highest degree first.
    coeffs
        .iter()
        .try_fold(0i128, |acc, &c| acc.checked_mul(s)?.checked_add(c as i128))
}

fn pow_i128(base: i64, exp: u64) -> Option<i128> {
    let exp = u32::try_from(exp).ok()?;
    (base as i128).checked_pow(exp)
}

/// `s (s+1) / 2`.
fn tri(s: i128) -> Option<i128> {
    Some(s.checked_mul(s + 1)? / 2)
}

/// `s (s+1) (2s+1) / 6`.
fn square_pyr(s: i128) -> Option<i128> {
    Some(s.checked_mul(s + 1)?.checked_mul(2 * s + 1)? / 6)
}

fn to_u64(v: i128, what: &'static str) -> Result<u64> {
    if v < 0 {
        return Err(Error::domain(format!("{what} is negative ({v})")));
    }
    u64::try_from(v).map_err(|_| Error::Overflow(what))
}

impl Family {
    /// Exact `b_s` as a wide signed integer; may be non-positive for
    /// invalid parameters.
    fn raw_term(&self, s: u64) -> Result<i128> {
        let si = s as i128;
        let of = Error::Overflow("block length");
        let v = match *self {
            Family::Constant { p0 } => Some(p0 as i128),
            Family::Linear { p1, p0 } => checked_poly(&[p1, p0], si),
            Family::Quadratic { p2, p1, p0 } => checked_poly(&[p2, p1, p0], si),
            Family::Cubic { p3, p2, p1, p0 } => checked_poly(&[p3, p2, p1, p0], si),
            Family::Geometric { m } => {
                pow_i128(m, s - 1).and_then(|p| p.checked_mul(m as i128 - 1))
            }
            Family::GeometricPowers { m } => {
                if s == 1 {
                    Some(m as i128)
                } else {
                    pow_i128(m, s - 1).and_then(|p| p.checked_mul(m as i128 - 1))
                }
            }
            Family::Polygonal { m } => {
                let m = m as i128;
                (m - 2)
                    .checked_mul(si)
                    .and_then(|x| x.checked_sub(m - 4))
                    .and_then(|x| x.checked_mul(si))
                    .map(|x| x / 2)
            }
            Family::CenteredPolygonal { m } => (m as i128)
                .checked_mul(si)
                .and_then(|x| x.checked_mul(si - 1))
                .map(|x| x / 2 + 1),
            Family::Pyramidal { m } => {
                let m = m as i128;
                si.checked_mul(si + 1)
                    .and_then(|x| x.checked_mul((m - 2).checked_mul(si)? - (m - 5)))
                    .map(|x| x / 6)
            }
            Family::MergedDiagonals { d, start_first } => {
                let d = d as i128;
                if start_first {
                    d.checked_mul(d)
                        .and_then(|dd| dd.checked_mul(si))
                        .map(|x| x - d * (d - 1) / 2)
                } else if s == 1 {
                    Some(1)
                } else {
                    d.checked_mul(d)
                        .and_then(|dd| dd.checked_mul(si - 1))
                        .map(|x| x - d * (d - 3) / 2)
                }
            }
            Family::Explicit(ref list) => {
                return list
                    .get((s - 1) as usize)
                    .map(|&b| b as i128)
                    .ok_or_else(|| exhausted(s, list.len()));
            }
        };
        v.ok_or(of)
    }

    fn parameter_check(&self) -> std::result::Result<(), String> {
        let bad = |what: &str| Err(what.to_string());
        match *self {
            Family::Constant { p0 } if p0 < 1 => bad("constant family needs p0 >= 1"),
            Family::Linear { p1, .. } if p1 < 1 => bad("linear family needs p1 >= 1"),
            Family::Quadratic { p2, .. } if p2 < 1 => bad("quadratic family needs p2 >= 1"),
            Family::Cubic { p3, .. } if p3 < 1 => bad("cubic family needs p3 >= 1"),
            Family::Geometric { m } | Family::GeometricPowers { m } if m < 2 => {
                bad("geometric family needs m >= 2")
            }
            Family::Polygonal { m } if m < 3 => bad("polygonal family needs m >= 3"),
            Family::Pyramidal { m } if m < 3 => bad("pyramidal family needs m >= 3"),
            Family::CenteredPolygonal { m } if m < 1 => {
                bad("centered polygonal family needs m >= 1")
            }
            Family::MergedDiagonals { d, .. } if d < 1 => bad("merged diagonals need d >= 1"),
            Family::Explicit(ref list) if list.is_empty() => bad("explicit partition is empty"),
            _ => Ok(()),
        }
    }

    /// Block indices where the minimum of `b_s` over `s >= 1` can occur,
    /// besides `s = 1`.
    fn minimum_candidates(&self) -> Vec<u64> {
        let around = |x: f64| -> Vec<u64> {
            if x.is_finite() && x > 1.0 {
                let f = x.floor().min(u64::MAX as f64 / 2.0) as u64;
                vec![f, f + 1]
            } else {
                Vec::new()
            }
        };
        match *self {
            Family::Quadratic { p2, p1, .. } => around(-(p1 as f64) / (2.0 * p2 as f64)),
            Family::Cubic { p3, p2, p1, .. } => {
                // local minimum of the cubic: larger root of 3 p3 s^2 + 2 p2 s + p1
                let (a, b, c) = (3.0 * p3 as f64, 2.0 * p2 as f64, p1 as f64);
                let disc = b * b - 4.0 * a * c;
                if disc < 0.0 {
                    Vec::new()
                } else {
                    around((-b + disc.sqrt()) / (2.0 * a))
                }
            }
            _ => Vec::new(),
        }
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self, Family::Explicit(_))
    }
}

fn exhausted(s: u64, len: usize) -> Error {
    Error::domain(format!(
        "explicit partition has {len} blocks, block {s} requested"
    ))
}

/// Checks parameter constraints, `b_s >= 1` for `s <= horizon`, and the
/// family's global positivity argument (minimum of the defining polynomial).
pub fn validate(family: &Family, horizon: u64) -> Validation {
    if let Err(reason) = family.parameter_check() {
        return Validation::Violation { s: None, reason };
    }
    let check = |s: u64| -> Option<Validation> {
        match family.raw_term(s) {
            Ok(b) if b < 1 => Some(Validation::Violation {
                s: Some(s),
                reason: format!("b_{s} = {b}"),
            }),
            _ => None,
        }
    };
    let last = match family {
        Family::Explicit(list) => horizon.min(list.len() as u64),
        _ => horizon,
    };
    for s in 1..=last {
        if let Some(v) = check(s) {
            return v;
        }
        // Past the point where terms overflow they are huge and positive.
        if !family.is_explicit() && family.raw_term(s).is_err() {
            break;
        }
    }
    for s in family.minimum_candidates() {
        if let Some(v) = check(s) {
            return v;
        }
    }
    Validation::Ok
}

/// A validated partitioning sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionSpec {
    family: Family,
}

impl PartitionSpec {
    pub fn new(family: Family) -> Result<Self> {
        let horizon = match &family {
            Family::Explicit(list) => list.len() as u64,
            _ => 64,
        };
        match validate(&family, horizon) {
            Validation::Ok => Ok(PartitionSpec { family }),
            Validation::Violation { s, reason } => Err(Error::domain(match s {
                Some(s) => format!("invalid partition at block {s}: {reason}"),
                None => format!("invalid partition: {reason}"),
            })),
        }
    }

    pub fn constant(p0: i64) -> Result<Self> {
        Self::new(Family::Constant { p0 })
    }

    pub fn linear(p1: i64, p0: i64) -> Result<Self> {
        Self::new(Family::Linear { p1, p0 })
    }

    pub fn quadratic(p2: i64, p1: i64, p0: i64) -> Result<Self> {
        Self::new(Family::Quadratic { p2, p1, p0 })
    }

    pub fn cubic(p3: i64, p2: i64, p1: i64, p0: i64) -> Result<Self> {
        Self::new(Family::Cubic { p3, p2, p1, p0 })
    }

    pub fn geometric(m: i64) -> Result<Self> {
        Self::new(Family::Geometric { m })
    }

    pub fn geometric_powers(m: i64) -> Result<Self> {
        Self::new(Family::GeometricPowers { m })
    }

    pub fn polygonal(m: i64) -> Result<Self> {
        Self::new(Family::Polygonal { m })
    }

    pub fn centered_polygonal(m: i64) -> Result<Self> {
        Self::new(Family::CenteredPolygonal { m })
    }

    pub fn pyramidal(m: i64) -> Result<Self> {
        Self::new(Family::Pyramidal { m })
    }

    pub fn merged_diagonals(d: i64, start_first: bool) -> Result<Self> {
        Self::new(Family::MergedDiagonals { d, start_first })
    }

    pub fn explicit(lengths: Vec<i64>) -> Result<Self> {
        Self::new(Family::Explicit(lengths))
    }

    /// The all-ones partition (every block has length 1).
    pub fn ones() -> Self {
        PartitionSpec {
            family: Family::Constant { p0: 1 },
        }
    }

    /// The regular array `b_s = s`.
    pub fn naturals() -> Self {
        PartitionSpec {
            family: Family::Linear { p1: 1, p0: 0 },
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Number of blocks for explicit specs, `None` for infinite families.
    pub fn block_count(&self) -> Option<u64> {
        match &self.family {
            Family::Explicit(list) => Some(list.len() as u64),
            _ => None,
        }
    }

    /// `b_s` for `s >= 1`.
    pub fn block_length(&self, s: u64) -> Result<u64> {
        if s == 0 {
            return Err(Error::domain("block indices start at 1"));
        }
        to_u64(self.family.raw_term(s)?, "block length")
    }

    /// Exact `B(s)` from the family's closed form (a plain prefix sum for
    /// explicit lists).
    pub fn closed_sum(&self, s: u64) -> Result<u64> {
        if s == 0 {
            return Ok(0);
        }
        if let Family::Linear { p1, p0 } = self.family {
            // small enough that no i128 product can overflow
            if s < 1 << 32 && p1.unsigned_abs() < 1 << 31 && p0.unsigned_abs() < 1 << 31 {
                let si = s as i128;
                let t = si.wrapping_mul(si + 1) >> 1;
                let v = (p1 as i128).wrapping_mul(t) + (p0 as i128).wrapping_mul(si);
                return to_u64(v, "partial sum");
            }
        }
        let si = s as i128;
        let of = Error::Overflow("partial sum");
        let v: Option<i128> = match self.family {
            Family::Constant { p0 } => (p0 as i128).checked_mul(si),
            Family::Linear { p1, p0 } => (|| {
                (p1 as i128)
                    .checked_mul(tri(si)?)?
                    .checked_add((p0 as i128).checked_mul(si)?)
            })(),
            Family::Quadratic { p2, p1, p0 } => (|| {
                (p2 as i128)
                    .checked_mul(square_pyr(si)?)?
                    .checked_add((p1 as i128).checked_mul(tri(si)?)?)?
                    .checked_add((p0 as i128).checked_mul(si)?)
            })(),
            Family::Cubic { p3, p2, p1, p0 } => (|| {
                let t = tri(si)?;
                (p3 as i128)
                    .checked_mul(t.checked_mul(t)?)?
                    .checked_add((p2 as i128).checked_mul(square_pyr(si)?)?)?
                    .checked_add((p1 as i128).checked_mul(t)?)?
                    .checked_add((p0 as i128).checked_mul(si)?)
            })(),
            Family::Geometric { m } => pow_i128(m, s).map(|p| p - 1),
            Family::GeometricPowers { m } => pow_i128(m, s),
            Family::Polygonal { m } => (|| {
                let m = m as i128;
                let inner = (m - 2).checked_mul(2 * si + 1)?.checked_sub(3 * (m - 4))?;
                Some(si.checked_mul(si + 1)?.checked_mul(inner)? / 12)
            })(),
            Family::CenteredPolygonal { m } => (|| {
                let cube = (si - 1).checked_mul(si)?.checked_mul(si + 1)?;
                (m as i128).checked_mul(cube / 6)?.checked_add(si)
            })(),
            Family::Pyramidal { m } => (|| {
                let m = m as i128;
                let ss1 = si.checked_mul(si + 1)?;
                let inner = (m - 2)
                    .checked_mul(ss1)?
                    .checked_add(2 * (2 * si + 1))?
                    .checked_sub(2 * (m - 5))?;
                Some(ss1.checked_mul(inner)? / 24)
            })(),
            Family::MergedDiagonals { d, start_first } => (|| {
                let d = d as i128;
                let base = if start_first {
                    d.checked_mul(si)?
                } else {
                    d.checked_mul(si - 1)? + 1
                };
                Some(base.checked_mul(base + 1)? / 2)
            })(),
            Family::Explicit(ref list) => {
                if s > list.len() as u64 {
                    return Err(exhausted(s, list.len()));
                }
                Some(list[..s as usize].iter().map(|&b| b as i128).sum())
            }
        };
        to_u64(v.ok_or(of)?, "partial sum")
    }
}

/// Location of an index inside an irregular array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Position {
    pub n: u64,
    /// Block number `L`.
    pub block: u64,
    /// Offset from the left end of the block, `R`.
    pub left: u64,
    /// Offset from the right end of the block, `R'`.
    pub right: u64,
}

impl Position {
    /// Length of the block holding `n`, `R + R' - 1`.
    pub fn block_len(&self) -> u64 {
        self.left + self.right - 1
    }

    /// `B(L-1)`.
    pub fn block_start(&self) -> u64 {
        self.n - self.left
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L={} R={} R'={}", self.block, self.left, self.right)
    }
}

/// Append-only cache of partial sums `S(0) = 0, S(1), ...` shared by the
/// partition table and the reluctant-sequence table.
#[derive(Debug)]
pub(crate) struct PrefixCache {
    sums: RwLock<Vec<u64>>,
}

impl Default for PrefixCache {
    fn default() -> Self {
        PrefixCache {
            sums: RwLock::new(vec![0]),
        }
    }
}

impl Clone for PrefixCache {
    fn clone(&self) -> Self {
        PrefixCache {
            sums: RwLock::new(self.sums.read().clone()),
        }
    }
}

impl PrefixCache {
    pub(crate) fn cached_blocks(&self) -> u64 {
        self.sums.read().len() as u64 - 1
    }

    pub(crate) fn get(&self, s: u64) -> Option<u64> {
        self.sums.read().get(s as usize).copied()
    }

    /// Extends the cache until it holds block `s_target` or reaches index
    /// `n_target`, doubling the cached length each round. Returns false when
    /// `cap` stops the extension short.
    pub(crate) fn extend(
        &self,
        cap: u64,
        s_target: u64,
        n_target: u64,
        block: impl Fn(u64) -> Result<u64>,
    ) -> Result<bool> {
        let covered =
            |sums: &Vec<u64>| sums.len() as u64 > s_target || *sums.last().unwrap() >= n_target;
        if covered(&self.sums.read()) {
            return Ok(true);
        }
        let mut sums = self.sums.write();
        while !covered(&sums) {
            let have = sums.len() as u64 - 1;
            if have >= cap {
                return Ok(false);
            }
            let goal = have.max(8).saturating_mul(2).min(cap);
            let mut last = *sums.last().unwrap();
            for s in have + 1..=goal {
                last = last
                    .checked_add(block(s)?)
                    .ok_or(Error::Overflow("partial sum"))?;
                sums.push(last);
                if s >= s_target || last >= n_target {
                    break;
                }
            }
        }
        Ok(true)
    }

    /// Binary search for `n` in the cached sums; `None` if not yet covered.
    pub(crate) fn position(&self, n: u64) -> Option<Position> {
        let sums = self.sums.read();
        if *sums.last().unwrap() < n {
            return None;
        }
        let block = sums.partition_point(|&b| b < n);
        Some(Position {
            n,
            block: block as u64,
            left: n - sums[block - 1],
            right: sums[block] - n + 1,
        })
    }
}

/// Lazily extended partial sums `B(0..k)` of a partition.
///
/// The first `cap` sums are built by the recurrence `B(s) = B(s-1) + b_s`
/// and cached append-only; past the cap the exact closed form is evaluated.
/// Readers share the cache; extension takes a short write lock.
#[derive(Debug, Clone)]
pub struct PartialSumTable {
    spec: PartitionSpec,
    cap: u64,
    cache: PrefixCache,
}

impl PartialSumTable {
    pub fn new(spec: PartitionSpec) -> Self {
        Self::with_cap(spec, DEFAULT_CACHE_BLOCKS)
    }

    pub fn with_cap(spec: PartitionSpec, cap: u64) -> Self {
        let cap = spec.block_count().unwrap_or(cap.max(1));
        PartialSumTable {
            spec,
            cap,
            cache: PrefixCache::default(),
        }
    }

    pub fn spec(&self) -> &PartitionSpec {
        &self.spec
    }

    pub fn block_length(&self, s: u64) -> Result<u64> {
        self.spec.block_length(s)
    }

    /// Number of blocks currently cached.
    pub fn cached_blocks(&self) -> u64 {
        self.cache.cached_blocks()
    }

    fn extend(&self, s_target: u64, n_target: u64) -> Result<bool> {
        self.cache
            .extend(self.cap, s_target, n_target, |s| self.spec.block_length(s))
    }

    /// `B(s)` by recurrence only; fails past the cache cap.
    pub fn recurrence_sum(&self, s: u64) -> Result<u64> {
        if !self.extend(s, u64::MAX)? {
            return Err(Error::Resource {
                requested: s,
                cap: self.cap,
            });
        }
        Ok(self.cache.get(s).expect("extended"))
    }

    /// Exact `B(s)`, `B(0) = 0`.
    pub fn partial_sum(&self, s: u64) -> Result<u64> {
        if s == 0 {
            return Ok(0);
        }
        if self.spec.family().is_explicit() {
            return self.recurrence_sum(s);
        }
        let closed = self.spec.closed_sum(s)?;
        if cfg!(debug_assertions) {
            if let Some(cached) = self.cache.get(s) {
                debug_assert_eq!(cached, closed, "closed form B({s}) disagrees with recurrence");
            }
        }
        Ok(closed)
    }

    /// Locates `n >= 1` by exponential doubling over the cache followed by
    /// binary search; beyond the cache cap the same search runs on the exact
    /// closed form.
    pub fn locate(&self, n: u64) -> Result<Position> {
        if n == 0 {
            return Err(Error::domain("indices start at 1"));
        }
        if self.extend(u64::MAX, n)? {
            return Ok(self.cache.position(n).expect("extended"));
        }
        if self.spec.family().is_explicit() {
            return Err(Error::domain(format!(
                "index {n} lies past the end of the explicit partition"
            )));
        }
        // B(lo) < n <= B(hi); an overflowing sum certainly reaches n.
        let reaches = |s: u64| -> Result<bool> {
            match self.spec.closed_sum(s) {
                Ok(b) => Ok(b >= n),
                Err(Error::Overflow(_)) => Ok(true),
                Err(e) => Err(e),
            }
        };
        let mut lo = self.cap;
        let mut hi = lo.checked_mul(2).ok_or(Error::Overflow("block number"))?;
        while !reaches(hi)? {
            lo = hi;
            hi = hi.checked_mul(2).ok_or(Error::Overflow("block number"))?;
        }
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if reaches(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let start = self.spec.closed_sum(hi - 1)?;
        let end = self.spec.closed_sum(hi)?;
        Ok(Position {
            n,
            block: hi,
            left: n - start,
            right: end - n + 1,
        })
    }

    /// `n = B(L-1) + R` for `1 <= R <= b_L`.
    pub fn position_to_index(&self, block: u64, left: u64) -> Result<u64> {
        if block == 0 || left == 0 {
            return Err(Error::domain("block and offset start at 1"));
        }
        let len = self.block_length(block)?;
        if left > len {
            return Err(Error::domain(format!(
                "offset {left} exceeds block {block} of length {len}"
            )));
        }
        self.partial_sum(block - 1)?
            .checked_add(left)
            .ok_or(Error::Overflow("index"))
    }

    /// Index range `B(k-1)+1 ..= B(k)` of block `k`.
    pub fn block_range(&self, k: u64) -> Result<std::ops::RangeInclusive<u64>> {
        if k == 0 {
            return Err(Error::domain("block indices start at 1"));
        }
        Ok(self.partial_sum(k - 1)? + 1..=self.partial_sum(k)?)
    }
}
