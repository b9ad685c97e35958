//! Cantor numbering of the regular array and its generalization that merges
//! `d` adjacent diagonals into one block.

use crate::closed_forms::{ceil_corrected, ClosedFormResult};
use crate::error::{Error, Result};
use crate::partition::PartitionSpec;

/// Position of `n` in the regular array `1 | 2 3 | 4 5 6 | ...`.
///
/// `t` is the zero-based diagonal, `i` counts along it from the start and
/// `j` from the end, so `i + j = t + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagonalPair {
    pub i: u64,
    pub j: u64,
    pub t: u64,
}

/// `floor((sqrt(8n-7) - 1) / 2)`, the zero-based diagonal holding `n >= 1`.
pub fn diagonal_of(n: u64) -> u64 {
    debug_assert!(n >= 1);
    let r = (8 * n as u128 - 7).isqrt();
    ((r - 1) / 2) as u64
}

pub fn index_to_pair(n: u64) -> Result<DiagonalPair> {
    if n == 0 {
        return Err(Error::domain("indices start at 1"));
    }
    let t = diagonal_of(n) as u128;
    let n128 = n as u128;
    let i = n128 - t * (t + 1) / 2;
    let j = (t * t + 3 * t + 4) / 2 - n128;
    Ok(DiagonalPair {
        i: i as u64,
        j: j as u64,
        t: t as u64,
    })
}

/// `(i+j-2)(i+j-1)/2 + i`.
pub fn pair_to_index(i: u64, j: u64) -> Result<u64> {
    if i == 0 || j == 0 {
        return Err(Error::domain("pair coordinates start at 1"));
    }
    let s = i as u128 + j as u128;
    let n = (s - 2) * (s - 1) / 2 + i as u128;
    u64::try_from(n).map_err(|_| Error::Overflow("pair index"))
}

/// Radical and floor-form block numbers for merged diagonals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergedDiagonalResult {
    /// Square-root formula, ceiling-corrected against exact partial sums.
    pub radical: ClosedFormResult,
    /// Floor formula on the diagonal number `t`; exact.
    pub alternative: u64,
}

impl MergedDiagonalResult {
    pub fn block(&self) -> u64 {
        self.radical.block
    }

    pub fn agree(&self) -> bool {
        self.radical.block == self.alternative
    }
}

fn check(d: u64, min_d: u64, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::domain("indices start at 1"));
    }
    if d < min_d || d > i64::MAX as u64 {
        return Err(Error::domain(format!("merged diagonals need d >= {min_d}")));
    }
    Ok(())
}

/// Blocks of `d` diagonals starting with the first one:
/// `b_s = d^2 s - d(d-1)/2`, `B(s) = ds(ds+1)/2`.
///
/// Radical: `ceil((-1 + sqrt(8n+1)) / (2d))`; floor form: `floor((t+d)/d)`.
pub fn l_merged_first(d: u64, n: u64) -> Result<MergedDiagonalResult> {
    check(d, 1, n)?;
    let spec = PartitionSpec::merged_diagonals(d as i64, true)?;
    let raw = (-1.0 + (8.0 * n as f64 + 1.0).sqrt()) / (2.0 * d as f64);
    let radical = ceil_corrected(n, raw, |s| spec.closed_sum(s))?;
    let t = diagonal_of(n);
    Ok(MergedDiagonalResult {
        radical,
        alternative: (t + d) / d,
    })
}

/// Blocks of `d` diagonals starting after the first one: `b_1 = 1`,
/// `b_s = d^2(s-1) - d(d-3)/2`.
///
/// Radical: `ceil((2d - 3 + sqrt(8n+1)) / (2d))`; floor form:
/// `floor((t+d-1)/d) + 1`.
pub fn l_merged_second(d: u64, n: u64) -> Result<MergedDiagonalResult> {
    check(d, 2, n)?;
    let spec = PartitionSpec::merged_diagonals(d as i64, false)?;
    let df = d as f64;
    let raw = (2.0 * df - 3.0 + (8.0 * n as f64 + 1.0).sqrt()) / (2.0 * df);
    let radical = ceil_corrected(n, raw, |s| spec.closed_sum(s))?;
    let t = diagonal_of(n);
    Ok(MergedDiagonalResult {
        radical,
        alternative: t.div_ceil(d) + 1,
    })
}
