//! Closed-form block numbers.
//!
//! The block holding `n` is `ceil(x)` where `x` is the largest real root of
//! `B(x) = n`. For polynomial `B` of degree two and three the root comes
//! from the quadratic formula or Cardano's formula (trigonometric form when
//! the cubic has three real roots); for geometric `B` from a logarithm; for
//! quartic `B` from integer search on the exact polynomial.
//!
//! Every float-derived ceiling is post-corrected with exact partial sums:
//! the candidates `ceil(x) + {0, -1, +1, -2, +2}` are tried until one
//! satisfies `B(L-1) < n <= B(L)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::partition::{Family, PartitionSpec, Position};

/// Half-width of the exact-correction window around a float ceiling.
pub const CORRECTION_WINDOW: u64 = 2;

const CBRT_2: f64 = 1.259_921_049_894_873_2;

/// Block number produced by a closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormResult {
    pub block: u64,
    /// Whether exact correction moved the raw ceiling.
    pub corrected: bool,
    /// The real root (or estimate) before taking the ceiling.
    pub raw_real: f64,
}

/// Which Cardano form produced a cubic root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicBranch {
    /// One real root: the radical formula.
    Cardano,
    /// Three real roots (casus irreducibilis): the cosine form.
    Trigonometric,
}

/// Intermediates of Cardano's formula for `a x^3 + b x^2 + c x + d`.
///
/// `u = 3ac - b^2` and `v = 9abc - 2b^3 - 27a^2 d`; the discriminant is
/// `-(4u^3 + v^2)`, negative when there is a single real root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootWork {
    pub u: f64,
    pub v: f64,
    /// `cbrt(v + sqrt(4u^3 + v^2))` in the radical branch, `2 sqrt(-u)` in
    /// the trigonometric branch.
    pub w: f64,
    /// Largest real root.
    pub x: f64,
    pub discriminant: f64,
    pub branch: CubicBranch,
}

/// Largest real root of `a x^3 + b x^2 + c x + d` (`a > 0`), given `a`, `b`
/// and the Cardano intermediates `u`, `v`.
pub fn cubic_largest_root(a: f64, b: f64, u: f64, v: f64) -> RootWork {
    let shift = -b / (3.0 * a);
    let radicand = 4.0 * u * u * u + v * v;
    let discriminant = -radicand;
    if discriminant <= 0.0 {
        // Pick the sign of the square root that avoids cancellation; both
        // cube-root terms are recovered from w since their product is
        // -2^(2/3) u.
        let s = radicand.sqrt();
        let w = if v >= 0.0 { v + s } else { v - s }.cbrt();
        let y = if w == 0.0 {
            0.0
        } else {
            w / CBRT_2 - CBRT_2 * u / w
        };
        RootWork {
            u,
            v,
            w,
            x: shift + y / (3.0 * a),
            discriminant,
            branch: CubicBranch::Cardano,
        }
    } else {
        // u < 0 here. Roots are shift - 2 sqrt(-u) cos(theta/3 + 2 pi k/3)/(3a)
        // with cos(theta) = -v / (2 (-u)^(3/2)); k = 1 gives the largest.
        let r = (-u).sqrt();
        let cos_theta = (-v / (2.0 * r * r * r)).clamp(-1.0, 1.0);
        let theta = cos_theta.acos();
        let w = 2.0 * r;
        let x = shift - w * (theta / 3.0 + 2.0 * PI / 3.0).cos() / (3.0 * a);
        RootWork {
            u,
            v,
            w,
            x,
            discriminant,
            branch: CubicBranch::Trigonometric,
        }
    }
}

/// Whether `sum(s) >= n`; an overflowing sum is past every `u64` index.
fn reaches(sum: &impl Fn(u64) -> Result<u64>, s: u64, n: u64) -> Result<bool> {
    match sum(s) {
        Ok(b) => Ok(b >= n),
        Err(Error::Overflow(_)) => Ok(true),
        Err(e) => Err(e),
    }
}

fn is_block(sum: &impl Fn(u64) -> Result<u64>, block: u64, n: u64) -> Result<bool> {
    Ok(block >= 1 && !reaches(sum, block - 1, n)? && reaches(sum, block, n)?)
}

/// Ceiling of `raw`, repaired against the exact partial sums `sum`.
pub fn ceil_corrected(
    n: u64,
    raw: f64,
    sum: impl Fn(u64) -> Result<u64>,
) -> Result<ClosedFormResult> {
    let guess = if raw.is_nan() {
        1
    } else {
        raw.ceil().clamp(1.0, u64::MAX as f64) as u64
    };
    let w = CORRECTION_WINDOW;
    for delta in std::iter::once(0).chain((1..=w).flat_map(|k| [-(k as i64), k as i64])) {
        let Some(block) = guess.checked_add_signed(delta) else {
            continue;
        };
        if is_block(&sum, block, n)? {
            return Ok(ClosedFormResult {
                block,
                corrected: delta != 0,
                raw_real: raw,
            });
        }
    }
    Err(Error::Correction { n, guess, window: w })
}

/// Smallest `s >= 1` with `sum(s) >= n`, by doubling then bisection.
pub(crate) fn monotone_inverse(n: u64, sum: impl Fn(u64) -> Result<u64>) -> Result<u64> {
    let (mut lo, mut hi) = (0u64, 1u64);
    while !reaches(&sum, hi, n)? {
        lo = hi;
        hi = hi.checked_mul(2).ok_or(Error::Overflow("block number"))?;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if reaches(&sum, mid, n)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn exact(block: u64, raw_real: f64) -> ClosedFormResult {
    ClosedFormResult {
        block,
        corrected: false,
        raw_real,
    }
}

fn check_n(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::domain("indices start at 1"))
    } else {
        Ok(())
    }
}

/// `ceil(n / p0)`.
pub fn l_constant(p0: i64, n: u64) -> Result<ClosedFormResult> {
    ClosedForm::new(&PartitionSpec::constant(p0)?).locate_block(n)
}

/// Quadratic-formula block number for `b_s = p1 s + p0`.
pub fn l_linear(p1: i64, p0: i64, n: u64) -> Result<ClosedFormResult> {
    ClosedForm::new(&PartitionSpec::linear(p1, p0)?).locate_block(n)
}

/// Two further routes to the block number for `b_s = p1 s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearAlt {
    /// Regular-array block of `u = floor((n-1)/p1) + 1` (scaling property).
    pub scaled: ClosedFormResult,
    /// `ceil(sqrt(ceil(2n/p1)) + 1/2) - 1`, evaluated in exact integers.
    pub halving: ClosedFormResult,
}

/// Alternative routes for the `p0 = 0` linear family.
pub fn l_linear_alt(p1: i64, n: u64) -> Result<LinearAlt> {
    check_n(n)?;
    if p1 < 1 {
        return Err(Error::domain("linear family needs p1 >= 1"));
    }
    let regular = ClosedForm::new(&PartitionSpec::naturals());
    let scaled = transform_scale(|u| regular.locate_block(u).map(|r| r.block), p1 as u64, n)?;
    let scaled = ClosedFormResult {
        block: scaled,
        corrected: false,
        raw_real: scaled as f64,
    };

    // ceil(sqrt(k) + 1/2) is the least c with (2c-1)^2 > 4k.
    let k = (2 * n as u128).div_ceil(p1 as u128);
    let r = (4 * k).isqrt();
    let odd = if r % 2 == 0 { r + 1 } else { r + 2 };
    let c = odd.div_ceil(2);
    let halving = ClosedFormResult {
        block: u64::try_from(c - 1).map_err(|_| Error::Overflow("block number"))?,
        corrected: false,
        raw_real: ((k as f64).sqrt() + 0.5).ceil() - 1.0,
    };
    Ok(LinearAlt { scaled, halving })
}

/// Cardano intermediates for the quadratic family, where `6B(x) = 6n` reads
/// `2p2 x^3 + 3(p2+p1) x^2 + (p2+3p1+6p0) x - 6n = 0`.
///
/// `U = 3(-3p1^2 + 12 p0 p2 - p2^2)` and
/// `V = 54(-p1^3 + 6 p0 p1 p2 + 12 n p2^2 + 6 p0 p2^2 + p1 p2^2)`.
pub fn quadratic_root_work(p2: i64, p1: i64, p0: i64, n: u64) -> RootWork {
    let (p2f, p1f, p0f, nf) = (p2 as f64, p1 as f64, p0 as f64, n as f64);
    let u = 3.0 * (-3.0 * p1f * p1f + 12.0 * p0f * p2f - p2f * p2f);
    let v = 54.0
        * (-p1f * p1f * p1f
            + 6.0 * p0f * p1f * p2f
            + 12.0 * nf * p2f * p2f
            + 6.0 * p0f * p2f * p2f
            + p1f * p2f * p2f);
    cubic_largest_root(2.0 * p2f, 3.0 * (p2f + p1f), u, v)
}

pub fn l_quadratic(p2: i64, p1: i64, p0: i64, n: u64) -> Result<ClosedFormResult> {
    ClosedForm::new(&PartitionSpec::quadratic(p2, p1, p0)?).locate_block(n)
}

/// Cardano intermediates for polygonal blocks, from
/// `(2m-4) x^3 + 6 x^2 - (2m-10) x - 12n = 0`.
pub fn polygonal_root_work(m: i64, n: u64) -> RootWork {
    let (m, nf) = (m as f64, n as f64);
    let u = -156.0 + 84.0 * m - 12.0 * m * m;
    let v = -2592.0 + 1512.0 * m - 216.0 * m * m + 5184.0 * nf - 5184.0 * m * nf
        + 1296.0 * m * m * nf;
    cubic_largest_root(2.0 * m - 4.0, 6.0, u, v)
}

pub fn l_polygonal(m: i64, n: u64) -> Result<ClosedFormResult> {
    ClosedForm::new(&PartitionSpec::polygonal(m)?).locate_block(n)
}

/// Cardano intermediates for centered polygonal blocks, from
/// `m x^3 + (6-m) x - 6n = 0`: `U = 3m(6-m)`, `V = 162 m^2 n`.
pub fn centered_polygonal_root_work(m: i64, n: u64) -> RootWork {
    let (m, nf) = (m as f64, n as f64);
    cubic_largest_root(m, 0.0, 3.0 * m * (6.0 - m), 162.0 * m * m * nf)
}

pub fn l_centered_polygonal(m: i64, n: u64) -> Result<ClosedFormResult> {
    ClosedForm::new(&PartitionSpec::centered_polygonal(m)?).locate_block(n)
}

/// Block number for cubic block lengths by integer inversion of the exact
/// quartic partial sum.
pub fn l_cubic(p3: i64, p2: i64, p1: i64, p0: i64, n: u64) -> Result<ClosedFormResult> {
    ClosedForm::new(&PartitionSpec::cubic(p3, p2, p1, p0)?).locate_block(n)
}

pub fn l_pyramidal(m: i64, n: u64) -> Result<ClosedFormResult> {
    ClosedForm::new(&PartitionSpec::pyramidal(m)?).locate_block(n)
}

/// `ceil(log_m(n+1))`, the least `L` with `m^L >= n + 1`.
pub fn l_geometric(m: i64, n: u64) -> Result<ClosedFormResult> {
    ClosedForm::new(&PartitionSpec::geometric(m)?).locate_block(n)
}

/// Least `L` with `m^L >= n` for `B(s) = m^s`.
pub fn l_geometric_powers(m: i64, n: u64) -> Result<ClosedFormResult> {
    ClosedForm::new(&PartitionSpec::geometric_powers(m)?).locate_block(n)
}

/// Powers `m^0, m^1, ...` up to the last one that fits in `u64`, with `ln m`.
#[derive(Debug, Clone, PartialEq)]
struct Powers {
    table: Vec<u64>,
    ln_m: f64,
}

impl Powers {
    fn new(m: u64) -> Self {
        let mut table = vec![1u64];
        while let Some(p) = table.last().unwrap().checked_mul(m) {
            table.push(p);
        }
        Powers {
            table,
            ln_m: (m as f64).ln(),
        }
    }

    fn reaches(&self, l: u64, target: u64) -> bool {
        self.table.get(l as usize).is_none_or(|&p| p >= target)
    }

    /// Least `L >= 1` with `m^L >= target`, from a float estimate repaired
    /// against the exact powers.
    fn least_reaching(&self, target: u64) -> (u64, bool, f64) {
        let raw = (target as f64).ln() / self.ln_m;
        let t = raw as u64;
        let start = (if (t as f64) < raw { t + 1 } else { t }).clamp(1, self.table.len() as u64);
        let mut l = start;
        while l > 1 && self.reaches(l - 1, target) {
            l -= 1;
        }
        while !self.reaches(l, target) {
            l += 1;
        }
        (l, l != start, raw)
    }
}

/// Block number of `n` in `m b_1, m b_2, ...` from the locator `block_of`
/// of `b_1, b_2, ...`.
pub fn transform_scale(block_of: impl Fn(u64) -> Result<u64>, m: u64, n: u64) -> Result<u64> {
    check_n(n)?;
    if m == 0 {
        return Err(Error::domain("scale factor must be positive"));
    }
    block_of((n - 1) / m + 1)
}

/// Block number of `n` in `b_1/m, b_2/m, ...` (every `b_s` divisible by
/// `m`) from the locator of `b_1, b_2, ...`.
pub fn transform_divide(block_of: impl Fn(u64) -> Result<u64>, m: u64, n: u64) -> Result<u64> {
    check_n(n)?;
    block_of(n.checked_mul(m).ok_or(Error::Overflow("index"))?)
}

/// Block number of `n` once every `m` consecutive blocks are merged.
pub fn transform_union(block_of: impl Fn(u64) -> Result<u64>, m: u64, n: u64) -> Result<u64> {
    check_n(n)?;
    if m == 0 {
        return Err(Error::domain("union width must be positive"));
    }
    Ok(block_of(n)?.div_ceil(m))
}

/// Float constants of the linear root, plus whether the exact sums near any
/// guess fit comfortably in `i128`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct LinearRoot {
    p1: i64,
    p0: i64,
    k: f64,
    k_sq: f64,
    eight_p1: f64,
    inv_two_p1: f64,
    small: bool,
}

impl LinearRoot {
    fn new(p1: i64, p0: i64) -> Self {
        let k = 2.0 * p0 as f64 + p1 as f64;
        LinearRoot {
            p1,
            p0,
            k,
            k_sq: k * k,
            eight_p1: 8.0 * p1 as f64,
            inv_two_p1: 1.0 / (2.0 * p1 as f64),
            small: p1.unsigned_abs() < 1 << 31 && p0.unsigned_abs() < 1 << 31,
        }
    }

    fn raw(&self, n: u64) -> f64 {
        (-self.k + (self.eight_p1 * n as f64 + self.k_sq).sqrt()) * self.inv_two_p1
    }

    /// Corrected ceiling of `raw` without the general search; `None` sends
    /// the caller down the general path.
    #[inline]
    fn fast(&self, n: u64, raw: f64) -> Option<ClosedFormResult> {
        // also rejects NaN
        if !self.small || raw.partial_cmp(&((1u64 << 31) as f64)) != Some(std::cmp::Ordering::Less) {
            return None;
        }
        // truncation plus one step; `ceil` and `as i128` are library calls
        let t = raw as i64;
        let guess = (if (t as f64) < raw { t + 1 } else { t }).max(1);
        let (p1, p0, n) = (self.p1 as i128, self.p0 as i128, n as i128);
        for block in [guess, guess - 1, guess + 1] {
            if block < 1 {
                continue;
            }
            let s = block as i128;
            let before = p1
                .wrapping_mul(s.wrapping_mul(s - 1) >> 1)
                .wrapping_add(p0.wrapping_mul(s - 1));
            if before < n && n <= before + p1.wrapping_mul(s) + p0 {
                return Some(ClosedFormResult {
                    block: block as u64,
                    corrected: block != guess,
                    raw_real: raw,
                });
            }
        }
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Constant(u64),
    Linear { p1: i64, p0: i64 },
    Quadratic { p2: i64, p1: i64, p0: i64 },
    Polygonal(i64),
    Centered(i64),
    QuarticSearch,
    Geometric,
    GeometricPowers,
    MergedFirst(u64),
    MergedSecond(u64),
}

/// A closed-form locator prepared for one partition.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    spec: PartitionSpec,
    method: Method,
    powers: Option<Powers>,
    linear: Option<LinearRoot>,
}

impl ClosedForm {
    /// `None` for explicit partitions, which have no closed form.
    pub fn for_spec(spec: &PartitionSpec) -> Option<Self> {
        let method = match *spec.family() {
            Family::Constant { p0 } => Method::Constant(p0 as u64),
            Family::Linear { p1, p0 } => Method::Linear { p1, p0 },
            Family::Quadratic { p2, p1, p0 } => Method::Quadratic { p2, p1, p0 },
            Family::Polygonal { m } => Method::Polygonal(m),
            Family::CenteredPolygonal { m } => Method::Centered(m),
            Family::Cubic { .. } | Family::Pyramidal { .. } => Method::QuarticSearch,
            Family::Geometric { .. } => Method::Geometric,
            Family::GeometricPowers { .. } => Method::GeometricPowers,
            Family::MergedDiagonals { d, start_first: true } => Method::MergedFirst(d as u64),
            Family::MergedDiagonals { d, start_first: false } if d >= 2 => {
                Method::MergedSecond(d as u64)
            }
            Family::MergedDiagonals { .. } => Method::Linear { p1: 1, p0: 0 },
            Family::Explicit(_) => return None,
        };
        let powers = match *spec.family() {
            Family::Geometric { m } | Family::GeometricPowers { m } => Some(Powers::new(m as u64)),
            _ => None,
        };
        let linear = match method {
            Method::Linear { p1, p0 } => Some(LinearRoot::new(p1, p0)),
            _ => None,
        };
        Some(ClosedForm {
            spec: spec.clone(),
            method,
            powers,
            linear,
        })
    }

    fn new(spec: &PartitionSpec) -> Self {
        Self::for_spec(spec).expect("parametric family")
    }

    pub fn spec(&self) -> &PartitionSpec {
        &self.spec
    }

    /// Short name of the formula in use.
    pub fn method_name(&self) -> &'static str {
        match self.method {
            Method::Constant(_) => "constant",
            Method::Linear { .. } => "linear",
            Method::Quadratic { .. } => "quadratic-cardano",
            Method::Polygonal(_) => "polygonal-cardano",
            Method::Centered(_) => "centered-polygonal-cardano",
            Method::QuarticSearch => "quartic-search",
            Method::Geometric => "geometric",
            Method::GeometricPowers => "geometric-powers",
            Method::MergedFirst(_) => "merged-diagonals-first",
            Method::MergedSecond(_) => "merged-diagonals-second",
        }
    }

    /// Cardano intermediates, for the families solved through a cubic.
    pub fn root_work(&self, n: u64) -> Option<RootWork> {
        match self.method {
            Method::Quadratic { p2, p1, p0 } => Some(quadratic_root_work(p2, p1, p0, n)),
            Method::Polygonal(m) => Some(polygonal_root_work(m, n)),
            Method::Centered(m) => Some(centered_polygonal_root_work(m, n)),
            _ => None,
        }
    }

    pub fn locate_block(&self, n: u64) -> Result<ClosedFormResult> {
        check_n(n)?;
        let sum = |s| self.spec.closed_sum(s);
        match self.method {
            Method::Constant(p0) => Ok(exact(n.div_ceil(p0), n as f64 / p0 as f64)),
            Method::Linear { .. } => {
                let root = self.linear.as_ref().expect("linear constants");
                let raw = root.raw(n);
                match root.fast(n, raw) {
                    Some(r) => Ok(r),
                    None => ceil_corrected(n, raw, sum),
                }
            }
            Method::Quadratic { .. } | Method::Polygonal(_) | Method::Centered(_) => {
                let work = self.root_work(n).expect("cubic method");
                ceil_corrected(n, work.x, sum)
            }
            Method::QuarticSearch => {
                let block = monotone_inverse(n, sum)?;
                Ok(exact(block, block as f64))
            }
            Method::Geometric => {
                let target = n.checked_add(1).ok_or(Error::Overflow("index"))?;
                let powers = self.powers.as_ref().expect("geometric table");
                let (block, corrected, raw_real) = powers.least_reaching(target);
                Ok(ClosedFormResult {
                    block,
                    corrected,
                    raw_real,
                })
            }
            Method::GeometricPowers => {
                let powers = self.powers.as_ref().expect("geometric table");
                let (block, corrected, raw_real) = powers.least_reaching(n);
                Ok(ClosedFormResult {
                    block,
                    corrected,
                    raw_real,
                })
            }
            Method::MergedFirst(d) => crate::diagonals::l_merged_first(d, n).map(|r| r.radical),
            Method::MergedSecond(d) => crate::diagonals::l_merged_second(d, n).map(|r| r.radical),
        }
    }

    /// Block number plus `R`, `R'` from the exact closed-form partial sums.
    pub fn locate(&self, n: u64) -> Result<(ClosedFormResult, Position)> {
        let result = self.locate_block(n)?;
        let start = self.spec.closed_sum(result.block - 1)?;
        let end = self.spec.closed_sum(result.block)?;
        Ok((
            result,
            Position {
                n,
                block: result.block,
                left: n - start,
                right: end - n + 1,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::PartialSumTable;

    fn oracle(spec: &PartitionSpec, n: u64) -> u64 {
        PartialSumTable::new(spec.clone()).locate(n).unwrap().block
    }

    #[test]
    fn constant_examples() {
        assert_eq!(l_constant(3, 3).unwrap().block, 1);
        assert_eq!(l_constant(3, 4).unwrap().block, 2);
        let r = l_constant(1, 7).unwrap();
        assert_eq!(r.block, 7);
        assert!(!r.corrected);
    }

    #[test]
    fn linear_examples() {
        assert_eq!(l_linear(1, 0, 4).unwrap().block, 3);
        assert_eq!(l_linear(2, 0, 3).unwrap().block, 2);
        // rows of 7, 9, 11: the array printed with ceil(sqrt(n+9) - 3)
        assert_eq!(l_linear(2, 5, 8).unwrap().block, 2);
        for n in 1..200u64 {
            let printed = ((n as f64 + 9.0).sqrt() - 3.0).ceil() as u64;
            assert_eq!(l_linear(2, 5, n).unwrap().block, printed, "n={n}");
        }
        assert!(matches!(l_linear(1, -5, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn linear_alt_examples() {
        let r = l_linear_alt(2, 1).unwrap();
        assert_eq!((r.scaled.block, r.halving.block), (1, 1));
        let r = l_linear_alt(2, 7).unwrap();
        assert_eq!((r.scaled.block, r.halving.block), (3, 3));
        let r = l_linear_alt(1, 10).unwrap();
        assert_eq!((r.scaled.block, r.halving.block), (4, 4));
    }

    #[test]
    fn linear_routes_agree() {
        for p1 in 1..=12 {
            let spec = PartitionSpec::linear(p1, 0).unwrap();
            let table = PartialSumTable::new(spec);
            for n in 1..3000 {
                let want = table.locate(n).unwrap().block;
                let alt = l_linear_alt(p1, n).unwrap();
                assert_eq!(l_linear(p1, 0, n).unwrap().block, want);
                assert_eq!(alt.scaled.block, want, "p1={p1} n={n}");
                assert_eq!(alt.halving.block, want, "p1={p1} n={n}");
                assert_eq!(alt.halving.raw_real as u64, want, "p1={p1} n={n}");
            }
        }
    }

    #[test]
    fn quadratic_examples() {
        // n appears n^2 times: 1, 2,2,2,2, 3 (x9), ...
        assert_eq!(l_quadratic(1, 0, 0, 5).unwrap().block, 2);
        assert_eq!(l_quadratic(1, 0, 0, 6).unwrap().block, 3);
        assert_eq!(l_quadratic(1, 0, 1, 8).unwrap().block, 3);
        let poly25 = PartitionSpec::polygonal(25).unwrap();
        assert_eq!(l_polygonal(25, 100).unwrap().block, oracle(&poly25, 100));
    }

    #[test]
    fn intermediates_for_unit_leading_coefficient() {
        // With p2 = 1, p1 = 0: U = 36 p0 - 3, V = 648 n + 324 p0.
        for p0 in 0..5 {
            for n in [1u64, 10, 1000] {
                let w = quadratic_root_work(1, 0, p0, n);
                assert_eq!(w.u, (36 * p0 - 3) as f64);
                assert_eq!(w.v, (648 * n as i64 + 324 * p0) as f64);
                assert!(w.discriminant < 0.0);
                assert_eq!(w.branch, CubicBranch::Cardano);
            }
        }
    }

    /// `u = 3ac - b^2`, `v = 9abc - 2b^3 - 27a^2 d` from raw coefficients.
    fn generic_uv(a: f64, b: f64, c: f64, d: f64) -> (f64, f64) {
        (3.0 * a * c - b * b, 9.0 * a * b * c - 2.0 * b * b * b - 27.0 * a * a * d)
    }

    #[test]
    fn family_intermediates_match_generic_coefficients() {
        for (p2, p1, p0) in [(1, 0, 0), (2, -3, 4), (5, 7, -2), (3, 1, 1)] {
            let n = 37u64;
            let (p2f, p1f, p0f) = (p2 as f64, p1 as f64, p0 as f64);
            let (u, v) = generic_uv(2.0 * p2f, 3.0 * (p2f + p1f), p2f + 3.0 * p1f + 6.0 * p0f, -6.0 * n as f64);
            let w = quadratic_root_work(p2, p1, p0, n);
            assert_eq!((w.u, w.v), (u, v), "{p2} {p1} {p0}");
        }
        for m in 3..30 {
            let n = 11u64;
            let mf = m as f64;
            let (u, v) = generic_uv(2.0 * mf - 4.0, 6.0, -(2.0 * mf - 10.0), -12.0 * n as f64);
            let w = polygonal_root_work(m, n);
            assert_eq!((w.u, w.v), (u, v));
            let (u, v) = generic_uv(mf, 0.0, 6.0 - mf, -6.0 * n as f64);
            let w = centered_polygonal_root_work(m, n);
            assert_eq!((w.u, w.v), (u, v));
        }
    }

    #[test]
    fn cubic_solver_roots() {
        // (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6: three real roots, largest 3.
        let (u, v) = generic_uv(1.0, -6.0, 11.0, -6.0);
        let w = cubic_largest_root(1.0, -6.0, u, v);
        assert_eq!(w.branch, CubicBranch::Trigonometric);
        assert!((w.x - 3.0).abs() < 1e-12);
        // x^3 - 8: single real root 2.
        let (u, v) = generic_uv(1.0, 0.0, 0.0, -8.0);
        let w = cubic_largest_root(1.0, 0.0, u, v);
        assert_eq!(w.branch, CubicBranch::Cardano);
        assert!((w.x - 2.0).abs() < 1e-12);
        // (x+1)^3: triple root.
        let (u, v) = generic_uv(1.0, 3.0, 3.0, 1.0);
        assert!((cubic_largest_root(1.0, 3.0, u, v).x + 1.0).abs() < 1e-12);
        // x^3 - 3x - 2 = (x-2)(x+1)^2: double root, discriminant zero.
        let (u, v) = generic_uv(1.0, 0.0, -3.0, -2.0);
        assert!((cubic_largest_root(1.0, 0.0, u, v).x - 2.0).abs() < 1e-9);
    }

    #[test]
    fn casus_irreducibilis_thresholds() {
        // Polygonal blocks reach three real roots at n = 1 from m = 20 on;
        // centered polygonal from m = 25 on.
        assert_eq!(polygonal_root_work(19, 1).branch, CubicBranch::Cardano);
        assert_eq!(polygonal_root_work(20, 1).branch, CubicBranch::Trigonometric);
        assert_eq!(centered_polygonal_root_work(24, 1).branch, CubicBranch::Cardano);
        assert_eq!(centered_polygonal_root_work(25, 1).branch, CubicBranch::Trigonometric);
    }

    #[test]
    fn polygonal_examples() {
        assert_eq!(l_polygonal(5, 2).unwrap().block, 2);
        assert_eq!(l_polygonal(5, 18).unwrap().block, 3);
        let spec = PartitionSpec::polygonal(20).unwrap();
        assert_eq!(l_polygonal(20, 1000).unwrap().block, oracle(&spec, 1000));
    }

    #[test]
    fn centered_examples() {
        assert_eq!(l_centered_polygonal(5, 7).unwrap().block, 2);
        assert_eq!(l_centered_polygonal(5, 8).unwrap().block, 3);
        let spec = PartitionSpec::centered_polygonal(30).unwrap();
        assert_eq!(l_centered_polygonal(30, 500).unwrap().block, oracle(&spec, 500));
    }

    #[test]
    fn cubic_examples() {
        // rows of 2, 9, 28: index 11 closes block 2
        assert_eq!(l_cubic(1, 0, 0, 1, 11).unwrap().block, 2);
        assert_eq!(l_cubic(1, 0, 0, 1, 12).unwrap().block, 3);
        // rows 1, 6, 18
        assert_eq!(l_pyramidal(5, 7).unwrap().block, 2);
        assert_eq!(l_pyramidal(5, 8).unwrap().block, 3);
        let spec = PartitionSpec::cubic(2, 1, 1, 0).unwrap();
        assert_eq!(l_cubic(2, 1, 1, 0, 1_000_000).unwrap().block, oracle(&spec, 1_000_000));
    }

    #[test]
    fn geometric_examples() {
        assert_eq!(l_geometric(2, 7).unwrap().block, 3);
        assert_eq!(l_geometric(3, 2).unwrap().block, 1);
        assert_eq!(l_geometric(2, 8).unwrap().block, 4);
        assert_eq!(l_geometric(2, u64::MAX - 1).unwrap().block, 64);
        assert_eq!(l_geometric(2, u64::MAX), Err(Error::Overflow("index")));
        for m in 2..12 {
            let spec = PartitionSpec::geometric(m).unwrap();
            let t = PartialSumTable::new(spec);
            for n in (1..100_000).chain([10u64.pow(12), 10u64.pow(18)]) {
                assert_eq!(l_geometric(m, n).unwrap().block, t.locate(n).unwrap().block);
            }
        }
    }

    #[test]
    fn transforms() {
        let regular = PartitionSpec::naturals();
        let reg = PartialSumTable::new(regular);
        let by = |n| reg.locate(n).map(|p| p.block);
        assert_eq!(transform_scale(by, 2, 5).unwrap(), 2);
        assert_eq!(transform_scale(by, 2, 1).unwrap(), 1);
        let ones = PartialSumTable::new(PartitionSpec::ones());
        assert_eq!(transform_scale(|n| ones.locate(n).map(|p| p.block), 3, 7).unwrap(), 3);

        let doubled = PartialSumTable::new(PartitionSpec::linear(2, 0).unwrap());
        let even = PartialSumTable::new(PartitionSpec::linear(6, 4).unwrap()); // b_s = 6s + 4
        let halved = PartialSumTable::new(PartitionSpec::linear(3, 2).unwrap());
        // union of 3 regular rows: 1+2+3, 4+5+6, ... = 9s - 3
        let merged = PartialSumTable::new(PartitionSpec::linear(9, -3).unwrap());
        for n in 1..5000 {
            assert_eq!(transform_scale(by, 2, n).unwrap(), doubled.locate(n).unwrap().block);
            assert_eq!(
                transform_divide(|k| even.locate(k).map(|p| p.block), 2, n).unwrap(),
                halved.locate(n).unwrap().block
            );
            assert_eq!(transform_union(by, 3, n).unwrap(), merged.locate(n).unwrap().block);
        }
    }

    #[test]
    fn correction_reports_window_failure() {
        let spec = PartitionSpec::naturals();
        let err = ceil_corrected(100, 1.0, |s| spec.closed_sum(s)).unwrap_err();
        assert_eq!(err, Error::Correction { n: 100, guess: 1, window: 2 });
        let r = ceil_corrected(100, 12.0, |s| spec.closed_sum(s)).unwrap();
        assert_eq!(r.block, 14);
        assert!(r.corrected);
    }

    #[test]
    fn locate_reports_offsets() {
        let cf = ClosedForm::for_spec(&PartitionSpec::linear(4, -1).unwrap()).unwrap();
        let (r, p) = cf.locate(10).unwrap();
        assert_eq!((r.block, p.left, p.right), (2, 7, 1));
        assert!(ClosedForm::for_spec(&PartitionSpec::explicit(vec![1, 2]).unwrap()).is_none());
    }
}
