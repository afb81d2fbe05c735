//! Separating integers for two-dimensional root grids, and lifting.
//!
//! For root sets `X`, `Y` the map `(x, y) -> x + s y` collides exactly when
//! `s = (x - x') / (y' - y)`, so a block of integers `s` far from every
//! ratio `|x - x'| / |y - y'|` is separating. The ratios are rounded to
//! integers from relative approximations of the pairwise distances and a
//! bisection over `{1, ..., d^4 c}` finds a block that no ratio rounds into.

mod lift;
mod sort;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{abs_interval, bit_magnitude_interval, BitMagnitude, Dyadic, Rounding};
use crate::roots::{RootSet, MAX_PRECISION};

pub use lift::{image_mask, lift, lift_indices, sum_resultant, MAX_LIFT_PRECISION};
pub use sort::{merge_sort_by, naive_merge_sort_by, LevelStats, SortStats};

/// Approximate distance between two distinct roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffEntry {
    pub approx: Dyadic,
    pub magnitude: BitMagnitude,
    pub pair: (usize, usize),
}

/// Relative approximations of all pairwise root distances of one root set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffTable {
    pub entries: Vec<DiffEntry>,
    pub quality: u32,
    pub sorted: bool,
    pub sort_stats: Option<SortStats>,
}

/// Search parameters derived from the degree bound and block length, with
/// `d^4` and `c` rounded up to powers of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridParams {
    pub d: u64,
    pub c: u64,
    pub d4: u64,
    pub c2: u64,
    /// Relative quality `log2(64 d4 c2)`.
    pub rho: u32,
}

impl GridParams {
    pub fn new(d: u64, c: u64) -> Result<GridParams> {
        if c == 0 {
            return Err(Error::OutOfRange("block length must be positive".into()));
        }
        let d = d.max(1);
        let cap = d.max(2).checked_pow(8).unwrap_or(u64::MAX);
        if c > cap {
            return Err(Error::OutOfRange(format!("block length {c} exceeds d^8")));
        }
        let d4 = d
            .checked_pow(4)
            .and_then(u64::checked_next_power_of_two)
            .ok_or_else(|| Error::OutOfRange("degree too large".into()))?;
        let c2 = c
            .checked_next_power_of_two()
            .ok_or_else(|| Error::OutOfRange("block too large".into()))?;
        d4.checked_mul(c2)
            .and_then(|v| v.checked_mul(64))
            .ok_or_else(|| Error::OutOfRange("search range too large".into()))?;
        let rho = 6 + d4.trailing_zeros() + c2.trailing_zeros();
        Ok(GridParams { d, c, d4, c2, rho })
    }

    pub fn for_sets(x: &RootSet, y: &RootSet, c: u64) -> Result<GridParams> {
        let d = x.polynomial().deg0().max(y.polynomial().deg0()) as u64;
        GridParams::new(d, c)
    }

    pub fn range_max(&self) -> u64 {
        self.d4 * self.c2
    }
}

/// Distance table of a root set at relative quality `rho`, unsorted.
///
/// Each entry is the midpoint of an enclosure of `|x_k - x_l|` whose width
/// is at most `lo 2^-(rho+1)` and at most `1/2`, rounded to `rho + 3`
/// significant bits; both the relative error `< 2^-rho` and the absolute
/// error `<= 1` follow.
pub fn diff_table(rs: &RootSet, rho: u32) -> Result<DiffTable> {
    let n = rs.len();
    let mut table = DiffTable {
        entries: Vec::new(),
        quality: rho,
        sorted: n < 2,
        sort_stats: None,
    };
    if n < 2 {
        return Ok(table);
    }
    let half = Dyadic::pow2(-1);
    let mut q = rs.quality().max(rho + 8);
    'outer: loop {
        if q > MAX_PRECISION {
            return Err(Error::NoConvergence {
                max_precision: MAX_PRECISION,
            });
        }
        let r = rs.refine(q)?;
        table.entries.clear();
        for k in 0..n {
            for l in k + 1..n {
                let z = r.region(k).sub(r.region(l));
                let m = match abs_interval(&z, q - 2, None) {
                    Ok(m) => m,
                    Err(Error::Unrefinable { .. }) => {
                        q *= 2;
                        continue 'outer;
                    }
                    Err(e) => return Err(e),
                };
                let w = m.width();
                if !m.lo().is_positive() || w.shift(rho as i64 + 1) > *m.lo() || w > half {
                    q *= 2;
                    continue 'outer;
                }
                table.entries.push(DiffEntry {
                    approx: m.midpoint().round_to_bits(rho + 3, Rounding::Trunc),
                    magnitude: bit_magnitude_interval(&m)?,
                    pair: (k, l),
                });
            }
        }
        return Ok(table);
    }
}

/// Sorts a table nondecreasingly by approximation (stable galloping merge
/// sort; comparison counts are kept in `sort_stats`).
pub fn sort_diffs(t: DiffTable) -> DiffTable {
    let (entries, stats) = merge_sort_by(&t.entries, |a, b| a.approx.cmp(&b.approx));
    DiffTable {
        entries,
        quality: t.quality,
        sorted: true,
        sort_stats: Some(stats),
    }
}

/// Tables for `N` (distances within `X`, sorted) and `Delta` (within `Y`).
pub fn build_diff_tables(x: &RootSet, y: &RootSet, c: u64) -> Result<(DiffTable, DiffTable)> {
    let p = GridParams::for_sets(x, y, c)?;
    let nu = sort_diffs(diff_table(x, p.rho)?);
    let delta = diff_table(y, p.rho)?;
    Ok((nu, delta))
}

/// Integer rounding of a distance ratio; `Zero < Finite(_) < Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RoundedFraction {
    Zero,
    Finite(u64),
    Infinite,
}

/// Rounds `nu / delta` to an integer: 0 when `e1 + 4 - e2 <= 0`, infinite
/// when `2^(e1 - e2 - 1) >= 8 d4 c2`, otherwise the nearest integer with
/// ties going down. `e1`, `e2` are the floor logarithms of the inputs.
pub fn round_fraction(nu: &Dyadic, delta: &Dyadic, p: &GridParams) -> RoundedFraction {
    let e1 = nu.floor_log2().expect("positive distance");
    let e2 = delta.floor_log2().expect("positive distance");
    if e1 + 4 - e2 <= 0 {
        return RoundedFraction::Zero;
    }
    let k = e1 - e2 - 1;
    let limit = 8 * p.d4 as u128 * p.c2 as u128;
    if k >= 0 && (k >= 127 || (1u128 << k) >= limit) {
        return RoundedFraction::Infinite;
    }
    // ceil(nu/delta - 1/2) = ceil((2 nu - delta) / (2 delta))
    let num = &nu.shift(1) - delta;
    let v = Dyadic::div_to_grid(&num, &delta.shift(1), 0, Rounding::Ceil)
        .expect("nonzero")
        .floor();
    if v <= BigInt::from(0) {
        RoundedFraction::Zero
    } else {
        RoundedFraction::Finite(u64::try_from(v).expect("below 8 d^4 c"))
    }
}

/// Number of pairs `(nu, delta)` whose rounded ratio lies in `{s, ..., s2}`,
/// by two binary searches over the sorted `nu` for each `delta`.
pub fn preimage_count(nu: &DiffTable, delta: &DiffTable, s: u64, s2: u64, p: &GridParams) -> Result<u64> {
    if s < 1 || s > s2 || s2 > p.range_max() {
        return Err(Error::OutOfRange(format!("query {{{s}, ..., {s2}}}")));
    }
    if !nu.sorted {
        return Err(Error::OutOfRange("distance table not sorted".into()));
    }
    let (lo, hi) = (RoundedFraction::Finite(s), RoundedFraction::Finite(s2));
    let mut count = 0u64;
    for dl in &delta.entries {
        let a = nu
            .entries
            .partition_point(|e| round_fraction(&e.approx, &dl.approx, p) < lo);
        let b = nu
            .entries
            .partition_point(|e| round_fraction(&e.approx, &dl.approx, p) <= hi);
        count += (b - a) as u64;
    }
    Ok(count)
}

/// A block `{s_star, ..., s_star + block_length - 1}` of separating integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparatingInterval {
    pub s_star: u64,
    pub block_length: u64,
    pub search_range_max: u64,
    /// Preimage count of the current range at each bisection level.
    pub level_counts: Vec<u64>,
}

impl SeparatingInterval {
    pub fn block(&self) -> std::ops::Range<u64> {
        self.s_star..self.s_star + self.block_length
    }
}

/// Bisects `{1, ..., d4 c2}` keeping the half with fewer preimages (ties go
/// left) until the range has length `c2` and contains no rounded ratio.
pub fn find_separating_block(x: &RootSet, y: &RootSet, c: u64) -> Result<SeparatingInterval> {
    let p = GridParams::for_sets(x, y, c)?;
    let mut out = SeparatingInterval {
        s_star: 1,
        block_length: c,
        search_range_max: p.range_max(),
        level_counts: Vec::new(),
    };
    if x.len() < 2 || y.len() < 2 {
        return Ok(out);
    }
    let (nu, delta) = build_diff_tables(x, y, c)?;
    let (mut s, mut s2) = (1u64, p.range_max());
    let mut count = preimage_count(&nu, &delta, s, s2, &p)?;
    out.level_counts.push(count);
    while s2 - s + 1 > p.c2 {
        let theta = (s + s2 - 1) / 2;
        let left = preimage_count(&nu, &delta, s, theta, &p)?;
        let right = preimage_count(&nu, &delta, theta + 1, s2, &p)?;
        let next = if left <= right {
            s2 = theta;
            left
        } else {
            s = theta + 1;
            right
        };
        if 2 * next > count {
            return Err(Error::Certification("bisection failed to halve the preimage".into()));
        }
        count = next;
        out.level_counts.push(count);
    }
    if count != 0 {
        return Err(Error::Certification(format!("{count} ratios remain in the final block")));
    }
    out.s_star = s;
    Ok(out)
}
