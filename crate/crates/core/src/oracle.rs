//! Ground truth by exhaustive enumeration: every ordered pair of n-step E/N
//! paths, intersections counted at interior steps only.
//!
//! Paths are n-bit encodings (bit m set = step m goes east) iterated in
//! lexicographic order; the intersection test tracks only the running
//! difference of x-coordinates, since points at the same step index coincide
//! exactly when their x-coordinates agree. The full sweep may be partitioned
//! by the first path's encoding into independent shards merged by addition,
//! so results are deterministic regardless of shard count.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactmath::Integer;

/// Default bound on n for brute-force enumeration (4^n pairs).
pub const DEFAULT_CEILING: u32 = 12;

/// Version tag of the JSON cache documents.
pub const CACHE_VERSION: u32 = 1;

/// One unit step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    E,
    N,
}

/// An n-step lattice path from the origin, n <= 31.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePath {
    len: u32,
    east_bits: u32,
}

impl LatticePath {
    pub fn new(len: u32, east_bits: u32) -> Self {
        assert!(len <= 31, "path length {len} out of range");
        assert!(
            len == 31 || east_bits < (1u32 << len),
            "east_bits has bits beyond the path length"
        );
        LatticePath { len, east_bits }
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn step(&self, m: u32) -> Step {
        assert!(m < self.len);
        if (self.east_bits >> m) & 1 == 1 {
            Step::E
        } else {
            Step::N
        }
    }

    /// Endpoint x-coordinate; the path ends at `(east_count, len - east_count)`.
    pub fn east_count(&self) -> u32 {
        self.east_bits.count_ones()
    }

    /// x-coordinate of the m-th point (after m steps).
    pub fn x_after(&self, m: u32) -> u32 {
        assert!(m <= self.len);
        if m == 0 {
            0
        } else {
            (self.east_bits & ((1u32 << m) - 1)).count_ones()
        }
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > 31 {
            return Err(Error::PathParse {
                reason: format!("length {} exceeds 31", s.len()),
            });
        }
        let mut bits = 0u32;
        for (m, ch) in s.chars().enumerate() {
            match ch {
                'E' | 'e' => bits |= 1 << m,
                'N' | 'n' => {}
                other => {
                    return Err(Error::PathParse {
                        reason: format!("unexpected step character {other:?}"),
                    })
                }
            }
        }
        Ok(LatticePath::new(s.len() as u32, bits))
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in 0..self.len {
            f.write_str(match self.step(m) {
                Step::E => "E",
                Step::N => "N",
            })?;
        }
        Ok(())
    }
}

/// Signed x-difference trace of a path pair and the interior steps at which
/// the paths coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionProfile {
    /// `d[m]` = x(first, m) - x(second, m) for m = 0..=n.
    pub d: Vec<i64>,
    /// Interior step indices m (0 < m < n) with `d[m] == 0`.
    pub meets: Vec<u32>,
}

/// Trace the pair step by step. Lengths must agree.
pub fn intersection_profile(a: &LatticePath, b: &LatticePath) -> Result<IntersectionProfile> {
    if a.len != b.len {
        return Err(Error::LengthMismatch {
            left: a.len,
            right: b.len,
        });
    }
    let n = a.len;
    let mut d = Vec::with_capacity(n as usize + 1);
    let mut meets = Vec::new();
    let mut diff = 0i64;
    d.push(0);
    for m in 0..n {
        diff += ((a.east_bits >> m) & 1) as i64 - ((b.east_bits >> m) & 1) as i64;
        d.push(diff);
        if diff == 0 && m + 1 < n {
            meets.push(m + 1);
        }
    }
    Ok(IntersectionProfile { d, meets })
}

/// Number of interior steps at which the two paths occupy the same point.
/// The origin and the endpoints never count.
pub fn count_intersections(a: &LatticePath, b: &LatticePath) -> Result<u32> {
    if a.len != b.len {
        return Err(Error::LengthMismatch {
            left: a.len,
            right: b.len,
        });
    }
    Ok(interior_meets(a.east_bits, b.east_bits, a.len))
}

#[inline]
fn interior_meets(a: u32, b: u32, n: u32) -> u32 {
    let mut diff = 0i32;
    let mut hits = 0u32;
    for m in 0..n.saturating_sub(1) {
        diff += ((a >> m) & 1) as i32 - ((b >> m) & 1) as i32;
        hits += (diff == 0) as u32;
    }
    hits
}

/// Exhaustive counts for one n, indexed by (intersections, first endpoint,
/// second endpoint).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteTable {
    n: u32,
    k_dim: usize,
    side: usize,
    counts: Vec<u64>,
}

impl BruteTable {
    /// All-zero table with the dimensions used for the given n.
    pub fn zeroed(n: u32) -> Self {
        assert!(n <= 31, "n = {n} out of range");
        let k_dim = (n as usize).max(1);
        let side = n as usize + 1;
        BruteTable {
            n,
            k_dim,
            side,
            counts: vec![0; k_dim * side * side],
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    #[inline]
    fn idx(&self, k: usize, r: usize, s: usize) -> usize {
        (k * self.side + r) * self.side + s
    }

    /// Count for (k, r, s), zero-extended outside the stored triangle.
    pub fn count(&self, k: i64, r: i64, s: i64) -> Integer {
        let (kd, sd) = (self.k_dim as i64, self.side as i64);
        if k < 0 || k >= kd || r < 0 || r >= sd || s < 0 || s >= sd {
            return Integer::zero();
        }
        Integer::from(self.counts[self.idx(k as usize, r as usize, s as usize)])
    }

    /// Perturb one entry (perturbation tests only). Panics out of range.
    pub fn bump(&mut self, k: usize, r: usize, s: usize, delta: i64) {
        let i = self.idx(k, r, s);
        self.counts[i] = self.counts[i].checked_add_signed(delta).unwrap();
    }

    /// Sum of all entries; equals 4^n for a genuine enumeration.
    pub fn total_mass(&self) -> Integer {
        self.counts.iter().map(|&c| Integer::from(c)).sum()
    }

    /// Nonzero entries as (k, r, s, count), in index order.
    pub fn nonzero_entries(&self) -> Vec<(u32, u32, u32, u64)> {
        let mut out = Vec::new();
        for k in 0..self.k_dim {
            for r in 0..self.side {
                for s in 0..self.side {
                    let c = self.counts[self.idx(k, r, s)];
                    if c != 0 {
                        out.push((k as u32, r as u32, s as u32, c));
                    }
                }
            }
        }
        out
    }

    fn merge(mut self, other: BruteTable) -> BruteTable {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }
}

fn check_ceiling(n: u32, ceiling: u32) -> Result<()> {
    if n > ceiling || n > 31 {
        return Err(Error::CeilingExceeded {
            n,
            ceiling: ceiling.min(31),
        });
    }
    Ok(())
}

#[inline]
fn scan_second_paths(table: &mut BruteTable, n: u32, first: u32) {
    let r = first.count_ones() as usize;
    for second in 0..1u64 << n {
        let second = second as u32;
        let k = interior_meets(first, second, n) as usize;
        let s = second.count_ones() as usize;
        let i = table.idx(k, r, s);
        table.counts[i] += 1;
    }
}

/// One 4^n pass accumulating every (k, r, s) count simultaneously.
/// Runs in parallel shards over the first path when the `parallel` feature
/// is enabled; results are identical either way.
pub fn brute_table_with_ceiling(n: u32, ceiling: u32) -> Result<BruteTable> {
    check_ceiling(n, ceiling)?;
    #[cfg(feature = "parallel")]
    {
        Ok((0..1u64 << n)
            .into_par_iter()
            .fold(
                || BruteTable::zeroed(n),
                |mut acc, first| {
                    scan_second_paths(&mut acc, n, first as u32);
                    acc
                },
            )
            .reduce(|| BruteTable::zeroed(n), BruteTable::merge))
    }
    #[cfg(not(feature = "parallel"))]
    {
        brute_table_serial_with_ceiling(n, ceiling)
    }
}

/// [`brute_table_with_ceiling`] at the default ceiling.
pub fn brute_table(n: u32) -> Result<BruteTable> {
    brute_table_with_ceiling(n, DEFAULT_CEILING)
}

/// Single-threaded reference sweep; the sequential fallback and the baseline
/// the benchmarks compare against.
pub fn brute_table_serial_with_ceiling(n: u32, ceiling: u32) -> Result<BruteTable> {
    check_ceiling(n, ceiling)?;
    let mut table = BruteTable::zeroed(n);
    for first in 0..1u64 << n {
        scan_second_paths(&mut table, n, first as u32);
    }
    Ok(table)
}

/// [`brute_table_serial_with_ceiling`] at the default ceiling.
pub fn brute_table_serial(n: u32) -> Result<BruteTable> {
    brute_table_serial_with_ceiling(n, DEFAULT_CEILING)
}

/// All bitmasks of `n` bits with exactly `t` ones, ascending (Gosper's hack).
fn fixed_popcount(n: u32, t: u32) -> Vec<u32> {
    if t > n {
        return Vec::new();
    }
    if t == 0 {
        return vec![0];
    }
    let limit = 1u64 << n;
    let mut x = (1u64 << t) - 1;
    let mut out = Vec::new();
    while x < limit {
        out.push(x as u32);
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((x ^ r) >> 2) / c) | r;
    }
    out
}

/// Count the ordered pairs ending at `(r, n-r)` and `(s, n-s)` with exactly
/// `k` intersections, by enumerating only the `C(n,r) * C(n,s)` pairs with
/// those endpoints.
pub fn brute_m_with_ceiling(n: i64, k: i64, r: i64, s: i64, ceiling: u32) -> Result<Integer> {
    if n < 0 || r < 0 || r > n || s < 0 || s > n || k < 0 {
        return Ok(Integer::zero());
    }
    check_ceiling(n as u32, ceiling)?;
    let n = n as u32;
    if k > 0 && k as u32 > n.saturating_sub(1) {
        return Ok(Integer::zero());
    }
    let firsts = fixed_popcount(n, r as u32);
    let seconds = fixed_popcount(n, s as u32);
    let mut count = 0u64;
    for &a in &firsts {
        for &b in &seconds {
            if interior_meets(a, b, n) as i64 == k {
                count += 1;
            }
        }
    }
    Ok(Integer::from(count))
}

/// [`brute_m_with_ceiling`] at the default ceiling.
pub fn brute_m(n: i64, k: i64, r: i64, s: i64) -> Result<Integer> {
    brute_m_with_ceiling(n, k, r, s, DEFAULT_CEILING)
}

#[derive(Serialize, Deserialize)]
struct CacheDoc {
    version: u32,
    n: u32,
    entries: Vec<(u32, u32, u32, String)>,
}

/// Write a table as a JSON cache document. Counts go out as decimal strings
/// so readers need not assume any integer width.
pub fn write_cache(path: &Path, table: &BruteTable) -> Result<()> {
    let doc = CacheDoc {
        version: CACHE_VERSION,
        n: table.n,
        entries: table
            .nonzero_entries()
            .into_iter()
            .map(|(k, r, s, c)| (k, r, s, c.to_string()))
            .collect(),
    };
    let text = serde_json::to_string(&doc).map_err(|e| Error::Cache {
        reason: e.to_string(),
    })?;
    std::fs::write(path, text).map_err(|e| Error::Cache {
        reason: format!("writing {}: {e}", path.display()),
    })
}

/// Read a cache document back, validating version, index ranges, and total
/// mass (must be exactly 4^n).
pub fn read_cache(path: &Path) -> Result<BruteTable> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Cache {
        reason: format!("reading {}: {e}", path.display()),
    })?;
    let doc: CacheDoc = serde_json::from_str(&text).map_err(|e| Error::Cache {
        reason: format!("parsing {}: {e}", path.display()),
    })?;
    if doc.version != CACHE_VERSION {
        return Err(Error::Cache {
            reason: format!("version {} != {CACHE_VERSION}", doc.version),
        });
    }
    if doc.n > 31 {
        return Err(Error::Cache {
            reason: format!("n = {} out of range", doc.n),
        });
    }
    let mut table = BruteTable::zeroed(doc.n);
    for (k, r, s, count) in &doc.entries {
        let (k, r, s) = (*k as usize, *r as usize, *s as usize);
        if k >= table.k_dim || r >= table.side || s >= table.side {
            return Err(Error::Cache {
                reason: format!("entry ({k}, {r}, {s}) out of range for n = {}", doc.n),
            });
        }
        let value: u64 = count.parse().map_err(|_| Error::Cache {
            reason: format!("bad count {count:?}"),
        })?;
        let i = table.idx(k, r, s);
        table.counts[i] += value;
    }
    let expected_mass = Integer::from(1u64) << (2 * doc.n);
    if table.total_mass() != expected_mass {
        return Err(Error::Cache {
            reason: format!("total mass differs from 4^{}", doc.n),
        });
    }
    Ok(table)
}
