//! Exact return counts of simple random walk on `Z^d`.
//!
//! `f(d, k)` is the number of nearest-neighbor walks of length `2k` that
//! start and end at the origin, so the return probability after `2k` steps is
//! `p_d(2k) = f(d, k) / (2d)^(2k)`. Counts for one dimension are central
//! binomial coefficients, two dimensions are their squares, and higher
//! dimensions reduce by splitting coordinates: a returning walk in
//! `d1 + d2` dimensions is a returning walk in each block interleaved in
//! `C(2k, 2r)` ways,
//!
//! ```text
//! f(d1 + d2, k) = sum_r C(2k, 2r) f(d1, r) f(d2, k - r).
//! ```
//!
//! Splitting at `d/2` means a computation for dimension `d` touches only
//! `O(log d)` distinct dimensions, which [`WalkCountCache`] memoizes.
//! Everything here is exact integer arithmetic; probabilities leave this
//! module only as canonical rationals.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Exact table of `f(d, k)` for `k = 0..=kmax`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnCountTable {
    dimension: u32,
    counts: Vec<BigUint>,
}

impl ReturnCountTable {
    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// Largest half-step count `k` covered by the table.
    pub fn kmax(&self) -> usize {
        self.counts.len() - 1
    }

    /// `f(d, k)`, the number of returning walks of length `2k`.
    pub fn count(&self, k: usize) -> Result<&BigUint> {
        self.counts
            .get(k)
            .ok_or(Error::OutOfRange("k exceeds the computed walk-count table"))
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }
}

/// Term counts used in the published tables, by dimension band.
pub fn default_terms(d: u32) -> usize {
    match d {
        0..=6 => 1000,
        7..=10 => 100,
        _ => 80,
    }
}

/// `p_1(2k) = C(2k, k) / 4^k`, the one-dimensional return probability.
pub fn p1_return(k: usize) -> BigRational {
    let c = central_binomial(k);
    let den = BigUint::one() << (2 * k);
    BigRational::new(BigInt::from(c), BigInt::from(den))
}

/// `C(2k, k)` by the exact multiplicative recurrence.
pub fn central_binomial(k: usize) -> BigUint {
    let mut c = BigUint::one();
    for j in 1..=k as u64 {
        c = c * (2 * (2 * j - 1));
        c = c / j; // exact: C(2j,j) = C(2j-2,j-1) * 2(2j-1)/j
    }
    c
}

/// Dimension-keyed cache of walk-count tables. Tables are immutable once
/// built and handed out behind `Arc`, so completed tables can be shared
/// freely across threads.
#[derive(Debug, Default)]
pub struct WalkCountCache {
    tables: BTreeMap<u32, Arc<ReturnCountTable>>,
}

impl WalkCountCache {
    pub fn new() -> WalkCountCache {
        WalkCountCache::default()
    }

    /// Exact `f(d, k)` for `k = 0..=kmax`. Cached tables are reused when they
    /// cover the requested range (the returned table may extend past `kmax`).
    pub fn build_counts(&mut self, d: u32, kmax: usize) -> Result<Arc<ReturnCountTable>> {
        if d == 0 {
            return Err(Error::InvalidArgument("dimension must be at least 1"));
        }
        if kmax == 0 {
            return Err(Error::InvalidArgument("kmax must be at least 1"));
        }
        if let Some(t) = self.tables.get(&d) {
            if t.kmax() >= kmax {
                return Ok(Arc::clone(t));
            }
        }
        let table = match d {
            1 => base_dimension_one(kmax),
            2 => base_dimension_two(kmax),
            _ => {
                let lo = self.build_counts(d / 2, kmax)?;
                let hi = self.build_counts(d - d / 2, kmax)?;
                convolve(&lo, &hi, kmax)
            }
        };
        let table = Arc::new(table);
        self.tables.insert(d, Arc::clone(&table));
        Ok(table)
    }
}

/// f(1, k) = C(2k, k).
fn base_dimension_one(kmax: usize) -> ReturnCountTable {
    let mut counts = Vec::with_capacity(kmax + 1);
    let mut c = BigUint::one();
    counts.push(c.clone());
    for j in 1..=kmax as u64 {
        c = c * (2 * (2 * j - 1)) / j;
        counts.push(c.clone());
    }
    ReturnCountTable {
        dimension: 1,
        counts,
    }
}

/// f(2, k) = C(2k, k)^2, from p_2(2k) = p_1(2k)^2.
fn base_dimension_two(kmax: usize) -> ReturnCountTable {
    let one_d = base_dimension_one(kmax);
    let counts = one_d.counts.iter().map(|c| c * c).collect();
    ReturnCountTable {
        dimension: 2,
        counts,
    }
}

/// Combine tables for `d1` and `d2` into the table for `d1 + d2` via the
/// binomial convolution. Exposed so the split-independence property
/// (`d = floor(d/2) + ceil(d/2)` versus `d = 1 + (d-1)`) can be tested
/// directly.
pub fn convolve(a: &ReturnCountTable, b: &ReturnCountTable, kmax: usize) -> ReturnCountTable {
    assert!(a.kmax() >= kmax && b.kmax() >= kmax, "input tables too short");
    let mut counts = Vec::with_capacity(kmax + 1);
    counts.push(BigUint::one());
    for k in 1..=kmax {
        let binom = binomial_even_row(k);
        let mut acc = BigUint::zero();
        for r in 0..=k {
            acc += &binom[r] * (&a.counts[r] * &b.counts[k - r]);
        }
        counts.push(acc);
    }
    ReturnCountTable {
        dimension: a.dimension + b.dimension,
        counts,
    }
}

/// Row of even-index binomials `C(2k, 2r)` for `r = 0..=k`, by the exact
/// multiplicative recurrence (no factorials).
fn binomial_even_row(k: usize) -> Vec<BigUint> {
    let n = 2 * k as u64;
    let mut row = Vec::with_capacity(k + 1);
    let mut c = BigUint::one();
    row.push(c.clone());
    for r in 0..k as u64 {
        let j = 2 * r;
        // C(n, j+2) = C(n, j) * (n-j)(n-j-1) / ((j+1)(j+2))
        c = c * ((n - j) * (n - j - 1)) / ((j + 1) * (j + 2));
        row.push(c.clone());
    }
    row
}

/// `p_d(2k)` as a canonical rational, read off a walk-count table.
pub fn p_return(d: u32, k: usize, table: &ReturnCountTable) -> Result<BigRational> {
    if table.dimension() != d {
        return Err(Error::InvalidArgument("table dimension mismatch"));
    }
    let f = table.count(k)?;
    let den = BigUint::from(2 * d as u64).pow(2 * k as u32);
    Ok(BigRational::new(BigInt::from(f.clone()), BigInt::from(den)))
}

/// Write the table in the dump format: one line per `k`, `k<TAB>f(d,k)`.
pub fn write_table_dump<W: core::fmt::Write>(table: &ReturnCountTable, out: &mut W) -> core::fmt::Result {
    for (k, f) in table.counts().iter().enumerate() {
        writeln!(out, "{k}\t{f}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Brute-force oracle: enumerate all (2d)^(2k) walks of length 2k and
    /// count the ones that return to the origin.
    fn count_returning_walks(d: u32, k: usize) -> BigUint {
        let steps = 2 * k;
        let dirs = 2 * d as usize;
        let mut total: u64 = 0;
        let mut walk = vec![0usize; steps];
        'outer: loop {
            let mut pos = vec![0i32; d as usize];
            for &s in &walk {
                let axis = s / 2;
                pos[axis] += if s % 2 == 0 { 1 } else { -1 };
            }
            if pos.iter().all(|&x| x == 0) {
                total += 1;
            }
            for slot in walk.iter_mut() {
                *slot += 1;
                if *slot < dirs {
                    continue 'outer;
                }
                *slot = 0;
            }
            break;
        }
        BigUint::from(total)
    }

    #[test]
    fn p1_return_examples() {
        assert_eq!(p1_return(0), rat(1, 1));
        assert_eq!(p1_return(1), rat(1, 2));
        // C(4,2)/16 = 6/16
        assert_eq!(p1_return(2), rat(3, 8));
    }

    #[test]
    fn build_counts_examples() {
        let mut cache = WalkCountCache::new();
        let t = cache.build_counts(1, 1).unwrap();
        assert_eq!(t.counts(), &[BigUint::from(1u32), BigUint::from(2u32)]);

        let mut cache = WalkCountCache::new();
        let t = cache.build_counts(2, 2).unwrap();
        assert_eq!(
            t.counts(),
            &[BigUint::from(1u32), BigUint::from(4u32), BigUint::from(36u32)]
        );

        let mut cache = WalkCountCache::new();
        let t = cache.build_counts(3, 2).unwrap();
        assert_eq!(
            t.counts(),
            &[BigUint::from(1u32), BigUint::from(6u32), BigUint::from(90u32)]
        );
    }

    #[test]
    fn build_counts_rejects_degenerate_arguments() {
        let mut cache = WalkCountCache::new();
        assert!(matches!(
            cache.build_counts(0, 10),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            cache.build_counts(3, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn p_return_examples() {
        let mut cache = WalkCountCache::new();
        let t3 = cache.build_counts(3, 2).unwrap();
        assert_eq!(p_return(3, 1, &t3).unwrap(), rat(1, 6));
        assert_eq!(p_return(3, 2, &t3).unwrap(), rat(5, 72));
        let t2 = cache.build_counts(2, 2).unwrap();
        assert_eq!(p_return(2, 2, &t2).unwrap(), rat(9, 64));
        assert_eq!(p_return(2, 0, &t2).unwrap(), rat(1, 1));
        // out-of-range k
        assert!(matches!(p_return(3, 7, &t3), Err(Error::OutOfRange(_))));
        // dimension mismatch
        assert!(matches!(p_return(2, 1, &t3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn recursion_matches_walk_enumeration() {
        let mut cache = WalkCountCache::new();
        for d in 1..=3u32 {
            let table = cache.build_counts(d, 3).unwrap();
            for k in 0..=3usize {
                if d == 3 && k == 3 {
                    // 6^6 = 46656 walks; still fine, keep it in.
                }
                let expected = count_returning_walks(d, k);
                assert_eq!(
                    table.count(k).unwrap(),
                    &expected,
                    "f({d},{k}) disagrees with brute force"
                );
            }
        }
    }

    #[test]
    fn split_independence_small() {
        let kmax = 12;
        let mut cache = WalkCountCache::new();
        for d in 3..=6u32 {
            let canonical = cache.build_counts(d, kmax).unwrap();
            let one = cache.build_counts(1, kmax).unwrap();
            let rest = cache.build_counts(d - 1, kmax).unwrap();
            let alt = convolve(&one, &rest, kmax);
            assert_eq!(alt.counts(), &canonical.counts()[..=kmax], "split disagreement at d={d}");
        }
    }

    #[test]
    fn counts_are_even_and_bounded() {
        let mut cache = WalkCountCache::new();
        for d in 1..=5u32 {
            let t = cache.build_counts(d, 20).unwrap();
            assert_eq!(t.count(0).unwrap(), &BigUint::one());
            for k in 1..=20usize {
                let f = t.count(k).unwrap();
                assert!(f.bit(0) == false, "f({d},{k}) must be even");
                let total = BigUint::from(2 * d as u64).pow(2 * k as u32);
                assert!(f <= &total, "f({d},{k}) exceeds total walk count");
            }
        }
    }

    #[test]
    fn return_probability_decreases() {
        let mut cache = WalkCountCache::new();
        for d in 1..=4u32 {
            let t = cache.build_counts(d, 50).unwrap();
            let mut prev = p_return(d, 1, &t).unwrap();
            assert!(prev > BigRational::zero() && prev <= BigRational::one());
            for k in 2..=50usize {
                let p = p_return(d, k, &t).unwrap();
                assert!(p > BigRational::zero());
                assert!(p < prev, "p_{d}(2k) not decreasing at k={k}");
                prev = p;
            }
        }
    }

    #[test]
    fn memoization_reuses_subtables() {
        let mut cache = WalkCountCache::new();
        let t6 = cache.build_counts(6, 8).unwrap();
        assert_eq!(t6.dimension(), 6);
        // 6 -> 3 -> {1, 2}; all intermediates cached
        assert!(cache.tables.contains_key(&3));
        assert!(cache.tables.contains_key(&2));
        assert!(cache.tables.contains_key(&1));
        let again = cache.build_counts(6, 5).unwrap();
        assert!(Arc::ptr_eq(&t6, &again), "covering table should be reused");
    }

    #[test]
    fn dump_format() {
        let mut cache = WalkCountCache::new();
        let t = cache.build_counts(2, 2).unwrap();
        let mut s = alloc::string::String::new();
        write_table_dump(&t, &mut s).unwrap();
        assert_eq!(s, "0\t1\n1\t4\n2\t36\n");
        let _ = t.count(2).unwrap().to_string();
    }
}
