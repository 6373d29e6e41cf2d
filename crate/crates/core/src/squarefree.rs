//! Squarefree indicator bitmaps over 64-bit intervals.
//!
//! [`sieve_segment`] crosses out multiples of p^2 for every prime p with
//! p^2 below the segment end, mirroring the interval-by-interval scheme the
//! verification runs on. [`is_squarefree`] is the independent trial-division
//! oracle the sieve is tested against.

use crate::primes::PrimeTable;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SquarefreeError {
    #[error("segment bounds must satisfy 1 <= lo < hi, got [{lo}, {hi})")]
    BadBounds { lo: u64, hi: u64 },
    #[error("prime table limit {limit} too small for segment end {hi} (need limit^2 >= hi)")]
    InsufficientTable { limit: u64, hi: u64 },
    #[error("squarefreeness of 0 is undefined")]
    Zero,
}

/// Squarefree indicator for the interval `[lo, hi)`: bit `m - lo` is set iff
/// `m` is squarefree. Immutable once sieved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentBitmap {
    lo: u64,
    hi: u64,
    words: Vec<u64>,
}

impl SegmentBitmap {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        false // lo < hi is a construction invariant
    }

    /// Whether `m` is squarefree, or `None` if `m` is outside `[lo, hi)`.
    #[inline]
    pub fn is_squarefree(&self, m: u64) -> Option<bool> {
        if m < self.lo || m >= self.hi {
            return None;
        }
        let i = (m - self.lo) as usize;
        Some(self.words[i / 64] & (1 << (i % 64)) != 0)
    }

    /// Number of squarefree integers in the segment.
    pub fn count_squarefree(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Raw bit words, for bit-exact comparisons.
    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// Sieve the squarefree indicator for `[lo, hi)`.
///
/// Requires `1 <= lo < hi` and a prime table with `limit^2 >= hi`, so every
/// prime whose square can divide a member of the segment is known. Offsets
/// are computed in 128-bit arithmetic; segment ends near 2^64 are fine.
pub fn sieve_segment(lo: u64, hi: u64, table: &PrimeTable) -> Result<SegmentBitmap, SquarefreeError> {
    if lo < 1 || lo >= hi {
        return Err(SquarefreeError::BadBounds { lo, hi });
    }
    let limit = table.limit();
    if (limit as u128) * (limit as u128) < hi as u128 {
        return Err(SquarefreeError::InsufficientTable { limit, hi });
    }
    let len = (hi - lo) as usize;
    let mut words = vec![u64::MAX; len.div_ceil(64)];
    // mask off bits beyond hi - lo
    let extra = words.len() * 64 - len;
    if extra > 0 {
        *words.last_mut().unwrap() >>= extra;
    }
    for &p in table.primes() {
        let p2 = (p as u128) * (p as u128);
        if p2 >= hi as u128 {
            break;
        }
        // first multiple of p^2 at or above lo
        let mut m = (lo as u128).div_ceil(p2) * p2;
        while m < hi as u128 {
            let i = (m as u64 - lo) as usize;
            words[i / 64] &= !(1 << (i % 64));
            m += p2;
        }
    }
    Ok(SegmentBitmap { lo, hi, words })
}

/// Trial-division squarefreeness oracle.
///
/// Strips candidate divisors up to the cube root of the remaining cofactor;
/// whatever is left has at most two prime factors and is non-squarefree
/// exactly when it is a perfect square above 1. By convention 1 is squarefree.
pub fn is_squarefree(m: u64) -> Result<bool, SquarefreeError> {
    if m == 0 {
        return Err(SquarefreeError::Zero);
    }
    let mut n = m;
    for d in [2u64, 3] {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return Ok(false);
            }
        }
    }
    let mut d = 5u64;
    while d * d * d <= n {
        for cand in [d, d + 2] {
            if n.is_multiple_of(cand) {
                n /= cand;
                if n.is_multiple_of(cand) {
                    return Ok(false);
                }
            }
        }
        d += 6;
    }
    let r = n.isqrt();
    Ok(!(n > 1 && r * r == n))
}

/// Smallest prime q with q^2 dividing `m`, or `None` if `m` is squarefree.
///
/// Scans divisors in increasing order; the first d with d^2 | m is
/// necessarily prime, since any proper factor of d would have been hit first.
pub fn smallest_square_prime_divisor(m: u64) -> Option<u64> {
    if m == 0 {
        return None;
    }
    if m.is_multiple_of(4) {
        return Some(2);
    }
    if m.is_multiple_of(9) {
        return Some(3);
    }
    let mut d = 5u64;
    while let Some(sq) = d.checked_mul(d) {
        if sq > m {
            break;
        }
        if m.is_multiple_of(sq) {
            return Some(d);
        }
        let e = d + 2;
        if let Some(sq) = e.checked_mul(e) {
            if sq <= m && m.is_multiple_of(sq) {
                return Some(e);
            }
        }
        d += 6;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(limit: u64) -> PrimeTable {
        PrimeTable::build(limit).unwrap()
    }

    #[test]
    fn oracle_basics() {
        assert_eq!(is_squarefree(12), Ok(false));
        assert_eq!(is_squarefree(30), Ok(true));
        assert_eq!(is_squarefree(1), Ok(true));
        assert_eq!(is_squarefree(0), Err(SquarefreeError::Zero));
        assert_eq!(is_squarefree(4), Ok(false));
        assert_eq!(is_squarefree(49), Ok(false));
        assert_eq!(is_squarefree(2 * 3 * 5 * 7 * 11), Ok(true));
        // large perfect square of a prime
        assert_eq!(is_squarefree(1_000_003u64 * 1_000_003), Ok(false));
        assert_eq!(is_squarefree(1_000_003u64 * 1_000_033), Ok(true));
    }

    #[test]
    fn segment_first_sixteen() {
        let bm = sieve_segment(1, 16, &table(11)).unwrap();
        let expected = [1u64, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15];
        for m in 1..16 {
            assert_eq!(
                bm.is_squarefree(m),
                Some(expected.contains(&m)),
                "mismatch at {m}"
            );
        }
        assert_eq!(bm.count_squarefree(), expected.len() as u64);
    }

    #[test]
    fn segment_single_square() {
        let bm = sieve_segment(4, 5, &table(3)).unwrap();
        assert_eq!(bm.is_squarefree(4), Some(false));
        assert_eq!(bm.is_squarefree(5), None);
    }

    #[test]
    fn segment_near_billion_matches_oracle() {
        let t = table(31_623);
        let bm = sieve_segment(1_000_000_000 - 10, 1_000_000_000, &t).unwrap();
        for m in (1_000_000_000 - 10)..1_000_000_000u64 {
            assert_eq!(bm.is_squarefree(m), Some(is_squarefree(m).unwrap()));
        }
    }

    #[test]
    fn segment_rejects_bad_input() {
        let t = table(100);
        assert!(matches!(
            sieve_segment(0, 10, &t),
            Err(SquarefreeError::BadBounds { .. })
        ));
        assert!(matches!(
            sieve_segment(10, 10, &t),
            Err(SquarefreeError::BadBounds { .. })
        ));
        assert!(matches!(
            sieve_segment(1, 100 * 100 + 1, &t),
            Err(SquarefreeError::InsufficientTable { .. })
        ));
        // limit^2 == hi is allowed
        assert!(sieve_segment(1, 100 * 100, &t).is_ok());
    }

    #[test]
    fn sieve_is_deterministic() {
        let t = table(1000);
        let a = sieve_segment(100_000, 110_000, &t).unwrap();
        let b = sieve_segment(100_000, 110_000, &t).unwrap();
        assert_eq!(a.words(), b.words());
    }

    #[test]
    fn smallest_square_divisor_examples() {
        assert_eq!(smallest_square_prime_divisor(12), Some(2));
        assert_eq!(smallest_square_prime_divisor(153), Some(3));
        assert_eq!(smallest_square_prime_divisor(150), Some(5));
        assert_eq!(smallest_square_prime_divisor(30), None);
        assert_eq!(smallest_square_prime_divisor(1), None);
        assert_eq!(smallest_square_prime_divisor(121 * 7), Some(11));
    }

    proptest! {
        #[test]
        fn sieve_agrees_with_oracle(lo in 1u64..1_000_000_000, len in 1u64..600) {
            let t = table(40_000);
            let hi = lo + len;
            let bm = sieve_segment(lo, hi, &t).unwrap();
            for m in lo..hi {
                prop_assert_eq!(bm.is_squarefree(m), Some(is_squarefree(m).unwrap()));
            }
        }

        #[test]
        fn square_divisor_consistent_with_oracle(m in 1u64..10_000_000) {
            let d = smallest_square_prime_divisor(m);
            prop_assert_eq!(d.is_none(), is_squarefree(m).unwrap());
            if let Some(q) = d {
                prop_assert!(crate::primes::is_prime(q));
                prop_assert_eq!(m % (q * q), 0);
            }
        }
    }
}
