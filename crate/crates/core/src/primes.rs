//! Prime generation and prime counting, plain and in arithmetic progressions.
//!
//! A [`PrimeTable`] is an immutable sorted list of all primes up to a limit,
//! built once by a bit-packed odd-only sieve of Eratosthenes and shared by
//! every other module. Counting queries are answered by binary search over
//! the list; progression counts scan the relevant prefix.
//!
//! The module also hosts [`check_sextuple_lemma`], an exact integer check of
//! the bound pi(x; q, a) <= x/(3q) + 2 for moduli coprime to 6, counted by
//! trial division so it stays independent of the sieve.

use thiserror::Error;

/// Prime tables are capped here; the toolkit never needs primes beyond
/// sqrt(59^8) ~ 1.22e7, so 2^32 leaves a wide margin.
pub const MAX_TABLE_LIMIT: u64 = 1 << 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PrimesError {
    #[error("prime table limit must be at least 2, got {0}")]
    LimitTooSmall(u64),
    #[error("prime table limit {0} exceeds the supported maximum {MAX_TABLE_LIMIT}")]
    LimitTooLarge(u64),
    #[error("query x={x} exceeds table limit {limit}")]
    OutOfRange { x: u64, limit: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("sextuple lemma requires gcd(q, 6) = 1 and q > 1, got q={0}")]
    ModulusNotCoprimeToSix(u64),
    #[error("sextuple lemma requires x > 1 and q <= x, got x={x}, q={q}")]
    BadSextupleRange { x: u64, q: u64 },
}

/// All primes up to `limit`, strictly increasing. Immutable after
/// construction and safe to share across threads.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieve all primes up to `limit` (inclusive). Requires `2 <= limit <= 2^32`.
    pub fn build(limit: u64) -> Result<Self, PrimesError> {
        if limit < 2 {
            return Err(PrimesError::LimitTooSmall(limit));
        }
        if limit > MAX_TABLE_LIMIT {
            return Err(PrimesError::LimitTooLarge(limit));
        }
        let lim = limit as usize;
        // Bit i of the composite map stands for the odd number 2i + 1.
        let half = lim / 2 + 1;
        let mut composite = vec![0u64; half.div_ceil(64)];
        composite[0] |= 1; // index 0 is the number 1
        let mut p = 3usize;
        while p * p <= lim {
            if composite[(p / 2) / 64] & (1 << ((p / 2) % 64)) == 0 {
                let mut m = p * p;
                while m <= lim {
                    let i = m / 2;
                    composite[i / 64] |= 1 << (i % 64);
                    m += 2 * p;
                }
            }
            p += 2;
        }
        let mut primes = Vec::with_capacity(prime_count_estimate(lim));
        primes.push(2);
        for i in 1..half {
            let n = 2 * i + 1;
            if n <= lim && composite[i / 64] & (1 << (i % 64)) == 0 {
                primes.push(n as u64);
            }
        }
        Ok(PrimeTable { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// The sorted primes, smallest first.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The k-th prime (1-based: `nth_prime(1) == Some(2)`).
    pub fn nth_prime(&self, k: usize) -> Option<u64> {
        if k == 0 {
            return None;
        }
        self.primes.get(k - 1).copied()
    }

    /// pi(x): the number of primes not exceeding `x`. Requires `x <= limit`.
    pub fn prime_count(&self, x: u64) -> Result<u64, PrimesError> {
        if x > self.limit {
            return Err(PrimesError::OutOfRange {
                x,
                limit: self.limit,
            });
        }
        Ok(self.primes.partition_point(|&p| p <= x) as u64)
    }

    /// pi(x; modulus, residue): primes p <= x with p = residue (mod modulus).
    /// The residue is reduced modulo `modulus` first.
    pub fn prime_count_ap(&self, x: u64, modulus: u64, residue: u64) -> Result<u64, PrimesError> {
        if modulus == 0 {
            return Err(PrimesError::ZeroModulus);
        }
        if x > self.limit {
            return Err(PrimesError::OutOfRange {
                x,
                limit: self.limit,
            });
        }
        let r = residue % modulus;
        let upto = self.primes.partition_point(|&p| p <= x);
        Ok(self.primes[..upto].iter().filter(|&&p| p % modulus == r).count() as u64)
    }

    /// Membership test by binary search. Requires `n <= limit`.
    pub fn contains(&self, n: u64) -> Result<bool, PrimesError> {
        if n > self.limit {
            return Err(PrimesError::OutOfRange {
                x: n,
                limit: self.limit,
            });
        }
        Ok(self.primes.binary_search(&n).is_ok())
    }
}

fn prime_count_estimate(limit: usize) -> usize {
    if limit < 17 {
        return 8;
    }
    let x = limit as f64;
    (1.2 * x / x.ln()) as usize
}

/// Deterministic trial-division primality test (2, 3, then 6k +- 1).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Checks the sextuple bound pi(x; q, a) <= x/(3q) + 2 by brute force.
///
/// The count is done by trial division over the progression, and the
/// comparison is exact: count <= x/(3q) + 2 iff 3*q*count <= x + 6*q.
/// Moduli with gcd(q, 6) != 1 are rejected rather than tested: the sextuple
/// argument needs a complete residue system mod 6, and the bound is false
/// for q = 2 (pi(30; 2, 1) = 9 > 30/6 + 2).
pub fn check_sextuple_lemma(x: u64, q: u64, a: u64) -> Result<bool, PrimesError> {
    if q <= 1 || gcd(q, 6) != 1 {
        return Err(PrimesError::ModulusNotCoprimeToSix(q));
    }
    if x <= 1 || q > x {
        return Err(PrimesError::BadSextupleRange { x, q });
    }
    let mut count: u64 = 0;
    let mut m = a % q;
    if m == 0 {
        m = q;
    }
    while m <= x {
        if is_prime(m) {
            count += 1;
        }
        match m.checked_add(q) {
            Some(next) => m = next,
            None => break,
        }
    }
    Ok(3 * (q as u128) * (count as u128) <= (x as u128) + 6 * (q as u128))
}
