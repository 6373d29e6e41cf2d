//! Congruence systems with pairwise-coprime moduli, their least positive
//! solutions, and certificates for streak upper bounds.
//!
//! The covering construction picks residues so that n - p_l is divisible by
//! a prime square for each of the first k primes; solving the system by the
//! Chinese Remainder Theorem turns the least solution into an explicit upper
//! bound for b_k. [`certify_streak_bound`] re-checks such an n by exact
//! arithmetic, naming a square divisor of every n - p_l.
//!
//! Moduli and residues are 64-bit; solutions are exact big integers, since
//! already the product of p_l^2 over the first 16 primes runs to 130 bits.

use crate::primes::{gcd, PrimeTable};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

/// The least solution of the hand-picked 8-congruence covering system,
/// establishing b_16 <= 23708451225527.
pub const PAPER_B16_BOUND: u64 = 23_708_451_225_527;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrtError {
    #[error("congruence system is empty")]
    EmptySystem,
    #[error("congruence {residue} (mod {modulus}) is malformed: need modulus >= 2 and residue < modulus")]
    BadCongruence { residue: u64, modulus: u64 },
    #[error("moduli {a} and {b} are not coprime")]
    NonCoprimeModuli { a: u64, b: u64 },
    #[error("coverage map entry {p} -> {q_squared} is not enforced by the system")]
    BadCoverage { p: u64, q_squared: u64 },
    #[error("prime table too small: need the first {0} primes")]
    TableTooSmall(u32),
    #[error("streak index k must be between 1 and 16, got {0}")]
    BadStreakIndex(u32),
    #[error("certificate requires n > p_k, got n = {n} and p_{k} = {pk}")]
    CertificandTooSmall { n: BigUint, k: u32, pk: u64 },
    #[error("certification failure at l = {l}: n - {p} is squarefree")]
    CertificationFailure { l: u32, p: u64 },
    #[error("cannot certify l = {l}: deciding squarefreeness of n - {p} needs primes past the table limit")]
    Inconclusive { l: u32, p: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub residue: u64,
    pub modulus: u64,
}

/// A system of simultaneous congruences on n, optionally annotated with the
/// primes p whose differences n - p the moduli are meant to cover.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct CongruenceSystem {
    pub congruences: Vec<Congruence>,
    /// p -> q^2, asserting that the system forces q^2 | n - p.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covered_primes: Option<BTreeMap<u64, u64>>,
}

impl CongruenceSystem {
    pub fn new(congruences: Vec<Congruence>) -> Self {
        CongruenceSystem {
            congruences,
            covered_primes: None,
        }
    }

    /// The 8-congruence system from the b_16 construction, with its
    /// coverage of p_1 through p_16.
    pub fn paper_system() -> Self {
        let congruences = [
            (3, 4),
            (8, 9),
            (2, 25),
            (5, 49),
            (13, 121),
            (29, 169),
            (37, 289),
            (41, 361),
        ]
        .into_iter()
        .map(|(residue, modulus)| Congruence { residue, modulus })
        .collect();
        let covered = [
            (2, 25),
            (3, 4),
            (5, 49),
            (7, 4),
            (11, 4),
            (13, 121),
            (17, 9),
            (19, 4),
            (23, 4),
            (29, 169),
            (31, 4),
            (37, 289),
            (41, 361),
            (43, 4),
            (47, 4),
            (53, 9),
        ]
        .into_iter()
        .collect();
        CongruenceSystem {
            congruences,
            covered_primes: Some(covered),
        }
    }

    /// Check the system invariants: well-formed congruences, pairwise
    /// coprime moduli, coverage entries enforced.
    pub fn validate(&self) -> Result<(), CrtError> {
        if self.congruences.is_empty() {
            return Err(CrtError::EmptySystem);
        }
        for c in &self.congruences {
            if c.modulus < 2 || c.residue >= c.modulus {
                return Err(CrtError::BadCongruence {
                    residue: c.residue,
                    modulus: c.modulus,
                });
            }
        }
        for (i, a) in self.congruences.iter().enumerate() {
            for b in &self.congruences[i + 1..] {
                if gcd(a.modulus, b.modulus) != 1 {
                    return Err(CrtError::NonCoprimeModuli {
                        a: a.modulus,
                        b: b.modulus,
                    });
                }
            }
        }
        if let Some(map) = &self.covered_primes {
            for (&p, &q_squared) in map {
                let enforced = self
                    .congruences
                    .iter()
                    .any(|c| c.modulus == q_squared && c.residue == p % q_squared);
                if !enforced {
                    return Err(CrtError::BadCoverage { p, q_squared });
                }
            }
        }
        Ok(())
    }
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    let (mut old_r, mut r) = (a.rem_euclid(m), m);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m))
}

/// Least positive n satisfying every congruence in the system.
///
/// Folds congruences one at a time with extended-Euclid inverses; the
/// inverse arithmetic stays in native words (moduli are 64-bit), only the
/// accumulated solution is a big integer. The result lies in
/// `[1, product of moduli]`.
pub fn crt_solve(system: &CongruenceSystem) -> Result<BigUint, CrtError> {
    system.validate()?;
    let mut x = BigUint::zero();
    let mut m = BigUint::one();
    for c in &system.congruences {
        let m2 = c.modulus as u128;
        // solve x + m*t = residue (mod m2)
        let m_mod = (&m % m2).to_u64_digits().first().copied().unwrap_or(0) as u128;
        let x_mod = (&x % m2).to_u64_digits().first().copied().unwrap_or(0) as u128;
        let inv = mod_inverse(m_mod as i128, m2 as i128).ok_or(CrtError::NonCoprimeModuli {
            a: m_mod as u64,
            b: c.modulus,
        })?;
        let diff = (c.residue as u128 + m2 - x_mod) % m2;
        let t = (diff * inv as u128) % m2;
        x += &m * t;
        m *= m2;
    }
    Ok(if x.is_zero() { m } else { x })
}

mod decimal_string {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// One line of a streak certificate: q^2 divides n - p_l.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageEntry {
    pub l: u32,
    pub p_l: u64,
    pub q: u64,
    pub q_squared: u64,
    #[serde(with = "decimal_string")]
    pub quotient: BigUint,
}

/// Proof that n - p_l is non-squarefree for every l <= k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreakCertificate {
    #[serde(with = "decimal_string")]
    pub n: BigUint,
    pub k: u32,
    pub coverage: Vec<CoverageEntry>,
}

impl StreakCertificate {
    /// Re-check every line by exact arithmetic.
    pub fn verify(&self, table: &PrimeTable) -> Result<(), CrtError> {
        for entry in &self.coverage {
            let p = table
                .nth_prime(entry.l as usize)
                .ok_or(CrtError::TableTooSmall(entry.l))?;
            let consistent = p == entry.p_l
                && entry.q_squared == entry.q * entry.q
                && self.n > BigUint::from(entry.p_l)
                && &entry.quotient * entry.q_squared == &self.n - entry.p_l;
            if !consistent {
                return Err(CrtError::CertificationFailure {
                    l: entry.l,
                    p: entry.p_l,
                });
            }
        }
        Ok(())
    }
}

/// Smallest tabled prime q with q^2 | m, `Ok(None)` if m is conclusively
/// squarefree within the table's reach, `Err(())` if the table cannot decide.
fn smallest_square_divisor_big(m: &BigUint, table: &PrimeTable) -> Result<Option<u64>, ()> {
    for &q in table.primes() {
        let qq = BigUint::from(q) * q;
        if &qq > m {
            return Ok(None);
        }
        if (m % qq).is_zero() {
            return Ok(Some(q));
        }
    }
    let limit = BigUint::from(table.limit());
    if &limit * table.limit() >= *m {
        Ok(None)
    } else {
        Err(())
    }
}

/// Certify a streak of length k at n: for each l <= k find a prime q with
/// q^2 | n - p_l, or fail naming the first l where n - p_l is squarefree.
pub fn certify_streak_bound(
    n: &BigUint,
    k: u32,
    table: &PrimeTable,
) -> Result<StreakCertificate, CrtError> {
    if k == 0 {
        return Err(CrtError::BadStreakIndex(0));
    }
    let pk = table
        .nth_prime(k as usize)
        .ok_or(CrtError::TableTooSmall(k))?;
    if *n <= BigUint::from(pk) {
        return Err(CrtError::CertificandTooSmall {
            n: n.clone(),
            k,
            pk,
        });
    }
    let mut coverage = Vec::with_capacity(k as usize);
    for l in 1..=k {
        let p = table.nth_prime(l as usize).expect("l <= k is in the table");
        let m = n - p;
        let q = smallest_square_divisor_big(&m, table)
            .map_err(|()| CrtError::Inconclusive { l, p })?
            .ok_or(CrtError::CertificationFailure { l, p })?;
        coverage.push(CoverageEntry {
            l,
            p_l: p,
            q,
            q_squared: q * q,
            quotient: m / (q * q),
        });
    }
    Ok(StreakCertificate {
        n: n.clone(),
        k,
        coverage,
    })
}

/// The generic CRT upper bound for b_k: the least certified solution of
/// n = p_l (mod p_l^2) for l = 1..=k.
///
/// The raw CRT solution is lifted by whole periods until it exceeds p_k,
/// since a valid streak witness must, in particular, be larger than p_k
/// (this only matters for k = 1, where the raw solution is 2).
pub fn naive_bound(k: u32, table: &PrimeTable) -> Result<(BigUint, StreakCertificate), CrtError> {
    if k == 0 || k > 16 {
        return Err(CrtError::BadStreakIndex(k));
    }
    let pk = table
        .nth_prime(k as usize)
        .ok_or(CrtError::TableTooSmall(k))?;
    let congruences = (1..=k)
        .map(|l| {
            let p = table.nth_prime(l as usize).expect("l <= k is in the table");
            Congruence {
                residue: p,
                modulus: p * p,
            }
        })
        .collect();
    let system = CongruenceSystem::new(congruences);
    let period: BigUint = system
        .congruences
        .iter()
        .map(|c| BigUint::from(c.modulus))
        .product();
    let mut x = crt_solve(&system)?;
    while x <= BigUint::from(pk) {
        x += &period;
    }
    let cert = certify_streak_bound(&x, k, table)?;
    Ok((x, cert))
}
