//! Cross-module consistency checks at a scale the unit tests do not reach.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use sfprime_core::primes::PrimeTable;
use sfprime_core::squarefree::sieve_segment;
use sfprime_core::verify::{compute_streaks, streak_of, verify_range, VerifyConfig};

/// n is an exception exactly when its streak swallows every prime p with
/// p^2 <= n, checked across [1, 1e5].
#[test]
fn streak_exception_consistency_to_1e5() {
    const HI: u64 = 100_000;
    let table = PrimeTable::build(1_000).unwrap();
    let config = VerifyConfig {
        segment_size: 50_000,
        workers: 2,
        checkpoint: None,
    };
    let report = verify_range(1, HI, &config).unwrap();
    let exceptional: Vec<u64> = report.exceptions.iter().map(|e| e.n).collect();

    // one bitmap covering everything the streak walks can touch
    let bitmap = sieve_segment(1, HI + 1, &table).unwrap();
    for n in 1..HI {
        let streak = streak_of(n, &table, &bitmap).unwrap();
        let pi_sqrt = table
            .primes()
            .iter()
            .take_while(|&&p| p * p <= n)
            .count() as u32;
        assert_eq!(
            streak >= pi_sqrt,
            exceptional.contains(&n),
            "streak/exception consistency fails at n={n} (streak {streak}, pi(sqrt) {pi_sqrt})"
        );
    }
}

/// Recorded b_k values are nondecreasing, achieve their streak, and no
/// sampled smaller n reaches the same streak length.
#[test]
fn streak_records_are_first_occurrences() {
    let hi = 2_000_000;
    let records = compute_streaks(hi, 500_000).unwrap();
    let table = PrimeTable::build(2_000).unwrap();
    let bitmap = sieve_segment(1, hi + 1, &table).unwrap();

    let mut previous = 0;
    for (&k, &b) in &records.entries {
        assert!(b >= previous, "b_{k} = {b} decreased");
        previous = b;
        assert!(
            b > table.nth_prime(k as usize).unwrap(),
            "b_{k} = {b} is not above p_{k}"
        );
        let streak = streak_of(b, &table, &bitmap).unwrap();
        assert!(streak >= k, "b_{k} = {b} has streak {streak}");
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (&k, &b) in &records.entries {
        for _ in 0..500 {
            let n = rng.random_range(2..b);
            let streak = streak_of(n, &table, &bitmap).unwrap();
            assert!(
                streak < k,
                "n={n} below b_{k}={b} already reaches streak {streak}"
            );
        }
    }
}

/// The witness-check counter genuinely counts: n = 10 takes two checks and
/// the maximum over [1, 1e6) matches an independent recount.
#[test]
fn max_checks_matches_recount() {
    let config = VerifyConfig {
        segment_size: 1_000_000,
        workers: 1,
        checkpoint: None,
    };
    let report = verify_range(1, 1_000_000, &config).unwrap();

    let table = PrimeTable::build(1_000).unwrap();
    let bitmap = sieve_segment(1, 1_000_000, &table).unwrap();
    let mut max_checks = 0u32;
    let mut max_at = 0u64;
    for n in 1..1_000_000u64 {
        let w = sfprime_core::verify::find_witness(n, &table, &bitmap).unwrap();
        if w.witness.is_some() && w.checks > max_checks {
            max_checks = w.checks;
            max_at = n;
        }
    }
    assert_eq!(report.max_checks, max_checks);
    assert_eq!(report.max_checks_at, max_at);
}
