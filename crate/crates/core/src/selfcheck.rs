//! Seeded instance checks of every estimate the toolkit leans on.
//!
//! Each check draws its samples from a caller-seeded ChaCha stream, so a
//! given seed always exercises the same instances. These back the CLI
//! `selftest` command and the acceptance suite.

use crate::analytic::{self, BoundVariant, TailWeight};
use crate::crt::{crt_solve, Congruence, CongruenceSystem};
use crate::primes::{self, PrimeTable};
use crate::squarefree::{self, sieve_segment};
use crate::verify::{self, find_witness, OracleLookup, VerifyConfig};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckOutcome {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckOutcome {
            name,
            passed: false,
            detail,
        }
    }
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Run every instance check with the given seed. Outcomes come back in a
/// fixed order; all should pass.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    let table_10m = PrimeTable::build(10_000_000).expect("sieve to 1e7");
    let table_100k = PrimeTable::build(100_000).expect("sieve to 1e5");
    vec![
        sieve_vs_trial_division(seed, &table_100k),
        progression_count_vs_oracle(seed, &table_100k),
        sextuple_lemma_samples(seed),
        rosser_schoenfeld_sandwich(seed, &table_10m),
        li_quadrature_and_bound(seed),
        montgomery_vaughan_instances(seed, &table_10m),
        bennett_martin_instances(seed, &table_10m),
        progression_sandwich_instances(seed, &table_10m),
        q1_inclusion_exclusion(seed, &table_100k),
        q5_bound_instances(seed, &table_100k),
        squarefree_density(&table_10m),
        parallel_determinism(),
        crt_roundtrip(seed),
        witness_oracle_recheck(seed),
        tail_certifications(&table_10m),
        monotone_closure_all_rows(&table_10m),
    ]
}

/// 1000 random segments below 1e10: the sieve must agree with trial
/// division at every position.
pub fn sieve_vs_trial_division(seed: u64, table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "sieve-vs-trial-division";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0001);
    let mut positions: u64 = 0;
    for _ in 0..1000 {
        let len = rng.random_range(1..=10_000u64);
        let lo = rng.random_range(1..=10_000_000_000u64 - len);
        let bm = match sieve_segment(lo, lo + len, table) {
            Ok(bm) => bm,
            Err(e) => return CheckOutcome::fail(NAME, format!("sieve failed: {e}")),
        };
        for m in lo..lo + len {
            let want = squarefree::is_squarefree(m).expect("m >= 1");
            if bm.is_squarefree(m) != Some(want) {
                return CheckOutcome::fail(NAME, format!("mismatch at {m}"));
            }
        }
        positions += len;
    }
    CheckOutcome::pass(NAME, format!("1000 segments, {positions} positions agree"))
}

/// 300 sampled (x, m, a) with x <= 1e5: the table-backed progression count
/// equals a trial-division recount exactly.
pub fn progression_count_vs_oracle(seed: u64, table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "progression-count-vs-oracle";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_000c);
    for _ in 0..300 {
        let x = rng.random_range(2..=100_000u64);
        let m = rng.random_range(1..=1_000u64);
        let a = rng.random_range(0..10_000u64);
        let got = table.prime_count_ap(x, m, a).expect("within table");
        let oracle = (2..=x)
            .filter(|&n| n % m == a % m && primes::is_prime(n))
            .count() as u64;
        if got != oracle {
            return CheckOutcome::fail(NAME, format!("pi({x}; {m}, {a}) = {got}, oracle {oracle}"));
        }
    }
    CheckOutcome::pass(NAME, "300 sampled (x, m, a) agree exactly".into())
}

/// 1000 samples of pi(x; q, a) <= x/(3q) + 2 with q a prime power coprime
/// to 6.
pub fn sextuple_lemma_samples(seed: u64) -> CheckOutcome {
    const NAME: &str = "sextuple-lemma";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0002);
    let bases: Vec<u64> = (5..=313).filter(|&p| primes::is_prime(p)).collect();
    for i in 0..1000 {
        let p = bases[rng.random_range(0..bases.len())];
        let q = if rng.random_bool(0.3) && p * p <= 100_000 {
            p * p
        } else {
            p
        };
        let x = rng.random_range(q..=100_000u64);
        let a = rng.random_range(0..q);
        match primes::check_sextuple_lemma(x, q, a) {
            Ok(true) => {}
            Ok(false) => {
                return CheckOutcome::fail(NAME, format!("bound fails at x={x}, q={q}, a={a}"))
            }
            Err(e) => return CheckOutcome::fail(NAME, format!("sample {i} rejected: {e}")),
        }
    }
    CheckOutcome::pass(NAME, "1000 prime-power moduli hold".into())
}

/// 100 sampled x in [59, 1e7]: the two-sided prime count bounds hold.
pub fn rosser_schoenfeld_sandwich(seed: u64, table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "rosser-schoenfeld-sandwich";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0003);
    for _ in 0..100 {
        let x = rng.random_range(59..=10_000_000u64);
        let pi = table.prime_count(x).expect("x within table") as f64;
        let xf = x as f64;
        let base = xf / xf.ln();
        let lower = base * (1.0 + 0.5 / xf.ln());
        let upper = base * (1.0 + 1.5 / xf.ln());
        if !(lower < pi && pi < upper) {
            return CheckOutcome::fail(NAME, format!("sandwich fails at x={x}: {lower} / {pi} / {upper}"));
        }
    }
    CheckOutcome::pass(NAME, "100 sampled x in [59, 1e7]".into())
}

/// Sampled x >= 1865: the quadrature reproduces a 10x-refined oracle to
/// 1e-9 relative and stays under the x/log x upper bound.
pub fn li_quadrature_and_bound(seed: u64) -> CheckOutcome {
    const NAME: &str = "li-quadrature";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0004);

    fn graded_simpson(x: f64, panels_per_octave: usize) -> f64 {
        let mut total = 0.0;
        let mut a = 2.0f64;
        while a < x {
            let b = (2.0 * a).min(x);
            let h = (b - a) / panels_per_octave as f64;
            let mut s = 1.0 / a.ln() + 1.0 / b.ln();
            for i in 1..panels_per_octave {
                let t = a + i as f64 * h;
                s += if i % 2 == 1 { 4.0 } else { 2.0 } / t.ln();
            }
            total += s * h / 3.0;
            a = b;
        }
        total
    }

    for i in 0..20 {
        let x = if i < 3 {
            [1865.0, 1e4, 1e6][i]
        } else {
            let t: f64 = rng.random_range(0.0..1.0);
            1865.0 * (t * (1e7f64 / 1865.0).ln()).exp()
        };
        let mine = analytic::li(x).expect("x >= 2");
        let oracle = graded_simpson(x, 2560);
        let rel = ((mine - oracle) / oracle).abs();
        if rel >= 1e-9 {
            return CheckOutcome::fail(NAME, format!("li({x}) off by {rel:.2e} relative"));
        }
        if x >= 1865.0 {
            let bound = x / x.ln() * (1.0 + 1.5 / x.ln());
            if mine >= bound {
                return CheckOutcome::fail(NAME, format!("upper bound fails at {x}"));
            }
        }
    }
    CheckOutcome::pass(NAME, "20 sampled x: 1e-9 agreement and bound hold".into())
}

/// Sampled progression counts against 2x/(phi(q^2) log(x/q^2)).
pub fn montgomery_vaughan_instances(seed: u64, table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "montgomery-vaughan";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0005);
    let small_primes: Vec<u64> = (2..=3000).filter(|&p| primes::is_prime(p)).collect();
    for _ in 0..200 {
        let q = small_primes[rng.random_range(0..small_primes.len())];
        let x = rng.random_range(q * q + 1..=10_000_000u64);
        let a = loop {
            let a = rng.random_range(1..q * q);
            if a % q != 0 {
                break a;
            }
        };
        let count = table.prime_count_ap(x, q * q, a).expect("within table") as f64;
        let bound = 2.0 * x as f64 / ((q - 1) as f64 * q as f64 * (x as f64 / (q * q) as f64).ln());
        if count > bound {
            return CheckOutcome::fail(NAME, format!("bound fails at x={x}, q={q}, a={a}"));
        }
    }
    CheckOutcome::pass(NAME, "200 sampled (x, q, a)".into())
}

/// Sampled |pi(x; q, a) - Li(x)/phi(q)| < 0.027 x / log^2 x instances.
pub fn bennett_martin_instances(seed: u64, table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "progression-vs-li";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0006);
    for _ in 0..25 {
        let q = rng.random_range(1..=1000u64);
        let a = if q == 1 {
            0
        } else {
            loop {
                let a = rng.random_range(1..q);
                if primes::gcd(a, q) == 1 {
                    break a;
                }
            }
        };
        let x = rng.random_range(1_000_000..=10_000_000u64);
        let count = table.prime_count_ap(x, q, a).expect("within table") as f64;
        let main_term = analytic::li(x as f64).expect("x >= 2") / euler_phi(q) as f64;
        let err = 0.027 * x as f64 / (x as f64).ln().powi(2);
        if (count - main_term).abs() >= err {
            return CheckOutcome::fail(
                NAME,
                format!("|pi - Li/phi| too large at x={x}, q={q}, a={a}"),
            );
        }
    }
    CheckOutcome::pass(NAME, "25 sampled (x, q, a)".into())
}

/// Sampled two-sided progression bounds for q in {4, 9, 25, 49}, x >= 50q^2.
pub fn progression_sandwich_instances(seed: u64, table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "progression-sandwich";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0007);
    for _ in 0..40 {
        let q = [4u64, 9, 25, 49][rng.random_range(0..4)];
        let a = loop {
            let a = rng.random_range(1..q);
            if primes::gcd(a, q) == 1 {
                break a;
            }
        };
        let x = rng.random_range(100_000..=10_000_000u64);
        let count = table.prime_count_ap(x, q, a).expect("within table") as f64;
        let base = x as f64 / (euler_phi(q) as f64 * (x as f64).ln());
        let upper = base * (1.0 + 2.5 / (x as f64).ln());
        if !(base < count && count < upper) {
            return CheckOutcome::fail(
                NAME,
                format!("sandwich fails at x={x}, q={q}, a={a}: {base} / {count} / {upper}"),
            );
        }
    }
    CheckOutcome::pass(NAME, "40 sampled (x, q, a)".into())
}

/// Sampled n in [1e9, 1e10]: the inclusion-exclusion count of primes hit by
/// squares of 2, 3, 5, 7 stays under the first bound-function term.
pub fn q1_inclusion_exclusion(seed: u64, table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "q1-inclusion-exclusion";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0008);
    for _ in 0..15 {
        let n = rng.random_range(1_000_000_000..=10_000_000_000u64);
        let x = n.isqrt();
        let count = |m: u64| table.prime_count_ap(x, m, n % m).expect("within table") as f64;
        let ie = count(4) + count(9) - count(36) + count(25) + count(49);
        let s = (n as f64).sqrt();
        let l = (n as f64).ln();
        let q1_term = 46.0 * s / (35.0 * l) + 46.0 / 7.0 * s / (l * l);
        if ie > q1_term {
            return CheckOutcome::fail(NAME, format!("IE count {ie} exceeds Q1 term {q1_term} at n={n}"));
        }
    }
    CheckOutcome::pass(NAME, "15 sampled n in [1e9, 1e10]".into())
}

/// Sampled n up to 1e10 with the interval's c: the brute-force count of
/// primes p <= sqrt(n) covered by a large prime square stays under
/// (c log n)^2.
pub fn q5_bound_instances(seed: u64, table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "q5-large-square-bound";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0009);
    for _ in 0..20 {
        let n = rng.random_range(815_730_721..=10_000_000_000u64);
        // the c used on the interval containing n
        let c = if n < 17u64.pow(8) {
            0.6
        } else if n < 19u64.pow(8) {
            1.1
        } else {
            1.3
        };
        let sqrt_n = n.isqrt();
        let ln_n = (n as f64).ln();
        let threshold = sqrt_n as f64 / (c * ln_n);
        let k_cap = (c * ln_n) * (c * ln_n);
        let mut covered = 0u64;
        for &p in table.primes() {
            if p > sqrt_n {
                break;
            }
            let m = n - p;
            let mut hit = false;
            for k in 1..=k_cap as u64 {
                if m % k != 0 {
                    continue;
                }
                let qq = m / k;
                let q = qq.isqrt();
                if q * q == qq && q as f64 > threshold && primes::is_prime(q) {
                    hit = true;
                    break;
                }
            }
            if hit {
                covered += 1;
            }
        }
        if covered as f64 > k_cap {
            return CheckOutcome::fail(
                NAME,
                format!("count {covered} exceeds (c log n)^2 = {k_cap} at n={n}"),
            );
        }
    }
    CheckOutcome::pass(NAME, "20 sampled n up to 1e10".into())
}

/// Squarefree density over [1, 1e7] sits within 0.001 of 6/pi^2.
pub fn squarefree_density(table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "squarefree-density";
    let bm = sieve_segment(1, 10_000_001, table).expect("sieve to 1e7");
    let fraction = bm.count_squarefree() as f64 / 10_000_000.0;
    let expected = 6.0 / (std::f64::consts::PI * std::f64::consts::PI);
    if (fraction - expected).abs() < 0.001 {
        CheckOutcome::pass(NAME, format!("fraction {fraction:.6} vs 6/pi^2 {expected:.6}"))
    } else {
        CheckOutcome::fail(NAME, format!("fraction {fraction:.6} vs 6/pi^2 {expected:.6}"))
    }
}

/// One worker and several workers must produce identical reports.
pub fn parallel_determinism() -> CheckOutcome {
    const NAME: &str = "parallel-determinism";
    let serial = VerifyConfig {
        segment_size: 40_000,
        workers: 1,
        checkpoint: None,
    };
    let parallel = VerifyConfig {
        segment_size: 40_000,
        workers: 3,
        checkpoint: None,
    };
    let a = verify::verify_range(1, 300_000, &serial).expect("serial verify");
    let b = verify::verify_range(1, 300_000, &parallel).expect("parallel verify");
    if a.same_outcome(&b) {
        CheckOutcome::pass(NAME, "reports identical with 1 and 3 workers".into())
    } else {
        CheckOutcome::fail(NAME, "reports differ between worker counts".into())
    }
}

/// 500 random coprime systems with small product: the solver matches a
/// brute-force minimal-solution scan.
pub fn crt_roundtrip(seed: u64) -> CheckOutcome {
    const NAME: &str = "crt-brute-force-roundtrip";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_000a);
    let pools: [&[u64]; 5] = [&[2, 4, 8, 16, 32], &[3, 9, 27], &[5, 25], &[7, 49], &[11, 13]];
    for case in 0..500 {
        let mut congruences = Vec::new();
        let mut product: u128 = 1;
        for pool in pools.iter() {
            if rng.random_bool(0.5) {
                continue;
            }
            let m = pool[rng.random_range(0..pool.len())];
            if product * m as u128 > 10_000_000 {
                continue;
            }
            product *= m as u128;
            congruences.push(Congruence {
                residue: rng.random_range(0..m),
                modulus: m,
            });
        }
        if congruences.is_empty() {
            congruences.push(Congruence {
                residue: rng.random_range(0..7),
                modulus: 7,
            });
            product = 7;
        }
        let system = CongruenceSystem::new(congruences.clone());
        let solved = match crt_solve(&system) {
            Ok(v) => v,
            Err(e) => return CheckOutcome::fail(NAME, format!("case {case} failed: {e}")),
        };
        let brute = (1..=product).find(|n| {
            congruences
                .iter()
                .all(|c| n % c.modulus as u128 == c.residue as u128)
        });
        if brute.map(num_bigint::BigUint::from) != Some(solved.clone()) {
            return CheckOutcome::fail(
                NAME,
                format!("case {case}: solver {solved} vs scan {brute:?}"),
            );
        }
    }
    CheckOutcome::pass(NAME, "500 systems match the scan".into())
}

/// 1e4 random n re-checked against the trial-division oracle: each is an
/// exception exactly when the verified run said so, and witnesses agree.
pub fn witness_oracle_recheck(seed: u64) -> CheckOutcome {
    const NAME: &str = "witness-oracle-recheck";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_000b);
    let config = VerifyConfig {
        segment_size: 250_000,
        workers: 2,
        checkpoint: None,
    };
    let report = verify::verify_range(1, 1_000_000, &config).expect("verify to 1e6");
    let exceptional: Vec<u64> = report.exceptions.iter().map(|e| e.n).collect();
    let table = PrimeTable::build(1_000).expect("small table");
    for _ in 0..10_000 {
        let n = rng.random_range(1..1_000_000u64);
        let w = find_witness(n, &table, &OracleLookup).expect("oracle witness search");
        if w.witness.is_none() != exceptional.contains(&n) {
            return CheckOutcome::fail(NAME, format!("oracle disagrees at n={n}"));
        }
    }
    CheckOutcome::pass(NAME, "10000 spot checks agree".into())
}

/// Partial sums plus analytic tails certify C1(11) < 0.033, C2(11) < 0.1,
/// and pin c0 - g(1e6) inside (0, 2e-7).
pub fn tail_certifications(table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "tail-certifications";
    let partial = match analytic::prime_sum_constants(11, 1_000_000, table) {
        Ok(p) => p,
        Err(e) => return CheckOutcome::fail(NAME, format!("constants failed: {e}")),
    };
    let c1_total = partial.c1 + tail_bound_or_fail(TailWeight::C1Style);
    let c2_total = partial.c2 + tail_bound_or_fail(TailWeight::C2Style);
    let residual = analytic::c0_minus_g(1_000_000, table).expect("g(1e6)");
    let ok = c1_total < 0.033 && c2_total < 0.1 && residual > 0.0 && residual < 2e-7;
    let detail = format!(
        "C1(11) <= {c1_total:.9} < 0.033; C2(11) <= {c2_total:.9} < 0.1; c0 - g(1e6) = {residual:.3e}"
    );
    if ok {
        CheckOutcome::pass(NAME, detail)
    } else {
        CheckOutcome::fail(NAME, detail)
    }
}

fn tail_bound_or_fail(weight: TailWeight) -> f64 {
    analytic::tail_bound(1_000_000, weight).expect("A >= 59")
}

/// The margin tables themselves: every row positive and every left-endpoint
/// check conclusive over a 100-point grid.
pub fn monotone_closure_all_rows(table: &PrimeTable) -> CheckOutcome {
    const NAME: &str = "monotone-closure";
    for variant in [BoundVariant::F4, BoundVariant::F5] {
        let rows = match analytic::delta_table(variant, table) {
            Ok(r) => r,
            Err(e) => return CheckOutcome::fail(NAME, format!("table failed: {e}")),
        };
        for row in rows {
            let pk1 = table.nth_prime(row.k as usize + 1).expect("k + 1 <= 17");
            let constants =
                analytic::prime_sum_constants(11, pk1, table).expect("row constants");
            let grid = analytic::log_spaced_grid(row.interval_lo, row.interval_hi, 100);
            match analytic::check_monotone_closure(variant, row.k, row.c, &grid, &constants, table)
            {
                Ok(true) => {}
                Ok(false) => {
                    return CheckOutcome::fail(
                        NAME,
                        format!("{variant:?} k={} not conclusive", row.k),
                    )
                }
                Err(e) => return CheckOutcome::fail(NAME, format!("{variant:?} k={}: {e}", row.k)),
            }
        }
    }
    let constants = analytic::PrimeSumConstants::fixed_bounds(0.033, 0.1);
    let grid = analytic::log_spaced_grid(59u64.pow(8) + 1, 10u64.pow(18), 100);
    match analytic::check_monotone_closure(BoundVariant::F2, 0, 4.0, &grid, &constants, table) {
        Ok(true) => CheckOutcome::pass(NAME, "12 rows plus the closed form are conclusive".into()),
        Ok(false) => CheckOutcome::fail(NAME, "closed form not conclusive".into()),
        Err(e) => CheckOutcome::fail(NAME, format!("closed form: {e}")),
    }
}
