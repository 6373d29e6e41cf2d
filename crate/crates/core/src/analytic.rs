//! Explicit constants, prime-sum bounds, and the closing-inequality margin
//! tables.
//!
//! Everything here is plain f64 arithmetic with deterministic ascending-q
//! summation. The margins being certified are differences of same-magnitude
//! quantities around 1e2..1e5, so double precision carries them with around
//! twelve spare digits.
//!
//! The right-hand-side bound functions come in three variants sharing one
//! term skeleton:
//!
//! * `F2` - closed form for all n above 59^8, with global constants
//!   C1(11) and C2(11) supplied by the caller and the inverse-square prime
//!   tail estimated analytically from its 1/(A log A) bound.
//! * `F4` - per-interval form for n in [p_k^8, p_{k+1}^8] (k = 11..16) with
//!   partial sums c1(11, p_{k+1}), c2(11, p_{k+1}) and the tail written
//!   through c0 - g(p_k).
//! * `F5` - same shape for k = 6..11, with the progression-count constant
//!   46/7 in the second term in place of 1569/350.
//!
//! Two details follow the recorded margin tables this module reproduces
//! rather than the loosest textbook form of each estimate: the count of
//! primes up to sqrt(n)/(c log n) enters as 4 sqrt(n) / (c log^3 n) times
//! (1 + 6/log n), and the F5 second coefficient is 46/7 (the unfolded
//! constant; 46/7 - 2 = 32/7 is what remains after the leading 2/log n of
//! the left side is absorbed). Every printed margin in both tables, and the
//! 95945 closing margin, reproduce to within 0.1 under these definitions.

use crate::primes::PrimeTable;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Euler's value for the sum of 1/q^2 over primes.
pub const C0_PRIME_SQUARE_SUM: f64 = 0.452247420041065;

/// n must exceed 59^2 before the left-hand side is meaningful.
pub const LHS_MIN_EXCLUSIVE: u64 = 59 * 59;

/// F2 applies above 59^8.
pub const F2_MIN_EXCLUSIVE: u64 = 146_830_437_604_321;

/// F4 applies from 10^12 up (progression estimates need sqrt(n) >= 10^6).
pub const F4_MIN: u64 = 1_000_000_000_000;

/// F5 applies from 13^8 up (n^(1/8) must clear 11 and sqrt(n) must clear
/// 50 * 7^2 for the progression estimates used in its first term).
pub const F5_MIN: u64 = 815_730_721;

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticError {
    #[error("li(x) requires x >= 2, got {0}")]
    LiDomain(f64),
    #[error("left-hand side requires n > 59^2 = 3481, got {0}")]
    LhsDomain(u64),
    #[error("tail bounds require A >= 59, got {0}")]
    TailDomain(u64),
    #[error("prime-sum constants require 2 <= A <= B <= table limit, got A={a}, B={b}, limit={limit}")]
    ConstantsRange { a: u64, b: u64, limit: u64 },
    #[error("prime {0} exceeds the table limit {1}")]
    OutOfTable(u64, u64),
    #[error("{variant:?} requires n >= {min}, got {n}")]
    VariantRange {
        variant: BoundVariant,
        min: u64,
        n: u64,
    },
    #[error("c must lie in (0.5, 5], got {0}")]
    CParameter(f64),
    #[error("interval index k must be between 1 and 16, got {0}")]
    BadIntervalIndex(u32),
    #[error("constants cover [{got_a}, {got_b}] but the context needs A = 11, B = {want_b}")]
    ConstantsMismatch { got_a: u64, got_b: u64, want_b: u64 },
    #[error("delta tables are defined for F4 and F5 only")]
    NoDeltaTable,
    #[error("grid must be strictly ascending and inside the variant's range")]
    BadGrid,
}

/// Partial prime sums over a window [A, B], plus the inverse-square prefix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimeSumConstants {
    pub a: u64,
    pub b: u64,
    /// sum of 1/(q(q-1)) over primes A <= q <= B
    pub c1: f64,
    /// sum of log(q)/(q(q-1)) over primes A <= q <= B
    pub c2: f64,
    /// sum of 1/q^2 over primes A < q <= B
    pub c3: f64,
    /// g(A): sum of 1/q^2 over primes q <= A
    pub g_a: f64,
}

impl PrimeSumConstants {
    /// Constants acting as fixed upper bounds rather than computed partial
    /// sums, e.g. C1(11) < 0.033 and C2(11) < 0.1 in the closing margin.
    pub fn fixed_bounds(c1: f64, c2: f64) -> Self {
        PrimeSumConstants {
            a: 11,
            b: 0,
            c1,
            c2,
            c3: 0.0,
            g_a: 0.0,
        }
    }
}

/// Evaluate c1, c2, c3 and g over `[a, b]` by one ascending pass over the
/// prime table. Summation order is fixed, so results are bit-reproducible.
pub fn prime_sum_constants(
    a: u64,
    b: u64,
    table: &PrimeTable,
) -> Result<PrimeSumConstants, AnalyticError> {
    if a < 2 || a > b || b > table.limit() {
        return Err(AnalyticError::ConstantsRange {
            a,
            b,
            limit: table.limit(),
        });
    }
    let mut out = PrimeSumConstants {
        a,
        b,
        c1: 0.0,
        c2: 0.0,
        c3: 0.0,
        g_a: 0.0,
    };
    for &q in table.primes() {
        if q > b {
            break;
        }
        let qf = q as f64;
        if q <= a {
            out.g_a += 1.0 / (qf * qf);
        }
        if q >= a {
            out.c1 += 1.0 / (qf * (qf - 1.0));
            out.c2 += qf.ln() / (qf * (qf - 1.0));
        }
        if q > a {
            out.c3 += 1.0 / (qf * qf);
        }
    }
    Ok(out)
}

/// c0 - g(pk): the inverse-square prime tail beyond pk.
pub fn c0_minus_g(pk: u64, table: &PrimeTable) -> Result<f64, AnalyticError> {
    if pk > table.limit() {
        return Err(AnalyticError::OutOfTable(pk, table.limit()));
    }
    let mut g = 0.0;
    for &q in table.primes() {
        if q > pk {
            break;
        }
        g += 1.0 / (q as f64 * q as f64);
    }
    Ok(C0_PRIME_SQUARE_SUM - g)
}

/// Which prime-sum tail a rigorous bound is requested for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailWeight {
    /// sum of 1/q^2 over primes q > A
    ReciprocalSquare,
    /// sum of 1/(q(q-1)) over primes q > A
    C1Style,
    /// sum of log(q)/(q(q-1)) over primes q > A
    C2Style,
}

/// Rigorous upper bound for the chosen prime-sum tail beyond A.
///
/// Partial summation against pi(t) with the two-sided prime-count bounds
/// c4 = 1 + 1/(2 log A) (valid at A for A >= 59) and c5 = 1 + 3/(2 log A)
/// (valid for all t >= A) gives
///
/// * 1/q^2 tail:          (2 c5 - c4) / (A log A)
/// * log q/(q(q-1)) tail:  c5 (log(A/(A-1)) + 1/(A-1)) - c4/(A-1)
/// * 1/(q(q-1)) tail:      the previous bound divided by log A
pub fn tail_bound(a: u64, weight: TailWeight) -> Result<f64, AnalyticError> {
    if a < 59 {
        return Err(AnalyticError::TailDomain(a));
    }
    let af = a as f64;
    let log_a = af.ln();
    let c4 = 1.0 + 1.0 / (2.0 * log_a);
    let c5 = 1.0 + 3.0 / (2.0 * log_a);
    let bound = match weight {
        TailWeight::ReciprocalSquare => (2.0 * c5 - c4) / (af * log_a),
        TailWeight::C2Style => c5 * ((af / (af - 1.0)).ln() + 1.0 / (af - 1.0)) - c4 / (af - 1.0),
        TailWeight::C1Style => {
            (c5 * ((af / (af - 1.0)).ln() + 1.0 / (af - 1.0)) - c4 / (af - 1.0)) / log_a
        }
    };
    Ok(bound)
}

fn inv_log(t: f64) -> f64 {
    1.0 / t.ln()
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt(a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, eps: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = inv_log(lm);
    let frm = inv_log(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() <= 15.0 * eps {
        return refined + (refined - whole) / 15.0;
    }
    adapt(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + adapt(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Li(x): the logarithmic integral from 2 to x, by adaptive Simpson
/// quadrature tuned well past 1e-9 relative error.
pub fn li(x: f64) -> Result<f64, AnalyticError> {
    if x < 2.0 || x.is_nan() {
        return Err(AnalyticError::LiDomain(x));
    }
    if x == 2.0 {
        return Ok(0.0);
    }
    let (a, b) = (2.0, x);
    let fa = inv_log(a);
    let fb = inv_log(b);
    let fm = inv_log(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, b - a);
    let eps = 1e-12 * whole.abs().max(1.0);
    Ok(adapt(a, b, fa, fm, fb, whole, eps, 52))
}

/// The bound-function family the right-hand side is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundVariant {
    F2,
    F4,
    F5,
}

/// Inputs for one right-hand-side evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundContext {
    pub variant: BoundVariant,
    pub n: u64,
    /// Case-4 split parameter, in (0.5, 5].
    pub c: f64,
    /// Interval index for F4/F5 (n in [p_k^8, p_{k+1}^8]); unused by F2.
    pub k: u32,
}

fn check_c(c: f64) -> Result<(), AnalyticError> {
    if !(c > 0.5 && c <= 5.0) {
        return Err(AnalyticError::CParameter(c));
    }
    Ok(())
}

impl BoundContext {
    pub fn f2(n: u64, c: f64) -> Result<Self, AnalyticError> {
        check_c(c)?;
        if n <= F2_MIN_EXCLUSIVE {
            return Err(AnalyticError::VariantRange {
                variant: BoundVariant::F2,
                min: F2_MIN_EXCLUSIVE + 1,
                n,
            });
        }
        Ok(BoundContext {
            variant: BoundVariant::F2,
            n,
            c,
            k: 0,
        })
    }

    pub fn f4(n: u64, k: u32, c: f64) -> Result<Self, AnalyticError> {
        check_c(c)?;
        if !(1..=16).contains(&k) {
            return Err(AnalyticError::BadIntervalIndex(k));
        }
        if n < F4_MIN {
            return Err(AnalyticError::VariantRange {
                variant: BoundVariant::F4,
                min: F4_MIN,
                n,
            });
        }
        Ok(BoundContext {
            variant: BoundVariant::F4,
            n,
            c,
            k,
        })
    }

    pub fn f5(n: u64, k: u32, c: f64) -> Result<Self, AnalyticError> {
        check_c(c)?;
        if !(1..=16).contains(&k) {
            return Err(AnalyticError::BadIntervalIndex(k));
        }
        if n < F5_MIN {
            return Err(AnalyticError::VariantRange {
                variant: BoundVariant::F5,
                min: F5_MIN,
                n,
            });
        }
        Ok(BoundContext {
            variant: BoundVariant::F5,
            n,
            c,
            k,
        })
    }
}

/// Left-hand side: 2 sqrt(n)/log n * (1 + 1/log n), the prime-count floor
/// at sqrt(n). Requires n > 59^2.
pub fn lhs(n: u64) -> Result<f64, AnalyticError> {
    if n <= LHS_MIN_EXCLUSIVE {
        return Err(AnalyticError::LhsDomain(n));
    }
    let x = n as f64;
    let l = x.ln();
    Ok(2.0 * x.sqrt() / l * (1.0 + 1.0 / l))
}

/// Evaluate the chosen right-hand-side bound function term by term.
///
/// For F4/F5 the constants must be the partial sums over [11, p_{k+1}];
/// the inverse-square surrogate c0 - g(p_k) is taken from the table. For F2
/// the constants fields c1/c2 act as the global bounds C1(11) and C2(11).
pub fn evaluate_rhs(
    ctx: &BoundContext,
    constants: &PrimeSumConstants,
    table: &PrimeTable,
) -> Result<f64, AnalyticError> {
    check_c(ctx.c)?;
    let x = ctx.n as f64;
    let s = x.sqrt();
    let l = x.ln();
    let l2 = l * l;
    let corr = 1.0 + 6.0 / l;

    let second_coeff = match ctx.variant {
        BoundVariant::F2 | BoundVariant::F4 => 1569.0 / 350.0,
        BoundVariant::F5 => 46.0 / 7.0,
    };
    let q1 = 46.0 * s / (35.0 * l) + second_coeff * s / l2;
    let q2 = 4.0 * constants.c1 * s / l + 32.0 * constants.c2 * s / l2;

    let q3 = match ctx.variant {
        BoundVariant::F2 => {
            if ctx.n <= F2_MIN_EXCLUSIVE {
                return Err(AnalyticError::VariantRange {
                    variant: BoundVariant::F2,
                    min: F2_MIN_EXCLUSIVE + 1,
                    n: ctx.n,
                });
            }
            s * (8.0 * l + 160.0) / (3.0 * x.powf(0.125) * l2)
        }
        BoundVariant::F4 | BoundVariant::F5 => {
            let min = if ctx.variant == BoundVariant::F4 {
                F4_MIN
            } else {
                F5_MIN
            };
            if ctx.n < min {
                return Err(AnalyticError::VariantRange {
                    variant: ctx.variant,
                    min,
                    n: ctx.n,
                });
            }
            let pk = table
                .nth_prime(ctx.k as usize)
                .ok_or(AnalyticError::BadIntervalIndex(ctx.k))?;
            let pk1 = table
                .nth_prime(ctx.k as usize + 1)
                .ok_or(AnalyticError::BadIntervalIndex(ctx.k))?;
            if constants.a != 11 || constants.b != pk1 {
                return Err(AnalyticError::ConstantsMismatch {
                    got_a: constants.a,
                    got_b: constants.b,
                    want_b: pk1,
                });
            }
            let c0g = c0_minus_g(pk, table)?;
            s * c0g * (8.0 * (pk1 as f64).ln()) / (3.0 * l)
        }
    };

    // count of primes up to sqrt(n)/(c log n); see the module docs for the
    // 1/log^3 exponent
    let q4_split = 4.0 * s / (ctx.c * l2 * l) * corr;
    let q4_quarter = 4.0 * x.powf(0.25) / l * corr;
    let q5 = (ctx.c * l) * (ctx.c * l);

    Ok(q1 + q2 + q3 + q4_split + q4_quarter + q5)
}

/// lhs(n) - rhs(n): positive means the representation count argument closes
/// at n.
pub fn margin(
    ctx: &BoundContext,
    constants: &PrimeSumConstants,
    table: &PrimeTable,
) -> Result<f64, AnalyticError> {
    Ok(lhs(ctx.n)? - evaluate_rhs(ctx, constants, table)?)
}

/// One row of a margin table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub k: u32,
    pub interval_lo: u64,
    pub interval_hi: u64,
    pub c1: f64,
    pub c2: f64,
    pub c: f64,
    pub c0_minus_g: f64,
    pub delta: f64,
}

/// The published interval layout: (k, lo, hi, c), highest interval first.
fn table_layout(variant: BoundVariant) -> Result<Vec<(u32, u64, u64, f64)>, AnalyticError> {
    let p8 = |p: u64| p.pow(8);
    match variant {
        BoundVariant::F4 => Ok(vec![
            (16, p8(53), p8(59), 4.0),
            (15, p8(47), p8(53), 3.3),
            (14, p8(43), p8(47), 2.9),
            (13, p8(41), p8(43), 2.7),
            (12, p8(37), p8(41), 2.3),
            (11, F4_MIN, p8(37), 2.0),
        ]),
        BoundVariant::F5 => Ok(vec![
            (11, p8(31), F4_MIN, 2.0),
            (10, p8(29), p8(31), 2.0),
            (9, p8(23), p8(29), 1.6),
            (8, p8(19), p8(23), 1.3),
            (7, p8(17), p8(19), 1.1),
            (6, p8(13), p8(17), 0.6),
        ]),
        BoundVariant::F2 => Err(AnalyticError::NoDeltaTable),
    }
}

/// Compute the full margin table for F4 or F5: six rows, margins evaluated
/// at each interval's left endpoint.
pub fn delta_table(
    variant: BoundVariant,
    table: &PrimeTable,
) -> Result<Vec<DeltaRow>, AnalyticError> {
    let mut rows = Vec::with_capacity(6);
    for (k, lo, hi, c) in table_layout(variant)? {
        let pk = table
            .nth_prime(k as usize)
            .ok_or(AnalyticError::BadIntervalIndex(k))?;
        let pk1 = table
            .nth_prime(k as usize + 1)
            .ok_or(AnalyticError::BadIntervalIndex(k))?;
        let constants = prime_sum_constants(11, pk1, table)?;
        let ctx = match variant {
            BoundVariant::F4 => BoundContext::f4(lo, k, c)?,
            BoundVariant::F5 => BoundContext::f5(lo, k, c)?,
            BoundVariant::F2 => unreachable!("layout rejected F2"),
        };
        rows.push(DeltaRow {
            k,
            interval_lo: lo,
            interval_hi: hi,
            c1: constants.c1,
            c2: constants.c2,
            c,
            c0_minus_g: c0_minus_g(pk, table)?,
            delta: margin(&ctx, &constants, table)?,
        });
    }
    Ok(rows)
}

/// Check that a left-endpoint margin is conclusive for a whole interval.
///
/// Normalizing both sides by sqrt(n)/log n turns the inequality into a
/// constant left side against a sum of decreasing terms, so the normalized
/// margin must be nondecreasing along the grid; combined with positivity at
/// the left end that extends the check across the interval. Returns true
/// iff both hold on the supplied ascending grid.
pub fn check_monotone_closure(
    variant: BoundVariant,
    k: u32,
    c: f64,
    grid: &[u64],
    constants: &PrimeSumConstants,
    table: &PrimeTable,
) -> Result<bool, AnalyticError> {
    if grid.is_empty() {
        return Ok(true);
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AnalyticError::BadGrid);
    }
    let mut previous = f64::NEG_INFINITY;
    for (i, &n) in grid.iter().enumerate() {
        let ctx = match variant {
            BoundVariant::F2 => BoundContext::f2(n, c)?,
            BoundVariant::F4 => BoundContext::f4(n, k, c)?,
            BoundVariant::F5 => BoundContext::f5(n, k, c)?,
        };
        let x = n as f64;
        let scale = x.sqrt() / x.ln();
        let normalized = margin(&ctx, constants, table)? / scale;
        if i == 0 && normalized <= 0.0 {
            return Ok(false);
        }
        // strictly mathematical monotonicity, with float slack
        if normalized + 1e-12 * normalized.abs().max(1.0) < previous {
            return Ok(false);
        }
        previous = normalized;
    }
    Ok(true)
}

/// One row of the published margin tables, cells kept at their printed
/// precision.
#[derive(Debug, Clone, Copy)]
pub struct PublishedRow {
    pub k: u32,
    pub c1: &'static str,
    pub c2: &'static str,
    pub c0_minus_g: &'static str,
    pub delta: f64,
}

static F4_PUBLISHED: [PublishedRow; 6] = [
    PublishedRow { k: 16, c1: "0.02941652", c2: "0.08277361", c0_minus_g: "0.00352137", delta: 74613.3 },
    PublishedRow { k: 15, c1: "0.02912429", c2: "0.08158205", c0_minus_g: "0.00387736", delta: 46560.4 },
    PublishedRow { k: 14, c1: "0.02876145", c2: "0.08014145", c0_minus_g: "0.004330053", delta: 32612.4 },
    PublishedRow { k: 13, c1: "0.02829891", c2: "0.07836062", c0_minus_g: "0.00487089", delta: 26933.3 },
    PublishedRow { k: 12, c1: "0.02774520", c2: "0.07627800", c0_minus_g: "0.00546577", delta: 17911.1 },
    PublishedRow { k: 11, c1: "0.02713545", c2: "0.07401364", c0_minus_g: "0.00619623", delta: 9029.5 },
];

static F5_PUBLISHED: [PublishedRow; 6] = [
    PublishedRow { k: 11, c1: "0.02713545", c2: "0.07401364", c0_minus_g: "0.00619623", delta: 5606.9 },
    PublishedRow { k: 10, c1: "0.02638469", c2: "0.0713027", c0_minus_g: "0.00723681", delta: 3669.5 },
    PublishedRow { k: 9, c1: "0.02530942", c2: "0.06761027", c0_minus_g: "0.00842587", delta: 910.8 },
    PublishedRow { k: 8, c1: "0.02407789", c2: "0.0634633", c0_minus_g: "0.01031623", delta: 179.8 },
    PublishedRow { k: 7, c1: "0.02210161", c2: "0.05726672", c0_minus_g: "0.0130863", delta: 62.1 },
    PublishedRow { k: 6, c1: "0.01917763", c2: "0.04865725", c0_minus_g: "0.0165465", delta: 35.3 },
];

/// The published margin-table cells for a variant, row order matching
/// [`delta_table`].
pub fn published_delta_rows(
    variant: BoundVariant,
) -> Result<&'static [PublishedRow; 6], AnalyticError> {
    match variant {
        BoundVariant::F4 => Ok(&F4_PUBLISHED),
        BoundVariant::F5 => Ok(&F5_PUBLISHED),
        BoundVariant::F2 => Err(AnalyticError::NoDeltaTable),
    }
}

/// One unit in the last printed decimal place of a cell like "0.02941652".
pub fn printed_ulp(cell: &str) -> f64 {
    match cell.split_once('.') {
        Some((_, frac)) => 10f64.powi(-(frac.len() as i32)),
        None => 1.0,
    }
}

/// Margin tolerance: the recorded deltas carry one decimal, and relative
/// rounding of large rows dominates absolute rounding of small ones.
pub fn delta_tolerance(delta: f64) -> f64 {
    (0.001 * delta.abs()).max(0.2)
}

/// `count` log-spaced integers from lo to hi inclusive, deduplicated.
pub fn log_spaced_grid(lo: u64, hi: u64, count: usize) -> Vec<u64> {
    assert!(lo >= 1 && lo <= hi && count >= 2);
    let (llo, lhi) = ((lo as f64).ln(), (hi as f64).ln());
    let mut grid: Vec<u64> = (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            let v = (llo + t * (lhi - llo)).exp().round() as u64;
            v.clamp(lo, hi)
        })
        .collect();
    grid.dedup();
    grid
}
