//! Verification toolkit for the representation of positive integers as a
//! squarefree number plus a prime not exceeding sqrt(n).
//!
//! The crate has two halves. The computational half ([`primes`],
//! [`squarefree`], [`verify`], [`crt`]) checks the representation directly:
//! segmented squarefree sieving over an interval, witness search for every n
//! in range, streak records b_k, and CRT-built upper bounds for streaks with
//! independently checkable certificates. The analytic half ([`analytic`])
//! evaluates the explicit prime-count estimates and reproduces the margin
//! tables that close the argument beyond direct-computation range.
//!
//! [`selfcheck`] carries seeded instance checks of every external estimate
//! (prime-count sandwiches, progression bounds, quadrature accuracy), shared
//! by the command-line `selftest` and the acceptance suite.

pub mod analytic;
pub mod crt;
pub mod primes;
pub mod selfcheck;
pub mod squarefree;
pub mod verify;

pub use analytic::{
    c0_minus_g, check_monotone_closure, delta_table, delta_tolerance, evaluate_rhs, lhs, li,
    log_spaced_grid, margin, prime_sum_constants, printed_ulp, published_delta_rows, tail_bound,
    AnalyticError, BoundContext, BoundVariant, DeltaRow, PrimeSumConstants, PublishedRow,
    TailWeight, C0_PRIME_SQUARE_SUM,
};
pub use crt::{
    certify_streak_bound, crt_solve, naive_bound, Congruence, CongruenceSystem, CoverageEntry,
    CrtError, StreakCertificate, PAPER_B16_BOUND,
};
pub use primes::{check_sextuple_lemma, PrimeTable, PrimesError};
pub use squarefree::{is_squarefree, sieve_segment, SegmentBitmap, SquarefreeError};
pub use verify::{
    compute_streaks, find_witness, streak_of, verify_range, verify_range_with, Exception,
    OracleLookup, SquarefreeLookup, StreakTable, VerificationReport, VerifyConfig, VerifyError,
    WitnessResult, DEFAULT_SEGMENT_SIZE, PAPER_EXCEPTIONS, PAPER_STREAKS,
};
