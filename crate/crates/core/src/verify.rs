//! Range verification of the squarefree-plus-small-prime representation.
//!
//! For each n the witness search walks primes p = 2, 3, 5, ... with p^2 <= n
//! and stops at the first p for which n - p is squarefree. An n with no such
//! prime is an exception and gets an exhaustive failure certificate (for each
//! candidate p, a prime q whose square divides n - p).
//!
//! Ranges are verified in fixed-size segments. Each segment sieves its own
//! squarefree window extended far enough below the segment start to cover
//! n - p for every candidate prime, so segments are independent and can run
//! on worker threads; results are merged in ascending segment order, which
//! keeps reports identical no matter how many workers ran. A checkpoint file
//! written after each merged batch makes long runs resumable.

use crate::primes::{PrimeTable, PrimesError};
use crate::squarefree::{self, sieve_segment, SegmentBitmap, SquarefreeError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

/// Default segment length, matching the 10^7-wide intervals the range
/// computation is organized around.
pub const DEFAULT_SEGMENT_SIZE: u64 = 10_000_000;

/// Practical cap on verification ranges.
pub const MAX_RANGE_END: u64 = 1_000_000_000_000;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("range must satisfy 1 <= lo < hi <= 10^12, got [{lo}, {hi})")]
    BadRange { lo: u64, hi: u64 },
    #[error("segment size must be positive")]
    BadSegmentSize,
    #[error("worker count must be positive")]
    BadWorkers,
    #[error("streak scan requires an upper bound of at least 7, got {0}")]
    StreakBoundTooSmall(u64),
    #[error("prime table (limit {limit}) does not cover sqrt({n})")]
    TableTooSmall { n: u64, limit: u64 },
    #[error("no squarefree data available for {0}")]
    MissingSegment(u64),
    #[error("internal error: no square divisor found for {n} - {p} reported non-squarefree")]
    LostCertificate { n: u64, p: u64 },
    #[error("streak walk at n={0} exhausted the prime table")]
    StreakWalkOverflow(u64),
    #[error("checkpoint {path} is corrupt: {reason}")]
    CorruptCheckpoint { path: PathBuf, reason: String },
    #[error("checkpoint {path} does not match this run: {reason}")]
    CheckpointMismatch { path: PathBuf, reason: String },
    #[error(transparent)]
    Primes(#[from] PrimesError),
    #[error(transparent)]
    Squarefree(#[from] SquarefreeError),
    #[error("checkpoint I/O: {0}")]
    Io(#[from] std::io::Error),
}

/// Result of the witness search for a single n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessResult {
    pub n: u64,
    /// Smallest prime p with p^2 <= n and n - p squarefree, if any.
    pub witness: Option<u64>,
    /// Number of primes tried, counting the witness itself.
    pub checks: u32,
}

/// One entry of an exception certificate: q^2 divides n - p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareFailure {
    pub p: u64,
    pub q: u64,
}

/// An n admitting no witness, with the full failure list over all p^2 <= n.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exception {
    pub n: u64,
    pub failures: Vec<SquareFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Verified half-open range `[lo, hi)`.
    pub range: (u64, u64),
    pub exceptions: Vec<Exception>,
    /// Maximum witness-search length over non-exception n (0 if none exist).
    pub max_checks: u32,
    /// Smallest n attaining `max_checks` (0 if none exist).
    pub max_checks_at: u64,
    pub segments: u64,
    pub elapsed_seconds: f64,
}

impl VerificationReport {
    /// Equality on everything except the timing field.
    pub fn same_outcome(&self, other: &VerificationReport) -> bool {
        self.range == other.range
            && self.exceptions == other.exceptions
            && self.max_checks == other.max_checks
            && self.max_checks_at == other.max_checks_at
            && self.segments == other.segments
    }
}

/// First n reaching each streak length, plus how far the scan went.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreakTable {
    /// k -> b_k, the least n > p_k with n - p_1, ..., n - p_k all non-squarefree.
    pub entries: BTreeMap<u32, u64>,
    pub scanned_up_to: u64,
}

/// Source of squarefree indicators for the witness search.
pub trait SquarefreeLookup {
    fn is_squarefree(&self, m: u64) -> Result<bool, VerifyError>;
}

/// Direct trial division; used for spot re-checks of sieved results.
pub struct OracleLookup;

impl SquarefreeLookup for OracleLookup {
    fn is_squarefree(&self, m: u64) -> Result<bool, VerifyError> {
        Ok(squarefree::is_squarefree(m)?)
    }
}

impl SquarefreeLookup for SegmentBitmap {
    fn is_squarefree(&self, m: u64) -> Result<bool, VerifyError> {
        SegmentBitmap::is_squarefree(self, m).ok_or(VerifyError::MissingSegment(m))
    }
}

/// Search for the smallest witness prime for `n`.
///
/// Primes are tried in increasing order; p qualifies while p*p <= n, in exact
/// integer arithmetic. The prime table must cover sqrt(n), otherwise the
/// search cannot be exhaustive and an error is returned instead of a wrong
/// answer. Missing squarefree data likewise surfaces as an error.
pub fn find_witness<L: SquarefreeLookup + ?Sized>(
    n: u64,
    table: &PrimeTable,
    lookup: &L,
) -> Result<WitnessResult, VerifyError> {
    if n == 0 {
        return Err(VerifyError::BadRange { lo: 0, hi: 0 });
    }
    let limit = table.limit();
    if (limit as u128 + 1) * (limit as u128 + 1) <= n as u128 {
        return Err(VerifyError::TableTooSmall { n, limit });
    }
    let mut checks = 0u32;
    for &p in table.primes() {
        if (p as u128) * (p as u128) > n as u128 {
            break;
        }
        checks += 1;
        if lookup.is_squarefree(n - p)? {
            return Ok(WitnessResult {
                n,
                witness: Some(p),
                checks,
            });
        }
    }
    Ok(WitnessResult {
        n,
        witness: None,
        checks,
    })
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub segment_size: u64,
    pub workers: usize,
    pub checkpoint: Option<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            segment_size: DEFAULT_SEGMENT_SIZE,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            checkpoint: None,
        }
    }
}

/// Resumable state between segment batches.
///
/// `next_segment_lo` is always a segment boundary; the partial fields mirror
/// the report accumulated over all segments below it, so resumption is
/// bit-exact with respect to the final report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub range: (u64, u64),
    pub segment_size: u64,
    pub next_segment_lo: u64,
    pub partial_exceptions: Vec<Exception>,
    pub partial_max_checks: u32,
    pub partial_max_checks_at: u64,
    pub segments_done: u64,
}

#[derive(Debug, Clone, Default)]
struct Accumulator {
    exceptions: Vec<Exception>,
    max_checks: u32,
    max_checks_at: u64,
    segments: u64,
}

impl Accumulator {
    fn merge(&mut self, seg: SegmentOutcome) {
        self.exceptions.extend(seg.exceptions);
        // ties keep the earlier n: segments merge in ascending order
        if seg.max_checks > self.max_checks {
            self.max_checks = seg.max_checks;
            self.max_checks_at = seg.max_checks_at;
        }
        self.segments += 1;
    }
}

#[derive(Debug, Clone)]
struct SegmentOutcome {
    exceptions: Vec<Exception>,
    max_checks: u32,
    max_checks_at: u64,
}

/// Verify one segment `[seg_lo, seg_hi)` against a freshly sieved window.
///
/// The window starts `sqrt(seg_hi)` below the segment so every n - p lookup
/// lands inside it regardless of segment size.
fn verify_segment(
    seg_lo: u64,
    seg_hi: u64,
    table: &PrimeTable,
) -> Result<SegmentOutcome, VerifyError> {
    let ext = (seg_hi - 1).isqrt() + 1;
    let win_lo = seg_lo.saturating_sub(ext).max(1);
    let bitmap = sieve_segment(win_lo, seg_hi, table)?;
    let mut out = SegmentOutcome {
        exceptions: Vec::new(),
        max_checks: 0,
        max_checks_at: 0,
    };
    for n in seg_lo..seg_hi {
        let result = find_witness(n, table, &bitmap)?;
        match result.witness {
            Some(_) => {
                if result.checks > out.max_checks {
                    out.max_checks = result.checks;
                    out.max_checks_at = n;
                }
            }
            None => {
                let mut failures = Vec::with_capacity(result.checks as usize);
                for &p in table.primes() {
                    if (p as u128) * (p as u128) > n as u128 {
                        break;
                    }
                    let q = squarefree::smallest_square_prime_divisor(n - p)
                        .ok_or(VerifyError::LostCertificate { n, p })?;
                    failures.push(SquareFailure { p, q });
                }
                out.exceptions.push(Exception { n, failures });
            }
        }
    }
    Ok(out)
}

/// Verify `[lo, hi)` and report exceptions, the maximum witness-search
/// length, and segment bookkeeping. See [`verify_range_with`].
pub fn verify_range(lo: u64, hi: u64, config: &VerifyConfig) -> Result<VerificationReport, VerifyError> {
    verify_range_with(lo, hi, config, |_, _| {})
}

/// [`verify_range`] with a progress callback, invoked as
/// `progress(next_segment_lo, hi)` after each merged batch.
///
/// Segments are dealt to a worker pool in batches; every batch is merged in
/// ascending segment order before the checkpoint (if configured) advances.
/// The report is deterministic: worker count only affects wall time.
pub fn verify_range_with<F: FnMut(u64, u64)>(
    lo: u64,
    hi: u64,
    config: &VerifyConfig,
    mut progress: F,
) -> Result<VerificationReport, VerifyError> {
    if lo < 1 || lo >= hi || hi > MAX_RANGE_END {
        return Err(VerifyError::BadRange { lo, hi });
    }
    if config.segment_size == 0 {
        return Err(VerifyError::BadSegmentSize);
    }
    if config.workers == 0 {
        return Err(VerifyError::BadWorkers);
    }
    let started = Instant::now();
    let table = PrimeTable::build(((hi - 1).isqrt() + 1).max(2))?;

    let mut acc = Accumulator::default();
    let mut next_lo = lo;
    if let Some(path) = &config.checkpoint {
        if path.exists() {
            let cp = load_checkpoint(path, lo, hi, config.segment_size)?;
            acc.exceptions = cp.partial_exceptions;
            acc.max_checks = cp.partial_max_checks;
            acc.max_checks_at = cp.partial_max_checks_at;
            acc.segments = cp.segments_done;
            next_lo = cp.next_segment_lo;
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .expect("worker pool");

    while next_lo < hi {
        let mut batch = Vec::with_capacity(config.workers);
        let mut cursor = next_lo;
        while cursor < hi && batch.len() < config.workers {
            let seg_hi = cursor.saturating_add(config.segment_size).min(hi);
            batch.push((cursor, seg_hi));
            cursor = seg_hi;
        }
        let outcomes: Result<Vec<SegmentOutcome>, VerifyError> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(a, b)| verify_segment(a, b, &table))
                .collect()
        });
        for outcome in outcomes? {
            acc.merge(outcome);
        }
        next_lo = cursor;
        if let Some(path) = &config.checkpoint {
            if next_lo < hi {
                write_checkpoint(path, &Checkpoint {
                    range: (lo, hi),
                    segment_size: config.segment_size,
                    next_segment_lo: next_lo,
                    partial_exceptions: acc.exceptions.clone(),
                    partial_max_checks: acc.max_checks,
                    partial_max_checks_at: acc.max_checks_at,
                    segments_done: acc.segments,
                })?;
            }
        }
        progress(next_lo, hi);
    }

    if let Some(path) = &config.checkpoint {
        if path.exists() {
            std::fs::remove_file(path)?;
        }
    }

    Ok(VerificationReport {
        range: (lo, hi),
        exceptions: acc.exceptions,
        max_checks: acc.max_checks,
        max_checks_at: acc.max_checks_at,
        segments: acc.segments,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

fn load_checkpoint(
    path: &Path,
    lo: u64,
    hi: u64,
    segment_size: u64,
) -> Result<Checkpoint, VerifyError> {
    let text = std::fs::read_to_string(path)?;
    let cp: Checkpoint = serde_json::from_str(&text).map_err(|e| VerifyError::CorruptCheckpoint {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    if cp.range != (lo, hi) || cp.segment_size != segment_size {
        return Err(VerifyError::CheckpointMismatch {
            path: path.to_path_buf(),
            reason: format!(
                "checkpoint is for range [{}, {}) with segment size {}, run is [{lo}, {hi}) with {segment_size}",
                cp.range.0, cp.range.1, cp.segment_size
            ),
        });
    }
    let in_range = cp.next_segment_lo >= lo && cp.next_segment_lo <= hi;
    if !in_range || !(cp.next_segment_lo - lo).is_multiple_of(segment_size) {
        return Err(VerifyError::CorruptCheckpoint {
            path: path.to_path_buf(),
            reason: format!("next_segment_lo {} is not a segment boundary", cp.next_segment_lo),
        });
    }
    Ok(cp)
}

fn write_checkpoint(path: &Path, cp: &Checkpoint) -> Result<(), VerifyError> {
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string_pretty(cp).expect("checkpoint serializes"))?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Streak of n: the largest k with p_k < n such that n - p_l is
/// non-squarefree for every l <= k.
pub fn streak_of<L: SquarefreeLookup + ?Sized>(
    n: u64,
    table: &PrimeTable,
    lookup: &L,
) -> Result<u32, VerifyError> {
    let mut streak = 0u32;
    for (l, &p) in table.primes().iter().enumerate() {
        if p >= n {
            return Ok(streak);
        }
        if lookup.is_squarefree(n - p)? {
            return Ok(streak);
        }
        streak = l as u32 + 1;
    }
    // every tabled prime failed; the walk is only complete if the next prime
    // (which exceeds the table limit) is already >= n
    if table.limit() >= n - 1 {
        Ok(streak)
    } else {
        Err(VerifyError::StreakWalkOverflow(n))
    }
}

/// Primes needed by a streak walk stay tiny (p_16 = 53 covers everything the
/// scan meets below 10^9), but the walk falls back to the oracle beyond the
/// sieved window, so the window keeps this much slack below each segment.
const STREAK_WINDOW_SLACK: u64 = 1031;

/// Scan n = 2..=hi and record the first n achieving each streak length.
pub fn compute_streaks(hi: u64, segment_size: u64) -> Result<StreakTable, VerifyError> {
    if hi < 7 {
        return Err(VerifyError::StreakBoundTooSmall(hi));
    }
    if hi >= MAX_RANGE_END {
        return Err(VerifyError::BadRange { lo: 2, hi });
    }
    if segment_size == 0 {
        return Err(VerifyError::BadSegmentSize);
    }
    let end = hi + 1; // exclusive
    let walk_table = PrimeTable::build(STREAK_WINDOW_SLACK)?;
    let sieve_table = PrimeTable::build(((end - 1).isqrt() + 1).max(2))?;

    let mut entries = BTreeMap::new();
    let mut best = 0u32;
    let mut seg_lo = 2u64;
    while seg_lo < end {
        let seg_hi = seg_lo.saturating_add(segment_size).min(end);
        let win_lo = seg_lo.saturating_sub(STREAK_WINDOW_SLACK).max(1);
        let bitmap = sieve_segment(win_lo, seg_hi, &sieve_table)?;
        for n in seg_lo..seg_hi {
            let mut streak = 0u32;
            for (l, &p) in walk_table.primes().iter().enumerate() {
                if p >= n {
                    break;
                }
                let m = n - p;
                let sf = match bitmap.is_squarefree(m) {
                    Some(v) => v,
                    None => squarefree::is_squarefree(m)?,
                };
                if sf {
                    break;
                }
                streak = l as u32 + 1;
                if streak as usize == walk_table.primes().len() {
                    return Err(VerifyError::StreakWalkOverflow(n));
                }
            }
            if streak > best {
                for k in best + 1..=streak {
                    entries.insert(k, n);
                }
                best = streak;
            }
        }
        seg_lo = seg_hi;
    }
    Ok(StreakTable {
        entries,
        scanned_up_to: hi,
    })
}

/// The eight exceptional n proved to have no representation.
pub const PAPER_EXCEPTIONS: [u64; 8] = [1, 2, 3, 6, 11, 30, 155, 247];

/// The published streak records b_1 through b_15.
pub const PAPER_STREAKS: [(u32, u64); 15] = [
    (1, 6),
    (2, 11),
    (3, 30),
    (4, 155),
    (5, 155),
    (6, 247),
    (7, 5753),
    (8, 90_263),
    (9, 90_263),
    (10, 90_263),
    (11, 90_263),
    (12, 1_481_287),
    (13, 7_409_327),
    (14, 7_409_327),
    (15, 7_409_327),
];

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(segment_size: u64, workers: usize) -> VerifyConfig {
        VerifyConfig {
            segment_size,
            workers,
            checkpoint: None,
        }
    }

    #[test]
    fn witness_examples() {
        let table = PrimeTable::build(100).unwrap();
        let w = find_witness(10, &table, &OracleLookup).unwrap();
        assert_eq!((w.witness, w.checks), (Some(3), 2));
        let w = find_witness(4, &table, &OracleLookup).unwrap();
        assert_eq!((w.witness, w.checks), (Some(2), 1));
        let w = find_witness(247, &table, &OracleLookup).unwrap();
        assert_eq!(w.witness, None);
        assert_eq!(w.checks, 6); // primes 2..13 all fail
        let w = find_witness(1, &table, &OracleLookup).unwrap();
        assert_eq!((w.witness, w.checks), (None, 0));
    }

    #[test]
    fn witness_requires_covering_table() {
        let table = PrimeTable::build(10).unwrap();
        assert!(matches!(
            find_witness(1_000_000, &table, &OracleLookup),
            Err(VerifyError::TableTooSmall { .. })
        ));
    }

    #[test]
    fn verify_small_ranges() {
        let report = verify_range(1, 300, &cfg(64, 1)).unwrap();
        let ns: Vec<u64> = report.exceptions.iter().map(|e| e.n).collect();
        assert_eq!(ns, PAPER_EXCEPTIONS.to_vec());
        let report = verify_range(4, 6, &cfg(10, 1)).unwrap();
        assert!(report.exceptions.is_empty());
        assert_eq!(report.max_checks, 1);
        assert_eq!(report.max_checks_at, 4);
    }

    #[test]
    fn exception_certificates_check_out() {
        let report = verify_range(1, 300, &cfg(300, 1)).unwrap();
        for e in &report.exceptions {
            for f in &e.failures {
                assert!((e.n - f.p) % (f.q * f.q) == 0, "q^2 | n - p fails for {e:?}");
            }
        }
        // the n = 247 certificate from the introduction
        let e247 = report.exceptions.iter().find(|e| e.n == 247).unwrap();
        let expect = [(2, 7), (3, 2), (5, 11), (7, 2), (11, 2), (13, 3)];
        let got: Vec<(u64, u64)> = e247.failures.iter().map(|f| (f.p, f.q)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn parallel_matches_serial() {
        let serial = verify_range(1, 50_000, &cfg(7_000, 1)).unwrap();
        let parallel = verify_range(1, 50_000, &cfg(7_000, 4)).unwrap();
        assert!(serial.same_outcome(&parallel));
    }

    #[test]
    fn segment_size_does_not_change_exceptions() {
        let a = verify_range(1, 10_000, &cfg(10_000, 1)).unwrap();
        let b = verify_range(1, 10_000, &cfg(137, 2)).unwrap();
        assert_eq!(a.exceptions, b.exceptions);
        assert_eq!(a.max_checks, b.max_checks);
        assert_eq!(a.max_checks_at, b.max_checks_at);
    }

    #[test]
    fn checkpoint_resume_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let full = verify_range(1, 40_000, &cfg(5_000, 1)).unwrap();

        // simulate an interrupted run: first three segments done
        let prefix = verify_range(1, 15_001, &cfg(5_000, 1)).unwrap();
        let cp = Checkpoint {
            range: (1, 40_000),
            segment_size: 5_000,
            next_segment_lo: 15_001,
            partial_exceptions: prefix.exceptions.clone(),
            partial_max_checks: prefix.max_checks,
            partial_max_checks_at: prefix.max_checks_at,
            segments_done: prefix.segments,
        };
        write_checkpoint(&path, &cp).unwrap();

        let resumed = verify_range(
            1,
            40_000,
            &VerifyConfig {
                segment_size: 5_000,
                workers: 2,
                checkpoint: Some(path.clone()),
            },
        )
        .unwrap();
        assert!(resumed.same_outcome(&full));
        assert!(!path.exists(), "checkpoint removed after completion");
    }

    #[test]
    fn corrupt_checkpoint_is_refused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp.json");
        std::fs::write(&path, "{not json").unwrap();
        let err = verify_range(
            1,
            10_000,
            &VerifyConfig {
                segment_size: 1_000,
                workers: 1,
                checkpoint: Some(path.clone()),
            },
        )
        .unwrap_err();
        assert!(matches!(err, VerifyError::CorruptCheckpoint { .. }));

        // mismatched range is also refused
        let cp = Checkpoint {
            range: (1, 999),
            segment_size: 1_000,
            next_segment_lo: 1,
            partial_exceptions: vec![],
            partial_max_checks: 0,
            partial_max_checks_at: 0,
            segments_done: 0,
        };
        write_checkpoint(&path, &cp).unwrap();
        let err = verify_range(
            1,
            10_000,
            &VerifyConfig {
                segment_size: 1_000,
                workers: 1,
                checkpoint: Some(path),
            },
        )
        .unwrap_err();
        assert!(matches!(err, VerifyError::CheckpointMismatch { .. }));
    }

    #[test]
    fn streaks_to_ten_thousand() {
        let t = compute_streaks(10_000, 4_096).unwrap();
        let got: Vec<(u32, u64)> = t.entries.iter().map(|(&k, &v)| (k, v)).collect();
        assert_eq!(
            got,
            vec![(1, 6), (2, 11), (3, 30), (4, 155), (5, 155), (6, 247), (7, 5753)]
        );
    }

    #[test]
    fn streaks_smallest_bound() {
        let t = compute_streaks(7, 100).unwrap();
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.entries[&1], 6);
        assert!(compute_streaks(6, 100).is_err());
    }

    #[test]
    fn streak_of_matches_definition() {
        let table = PrimeTable::build(1000).unwrap();
        assert_eq!(streak_of(6, &table, &OracleLookup).unwrap(), 1);
        assert_eq!(streak_of(30, &table, &OracleLookup).unwrap(), 3);
        assert_eq!(streak_of(247, &table, &OracleLookup).unwrap(), 6);
        assert_eq!(streak_of(7, &table, &OracleLookup).unwrap(), 0);
        assert_eq!(streak_of(2, &table, &OracleLookup).unwrap(), 0);
    }

    #[test]
    fn streak_exception_consistency_small() {
        // n is an exception iff its streak covers every prime p with p^2 <= n
        let table = PrimeTable::build(100).unwrap();
        let report = verify_range(1, 2_000, &cfg(2_000, 1)).unwrap();
        let exceptional: Vec<u64> = report.exceptions.iter().map(|e| e.n).collect();
        for n in 1..2_000u64 {
            let streak = streak_of(n, &table, &OracleLookup).unwrap();
            let pi_sqrt = table
                .primes()
                .iter()
                .take_while(|&&p| (p as u128) * (p as u128) <= n as u128)
                .count() as u32;
            assert_eq!(
                streak >= pi_sqrt,
                exceptional.contains(&n),
                "consistency fails at {n}"
            );
        }
    }

    #[test]
    fn report_serializes_with_range_field() {
        let report = verify_range(4, 6, &cfg(10, 1)).unwrap();
        let json = serde_json::to_value(&report).unwrap();
        assert_eq!(json["range"][0], 4);
        assert_eq!(json["range"][1], 6);
        assert!(json["exceptions"].as_array().unwrap().is_empty());
    }
}
