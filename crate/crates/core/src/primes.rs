//! Segmented sieve, exact prime counting and the on-disk checkpoint cache.
//!
//! Cache layout (ASCII, one record per line):
//!
//! ```text
//! THETAZETA-PRIMECACHE v1 limit=<n> stride=<s>
//! <t>,<pi(t)>
//! ...
//! checksum=<sum of all pi values mod 2^61 - 1>
//! ```
//!
//! Checkpoints sit at every multiple of the stride up to the limit, plus the
//! limit itself. Primes are not persisted; they are re-sieved on load.

use crate::error::{Error, Result};
use crate::exec::{self, ExecPolicy};
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

pub const DEFAULT_SEGMENT_SIZE: usize = 1 << 20;
pub const DEFAULT_STRIDE: u64 = 1 << 16;
/// Primes are stored as `u32`.
pub const MAX_LIMIT: u64 = u32::MAX as u64;

const CACHE_MAGIC: &str = "THETAZETA-PRIMECACHE";
const CACHE_VERSION: u32 = 1;
const CHECKSUM_MODULUS: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SieveConfig {
    /// Numbers covered by one segment.
    pub segment_size: usize,
    /// Distance between persisted checkpoints.
    pub stride: u64,
    pub memory_budget_bytes: usize,
    pub exec: ExecPolicy,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig {
            segment_size: DEFAULT_SEGMENT_SIZE,
            stride: DEFAULT_STRIDE,
            memory_budget_bytes: 4 << 30,
            exec: ExecPolicy::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Checkpoint {
    pub t: u64,
    pub count: u64,
}

/// All primes up to `limit` with `(t, π(t))` checkpoints. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    stride: u64,
    primes: Vec<u32>,
    checkpoints: Vec<Checkpoint>,
}

pub fn generate_primes(limit: u64) -> Result<PrimeTable> {
    generate_primes_with(limit, &SieveConfig::default())
}

pub fn generate_primes_with(limit: u64, cfg: &SieveConfig) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::Domain(format!("prime limit must be at least 2, got {limit}")));
    }
    if limit > MAX_LIMIT {
        return Err(Error::Resource(format!("prime limit {limit} exceeds the supported maximum {MAX_LIMIT}")));
    }
    if cfg.stride == 0 || cfg.segment_size < 64 {
        return Err(Error::Config("stride must be positive and segment_size at least 64".into()));
    }
    let required = estimated_bytes(limit, cfg);
    if required > cfg.memory_budget_bytes {
        return Err(Error::Resource(format!(
            "sieving to {limit} needs about {required} bytes (segment size {} numbers, {} bytes per segment buffer) but the budget is {} bytes",
            cfg.segment_size,
            cfg.segment_size / 2,
            cfg.memory_budget_bytes
        )));
    }
    let primes = sieve_range(2, limit + 1, cfg.segment_size, cfg.exec);
    let checkpoints = checkpoints_for(&primes, limit, cfg.stride);
    Ok(PrimeTable { limit, stride: cfg.stride, primes, checkpoints })
}

fn estimated_bytes(limit: u64, cfg: &SieveConfig) -> usize {
    let x = limit as f64;
    // pi(x) < 1.25506 x / ln x for x > 1
    let prime_bytes = if limit < 17 { 64.0 } else { 1.25506 * x / x.ln() * 4.0 };
    let threads = if cfg.exec.is_parallel() { 64.0 } else { 1.0 };
    let segment_bytes = (cfg.segment_size / 2) as f64 * threads;
    let checkpoint_bytes = (limit / cfg.stride + 1) as f64 * 16.0;
    (prime_bytes + segment_bytes + checkpoint_bytes) as usize
}

fn checkpoints_for(primes: &[u32], limit: u64, stride: u64) -> Vec<Checkpoint> {
    let mut out = Vec::with_capacity((limit / stride + 1) as usize);
    let mut idx = 0usize;
    let mut t = stride;
    loop {
        let at = t.min(limit);
        while idx < primes.len() && primes[idx] as u64 <= at {
            idx += 1;
        }
        out.push(Checkpoint { t: at, count: idx as u64 });
        if at == limit {
            break;
        }
        t += stride;
    }
    out
}

/// Plain Eratosthenes up to and including `n`; used for the sieving primes.
fn small_primes(n: u64) -> Vec<u32> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Primes in `[lo, hi)`, odd-only segment buffer.
fn sieve_segment(lo: u64, hi: u64, base: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    if hi <= lo {
        return out;
    }
    if lo <= 2 && 2 < hi {
        out.push(2);
    }
    let first = if lo <= 3 { 3 } else { lo | 1 };
    if first >= hi {
        return out;
    }
    let len = ((hi - first + 1) / 2) as usize;
    let mut composite = vec![false; len];
    for &p in base.iter().skip(1) {
        let p = p as u64;
        if p * p >= hi {
            break;
        }
        let mut start = (p * p).max(first.div_ceil(p) * p);
        if start % 2 == 0 {
            start += p;
        }
        let mut i = ((start - first) / 2) as usize;
        let step = p as usize;
        while i < len {
            composite[i] = true;
            i += step;
        }
    }
    out.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| (first + 2 * i as u64) as u32),
    );
    out
}

fn sieve_range(lo: u64, hi: u64, segment_size: usize, policy: ExecPolicy) -> Vec<u32> {
    let base = small_primes(((hi as f64).sqrt() as u64) + 1);
    let seg = segment_size as u64;
    let n_segments = (hi - lo).div_ceil(seg) as usize;
    let pieces = exec::map_range(policy, n_segments, |i| {
        let a = lo + i as u64 * seg;
        sieve_segment(a, (a + seg).min(hi), &base)
    });
    let total = pieces.iter().map(Vec::len).sum();
    let mut primes = Vec::with_capacity(total);
    for p in pieces {
        primes.extend(p);
    }
    primes
}

/// Number of primes in `(lo, hi]` by sieving just that window.
pub fn count_primes_between(lo: u64, hi: u64) -> u64 {
    if hi <= lo {
        return 0;
    }
    let base = small_primes(((hi as f64).sqrt() as u64) + 1);
    let mut count = 0u64;
    let mut a = lo + 1;
    let seg = DEFAULT_SEGMENT_SIZE as u64;
    while a <= hi {
        let b = (a + seg).min(hi + 1);
        count += sieve_segment(a, b, &base).len() as u64;
        a = b;
    }
    count
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    /// Primes `p <= t`.
    pub fn primes_up_to(&self, t: f64) -> Result<&[u32]> {
        let n = self.prime_count(t)? as usize;
        Ok(&self.primes[..n])
    }

    /// Exact π(t) under the right-continuous convention; π(t) = π(⌊t⌋).
    pub fn prime_count(&self, t: f64) -> Result<u64> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain(format!("prime_count needs a nonnegative argument, got {t}")));
        }
        if t > self.limit as f64 {
            return Err(Error::OutOfRange(format!("t = {t} exceeds the sieved limit {}; extend the table", self.limit)));
        }
        let n = t.floor() as u64;
        Ok(self.count_u64(n))
    }

    fn count_u64(&self, n: u64) -> u64 {
        // checkpoint narrows the search window
        let k = self.checkpoints.partition_point(|c| c.t <= n);
        let (lo_idx, hi_idx) = match k {
            0 => (0, self.checkpoints.first().map_or(self.primes.len(), |c| c.count as usize)),
            _ => {
                let lo = self.checkpoints[k - 1].count as usize;
                let hi = self.checkpoints.get(k).map_or(self.primes.len(), |c| c.count as usize);
                (lo, hi)
            }
        };
        let window = &self.primes[lo_idx..hi_idx];
        (lo_idx + window.partition_point(|&p| p as u64 <= n)) as u64
    }

    pub fn index(&self) -> CheckpointIndex {
        CheckpointIndex { limit: self.limit, stride: self.stride, checkpoints: self.checkpoints.clone() }
    }
}

/// The persisted part of a [`PrimeTable`]: its checkpoints only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckpointIndex {
    pub limit: u64,
    pub stride: u64,
    pub checkpoints: Vec<Checkpoint>,
}

impl CheckpointIndex {
    fn checksum(&self) -> u64 {
        self.checkpoints.iter().fold(0u64, |acc, c| (acc + c.count % CHECKSUM_MODULUS) % CHECKSUM_MODULUS)
    }

    /// π(n) from the nearest checkpoint below `n` plus a sieve of the gap.
    pub fn prime_count(&self, n: u64) -> Result<u64> {
        if n > self.limit {
            return Err(Error::OutOfRange(format!("n = {n} exceeds the cached limit {}", self.limit)));
        }
        let k = self.checkpoints.partition_point(|c| c.t <= n);
        let (t0, c0) = if k == 0 { (1, 0) } else { (self.checkpoints[k - 1].t, self.checkpoints[k - 1].count) };
        Ok(c0 + count_primes_between(t0, n))
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{CACHE_MAGIC} v{CACHE_VERSION} limit={} stride={}\n", self.limit, self.stride);
        for c in &self.checkpoints {
            s.push_str(&format!("{},{}\n", c.t, c.count));
        }
        s.push_str(&format!("checksum={}\n", self.checksum()));
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Format("empty file".into()))?;
        let (limit, stride) = parse_header(header)?;
        let mut checkpoints = Vec::new();
        let mut checksum = None;
        for line in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if checksum.is_some() {
                return Err(Error::Format("data after checksum line".into()));
            }
            if let Some(v) = line.strip_prefix("checksum=") {
                checksum = Some(v.parse::<u64>().map_err(|_| Error::Format(format!("bad checksum line `{line}`")))?);
                continue;
            }
            let (t, c) = line.split_once(',').ok_or_else(|| Error::Format(format!("bad checkpoint line `{line}`")))?;
            let t = t.parse::<u64>().map_err(|_| Error::Format(format!("bad checkpoint t in `{line}`")))?;
            let count = c.parse::<u64>().map_err(|_| Error::Format(format!("bad checkpoint count in `{line}`")))?;
            checkpoints.push(Checkpoint { t, count });
        }
        let checksum = checksum.ok_or_else(|| Error::Format("missing checksum line (truncated file?)".into()))?;
        let index = CheckpointIndex { limit, stride, checkpoints };
        if index.checksum() != checksum {
            return Err(Error::Format(format!("checksum mismatch: stored {checksum}, computed {}", index.checksum())));
        }
        index.validate()?;
        Ok(index)
    }

    fn validate(&self) -> Result<()> {
        if self.checkpoints.is_empty() {
            return Err(Error::Format("no checkpoints".into()));
        }
        for w in self.checkpoints.windows(2) {
            if w[1].t <= w[0].t || w[1].count < w[0].count {
                return Err(Error::Format("checkpoints are not ascending".into()));
            }
        }
        if self.checkpoints.last().map(|c| c.t) != Some(self.limit) {
            return Err(Error::Format("last checkpoint does not sit at the limit".into()));
        }
        Ok(())
    }
}

fn parse_header(header: &str) -> Result<(u64, u64)> {
    let mut parts = header.split_whitespace();
    if parts.next() != Some(CACHE_MAGIC) {
        return Err(Error::Format(format!("unrecognised header `{header}`")));
    }
    let version = parts
        .next()
        .and_then(|v| v.strip_prefix('v'))
        .and_then(|v| v.parse::<u32>().ok())
        .ok_or_else(|| Error::Format(format!("missing version in `{header}`")))?;
    if version != CACHE_VERSION {
        return Err(Error::Version(format!("file is v{version}, this build reads v{CACHE_VERSION}")));
    }
    let mut field = |name: &str| -> Result<u64> {
        parts
            .next()
            .and_then(|kv| kv.strip_prefix(name))
            .and_then(|v| v.parse::<u64>().ok())
            .ok_or_else(|| Error::Format(format!("missing `{name}` in header `{header}`")))
    };
    let limit = field("limit=")?;
    let stride = field("stride=")?;
    if limit < 2 || stride == 0 {
        return Err(Error::Format(format!("invalid limit/stride in header `{header}`")));
    }
    Ok((limit, stride))
}

/// Write the checkpoint cache. The file is staged next to `path` with an
/// exclusive create, so a concurrent writer fails instead of interleaving.
pub fn save_table(table: &PrimeTable, path: &Path) -> Result<()> {
    let staging = staging_path(path);
    let file = OpenOptions::new().write(true).create_new(true).open(&staging).map_err(|e| {
        Error::Io(format!("cannot stage cache at {} (another writer active?): {e}", staging.display()))
    })?;
    let mut w = BufWriter::new(file);
    let written = w.write_all(table.index().to_text().as_bytes()).and_then(|_| w.flush());
    drop(w);
    if let Err(e) = written {
        let _ = fs::remove_file(&staging);
        return Err(e.into());
    }
    fs::rename(&staging, path).map_err(|e| {
        let _ = fs::remove_file(&staging);
        Error::from(e)
    })
}

fn staging_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".partial");
    path.with_file_name(name)
}

pub fn read_index(path: &Path) -> Result<CheckpointIndex> {
    let file = fs::File::open(path)?;
    let mut text = String::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::Format(format!("unreadable cache: {e}")))?;
        text.push_str(&line);
        text.push('\n');
    }
    CheckpointIndex::parse(&text)
}

/// Read a cache and rebuild the table; the fresh sieve must reproduce every
/// stored checkpoint.
pub fn load_table(path: &Path) -> Result<PrimeTable> {
    let index = read_index(path)?;
    let cfg = SieveConfig { stride: index.stride, ..SieveConfig::default() };
    let table = generate_primes_with(index.limit, &cfg)?;
    if table.checkpoints != index.checkpoints {
        return Err(Error::Format("stored checkpoints disagree with a fresh sieve".into()));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_limits() {
        assert_eq!(generate_primes(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(generate_primes(2).unwrap().primes(), &[2]);
        let t = generate_primes(100).unwrap();
        assert_eq!(t.primes().len(), 25);
        assert_eq!(*t.primes().last().unwrap(), 97);
        assert!(matches!(generate_primes(1), Err(Error::Domain(_))));
    }

    #[test]
    fn matches_trial_division_across_segment_boundaries() {
        let cfg = SieveConfig { segment_size: 64, stride: 37, ..SieveConfig::default() };
        let t = generate_primes_with(5_000, &cfg).unwrap();
        let oracle: Vec<u32> = (0..=5_000u64).filter(|&n| is_prime(n)).map(|n| n as u32).collect();
        assert_eq!(t.primes(), oracle.as_slice());
        for c in t.checkpoints() {
            assert_eq!(c.count, oracle.iter().filter(|&&p| p as u64 <= c.t).count() as u64);
        }
        assert_eq!(t.checkpoints().last().unwrap().t, 5_000);
    }

    #[test]
    fn prime_count_conventions() {
        let t = generate_primes(1_000).unwrap();
        assert_eq!(t.prime_count(0.0).unwrap(), 0);
        assert_eq!(t.prime_count(1.99).unwrap(), 0);
        assert_eq!(t.prime_count(2.0).unwrap(), 1);
        assert_eq!(t.prime_count(10.0).unwrap(), 4);
        assert_eq!(t.prime_count(10.5).unwrap(), 4);
        assert_eq!(t.prime_count(1_000.0).unwrap(), 168);
        assert!(matches!(t.prime_count(1_000.5), Err(Error::OutOfRange(_))));
        assert!(matches!(t.prime_count(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn memory_budget_is_reported() {
        let cfg = SieveConfig { memory_budget_bytes: 1 << 10, ..SieveConfig::default() };
        match generate_primes_with(10_000_000, &cfg) {
            Err(Error::Resource(msg)) => assert!(msg.contains("segment size 1048576")),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn index_counts_without_the_table() {
        let cfg = SieveConfig { stride: 1_000, ..SieveConfig::default() };
        let t = generate_primes_with(20_000, &cfg).unwrap();
        let idx = t.index();
        for n in [0, 1, 2, 999, 1_000, 1_001, 9_797, 19_999, 20_000] {
            assert_eq!(idx.prime_count(n).unwrap(), t.prime_count(n as f64).unwrap(), "n = {n}");
        }
        assert!(idx.prime_count(20_001).is_err());
    }

    #[test]
    fn header_errors() {
        assert!(matches!(CheckpointIndex::parse(""), Err(Error::Format(_))));
        assert!(matches!(
            CheckpointIndex::parse("THETAZETA-PRIMECACHE v2 limit=10 stride=5\n5,3\n10,4\nchecksum=7\n"),
            Err(Error::Version(_))
        ));
        assert!(matches!(
            CheckpointIndex::parse("THETAZETA-PRIMECACHE v1 limit=10 stride=5\n5,3\n10,4\nchecksum=8\n"),
            Err(Error::Format(_))
        ));
        assert!(CheckpointIndex::parse("THETAZETA-PRIMECACHE v1 limit=10 stride=5\n5,3\n10,4\nchecksum=7\n").is_ok());
    }
}
