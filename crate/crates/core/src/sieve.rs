//! Segmented sieve of Eratosthenes with streaming segment access, an optional
//! binary cache file, and the prime-counting function with the half-jump
//! convention at primes.
//!
//! Construction keeps only base primes (up to sqrt(limit)) and cumulative
//! counts at segment boundaries, so memory is bounded by the segment size,
//! not the limit. Segments are re-sieved on demand; a sieve loaded from a
//! cache file keeps its blocks in memory instead.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::real::Real;

/// 2^20 numbers per segment: the inner loops stay cache resident.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;

const CACHE_MAGIC: &[u8; 5] = b"MSRV1";
const MAX_LIMIT: u64 = 1 << 40;

/// One sieved block: bit `i` of `bits[i/64]` set iff `lo + i` is prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SievedSegment {
    lo: u64,
    len: u64,
    bits: Vec<u64>,
}

impl SievedSegment {
    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains_prime(&self, n: u64) -> bool {
        debug_assert!(n >= self.lo && n < self.lo + self.len);
        let i = (n - self.lo) as usize;
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Primes in [lo, lo+len) intersected with [.., upto], ascending.
    pub fn count_upto(&self, upto: u64) -> u64 {
        let mut c = 0;
        self.for_each_prime(|p| {
            if p <= upto {
                c += 1;
            }
        });
        c
    }

    pub fn for_each_prime(&self, mut f: impl FnMut(u64)) {
        for (wi, &word) in self.bits.iter().enumerate() {
            let mut w = word;
            while w != 0 {
                let b = w.trailing_zeros() as u64;
                f(self.lo + wi as u64 * 64 + b);
                w &= w - 1;
            }
        }
    }
}

/// Segmented prime table up to `limit`.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    limit: u64,
    segment_size: u64,
    base_primes: Vec<u64>,
    count_index: Vec<u64>,
    cached: Option<Vec<SievedSegment>>,
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    let mut is_p = vec![true; n + 1];
    is_p[0] = false;
    if n >= 1 {
        is_p[1] = false;
    }
    let mut i = 2usize;
    while i * i <= n {
        if is_p[i] {
            let mut j = i * i;
            while j <= n {
                is_p[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&i| is_p[i]).map(|i| i as u64).collect()
}

fn sieve_segment(lo: u64, len: u64, base: &[u64]) -> SievedSegment {
    let words = (len as usize).div_ceil(64);
    let mut bits = vec![!0u64; words];
    // clear bits beyond len
    let tail = (len % 64) as u32;
    if tail != 0 {
        bits[words - 1] = (1u64 << tail) - 1;
    }
    let clear = |bits: &mut [u64], i: u64| {
        bits[(i / 64) as usize] &= !(1u64 << (i % 64));
    };
    for k in lo..(lo + len).min(2) {
        clear(&mut bits, k - lo);
    }
    let hi = lo + len - 1;
    for &p in base {
        if p * p > hi {
            break;
        }
        let start = std::cmp::max(p * p, lo.div_ceil(p) * p);
        let mut j = start;
        while j <= hi {
            if j != p {
                clear(&mut bits, j - lo);
            }
            j += p;
        }
    }
    SievedSegment { lo, len, bits }
}

impl PrimeSieve {
    /// Streams the sieve once to build boundary counts; memory stays bounded
    /// by the segment size.
    pub fn build(limit: u64) -> Result<Self> {
        Self::with_segment_size(limit, DEFAULT_SEGMENT_SIZE)
    }

    pub fn with_segment_size(limit: u64, segment_size: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::domain("sieve_primes", "limit must be at least 2"));
        }
        if limit > MAX_LIMIT {
            return Err(Error::domain("sieve_primes", "limit above 2^40 not admissible"));
        }
        assert!(segment_size >= 64, "segment size too small");
        let base_primes = simple_sieve(limit.isqrt());
        let n_segments = (limit + 1).div_ceil(segment_size) as usize;

        let counts = sieve_all_counts(limit, segment_size, &base_primes, n_segments);

        let mut count_index = Vec::with_capacity(n_segments);
        let mut acc = 0u64;
        for c in counts {
            acc += c;
            count_index.push(acc);
        }
        Ok(PrimeSieve { limit, segment_size, base_primes, count_index, cached: None })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn segment_size(&self) -> u64 {
        self.segment_size
    }

    pub fn n_segments(&self) -> usize {
        self.count_index.len()
    }

    /// pi(limit).
    pub fn prime_count_total(&self) -> u64 {
        *self.count_index.last().unwrap()
    }

    fn segment_bounds(&self, index: usize) -> (u64, u64) {
        let lo = index as u64 * self.segment_size;
        let len = std::cmp::min(self.segment_size, self.limit + 1 - lo);
        (lo, len)
    }

    /// The sieved block holding segment `index` (from cache or re-sieved).
    pub fn segment(&self, index: usize) -> SievedSegment {
        if let Some(cached) = &self.cached {
            return cached[index].clone();
        }
        let (lo, len) = self.segment_bounds(index);
        sieve_segment(lo, len, &self.base_primes)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        if n < 2 || n > self.limit {
            return false;
        }
        let idx = (n / self.segment_size) as usize;
        if let Some(cached) = &self.cached {
            return cached[idx].contains_prime(n);
        }
        // avoid a full segment pass for membership: trial divide by base primes
        for &p in &self.base_primes {
            if p * p > n {
                break;
            }
            if n.is_multiple_of(p) {
                return n == p;
            }
        }
        true
    }

    /// Number of primes <= x.
    pub fn count_le(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::OutOfRange { x: x.to_string(), limit: self.limit });
        }
        if x < 2 {
            return Ok(0);
        }
        let idx = (x / self.segment_size) as usize;
        let before = if idx == 0 { 0 } else { self.count_index[idx - 1] };
        let seg = self.segment(idx);
        Ok(before + seg.count_upto(x))
    }

    /// Prime-counting with the half-jump convention: at a prime the value is
    /// the average of the two sides of the step.
    pub fn prime_count(&self, x: f64) -> Result<HalfInt> {
        if x <= 0.0 || x.is_nan() {
            return Err(Error::domain("prime_count", "requires x > 0"));
        }
        if x > self.limit as f64 {
            return Err(Error::OutOfRange { x: x.to_string(), limit: self.limit });
        }
        let floor = x.floor() as u64;
        self.prime_count_parts(floor, x == floor as f64)
    }

    /// Same as [`prime_count`](Self::prime_count) for a high-precision x.
    pub fn prime_count_real(&self, x: &Real) -> Result<HalfInt> {
        if !x.is_positive() {
            return Err(Error::domain("prime_count", "requires x > 0"));
        }
        let (floor, exact) = x.floor_u64().map_err(|_| Error::OutOfRange {
            x: x.to_decimal_string(),
            limit: self.limit,
        })?;
        if floor > self.limit || (floor == self.limit && !exact) {
            return Err(Error::OutOfRange { x: x.to_decimal_string(), limit: self.limit });
        }
        self.prime_count_parts(floor, exact)
    }

    fn prime_count_parts(&self, floor: u64, is_integer: bool) -> Result<HalfInt> {
        let c = self.count_le(floor)?;
        if is_integer && self.is_prime(floor) {
            Ok(HalfInt(2 * c - 1))
        } else {
            Ok(HalfInt(2 * c))
        }
    }

    /// Ascending primes in [lo, hi].
    pub fn for_each_prime(&self, lo: u64, hi: u64, mut f: impl FnMut(u64)) -> Result<()> {
        if hi > self.limit {
            return Err(Error::OutOfRange { x: hi.to_string(), limit: self.limit });
        }
        let first = (lo / self.segment_size) as usize;
        let last = (hi / self.segment_size) as usize;
        for idx in first..=last {
            self.segment(idx).for_each_prime(|p| {
                if p >= lo && p <= hi {
                    f(p);
                }
            });
        }
        Ok(())
    }

    pub fn primes_in(&self, lo: u64, hi: u64) -> Result<Vec<u64>> {
        let mut v = Vec::new();
        self.for_each_prime(lo, hi, |p| v.push(p))?;
        Ok(v)
    }

    /// Maps every segment through `f` and returns results in segment order.
    /// With the `parallel` feature the map runs across threads; the fixed
    /// combination order keeps reductions deterministic.
    pub fn map_segments_ordered<T: Send>(&self, f: impl Fn(&SievedSegment) -> T + Sync) -> Vec<T> {
        self.map_segments_range_ordered(0, self.n_segments() - 1, f)
    }

    /// Same over segment indices `first..=last` only.
    pub fn map_segments_range_ordered<T: Send>(
        &self,
        first: usize,
        last: usize,
        f: impl Fn(&SievedSegment) -> T + Sync,
    ) -> Vec<T> {
        assert!(first <= last && last < self.n_segments());
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (first..=last).into_par_iter().map(|i| f(&self.segment(i))).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (first..=last).map(|i| f(&self.segment(i))).collect()
        }
    }

    /// Writes the cache file: magic "MSRV1", limit as 8-byte little-endian,
    /// then the bit-packed segments.
    pub fn save_cache(&self, path: &Path) -> Result<()> {
        let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&self.limit.to_le_bytes())?;
        for i in 0..self.n_segments() {
            let seg = self.segment(i);
            for word in &seg.bits {
                w.write_all(&word.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Loads a cache file written by [`save_cache`](Self::save_cache). The
    /// cache is an optimization only: a malformed file is an error, never a
    /// silently-trusted table, and blocks are re-validated by length.
    pub fn load_cache(path: &Path) -> Result<Self> {
        let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut magic = [0u8; 5];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Data("sieve cache: bad magic bytes".into()));
        }
        let mut lim = [0u8; 8];
        r.read_exact(&mut lim)?;
        let limit = u64::from_le_bytes(lim);
        if !(2..=MAX_LIMIT).contains(&limit) {
            return Err(Error::Data("sieve cache: limit out of range".into()));
        }
        let segment_size = DEFAULT_SEGMENT_SIZE;
        let n_segments = (limit + 1).div_ceil(segment_size) as usize;
        let mut cached = Vec::with_capacity(n_segments);
        let mut count_index = Vec::with_capacity(n_segments);
        let mut acc = 0u64;
        for idx in 0..n_segments {
            let lo = idx as u64 * segment_size;
            let len = std::cmp::min(segment_size, limit + 1 - lo);
            let words = (len as usize).div_ceil(64);
            let mut bits = vec![0u64; words];
            for w in bits.iter_mut() {
                let mut buf = [0u8; 8];
                r.read_exact(&mut buf).map_err(|_| Error::Data("sieve cache: truncated".into()))?;
                *w = u64::from_le_bytes(buf);
            }
            let seg = SievedSegment { lo, len, bits };
            acc += seg.count();
            count_index.push(acc);
            cached.push(seg);
        }
        let base_primes = simple_sieve(limit.isqrt());
        Ok(PrimeSieve { limit, segment_size, base_primes, count_index, cached: Some(cached) })
    }
}

fn sieve_all_counts(limit: u64, segment_size: u64, base: &[u64], n_segments: usize) -> Vec<u64> {
    let one = |i: usize| {
        let lo = i as u64 * segment_size;
        let len = std::cmp::min(segment_size, limit + 1 - lo);
        sieve_segment(lo, len, base).count()
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n_segments).into_par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_segments).map(one).collect()
    }
}

/// A count that may sit half way up a jump of the prime staircase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct HalfInt(u64);

impl HalfInt {
    pub fn from_doubled(d: u64) -> Self {
        HalfInt(d)
    }

    pub fn doubled(&self) -> u64 {
        self.0
    }

    pub fn is_integral(&self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_f64(&self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl std::fmt::Display for HalfInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_integral() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}.5", self.0 / 2)
        }
    }
}
