//! Brute-force point counting of symmetric matrices over small prime fields.
//!
//! Matrices are stored as a packed upper triangle in row order:
//! `x11, x12, .., x1n, x22, .., x2n, .., xnn`. Enumeration treats the packed
//! vector as a base-`p` number with the first entry most significant, so the
//! first `n` entries (the first row) vary slowest and the trailing
//! `n(n-1)/2` entries are exactly the packed (1,1) minor.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

/// Default cap on the number of matrices a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 200_000_000;

/// Cap on the number of completions examined for one minor.
pub const COMPLETION_BUDGET: u64 = 10_000_000;

pub const MAX_PRIME: u64 = 97;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("modulus {0} is not an odd prime")]
    OddPrimeRequired(u64),
    #[error("modulus {0} exceeds the supported maximum {MAX_PRIME}")]
    ModulusTooLarge(u64),
    #[error("enumeration needs {required} matrix visits, budget is {budget}")]
    BudgetExceeded { required: BigUint, budget: u64 },
    #[error("{count} is not divisible by {divisor}")]
    NonintegralQuotient { count: u64, divisor: u64 },
    #[error("matrix size must be at least 1")]
    EmptyMatrix,
    #[error("expected {expected} packed entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },
    #[error("parts must be at least 1")]
    NoParts,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `F_p` for an odd prime `p <= 97`, with a lookup table of inverses.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    p: u8,
    inverse: Vec<u8>,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p == 2 || !is_prime(p) {
            return Err(FieldError::OddPrimeRequired(p));
        }
        if p > MAX_PRIME {
            return Err(FieldError::ModulusTooLarge(p));
        }
        let mut inverse = vec![0u8; p as usize];
        for x in 1..p {
            let y = (1..p).find(|y| x * y % p == 1).expect("F_p is a field");
            inverse[x as usize] = y as u8;
        }
        Ok(Self { p: p as u8, inverse })
    }

    pub fn modulus(&self) -> u64 {
        u64::from(self.p)
    }

    #[inline]
    pub fn inv(&self, x: u8) -> u8 {
        debug_assert!(x != 0 && x < self.p);
        self.inverse[x as usize]
    }

    #[inline]
    fn mul(&self, a: u8, b: u8) -> u8 {
        ((u16::from(a) * u16::from(b)) % u16::from(self.p)) as u8
    }

    #[inline]
    fn sub(&self, a: u8, b: u8) -> u8 {
        let p = u16::from(self.p);
        ((u16::from(a) + p - u16::from(b)) % p) as u8
    }

    pub fn reduce(&self, x: i64) -> u8 {
        x.rem_euclid(i64::from(self.p)) as u8
    }

    /// `p^e` when it fits in a `u64`.
    pub fn pow(&self, e: u32) -> Option<u64> {
        self.modulus().checked_pow(e)
    }
}

/// Number of packed entries of an `n x n` symmetric matrix.
pub fn packed_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Index of `(i, j)`, `i <= j`, in the packed upper triangle.
#[inline]
fn packed_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    i * n - i * (i + 1) / 2 + j
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix {
    n: usize,
    entries: Vec<u8>,
}

impl SymMatrix {
    pub fn zero(n: usize) -> Self {
        Self { n, entries: vec![0; packed_len(n)] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[packed_index(n, i, i)] = 1;
        }
        m
    }

    /// Builds from packed upper-triangle entries, reducing each mod `p`.
    pub fn from_packed(n: usize, entries: &[i64], field: &PrimeField) -> Result<Self, FieldError> {
        if entries.len() != packed_len(n) {
            return Err(FieldError::EntryCount {
                expected: packed_len(n),
                actual: entries.len(),
            });
        }
        Ok(Self {
            n,
            entries: entries.iter().map(|&x| field.reduce(x)).collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn packed(&self) -> &[u8] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.entries[packed_index(self.n, a, b)]
    }

    /// Row-major `n x n` expansion.
    pub fn unpack(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.n * self.n];
        unpack_into(self.n, &self.entries, &mut out);
        out
    }

    /// The (1,1) minor: first row and column deleted.
    pub fn minor(&self) -> SymMatrix {
        let n = self.n.saturating_sub(1);
        Self {
            n,
            entries: self.entries[self.n.min(self.entries.len())..].to_vec(),
        }
    }
}

fn unpack_into(n: usize, packed: &[u8], out: &mut [u8]) {
    let mut idx = 0;
    for i in 0..n {
        for j in i..n {
            let x = packed[idx];
            out[i * n + j] = x;
            out[j * n + i] = x;
            idx += 1;
        }
    }
}

/// Rank of a row-major `n x n` matrix by Gaussian elimination; `buf` is
/// clobbered.
pub fn rank_in_place(buf: &mut [u8], n: usize, field: &PrimeField) -> usize {
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..n).find(|&r| buf[r * n + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for c in col..n {
                buf.swap(pivot * n + c, rank * n + c);
            }
        }
        let inv = field.inv(buf[rank * n + col]);
        for r in rank + 1..n {
            let lead = buf[r * n + col];
            if lead == 0 {
                continue;
            }
            let factor = field.mul(lead, inv);
            for c in col..n {
                let v = field.mul(factor, buf[rank * n + c]);
                buf[r * n + c] = field.sub(buf[r * n + c], v);
            }
        }
        rank += 1;
        if rank == n {
            break;
        }
    }
    rank
}

/// Rank over `F_p`.
pub fn rank(m: &SymMatrix, field: &PrimeField) -> usize {
    let mut buf = m.unpack();
    rank_in_place(&mut buf, m.n, field)
}

/// `counts[k]` = number of `n x n` symmetric matrices over `F_p` of rank `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankHistogram {
    pub n: usize,
    pub p: u64,
    pub counts: Vec<u64>,
}

impl RankHistogram {
    pub fn empty(n: usize, p: u64) -> Self {
        Self { n, p, counts: vec![0; n + 1] }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Element-wise sum; both sides must describe the same `(n, p)`.
    pub fn merge(&mut self, other: &RankHistogram) {
        assert_eq!((self.n, self.p), (other.n, other.p));
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    /// `n,p,k,count` rows with a header, ascending `k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p,k,count\n");
        for (k, c) in self.counts.iter().enumerate() {
            writeln!(out, "{},{},{},{}", self.n, self.p, k, c).unwrap();
        }
        out
    }
}

/// Joint distribution of (rank of the (1,1) minor, rank of the matrix).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberCensus {
    pub n: usize,
    pub p: u64,
    pub table: BTreeMap<(usize, usize), u64>,
}

impl FiberCensus {
    pub fn count(&self, minor_rank: usize, full_rank: usize) -> u64 {
        self.table.get(&(minor_rank, full_rank)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.table.values().sum()
    }

    /// Histogram of full ranks, summed over minor ranks.
    pub fn full_rank_marginal(&self) -> RankHistogram {
        let mut h = RankHistogram::empty(self.n, self.p);
        for (&(_, s), &c) in &self.table {
            h.counts[s] += c;
        }
        h
    }

    /// Number of matrices per minor rank (each minor counted `p^n` times).
    pub fn minor_rank_marginal(&self) -> Vec<u64> {
        let mut out = vec![0; self.n.max(1)];
        for (&(r, _), &c) in &self.table {
            out[r] += c;
        }
        out
    }

    /// `n,p,minor_rank,full_rank,count` rows with a header, ascending keys.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p,minor_rank,full_rank,count\n");
        for (&(r, s), c) in &self.table {
            writeln!(out, "{},{},{},{},{}", self.n, self.p, r, s, c).unwrap();
        }
        out
    }
}

/// Closed-form number of completions of a rank-`r` minor of size `n - 1`
/// to an `n x n` matrix of rank `s`: `p^r` for `s = r`, `p^r (p - 1)` for
/// `s = r + 1`, `p^n - p^{r+1}` for `s = r + 2`, zero otherwise.
pub fn expected_completions(p: u64, n: usize, r: usize, s: usize) -> u64 {
    let pr = p.pow(r as u32);
    match s.checked_sub(r) {
        Some(0) => pr,
        Some(1) => pr * (p - 1),
        Some(2) => p.pow(n as u32) - pr * p,
        _ => 0,
    }
}

fn check_budget(field: &PrimeField, entries: usize, budget: u64) -> Result<u64, FieldError> {
    let required = BigUint::from(field.modulus()).pow(entries as u32);
    match required.to_u64() {
        Some(r) if r <= budget => Ok(r),
        _ => Err(FieldError::BudgetExceeded { required, budget }),
    }
}

/// Base-`p` odometer over packed entries, last entry fastest.
struct Odometer {
    digits: Vec<u8>,
    p: u8,
}

impl Odometer {
    fn starting_at(len: usize, p: u8, mut index: u64) -> Self {
        let mut digits = vec![0u8; len];
        for d in digits.iter_mut().rev() {
            *d = (index % u64::from(p)) as u8;
            index /= u64::from(p);
        }
        Self { digits, p }
    }

    fn advance(&mut self) {
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.p {
                return;
            }
            *d = 0;
        }
    }
}

/// Histogram over the contiguous index range `[start, start + len)`.
fn histogram_range(n: usize, field: &PrimeField, start: u64, len: u64) -> RankHistogram {
    let mut hist = RankHistogram::empty(n, field.modulus());
    let mut odo = Odometer::starting_at(packed_len(n), field.p, start);
    let mut buf = vec![0u8; n * n];
    for _ in 0..len {
        unpack_into(n, &odo.digits, &mut buf);
        hist.counts[rank_in_place(&mut buf, n, field)] += 1;
        odo.advance();
    }
    hist
}

fn part_bounds(total: u64, parts: u64) -> impl Iterator<Item = (u64, u64)> {
    (0..parts).map(move |i| {
        let lo = total * i / parts;
        let hi = total * (i + 1) / parts;
        (lo, hi - lo)
    })
}

#[cfg(feature = "parallel")]
fn map_parts<T: Send>(bounds: Vec<(u64, u64)>, f: impl Fn(u64, u64) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    bounds.into_par_iter().map(|(lo, len)| f(lo, len)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_parts<T: Send>(bounds: Vec<(u64, u64)>, f: impl Fn(u64, u64) -> T + Sync + Send) -> Vec<T> {
    bounds.into_iter().map(|(lo, len)| f(lo, len)).collect()
}

/// Splits the enumeration into `parts` contiguous ranges of the traversal
/// order. When `parts = p^j` each range fixes the first `j` packed entries.
/// The histograms always sum to [`enumerate_rank_counts`].
pub fn partitioned_enumeration(
    n: usize,
    field: &PrimeField,
    parts: u64,
    budget: u64,
) -> Result<Vec<RankHistogram>, FieldError> {
    if parts == 0 {
        return Err(FieldError::NoParts);
    }
    let total = check_budget(field, packed_len(n), budget)?;
    let bounds: Vec<_> = part_bounds(total, parts).collect();
    Ok(map_parts(bounds, |lo, len| histogram_range(n, field, lo, len)))
}

/// Exhaustive rank histogram of all `p^{n(n+1)/2}` symmetric matrices.
pub fn enumerate_rank_counts(
    n: usize,
    field: &PrimeField,
    budget: u64,
) -> Result<RankHistogram, FieldError> {
    let total = check_budget(field, packed_len(n), budget)?;
    let parts = total.clamp(1, 256);
    let mut hist = RankHistogram::empty(n, field.modulus());
    for h in partitioned_enumeration(n, field, parts, budget)? {
        hist.merge(&h);
    }
    Ok(hist)
}

/// Ranks of all `p^n` completions of `minor` (size `n - 1`) to an `n x n`
/// symmetric matrix, keyed by rank.
pub fn completions_census(
    minor: &SymMatrix,
    field: &PrimeField,
) -> Result<BTreeMap<usize, u64>, FieldError> {
    let n = minor.n + 1;
    let total = check_budget(field, n, COMPLETION_BUDGET)?;
    let mut packed = vec![0u8; packed_len(n)];
    packed[n..].copy_from_slice(&minor.entries);
    let mut buf = vec![0u8; n * n];
    let mut out = BTreeMap::new();
    let mut odo = Odometer::starting_at(n, field.p, 0);
    for _ in 0..total {
        packed[..n].copy_from_slice(&odo.digits);
        unpack_into(n, &packed, &mut buf);
        *out.entry(rank_in_place(&mut buf, n, field)).or_insert(0) += 1;
        odo.advance();
    }
    Ok(out)
}

/// Exhaustive (minor rank, full rank) census for `n x n` matrices.
///
/// For `n = 1` the minor is the empty `0 x 0` matrix, taken to have rank 0.
pub fn fiber_census(n: usize, field: &PrimeField, budget: u64) -> Result<FiberCensus, FieldError> {
    if n == 0 {
        return Err(FieldError::EmptyMatrix);
    }
    check_budget(field, packed_len(n), budget)?;
    let minors = field.pow(packed_len(n - 1) as u32).expect("within budget");
    let completions = field.pow(n as u32).expect("within budget");
    let parts = minors.clamp(1, 256);
    let bounds: Vec<_> = part_bounds(minors, parts).collect();
    let partial = map_parts(bounds, |lo, len| {
        let mut table: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut minor_odo = Odometer::starting_at(packed_len(n - 1), field.p, lo);
        let mut packed = vec![0u8; packed_len(n)];
        let mut minor_buf = vec![0u8; (n - 1) * (n - 1)];
        let mut buf = vec![0u8; n * n];
        for _ in 0..len {
            unpack_into(n - 1, &minor_odo.digits, &mut minor_buf);
            let r = rank_in_place(&mut minor_buf, n - 1, field);
            packed[n..].copy_from_slice(&minor_odo.digits);
            let mut row = Odometer::starting_at(n, field.p, 0);
            for _ in 0..completions {
                packed[..n].copy_from_slice(&row.digits);
                unpack_into(n, &packed, &mut buf);
                *table.entry((r, rank_in_place(&mut buf, n, field))).or_insert(0) += 1;
                row.advance();
            }
            minor_odo.advance();
        }
        table
    });
    let mut table = BTreeMap::new();
    for t in partial {
        for (key, c) in t {
            *table.entry(key).or_insert(0) += c;
        }
    }
    Ok(FiberCensus { n, p: field.modulus(), table })
}

/// Number of full-rank `n x n` symmetric matrices up to nonzero scalars.
pub fn projective_count(n: usize, field: &PrimeField, budget: u64) -> Result<u64, FieldError> {
    if n == 0 {
        return Err(FieldError::EmptyMatrix);
    }
    let full = enumerate_rank_counts(n, field, budget)?.counts[n];
    let divisor = field.modulus() - 1;
    if full % divisor != 0 {
        return Err(FieldError::NonintegralQuotient { count: full, divisor });
    }
    Ok(full / divisor)
}
