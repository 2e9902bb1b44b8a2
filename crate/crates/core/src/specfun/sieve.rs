use std::sync::{Arc, Mutex, OnceLock};

use crate::par;
use crate::{Error, Result};

pub const DEFAULT_SIEVE_CAP: u64 = 1_000_000_000;

const SEGMENT: u64 = 1 << 20;

/// Von Mangoldt table for n <= limit, stored as prime powers (p, k).
///
/// Primes are kept in a flat `u32` list; higher powers p^k (k >= 2) in a
/// separate sorted list. Λ(n) = log p is taken at read time, so the
/// "is a prime power" predicate is exact.
#[derive(Debug, Clone)]
pub struct MangoldtTable {
    limit: u64,
    primes: Vec<u32>,
    powers: Vec<(u64, u32, u32)>,
}

/// Process-wide table reused while it covers the requested limit.
pub fn shared_sieve(limit: u64) -> Result<Arc<MangoldtTable>> {
    static CACHE: OnceLock<Mutex<Option<Arc<MangoldtTable>>>> = OnceLock::new();
    let cell = CACHE.get_or_init(|| Mutex::new(None));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(t) = guard.as_ref() {
        if t.limit() >= limit {
            return Ok(Arc::clone(t));
        }
    }
    let table = Arc::new(mangoldt_sieve(limit)?);
    *guard = Some(Arc::clone(&table));
    Ok(table)
}

/// Builds the table up to `limit` with the default cap (10^9).
pub fn mangoldt_sieve(limit: u64) -> Result<MangoldtTable> {
    mangoldt_sieve_with_cap(limit, DEFAULT_SIEVE_CAP)
}

pub fn mangoldt_sieve_with_cap(limit: u64, cap: u64) -> Result<MangoldtTable> {
    if limit > cap || limit > u32::MAX as u64 {
        return Err(Error::SieveCapacity {
            limit,
            cap: cap.min(u32::MAX as u64),
        });
    }
    let limit = limit.max(2);
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root);

    let segments: Vec<u64> = (0..limit.div_ceil(SEGMENT)).collect();
    let chunks = par::map(&segments, |&s| {
        let lo = (s * SEGMENT).max(2);
        let hi = ((s + 1) * SEGMENT).min(limit + 1);
        sieve_segment(lo, hi, &base)
    });
    let mut primes = Vec::with_capacity(chunks.iter().map(Vec::len).sum());
    for c in chunks {
        primes.extend(c);
    }

    let mut powers = Vec::new();
    for &p in primes.iter() {
        let p64 = p as u64;
        if p64 * p64 > limit {
            break;
        }
        let mut q = p64 * p64;
        let mut k = 2;
        while q <= limit {
            powers.push((q, p, k));
            q = match q.checked_mul(p64) {
                Some(v) => v,
                None => break,
            };
            k += 1;
        }
    }
    powers.sort_unstable();
    Ok(MangoldtTable {
        limit,
        primes,
        powers,
    })
}

fn simple_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn sieve_segment(lo: u64, hi: u64, base: &[u64]) -> Vec<u32> {
    if hi <= lo {
        return Vec::new();
    }
    let mut composite = vec![false; (hi - lo) as usize];
    for &p in base {
        if p * p >= hi {
            break;
        }
        let start = (p * p).max(lo.div_ceil(p) * p);
        let mut j = start;
        while j < hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    composite
        .iter()
        .enumerate()
        .filter(|(_, &c)| !c)
        .map(|(i, _)| (lo + i as u64) as u32)
        .collect()
}

impl MangoldtTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Proper prime powers `(p^k, p, k)` with `k ≥ 2`, ascending.
    pub fn higher_powers(&self) -> &[(u64, u32, u32)] {
        &self.powers
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && n <= u32::MAX as u64 && self.primes.binary_search(&(n as u32)).is_ok()
    }

    /// (p, k) with n = p^k, or None when n is not a prime power.
    /// Panics if n exceeds the table limit.
    pub fn prime_power(&self, n: u64) -> Option<(u32, u32)> {
        assert!(n <= self.limit, "n = {n} beyond sieve limit {}", self.limit);
        if self.is_prime(n) {
            return Some((n as u32, 1));
        }
        self.powers
            .binary_search_by_key(&n, |&(q, _, _)| q)
            .ok()
            .map(|i| (self.powers[i].1, self.powers[i].2))
    }

    /// Λ(n).
    pub fn lambda(&self, n: u64) -> f64 {
        self.prime_power(n).map_or(0.0, |(p, _)| (p as f64).ln())
    }

    /// All prime powers n <= x in ascending order, as (n, p).
    pub fn prime_powers_upto(&self, x: u64) -> Vec<(u64, u32)> {
        let x = x.min(self.limit);
        let np = self.primes.partition_point(|&p| (p as u64) <= x);
        let mut out: Vec<(u64, u32)> = self.primes[..np].iter().map(|&p| (p as u64, p)).collect();
        out.extend(
            self.powers
                .iter()
                .take_while(|&&(q, _, _)| q <= x)
                .map(|&(q, p, _)| (q, p)),
        );
        out.sort_unstable();
        out
    }

    /// Chebyshev ψ(x) = Σ_{n<=x} Λ(n).
    pub fn chebyshev_psi(&self, x: u64) -> f64 {
        let x = x.min(self.limit);
        let np = self.primes.partition_point(|&p| (p as u64) <= x);
        let a: f64 = self.primes[..np].iter().map(|&p| (p as f64).ln()).sum();
        let b: f64 = self
            .powers
            .iter()
            .take_while(|&&(q, _, _)| q <= x)
            .map(|&(_, p, _)| (p as f64).ln())
            .sum();
        a + b
    }
}

/// Σ_{n <= e^{2πΔ}} Λ(n)/√n · (1/log n + 1/Δ), the dominating prime sum
/// of the S(t) upper-bound argument, for comparison with e^{πΔ}/Δ.
pub fn prime_sum_bound(delta: f64, table: &MangoldtTable) -> Result<f64> {
    let x = (2.0 * std::f64::consts::PI * delta).exp();
    if x > table.limit() as f64 {
        return Err(Error::TableTooSmall {
            limit: table.limit(),
            needed: x.ceil() as u64,
        });
    }
    let x = x.floor() as u64;
    Ok(table
        .prime_powers_upto(x)
        .iter()
        .map(|&(n, p)| {
            let ln_n = (n as f64).ln();
            (p as f64).ln() / (n as f64).sqrt() * (1.0 / ln_n + 1.0 / delta)
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factor(mut n: u64) -> Vec<u64> {
        let mut f = Vec::new();
        let mut d = 2;
        while d * d <= n {
            while n % d == 0 {
                f.push(d);
                n /= d;
            }
            d += 1;
        }
        if n > 1 {
            f.push(n);
        }
        f
    }

    #[test]
    fn small_values() {
        let t = mangoldt_sieve(100).unwrap();
        assert!((t.lambda(9) - 3f64.ln()).abs() < 1e-15);
        assert_eq!(t.lambda(12), 0.0);
        assert_eq!(t.lambda(1), 0.0);
        assert_eq!(t.prime_power(64), Some((2, 6)));
        assert_eq!(t.primes().len(), 25);
    }

    #[test]
    fn agrees_with_factorization_to_1e5() {
        let t = mangoldt_sieve(100_000).unwrap();
        for n in 2..=100_000u64 {
            let f = factor(n);
            let expected = if f.iter().all(|&p| p == f[0]) {
                (f[0] as f64).ln()
            } else {
                0.0
            };
            assert_eq!(t.lambda(n), expected, "n = {n}");
        }
    }

    #[test]
    fn capacity_error() {
        assert!(matches!(
            mangoldt_sieve_with_cap(1000, 100),
            Err(Error::SieveCapacity { .. })
        ));
    }

    #[test]
    fn segment_boundaries() {
        let t = mangoldt_sieve(3 * SEGMENT + 17).unwrap();
        let s = simple_sieve(3 * SEGMENT + 17);
        assert_eq!(t.primes().len(), s.len());
    }

    #[test]
    fn prime_sum_bound_edges() {
        let t = mangoldt_sieve(1000).unwrap();
        assert_eq!(prime_sum_bound(0.05, &t).unwrap(), 0.0);
        let a = prime_sum_bound(0.5, &t).unwrap();
        let b = prime_sum_bound(1.0, &t).unwrap();
        assert!(b >= a && a > 0.0);
        assert!(matches!(prime_sum_bound(2.0, &t), Err(Error::TableTooSmall { .. })));
    }
}
