//! Modular Eulerian matrices: every row sums to zero modulo `l`.
//!
//! When `gcd(n, l) = 1` every pure-switching orbit contains exactly one of
//! them. With `s = n^{-1} mod l` and `U_k` the vertices whose row sums to `k`,
//! switching every `v in U_k` exactly `s*k` times lands on it.

use crate::error::{Error, Result};
use crate::modlinalg::inverse_mod;
use crate::skewmat::{AltMatrix, SwitchExponents};

pub const ORBIT_LIMIT: u128 = 10_000_000;

pub fn is_modular_eulerian(m: &AltMatrix) -> bool {
    (0..m.size()).all(|i| m.row_sum(i) == 0)
}

/// Row sums and the buckets `U_k = { i : row sum of i = k }`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSumProfile {
    pub modulus: u32,
    pub sums: Vec<u32>,
    /// `buckets[k]` lists the (0-based) vertices with row sum `k`, ascending.
    pub buckets: Vec<Vec<usize>>,
}

impl RowSumProfile {
    pub fn bucket_sizes(&self) -> Vec<usize> {
        self.buckets.iter().map(Vec::len).collect()
    }

    /// `sum_k k * u_k mod l`; zero for every skew-symmetric input.
    pub fn weighted_total(&self) -> u32 {
        let l = self.modulus as u64;
        (self
            .buckets
            .iter()
            .enumerate()
            .map(|(k, b)| k as u64 * b.len() as u64)
            .sum::<u64>()
            % l) as u32
    }
}

pub fn row_sum_profile(m: &AltMatrix) -> RowSumProfile {
    let sums: Vec<u32> = (0..m.size()).map(|i| m.row_sum(i)).collect();
    let mut buckets = vec![Vec::new(); m.modulus() as usize];
    for (i, &s) in sums.iter().enumerate() {
        buckets[s as usize].push(i);
    }
    RowSumProfile {
        modulus: m.modulus(),
        sums,
        buckets,
    }
}

/// Output of [`eulerize`], keeping the intermediate data of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eulerization {
    pub matrix: AltMatrix,
    /// Exponents actually applied: `s*k` on every vertex of `U_k`.
    pub exponents: SwitchExponents,
    /// Inverse of `n` modulo `l`.
    pub s: u32,
    pub profile: RowSumProfile,
}

pub fn eulerize(m: &AltMatrix) -> Result<Eulerization> {
    let n = m.size();
    let l = m.modulus();
    let s = inverse_mod(n as u64 % l as u64, l as u64).ok_or(Error::NotCoprime { n, modulus: l })?
        as u32;
    let profile = row_sum_profile(m);
    let values: Vec<i64> = profile
        .sums
        .iter()
        .map(|&k| (s as i64 * k as i64) % l as i64)
        .collect();
    let exponents = SwitchExponents::new(l, &values)?;
    let matrix = m.switch_many(&exponents)?;
    debug_assert!(is_modular_eulerian(&matrix));
    Ok(Eulerization {
        matrix,
        exponents,
        s,
        profile,
    })
}

/// Every modular Eulerian matrix reachable from `m` by switching alone
/// (no relabeling), deduplicated and sorted row-major.
pub fn eulerian_in_orbit(m: &AltMatrix) -> Result<Vec<AltMatrix>> {
    let n = m.size();
    let l = m.modulus() as u128;
    let size = l
        .checked_pow(n as u32 - 1)
        .filter(|&s| s <= ORBIT_LIMIT)
        .ok_or(Error::OrbitTooLarge {
            size: l.saturating_pow(n as u32 - 1),
            limit: ORBIT_LIMIT,
        })?;
    let mut found = Vec::new();
    let mut a = vec![0i64; n];
    for _ in 0..size {
        let e = SwitchExponents::new(m.modulus(), &a)?;
        let candidate = m.switch_many(&e)?;
        if is_modular_eulerian(&candidate) {
            found.push(candidate);
        }
        // odometer over a_1..a_{n-1}, a_0 pinned to zero
        for slot in a.iter_mut().skip(1) {
            *slot += 1;
            if *slot < l as i64 {
                break;
            }
            *slot = 0;
        }
    }
    found.sort();
    found.dedup();
    Ok(found)
}
