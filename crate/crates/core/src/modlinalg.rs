//! Exact linear algebra over `Z/lZ` for composite or prime `l`.
//!
//! Solution counts of homogeneous systems are read off the Smith normal form
//! of the integer lift of the system: if `A` has invariant factors
//! `d_1 | d_2 | ... | d_r` (with `r = min(rows, cols)`, trailing zeros
//! included) then `A x = 0 (mod l)` has `prod gcd(l, d_i) * l^(cols - r)`
//! solutions, where `gcd(l, 0) = l`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of `Z/lZ`, always stored reduced into `[0, l)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u32,
    modulus: u32,
}

impl Residue {
    pub fn new(value: i64, modulus: u32) -> Result<Self> {
        check_modulus(modulus as u64)?;
        Ok(Self {
            value: reduce(value, modulus),
            modulus,
        })
    }

    pub fn zero(modulus: u32) -> Result<Self> {
        Self::new(0, modulus)
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn same_ring(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "residues from different rings combined"
        );
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.same_ring(rhs);
        Residue {
            value: ((self.value as u64 + rhs.value as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self + (-rhs)
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.same_ring(rhs);
        Residue {
            value: ((self.value as u64 * rhs.value as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
}

/// Reduce an integer into `[0, modulus)`.
pub fn reduce(value: i64, modulus: u32) -> u32 {
    value.rem_euclid(modulus as i64) as u32
}

pub(crate) fn check_modulus(modulus: u64) -> Result<()> {
    if modulus < 2 {
        Err(Error::InvalidModulus(modulus))
    } else {
        Ok(())
    }
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size, size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    /// Build from rows of machine integers. Panics on ragged input.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: impl Into<BigInt>) {
        self.entries[i * self.cols + j] = value.into();
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: impl Into<BigInt>) {
        self.entries[i * self.cols + j] += value.into();
    }

    /// `[self; below]`.
    pub fn stack(&self, below: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, below.cols, "stack needs equal column counts");
        let mut entries = self.entries.clone();
        entries.extend(below.entries.iter().cloned());
        IntMatrix {
            rows: self.rows + below.rows,
            cols: self.cols,
            entries,
        }
    }

    /// `[self | right]`.
    pub fn augment(&self, right: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, right.rows, "augment needs equal row counts");
        let mut m = IntMatrix::zeros(self.rows, self.cols + right.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..right.cols {
                m.set(i, self.cols + j, right.get(i, j).clone());
            }
        }
        m
    }

    pub fn negated(&self) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }
}

/// Invariant factors of an integer matrix.
///
/// `diagonal` has `min(rows, cols)` entries: the nonzero elementary divisors
/// in divisibility order, followed by zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub diagonal: Vec<BigUint>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SnfResult {
    let mut work = SnfWork {
        rows: a.rows,
        cols: a.cols,
        m: a.entries.clone(),
    };
    work.run();
    let slots = a.rows.min(a.cols);
    let diagonal = (0..slots)
        .map(|t| work.at(t, t).magnitude().clone())
        .collect();
    SnfResult { diagonal }
}

struct SnfWork {
    rows: usize,
    cols: usize,
    m: Vec<BigInt>,
}

impl SnfWork {
    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.m[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.m.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.m.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] -= q * row[src], only touching columns >= from.
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        for j in from..self.cols {
            let s = &self.m[src * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let delta = q * s;
            self.m[dst * self.cols + j] -= delta;
        }
    }

    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt, from: usize) {
        for i in from..self.rows {
            let s = &self.m[i * self.cols + src];
            if s.is_zero() {
                continue;
            }
            let delta = q * s;
            self.m[i * self.cols + dst] -= delta;
        }
    }

    /// Position of the smallest nonzero magnitude in the trailing block.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self.at(i, j);
                if v.is_zero() {
                    continue;
                }
                if v.magnitude().is_one() {
                    return Some((i, j));
                }
                if best.is_none_or(|(bi, bj)| v.magnitude() < self.at(bi, bj).magnitude()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    /// Smallest nonzero magnitude in pivot row t / column t (beyond the pivot).
    fn smallest_on_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let consider = |i: usize, j: usize, best: &mut Option<(usize, usize)>| {
            let v = self.at(i, j);
            if !v.is_zero()
                && best.is_none_or(|(bi, bj)| v.magnitude() < self.at(bi, bj).magnitude())
            {
                *best = Some((i, j));
            }
        };
        for i in t + 1..self.rows {
            consider(i, t, &mut best);
        }
        for j in t + 1..self.cols {
            consider(t, j, &mut best);
        }
        best
    }

    fn run(&mut self) {
        let slots = self.rows.min(self.cols);
        for t in 0..slots {
            let Some((pi, pj)) = self.smallest_in_block(t) else {
                return;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let pivot = self.at(t, t).clone();
                let mut clean = true;
                for i in t + 1..self.rows {
                    if self.at(i, t).is_zero() {
                        continue;
                    }
                    let q = self.at(i, t).div_floor(&pivot);
                    self.row_axpy(i, t, &q, t);
                    if !self.at(i, t).is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..self.cols {
                    if self.at(t, j).is_zero() {
                        continue;
                    }
                    let q = self.at(t, j).div_floor(&pivot);
                    self.col_axpy(j, t, &q, t);
                    if !self.at(t, j).is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    let (i, j) = self
                        .smallest_on_cross(t)
                        .expect("a remainder survived elimination");
                    // Remainders are strictly smaller than the pivot.
                    if i != t {
                        self.swap_rows(t, i);
                    } else {
                        self.swap_cols(t, j);
                    }
                    continue;
                }
                // Pivot must divide the whole trailing block.
                let offender = (t + 1..self.rows).find(|&i| {
                    (t + 1..self.cols).any(|j| !self.at(i, j).is_multiple_of(&pivot))
                });
                match offender {
                    Some(i) => {
                        let minus_one = -BigInt::one();
                        self.row_axpy(t, i, &minus_one, t);
                    }
                    None => break,
                }
            }
        }
    }
}

/// Number of `x` in `(Z/lZ)^cols` with `A x = 0 (mod l)`.
pub fn count_solutions_mod(a: &IntMatrix, modulus: u64) -> Result<BigUint> {
    check_modulus(modulus)?;
    let snf = smith_normal_form(a);
    Ok(count_from_snf(&snf, a.cols, modulus))
}

/// Solution count from invariant factors; `gcd(l, 0) = l`.
pub fn count_from_snf(snf: &SnfResult, cols: usize, modulus: u64) -> BigUint {
    let l = BigUint::from(modulus);
    let mut count = BigUint::one();
    for d in &snf.diagonal {
        count *= d.gcd(&l);
    }
    let free = cols - snf.diagonal.len();
    count * l.pow(free as u32)
}

/// Solution count for prime `p` via Gaussian elimination over the field.
///
/// Primality of `p` is the caller's responsibility; a composite modulus
/// yields a meaningless answer.
pub fn count_solutions_mod_prime(a: &IntMatrix, p: u64) -> Result<BigUint> {
    check_modulus(p)?;
    let rank = rank_mod_prime(a, p);
    Ok(BigUint::from(p).pow((a.cols - rank) as u32))
}

pub fn rank_mod_prime(a: &IntMatrix, p: u64) -> usize {
    let big_p = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = (0..a.rows)
        .map(|i| {
            (0..a.cols)
                .map(|j| a.get(i, j).mod_floor(&big_p).to_u64().unwrap())
                .collect()
        })
        .collect();
    let mut rank = 0;
    for col in 0..a.cols {
        let Some(pr) = (rank..a.rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pr);
        let inv = mod_inverse(m[rank][col], p);
        for j in col..a.cols {
            m[rank][j] = mulmod(m[rank][j], inv, p);
        }
        for r in 0..a.rows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for j in col..a.cols {
                    let sub = mulmod(f, m[rank][j], p);
                    m[r][j] = (m[r][j] + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == a.rows {
            break;
        }
    }
    rank
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let e = num_integer::Integer::extended_gcd(&(a as i128), &(p as i128));
    debug_assert_eq!(e.gcd, 1, "{a} not invertible mod {p}");
    e.x.rem_euclid(p as i128) as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: u64, m: u64) -> Option<u64> {
    let e = num_integer::Integer::extended_gcd(&(a as i128), &(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}
