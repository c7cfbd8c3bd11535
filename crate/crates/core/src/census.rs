//! Exact class counts.
//!
//! `s(l, n)` counts switching classes and `t(l, n)` counts isomorphism classes
//! of modular Eulerian matrices. Both are Burnside sums over the symmetric
//! group, grouped by cycle type; each fixed-point count is the solution count
//! of an integer linear system modulo `l`.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::eulerian::is_modular_eulerian;
use crate::modlinalg::{
    check_modulus, count_solutions_mod, count_solutions_mod_prime, is_prime, IntMatrix,
};
use crate::perm::Permutation;
use crate::skewmat::{canonical_class_form, canonical_iso_form, AltMatrix, TripleTensor};

/// Largest number of matrices the enumerating routines will visit.
pub const ENUMERATION_LIMIT: u128 = 100_000_000;

/// A partition of `n` together with the number of permutations of that shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleType {
    pub parts: Vec<usize>,
    pub class_size: BigUint,
}

impl CycleType {
    pub fn representative(&self) -> Permutation {
        Permutation::from_cycle_type(&self.parts)
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// All cycle types of permutations of `0..n`, parts in non-increasing order.
pub fn cycle_types(n: usize) -> Vec<CycleType> {
    let mut out = Vec::new();
    let mut parts = Vec::new();
    partitions(n, n, &mut parts, &mut out);
    let n_fact = factorial(n);
    out.into_iter()
        .map(|parts| {
            // z = prod k^{m_k} m_k!
            let mut z = BigUint::one();
            let mut i = 0;
            while i < parts.len() {
                let k = parts[i];
                let mult = parts[i..].iter().take_while(|&&p| p == k).count();
                z *= BigUint::from(k).pow(mult as u32) * factorial(mult);
                i += mult;
            }
            CycleType {
                class_size: &n_fact / z,
                parts,
            }
        })
        .collect()
}

fn partitions(rest: usize, max: usize, parts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if rest == 0 {
        out.push(parts.clone());
        return;
    }
    for k in (1..=rest.min(max)).rev() {
        parts.push(k);
        partitions(rest - k, k, parts, out);
        parts.pop();
    }
}

/// Index of the basis vector `e_ij` (`i < j`) in the upper-triangle order.
fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// The linear maps behind the two Burnside sums, for one permutation.
#[derive(Debug, Clone)]
pub struct FixedPointSystem {
    pub n: usize,
    /// `phi(e_ij) = v_j - v_i`: `n x C(n,2)`.
    pub phi: IntMatrix,
    /// Column `i` is the upper triangle of the switching matrix `X_i`: `C(n,2) x n`.
    pub psi: IntMatrix,
    /// `e_ij -> e_{sigma(i) sigma(j)}`, negated when the image pair is descending.
    pub action: IntMatrix,
}

impl FixedPointSystem {
    pub fn new(sigma: &Permutation) -> Self {
        let n = sigma.len();
        let pairs = n * n.saturating_sub(1) / 2;
        let mut phi = IntMatrix::zeros(n, pairs);
        let mut psi = IntMatrix::zeros(pairs, n);
        let mut action = IntMatrix::zeros(pairs, pairs);
        for i in 0..n {
            for j in i + 1..n {
                let col = pair_index(n, i, j);
                phi.set(i, col, -1);
                phi.set(j, col, 1);
                psi.set(col, i, -1);
                psi.set(col, j, 1);
                let (si, sj) = (sigma.apply(i), sigma.apply(j));
                if si < sj {
                    action.set(pair_index(n, si, sj), col, 1);
                } else {
                    action.set(pair_index(n, sj, si), col, -1);
                }
            }
        }
        Self {
            n,
            phi,
            psi,
            action,
        }
    }

    fn action_minus_identity(&self) -> IntMatrix {
        let mut a = self.action.clone();
        for k in 0..a.rows() {
            a.add_to(k, k, -1);
        }
        a
    }

    /// Matrices fixed by the action with every row sum zero.
    pub fn eulerian_system(&self) -> IntMatrix {
        self.action_minus_identity().stack(&self.phi)
    }

    /// Pairs `(x, y)` with `(P - I) x = psi y`.
    pub fn switching_system(&self) -> IntMatrix {
        self.action_minus_identity().augment(&self.psi.negated())
    }
}

/// How solution counts modulo `l` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    /// Smith normal form over the integers; valid for every modulus.
    Smith,
    /// Rank over the prime field; requires a prime modulus.
    PrimeField,
}

fn count(a: &IntMatrix, modulus: u64, solver: Solver) -> Result<BigUint> {
    match solver {
        Solver::Smith => count_solutions_mod(a, modulus),
        Solver::PrimeField => count_solutions_mod_prime(a, modulus),
    }
}

fn check_args(modulus: u64, n: usize, solver: Solver) -> Result<()> {
    check_modulus(modulus)?;
    if n == 0 {
        return Err(Error::InvalidSize(n));
    }
    if solver == Solver::PrimeField && !is_prime(modulus) {
        return Err(Error::InvalidModulus(modulus));
    }
    Ok(())
}

fn exact_div(a: &BigUint, b: &BigUint) -> BigUint {
    let (q, r) = a.div_rem(b);
    assert!(r.is_zero(), "inexact division {a} / {b}");
    q
}

fn burnside(n: usize, fixed: impl Fn(&Permutation) -> Result<BigUint> + Sync) -> Result<BigUint> {
    let types = cycle_types(n);
    let terms: Vec<BigUint> = types
        .par_iter()
        .map(|ct| Ok(&ct.class_size * fixed(&ct.representative())?))
        .collect::<Result<_>>()?;
    let total: BigUint = terms.iter().sum();
    Ok(exact_div(&total, &factorial(n)))
}

/// Number of modular Eulerian matrices fixed by `sigma`.
pub fn eulerian_fixed_count(modulus: u64, sigma: &Permutation, solver: Solver) -> Result<BigUint> {
    count(&FixedPointSystem::new(sigma).eulerian_system(), modulus, solver)
}

/// Number of switching-orbit cosets fixed by `sigma`.
pub fn switching_fixed_count(modulus: u64, sigma: &Permutation, solver: Solver) -> Result<BigUint> {
    let sys = FixedPointSystem::new(sigma);
    let pairs = count(&sys.switching_system(), modulus, solver)?;
    let ker_psi = count(&sys.psi, modulus, solver)?;
    let im_psi = exact_div(&BigUint::from(modulus).pow(sys.n as u32), &ker_psi);
    let preimage = exact_div(&pairs, &ker_psi);
    Ok(exact_div(&preimage, &im_psi))
}

/// `t(l, n)`: isomorphism classes of modular Eulerian `n x n` matrices.
pub fn count_eulerian_classes(modulus: u64, n: usize) -> Result<BigUint> {
    count_eulerian_classes_with(modulus, n, Solver::Smith)
}

pub fn count_eulerian_classes_with(modulus: u64, n: usize, solver: Solver) -> Result<BigUint> {
    check_args(modulus, n, solver)?;
    burnside(n, |sigma| eulerian_fixed_count(modulus, sigma, solver))
}

/// `s(l, n)`: switching classes of skew-symmetric `n x n` matrices.
pub fn count_switching_classes(modulus: u64, n: usize) -> Result<BigUint> {
    count_switching_classes_with(modulus, n, Solver::Smith)
}

pub fn count_switching_classes_with(modulus: u64, n: usize, solver: Solver) -> Result<BigUint> {
    check_args(modulus, n, solver)?;
    burnside(n, |sigma| switching_fixed_count(modulus, sigma, solver))
}

/// Counts and, when enumerated, canonical representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusResult {
    pub modulus: u32,
    pub n: usize,
    pub s: BigUint,
    pub t: BigUint,
    /// Eulerian class representatives in canonical isomorphism form, sorted.
    pub representatives: Option<Vec<AltMatrix>>,
}

/// Counts by formula; no representatives.
pub fn census(modulus: u32, n: usize) -> Result<CensusResult> {
    Ok(CensusResult {
        modulus,
        n,
        s: count_switching_classes(modulus as u64, n)?,
        t: count_eulerian_classes(modulus as u64, n)?,
        representatives: None,
    })
}

fn guard(modulus: u32, exponent: usize) -> Result<u128> {
    let size = (modulus as u128).checked_pow(exponent as u32);
    match size {
        Some(size) if size <= ENUMERATION_LIMIT => Ok(size),
        _ => Err(Error::GuardExceeded {
            size: size.unwrap_or(u128::MAX),
            limit: ENUMERATION_LIMIT,
        }),
    }
}

/// Visit every upper-triangle vector in `(Z/lZ)^len`, odometer order.
fn for_each_vector(modulus: u32, len: usize, mut visit: impl FnMut(&[i64])) {
    let mut digits = vec![0i64; len];
    loop {
        visit(&digits);
        let mut k = 0;
        loop {
            if k == len {
                return;
            }
            digits[k] += 1;
            if digits[k] < modulus as i64 {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

/// Counts by exhaustive enumeration of all `l^C(n,2)` matrices.
pub fn brute_force_census(modulus: u32, n: usize) -> Result<CensusResult> {
    check_modulus(modulus as u64)?;
    if n == 0 {
        return Err(Error::InvalidSize(n));
    }
    let pairs = n * (n - 1) / 2;
    guard(modulus, pairs)?;
    // isolating vertex 0 is a normal form for pure switching
    let mut normal_forms = HashSet::new();
    let mut eulerian = BTreeSet::new();
    for_each_vector(modulus, pairs, |upper| {
        let m = AltMatrix::from_upper(modulus, n, upper).expect("valid entries");
        normal_forms.insert(m.isolate(0).expect("vertex in range"));
        if is_modular_eulerian(&m) {
            eulerian.insert(canonical_iso_form(&m));
        }
    });
    let classes: HashSet<_> = normal_forms.iter().map(canonical_class_form).collect();
    let representatives: Vec<AltMatrix> = eulerian.into_iter().collect();
    Ok(CensusResult {
        modulus,
        n,
        s: BigUint::from(classes.len()),
        t: BigUint::from(representatives.len()),
        representatives: Some(representatives),
    })
}

/// One canonical matrix per isomorphism class of modular Eulerian matrices.
///
/// Eulerian matrices are parametrised by their leading `(n-1) x (n-1)` block:
/// the last column is forced by the row sums, so only `l^C(n-1,2)` matrices
/// are visited.
pub fn enumerate_eulerian_representatives(modulus: u32, n: usize) -> Result<Vec<AltMatrix>> {
    check_modulus(modulus as u64)?;
    if n == 0 {
        return Err(Error::InvalidSize(n));
    }
    let inner = (n - 1) * n.saturating_sub(2) / 2;
    guard(modulus, inner)?;
    let l = modulus as i64;
    let mut found = BTreeSet::new();
    for_each_vector(modulus, inner, |block| {
        let mut grid = vec![vec![0i64; n]; n];
        let mut k = 0;
        for i in 0..n - 1 {
            for j in i + 1..n - 1 {
                grid[i][j] = block[k];
                grid[j][i] = -block[k];
                k += 1;
            }
        }
        for i in 0..n - 1 {
            let s: i64 = grid[i].iter().sum();
            grid[i][n - 1] = (-s).rem_euclid(l);
            grid[n - 1][i] = s.rem_euclid(l);
        }
        let m = AltMatrix::new(modulus, &grid).expect("valid entries");
        debug_assert!(is_modular_eulerian(&m));
        found.insert(canonical_iso_form(&m));
    });
    Ok(found.into_iter().collect())
}

/// One matrix per switching class: the least canonical isomorphism form
/// among the class members, classes sorted by that matrix.
pub fn enumerate_class_representatives(modulus: u32, n: usize) -> Result<Vec<AltMatrix>> {
    check_modulus(modulus as u64)?;
    if n == 0 {
        return Err(Error::InvalidSize(n));
    }
    let pairs = n * (n - 1) / 2;
    guard(modulus, pairs)?;
    let mut best: HashMap<TripleTensor, AltMatrix> = HashMap::new();
    for_each_vector(modulus, pairs, |upper| {
        let m = canonical_iso_form(&AltMatrix::from_upper(modulus, n, upper).expect("valid entries"));
        let key = canonical_class_form(&m);
        match best.get_mut(&key) {
            Some(current) if *current <= m => {}
            Some(current) => *current = m,
            None => {
                best.insert(key, m);
            }
        }
    });
    let mut reps: Vec<AltMatrix> = best.into_values().collect();
    reps.sort();
    Ok(reps)
}

/// Census with representatives from enumeration and counts from formulas.
pub fn census_with_representatives(modulus: u32, n: usize) -> Result<CensusResult> {
    let representatives = enumerate_eulerian_representatives(modulus, n)?;
    let mut result = census(modulus, n)?;
    debug_assert_eq!(result.t.to_usize(), Some(representatives.len()));
    result.representatives = Some(representatives);
    Ok(result)
}
