//! Skew-symmetric matrices over `Z/lZ` and their switching classes.
//!
//! A switching at vertex `v` adds `X_v` to the matrix: `-1` across row `v`
//! and `+1` down column `v` (off the diagonal). Applying `a_v` switchings at
//! every vertex `v` changes entry `(i, j)` by `a_j - a_i`. Two matrices are
//! switching equivalent when some such combination followed by a relabeling
//! turns one into the other; the triple sums `m_ij + m_jh + m_hi` are a
//! complete invariant of the pure-switching orbit.
//!
//! Indices in this API are 0-based.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::modlinalg::{check_modulus, reduce, Residue};
use crate::perm::Permutation;

/// An `n x n` skew-symmetric matrix over `Z/lZ` with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AltMatrix {
    modulus: u32,
    size: usize,
    // row-major, every value reduced into [0, modulus)
    entries: Vec<u32>,
}

impl AltMatrix {
    /// Validate and reduce a raw integer grid.
    pub fn new<R: AsRef<[i64]>>(modulus: u32, grid: &[R]) -> Result<Self> {
        check_modulus(modulus as u64)?;
        let n = grid.len();
        if n == 0 {
            return Err(Error::InvalidSize(0));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in grid.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::BadShape {
                    expected: n,
                    row: i + 1,
                    found: row.len(),
                });
            }
            entries.extend(row.iter().map(|&v| reduce(v, modulus)));
        }
        let m = Self {
            modulus,
            size: n,
            entries,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn zero(modulus: u32, size: usize) -> Result<Self> {
        check_modulus(modulus as u64)?;
        if size == 0 {
            return Err(Error::InvalidSize(0));
        }
        Ok(Self {
            modulus,
            size,
            entries: vec![0; size * size],
        })
    }

    /// Build from the strict upper triangle, listed row by row
    /// (`m_01, m_02, .., m_0(n-1), m_12, ..`).
    pub fn from_upper(modulus: u32, size: usize, upper: &[i64]) -> Result<Self> {
        let mut m = Self::zero(modulus, size)?;
        if upper.len() != size * (size - 1) / 2 {
            return Err(Error::LengthMismatch {
                expected: size * (size - 1) / 2,
                found: upper.len(),
            });
        }
        let mut k = 0;
        for i in 0..size {
            for j in i + 1..size {
                m.set_pair(i, j, upper[k]);
                k += 1;
            }
        }
        Ok(m)
    }

    /// Build from arcs `i -> j` carrying value `m_ij = value` (and `m_ji = -value`).
    pub fn from_arcs(modulus: u32, size: usize, arcs: &[(usize, usize, i64)]) -> Result<Self> {
        let mut m = Self::zero(modulus, size)?;
        for &(i, j, v) in arcs {
            m.check_vertex(i)?;
            m.check_vertex(j)?;
            if i == j {
                return Err(Error::NonzeroDiagonal(i + 1));
            }
            m.set_pair(i, j, v);
        }
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        let n = self.size;
        for i in 0..n {
            if self.get(i, i) != 0 {
                return Err(Error::NonzeroDiagonal(i + 1));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if !(self.get(i, j) + self.get(j, i)).is_multiple_of(self.modulus) {
                    return Err(Error::NotSkewSymmetric {
                        row: i + 1,
                        col: j + 1,
                        modulus: self.modulus,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.size + j]
    }

    pub fn residue(&self, i: usize, j: usize) -> Residue {
        Residue::new(self.get(i, j) as i64, self.modulus).expect("modulus already validated")
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn to_grid(&self) -> Vec<Vec<u32>> {
        (0..self.size).map(|i| self.row(i).to_vec()).collect()
    }

    /// Strict upper triangle, row by row.
    pub fn upper(&self) -> Vec<u32> {
        let n = self.size;
        let mut out = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            out.extend_from_slice(&self.row(i)[i + 1..]);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    /// Set `m_ij = value` and `m_ji = -value`.
    fn set_pair(&mut self, i: usize, j: usize, value: i64) {
        let v = reduce(value, self.modulus);
        let n = self.size;
        self.entries[i * n + j] = v;
        self.entries[j * n + i] = (self.modulus - v) % self.modulus;
    }

    fn neg(&self, v: u32) -> u32 {
        (self.modulus - v) % self.modulus
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.size {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                size: self.size,
            })
        }
    }

    fn check_compatible(&self, other: &AltMatrix) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.size != other.size {
            return Err(Error::SizeMismatch(self.size, other.size));
        }
        Ok(())
    }

    /// Row sum of row `i`, reduced.
    pub fn row_sum(&self, i: usize) -> u32 {
        (self.row(i).iter().map(|&v| v as u64).sum::<u64>() % self.modulus as u64) as u32
    }

    /// `m_ij + m_jh + m_hi`, reduced.
    #[inline]
    pub fn triple_sum(&self, i: usize, j: usize, h: usize) -> u32 {
        (self.get(i, j) + self.get(j, h) + self.get(h, i)) % self.modulus
    }

    /// Switching at `v`: row `v` decremented, column `v` incremented.
    pub fn switch(&self, v: usize) -> Result<AltMatrix> {
        self.check_vertex(v)?;
        let mut out = self.clone();
        let n = self.size;
        let l = self.modulus;
        for i in 0..n {
            if i == v {
                continue;
            }
            out.entries[v * n + i] = (self.get(v, i) + l - 1) % l;
            out.entries[i * n + v] = (self.get(i, v) + 1) % l;
        }
        Ok(out)
    }

    /// Entry `(i, j)` becomes `m_ij - a_i + a_j`.
    pub fn switch_many(&self, a: &SwitchExponents) -> Result<AltMatrix> {
        if a.len() != self.size {
            return Err(Error::LengthMismatch {
                expected: self.size,
                found: a.len(),
            });
        }
        if a.modulus() != self.modulus {
            return Err(Error::ModulusMismatch(self.modulus, a.modulus()));
        }
        let n = self.size;
        let l = self.modulus;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    out.entries[i * n + j] = (self.get(i, j) + l - a.get(i) + a.get(j)) % l;
                }
            }
        }
        Ok(out)
    }

    /// The matrix `m'` with `m'_{sigma(i) sigma(j)} = m_ij`.
    pub fn relabel(&self, sigma: &Permutation) -> Result<AltMatrix> {
        if sigma.len() != self.size {
            return Err(Error::LengthMismatch {
                expected: self.size,
                found: sigma.len(),
            });
        }
        let n = self.size;
        let mut out = self.clone();
        for i in 0..n {
            let si = sigma.apply(i);
            for j in 0..n {
                out.entries[si * n + sigma.apply(j)] = self.get(i, j);
            }
        }
        Ok(out)
    }

    /// Entrywise `self - other`.
    pub fn difference(&self, other: &AltMatrix) -> Result<AltMatrix> {
        self.check_compatible(other)?;
        let l = self.modulus;
        Ok(AltMatrix {
            modulus: l,
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| (a + l - b) % l)
                .collect(),
        })
    }

    /// Exponents of the unique pure switching that zeroes row and column `v`.
    pub fn isolation_exponents(&self, v: usize) -> Result<SwitchExponents> {
        self.check_vertex(v)?;
        let values = (0..self.size)
            .map(|i| if i == v { 0 } else { self.neg(self.get(v, i)) })
            .collect();
        Ok(SwitchExponents {
            modulus: self.modulus,
            values,
        })
    }

    /// The switching of `self` whose row and column `v` are zero.
    pub fn isolate(&self, v: usize) -> Result<AltMatrix> {
        let a = self.isolation_exponents(v)?;
        self.switch_many(&a)
    }

    pub fn triple_tensor(&self) -> TripleTensor {
        let n = self.size;
        let mut values = Vec::with_capacity(binomial3(n));
        for i in 0..n {
            for j in i + 1..n {
                for h in j + 1..n {
                    values.push(self.triple_sum(i, j, h));
                }
            }
        }
        TripleTensor {
            modulus: self.modulus,
            size: n,
            values,
        }
    }

    /// Simple graph on `0..n` with edge `ij` iff `m_ij != 0`, as adjacency bitmasks.
    pub fn support_masks(&self) -> Vec<u64> {
        assert!(self.size <= 64, "bitmask view needs at most 64 vertices");
        (0..self.size)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| v != 0)
                    .fold(0u64, |acc, (j, _)| acc | (1 << j))
            })
            .collect()
    }
}

impl fmt::Display for AltMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

fn binomial3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

/// How many times each vertex is switched, modulo `l`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SwitchExponents {
    modulus: u32,
    values: Vec<u32>,
}

impl SwitchExponents {
    pub fn new(modulus: u32, values: &[i64]) -> Result<Self> {
        check_modulus(modulus as u64)?;
        Ok(Self {
            modulus,
            values: values.iter().map(|&v| reduce(v, modulus)).collect(),
        })
    }

    pub fn zero(modulus: u32, size: usize) -> Result<Self> {
        Self::new(modulus, &vec![0; size])
    }

    pub fn unit(modulus: u32, size: usize, v: usize) -> Result<Self> {
        let mut values = vec![0; size];
        if v >= size {
            return Err(Error::VertexOutOfRange { vertex: v, size });
        }
        values[v] = 1;
        Self::new(modulus, &values)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, v: usize) -> u32 {
        self.values[v]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Shift by a constant so the first exponent is zero. Constant shifts act trivially.
    pub fn normalized(&self) -> SwitchExponents {
        let l = self.modulus;
        let first = self.values.first().copied().unwrap_or(0);
        SwitchExponents {
            modulus: l,
            values: self.values.iter().map(|&v| (v + l - first) % l).collect(),
        }
    }

    /// The exponent vector seen from relabeled vertices: `b_{sigma(i)} = a_i`.
    pub fn relabel(&self, sigma: &Permutation) -> SwitchExponents {
        let mut values = vec![0; self.values.len()];
        for (i, &a) in self.values.iter().enumerate() {
            values[sigma.apply(i)] = a;
        }
        SwitchExponents {
            modulus: self.modulus,
            values,
        }
    }
}

/// Certificate that `relabel(switch_many(m, exponents), sigma) == target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivWitness {
    pub sigma: Permutation,
    pub exponents: SwitchExponents,
}

impl EquivWitness {
    pub fn verify(&self, source: &AltMatrix, target: &AltMatrix) -> bool {
        source
            .switch_many(&self.exponents)
            .and_then(|m| m.relabel(&self.sigma))
            .is_ok_and(|m| &m == target)
    }
}

/// Triple sums `t_ijh` for `i < j < h` in lexicographic order of `(i, j, h)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TripleTensor {
    modulus: u32,
    size: usize,
    values: Vec<u32>,
}

impl TripleTensor {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// `t_ijh` for any three distinct indices, with the orientation sign applied.
    pub fn get(&self, i: usize, j: usize, h: usize) -> u32 {
        let mut idx = [i, j, h];
        // even permutations preserve the cyclic sum, odd ones negate it
        let mut odd = false;
        for a in 0..3 {
            for b in a + 1..3 {
                if idx[a] > idx[b] {
                    idx.swap(a, b);
                    odd = !odd;
                }
            }
        }
        let v = self.values[tensor_index(self.size, idx[0], idx[1], idx[2])];
        if odd {
            (self.modulus - v) % self.modulus
        } else {
            v
        }
    }
}

/// Position of `(i, j, h)`, `i < j < h`, in the lexicographic listing.
fn tensor_index(n: usize, i: usize, j: usize, h: usize) -> usize {
    // triples with first index < i
    let before_i: usize = (0..i).map(|a| pairs(n - a - 1)).sum();
    let before_j: usize = (i + 1..j).map(|b| n - b - 1).sum();
    before_i + before_j + (h - j - 1)
}

fn pairs(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// Exponents `a` with `a_0 = 0` and `d_ij = a_j - a_i`, if `d` is such a difference.
pub fn potential_witness(d: &AltMatrix) -> Option<SwitchExponents> {
    let n = d.size();
    let l = d.modulus();
    let values: Vec<u32> = (0..n).map(|j| d.get(0, j)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if d.get(i, j) != (values[j] + l - values[i]) % l {
                return None;
            }
        }
    }
    Some(SwitchExponents { modulus: l, values })
}

/// Per-vertex switching and relabeling invariant: sorted triple sums through the vertex.
fn triple_profiles(m: &AltMatrix) -> Vec<Vec<u32>> {
    let n = m.size();
    (0..n)
        .map(|i| {
            let mut p = Vec::with_capacity((n - 1) * (n.saturating_sub(2)));
            for j in 0..n {
                for h in 0..n {
                    if j != i && h != i && j != h {
                        p.push(m.triple_sum(i, j, h));
                    }
                }
            }
            p.sort_unstable();
            p
        })
        .collect()
}

/// Search for a relabeling plus switching carrying `m` to `target`.
///
/// Permutations are explored in lexicographic order of their images, pruned by
/// per-vertex triple-sum profiles and by matching triple sums on the assigned
/// prefix, so the returned `sigma` is the lexicographically first one admitting
/// a switching. The exponents are normalized to `a_0 = 0`.
pub fn switching_equivalent(m: &AltMatrix, target: &AltMatrix) -> Result<Option<EquivWitness>> {
    m.check_compatible(target)?;
    let n = m.size();
    let prof = triple_profiles(m);
    let prof_t = triple_profiles(target);
    let mut a_sorted = prof.clone();
    let mut b_sorted = prof_t.clone();
    a_sorted.sort();
    b_sorted.sort();
    if a_sorted != b_sorted {
        return Ok(None);
    }
    let mut search = PermSearch {
        n,
        sigma: vec![usize::MAX; n],
        used: vec![false; n],
    };
    let mut found = None;
    search.run(
        0,
        &mut |i, j, sigma| {
            if prof[i] != prof_t[j] {
                return false;
            }
            for a in 0..i {
                for b in a + 1..i {
                    if m.triple_sum(a, b, i) != target.triple_sum(sigma[a], sigma[b], j) {
                        return false;
                    }
                }
            }
            true
        },
        &mut |sigma| {
            let sigma = Permutation::from_images(sigma.to_vec()).expect("search builds bijections");
            let pulled = target.relabel(&sigma.inverse()).expect("sizes checked");
            let d = pulled.difference(m).expect("sizes checked");
            match potential_witness(&d) {
                Some(exponents) => {
                    found = Some(EquivWitness { sigma, exponents });
                    true
                }
                None => false,
            }
        },
    );
    Ok(found)
}

/// A relabeling `sigma` with `relabel(m, sigma) == target`, lexicographically first.
pub fn isomorphic(m: &AltMatrix, target: &AltMatrix) -> Result<Option<Permutation>> {
    m.check_compatible(target)?;
    let n = m.size();
    let rows = sorted_rows(m);
    let rows_t = sorted_rows(target);
    let mut a_sorted = rows.clone();
    let mut b_sorted = rows_t.clone();
    a_sorted.sort();
    b_sorted.sort();
    if a_sorted != b_sorted {
        return Ok(None);
    }
    let mut search = PermSearch {
        n,
        sigma: vec![usize::MAX; n],
        used: vec![false; n],
    };
    let mut found = None;
    search.run(
        0,
        &mut |i, j, sigma| {
            rows[i] == rows_t[j] && (0..i).all(|k| m.get(i, k) == target.get(j, sigma[k]))
        },
        &mut |sigma| {
            found = Some(Permutation::from_images(sigma.to_vec()).expect("bijection"));
            true
        },
    );
    Ok(found)
}

fn sorted_rows(m: &AltMatrix) -> Vec<Vec<u32>> {
    (0..m.size())
        .map(|i| {
            let mut r = m.row(i).to_vec();
            r.sort_unstable();
            r
        })
        .collect()
}

/// Depth-first assignment of `sigma(0), sigma(1), ..` in increasing candidate order.
struct PermSearch {
    n: usize,
    sigma: Vec<usize>,
    used: Vec<bool>,
}

impl PermSearch {
    /// `accept(i, j, sigma)` decides whether `sigma(i) = j` is consistent with the
    /// prefix; `leaf(sigma)` returns true to stop the search.
    fn run(
        &mut self,
        i: usize,
        accept: &mut dyn FnMut(usize, usize, &[usize]) -> bool,
        leaf: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if i == self.n {
            return leaf(&self.sigma);
        }
        for j in 0..self.n {
            if self.used[j] || !accept(i, j, &self.sigma) {
                continue;
            }
            self.sigma[i] = j;
            self.used[j] = true;
            let stop = self.run(i + 1, accept, leaf);
            self.used[j] = false;
            self.sigma[i] = usize::MAX;
            if stop {
                return true;
            }
        }
        false
    }
}

/// Lexicographically smallest relabeling (row-major) of `m`, with the
/// permutation that produces it.
///
/// The strict upper triangle decides row-major order on skew-symmetric
/// matrices, so the search builds the relabeled matrix one row at a time over
/// an ordered partition of the unplaced vertices: every cell is homogeneous
/// with respect to all placed vertices, and the next row is fixed once its
/// vertex is chosen. Only candidates achieving the smallest next row are
/// expanded, and interchangeable twins are expanded once.
pub fn canonical_iso_labeling(m: &AltMatrix) -> (AltMatrix, Permutation) {
    let (order, _) = lexmin_order(m, None);
    let mut images = vec![0; m.size()];
    for (pos, &v) in order.iter().enumerate() {
        images[v] = pos;
    }
    let sigma = Permutation::from_images(images).expect("order is a bijection");
    (m.relabel(&sigma).expect("sizes match"), sigma)
}

pub fn canonical_iso_form(m: &AltMatrix) -> AltMatrix {
    canonical_iso_labeling(m).0
}

/// Smallest triple tensor over all relabelings of `m`; a complete invariant
/// of switching classes.
///
/// For the optimal relabeling, isolating the vertex placed first leaves the
/// tensor unchanged, and the leading block of the tensor then equals the upper
/// triangle of the remaining submatrix, which determines the rest.
pub fn canonical_class_form(m: &AltMatrix) -> TripleTensor {
    let n = m.size();
    if n < 3 {
        return m.triple_tensor();
    }
    let mut best: Option<(Vec<u32>, usize, Vec<usize>)> = None;
    for v in 0..n {
        let iso = m.isolate(v).expect("v in range");
        let (order, upper) = lexmin_order(&iso, Some(v));
        // the first row is zero, the rest of the upper triangle is the leading block
        let block = upper[n - 1..].to_vec();
        if best.as_ref().is_none_or(|(b, _, _)| block < *b) {
            best = Some((block, v, order));
        }
    }
    let (_, v, order) = best.expect("n >= 1");
    let iso = m.isolate(v).expect("v in range");
    let mut images = vec![0; n];
    for (pos, &u) in order.iter().enumerate() {
        images[u] = pos;
    }
    let sigma = Permutation::from_images(images).expect("bijection");
    iso.relabel(&sigma).expect("sizes").triple_tensor()
}

/// Vertex order (position -> vertex) of the lexmin relabeling and its upper triangle.
fn lexmin_order(m: &AltMatrix, first: Option<usize>) -> (Vec<usize>, Vec<u32>) {
    let n = m.size();
    let mut st = LexMin {
        m,
        best: None,
        best_order: Vec::new(),
    };
    let cells = vec![(0..n).collect::<Vec<_>>()];
    let mut order = Vec::with_capacity(n);
    let mut prefix = Vec::with_capacity(n * (n - 1) / 2);
    match first {
        Some(v) => st.place(v, &cells, &mut order, &mut prefix),
        None => st.expand(&cells, &mut order, &mut prefix),
    }
    (st.best_order, st.best.expect("at least one leaf"))
}

struct LexMin<'a> {
    m: &'a AltMatrix,
    best: Option<Vec<u32>>,
    best_order: Vec<usize>,
}

impl LexMin<'_> {
    fn expand(&mut self, cells: &[Vec<usize>], order: &mut Vec<usize>, prefix: &mut Vec<u32>) {
        let Some(first) = cells.first() else {
            if self.best.as_ref().is_none_or(|b| *prefix < *b) {
                self.best = Some(prefix.clone());
                self.best_order = order.clone();
            }
            return;
        };
        // next-row value of each candidate; keep the minimal ones
        let rows: Vec<Vec<u32>> = first.iter().map(|&u| self.next_row(u, cells)).collect();
        let min_row = rows.iter().min().expect("cells are nonempty").clone();
        let mut tried: Vec<usize> = Vec::new();
        for (idx, &u) in first.iter().enumerate() {
            if rows[idx] != min_row || tried.iter().any(|&w| self.twins(u, w)) {
                continue;
            }
            tried.push(u);
            self.place(u, cells, order, prefix);
        }
    }

    fn place(
        &mut self,
        u: usize,
        cells: &[Vec<usize>],
        order: &mut Vec<usize>,
        prefix: &mut Vec<u32>,
    ) {
        let mark = prefix.len();
        let refined = self.refine(u, cells, prefix);
        let keep = match &self.best {
            None => true,
            Some(b) => prefix.as_slice() <= &b[..prefix.len()],
        };
        if keep {
            order.push(u);
            self.expand(&refined, order, prefix);
            order.pop();
        }
        prefix.truncate(mark);
    }

    /// Row of `u` over the remaining vertices in cell order, each cell sorted.
    fn next_row(&self, u: usize, cells: &[Vec<usize>]) -> Vec<u32> {
        let mut row = Vec::new();
        for cell in cells {
            let start = row.len();
            row.extend(cell.iter().filter(|&&w| w != u).map(|&w| self.m.get(u, w)));
            row[start..].sort_unstable();
        }
        row
    }

    /// Remove `u`, split every cell by `m[u][w]` ascending, append `u`'s row to `prefix`.
    fn refine(&self, u: usize, cells: &[Vec<usize>], prefix: &mut Vec<u32>) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(cells.len() + 1);
        for cell in cells {
            let mut rest: Vec<usize> = cell.iter().copied().filter(|&w| w != u).collect();
            if rest.is_empty() {
                continue;
            }
            rest.sort_by_key(|&w| (self.m.get(u, w), w));
            let mut start = 0;
            while start < rest.len() {
                let v = self.m.get(u, rest[start]);
                let end = start
                    + rest[start..]
                        .iter()
                        .take_while(|&&w| self.m.get(u, w) == v)
                        .count();
                prefix.extend(std::iter::repeat_n(v, end - start));
                out.push(rest[start..end].to_vec());
                start = end;
            }
        }
        out
    }

    /// Swapping `u` and `w` is an automorphism fixing every other vertex.
    fn twins(&self, u: usize, w: usize) -> bool {
        let m = self.m;
        m.get(u, w) == m.get(w, u)
            && (0..m.size()).all(|x| x == u || x == w || m.get(u, x) == m.get(w, x))
    }
}

/// Compare two matrices in row-major order.
pub fn row_major_cmp(a: &AltMatrix, b: &AltMatrix) -> Ordering {
    a.entries.cmp(&b.entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::for_each_permutation;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ex36() -> AltMatrix {
        AltMatrix::new(3, &[[0, 1, 1, 0], [2, 0, 2, 1], [2, 1, 0, 0], [0, 2, 0, 0]]).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, l: u32, n: usize) -> AltMatrix {
        let upper: Vec<i64> = (0..n * (n - 1) / 2)
            .map(|_| rng.gen_range(0..l) as i64)
            .collect();
        AltMatrix::from_upper(l, n, &upper).unwrap()
    }

    fn random_perm(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
        let mut v: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            v.swap(i, rng.gen_range(0..=i));
        }
        Permutation::from_images(v).unwrap()
    }

    #[test]
    fn make_validates() {
        assert!(AltMatrix::new(3, &[[0, 1], [2, 0]]).is_ok());
        assert_eq!(
            AltMatrix::new(3, &[[0, 1], [1, 0]]),
            Err(Error::NotSkewSymmetric {
                row: 2,
                col: 1,
                modulus: 3
            })
        );
        assert_eq!(
            AltMatrix::new(3, &[[1, 1], [2, 0]]),
            Err(Error::NonzeroDiagonal(1))
        );
        assert_eq!(AltMatrix::new(1, &[[0]]), Err(Error::InvalidModulus(1)));
        assert!(matches!(
            AltMatrix::new(3, &[vec![0, 1], vec![2]]),
            Err(Error::BadShape { row: 2, .. })
        ));
        assert!(ex36().get(1, 0) == 2);
        // unreduced input is reduced on load
        let m = AltMatrix::new(3, &[[0, 4], [-1, 0]]).unwrap();
        assert_eq!(m.to_grid(), vec![vec![0, 1], vec![2, 0]]);
    }

    #[test]
    fn switch_displays() {
        let s = ex36().switch(2).unwrap();
        assert_eq!(
            s.to_grid(),
            vec![
                vec![0, 1, 2, 0],
                vec![2, 0, 0, 1],
                vec![1, 0, 0, 2],
                vec![0, 2, 1, 0]
            ]
        );
        let g = AltMatrix::new(2, &[[0, 1, 1, 0], [1, 0, 1, 1], [1, 1, 0, 0], [0, 1, 0, 0]])
            .unwrap();
        assert_eq!(
            g.switch(2).unwrap().to_grid(),
            vec![
                vec![0, 1, 0, 0],
                vec![1, 0, 0, 1],
                vec![0, 0, 0, 1],
                vec![0, 1, 1, 0]
            ]
        );
        let x1 = AltMatrix::zero(5, 3).unwrap().switch(0).unwrap();
        assert_eq!(x1.to_grid(), vec![vec![0, 4, 4], vec![1, 0, 0], vec![1, 0, 0]]);
        assert!(ex36().switch(4).is_err());
    }

    #[test]
    fn switch_many_basics() {
        let m = ex36();
        let c = SwitchExponents::new(3, &[2, 2, 2, 2]).unwrap();
        assert_eq!(m.switch_many(&c).unwrap(), m);
        let e = SwitchExponents::unit(3, 4, 2).unwrap();
        assert_eq!(m.switch_many(&e).unwrap(), m.switch(2).unwrap());
        let short = SwitchExponents::zero(3, 3).unwrap();
        assert!(m.switch_many(&short).is_err());
    }

    #[test]
    fn relabel_examples() {
        let m = AltMatrix::new(3, &[[0, 1], [2, 0]]).unwrap();
        assert_eq!(m.relabel(&Permutation::identity(2)).unwrap(), m);
        let swap = Permutation::from_images(vec![1, 0]).unwrap();
        assert_eq!(m.relabel(&swap).unwrap().to_grid(), vec![vec![0, 2], vec![1, 0]]);
        let m = AltMatrix::from_arcs(3, 3, &[(0, 1, 1)]).unwrap();
        let cycle = Permutation::from_images(vec![1, 2, 0]).unwrap();
        let r = m.relabel(&cycle).unwrap();
        assert_eq!(r, AltMatrix::from_arcs(3, 3, &[(1, 2, 1)]).unwrap());
    }

    #[test]
    fn triple_tensor_examples() {
        assert!(AltMatrix::zero(3, 5).unwrap().triple_tensor().is_zero());
        let m = AltMatrix::from_arcs(3, 3, &[(0, 1, 1), (1, 2, 1), (0, 2, 2)]).unwrap();
        assert_eq!(m.triple_tensor().values(), &[0]);
        assert_eq!(ex36().triple_tensor(), ex36().switch(2).unwrap().triple_tensor());
        assert_eq!(AltMatrix::zero(3, 2).unwrap().triple_tensor().values().len(), 0);
        assert_eq!(AltMatrix::zero(3, 6).unwrap().triple_tensor().values().len(), 20);
    }

    #[test]
    fn tensor_get_handles_orientation() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_matrix(&mut rng, 5, 5);
        let t = m.triple_tensor();
        for i in 0..5 {
            for j in 0..5 {
                for h in 0..5 {
                    if i != j && j != h && i != h {
                        assert_eq!(t.get(i, j, h), m.triple_sum(i, j, h));
                    }
                }
            }
        }
    }

    #[test]
    fn potential_witness_examples() {
        assert_eq!(
            potential_witness(&AltMatrix::zero(3, 4).unwrap()),
            Some(SwitchExponents::zero(3, 4).unwrap())
        );
        let x1 = AltMatrix::zero(3, 4).unwrap().switch(0).unwrap();
        // X_1 = unit exponent at vertex 1, i.e. (0, -1, -1, -1) after pinning a_1 = 0
        assert_eq!(
            potential_witness(&x1).unwrap().values(),
            &[0, 2, 2, 2]
        );
        let d = AltMatrix::from_arcs(3, 3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]).unwrap();
        assert_eq!(potential_witness(&d), None);
    }

    /// Every lattice element `sum a_v X_v` for n <= 4, l <= 4, enumerated directly.
    #[test]
    fn potential_witness_matches_lattice_enumeration() {
        for l in 2..=4u32 {
            for n in 1..=4usize {
                let mut lattice = std::collections::HashSet::new();
                let total = (l as usize).pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut d = AltMatrix::zero(l, n).unwrap();
                    for v in 0..n {
                        for _ in 0..c % l as usize {
                            d = d.switch(v).unwrap();
                        }
                        c /= l as usize;
                    }
                    lattice.insert(d);
                }
                assert_eq!(lattice.len(), (l as usize).pow(n as u32 - 1));
                let all = (l as usize).pow((n * (n - 1) / 2) as u32);
                for code in 0..all {
                    let mut c = code;
                    let upper: Vec<i64> = (0..n * (n - 1) / 2)
                        .map(|_| {
                            let v = c % l as usize;
                            c /= l as usize;
                            v as i64
                        })
                        .collect();
                    let d = AltMatrix::from_upper(l, n, &upper).unwrap();
                    let w = potential_witness(&d);
                    assert_eq!(w.is_some(), lattice.contains(&d), "{d}");
                    if let Some(a) = w {
                        let z = AltMatrix::zero(l, n).unwrap();
                        assert_eq!(z.switch_many(&a).unwrap(), d);
                    }
                }
            }
        }
    }

    #[test]
    fn equivalence_examples() {
        let m = ex36();
        let w = switching_equivalent(&m, &m.switch(1).unwrap()).unwrap().unwrap();
        assert!(w.verify(&m, &m.switch(1).unwrap()));
        let sigma = Permutation::from_images(vec![2, 0, 3, 1]).unwrap();
        let r = m.relabel(&sigma).unwrap();
        assert!(switching_equivalent(&m, &r).unwrap().unwrap().verify(&m, &r));

        // edges 2->1, 3->1 versus 1->2, 1->3 on six vertices
        let a = AltMatrix::from_arcs(3, 6, &[(1, 0, 1), (2, 0, 1)]).unwrap();
        let b = AltMatrix::from_arcs(3, 6, &[(0, 1, 1), (0, 2, 1)]).unwrap();
        assert_eq!(switching_equivalent(&a, &b).unwrap(), None);

        let other = AltMatrix::zero(5, 4).unwrap();
        assert!(switching_equivalent(&m, &other).is_err());
        assert!(switching_equivalent(&m, &AltMatrix::zero(3, 5).unwrap()).is_err());
    }

    #[test]
    fn sizes_below_three_are_one_class() {
        for l in 2..=5u32 {
            for n in 1..=2usize {
                let all = (l as usize).pow((n * (n - 1) / 2) as u32);
                for c in 0..all {
                    let upper: Vec<i64> = if n == 2 { vec![c as i64] } else { vec![] };
                    let m = AltMatrix::from_upper(l, n, &upper).unwrap();
                    let z = AltMatrix::zero(l, n).unwrap();
                    let w = switching_equivalent(&z, &m).unwrap().unwrap();
                    assert!(w.verify(&z, &m));
                }
            }
        }
    }

    #[test]
    fn isomorphic_examples() {
        let m = ex36();
        assert_eq!(isomorphic(&m, &m).unwrap(), Some(Permutation::identity(4)));
        let a = AltMatrix::from_arcs(5, 3, &[(1, 2, 1)]).unwrap();
        let b = AltMatrix::from_arcs(5, 3, &[(1, 2, 2)]).unwrap();
        assert_eq!(isomorphic(&a, &b).unwrap(), None);
        let a = AltMatrix::new(3, &[[0, 1], [2, 0]]).unwrap();
        let b = AltMatrix::new(3, &[[0, 2], [1, 0]]).unwrap();
        assert_eq!(
            isomorphic(&a, &b).unwrap(),
            Some(Permutation::from_images(vec![1, 0]).unwrap())
        );
    }

    #[test]
    fn canonical_iso_examples() {
        let z = AltMatrix::zero(3, 4).unwrap();
        assert_eq!(canonical_iso_form(&z), z);
        let m = AltMatrix::new(3, &[[0, 2], [1, 0]]).unwrap();
        assert_eq!(canonical_iso_form(&m).to_grid(), vec![vec![0, 1], vec![2, 0]]);
    }

    /// Minimum over all relabelings, computed naively.
    fn brute_iso_form(m: &AltMatrix) -> AltMatrix {
        let mut best: Option<AltMatrix> = None;
        for_each_permutation(m.size(), |p| {
            let r = m
                .relabel(&Permutation::from_images(p.to_vec()).unwrap())
                .unwrap();
            if best.as_ref().is_none_or(|b| row_major_cmp(&r, b) == Ordering::Less) {
                best = Some(r);
            }
        });
        best.unwrap()
    }

    fn brute_class_form(m: &AltMatrix) -> TripleTensor {
        let mut best: Option<TripleTensor> = None;
        for_each_permutation(m.size(), |p| {
            let t = m
                .relabel(&Permutation::from_images(p.to_vec()).unwrap())
                .unwrap()
                .triple_tensor();
            if best.as_ref().is_none_or(|b| t < *b) {
                best = Some(t);
            }
        });
        best.unwrap()
    }

    #[test]
    fn canonical_forms_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..150 {
            let l = rng.gen_range(2..=5);
            let n = rng.gen_range(1..=6);
            let m = random_matrix(&mut rng, l, n);
            assert_eq!(canonical_iso_form(&m), brute_iso_form(&m), "{m}");
            assert_eq!(canonical_class_form(&m), brute_class_form(&m), "{m}");
        }
        // sparse and highly symmetric inputs stress the twin pruning
        for n in 1..=6 {
            let m = AltMatrix::from_arcs(3, n, &[(0, n - 1, 1)]).unwrap_or(AltMatrix::zero(3, n).unwrap());
            assert_eq!(canonical_iso_form(&m), brute_iso_form(&m));
            assert_eq!(canonical_class_form(&m), brute_class_form(&m));
        }
    }

    #[test]
    fn canonical_iso_is_relabel_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let m = random_matrix(&mut rng, 3, 5);
            let s = random_perm(&mut rng, 5);
            assert_eq!(canonical_iso_form(&m), canonical_iso_form(&m.relabel(&s).unwrap()));
            let (form, sigma) = canonical_iso_labeling(&m);
            assert_eq!(m.relabel(&sigma).unwrap(), form);
        }
    }

    #[test]
    fn class_form_examples() {
        assert!(canonical_class_form(&AltMatrix::zero(3, 5).unwrap()).is_zero());
        assert_eq!(
            canonical_class_form(&ex36()),
            canonical_class_form(&ex36().switch(2).unwrap())
        );
        let a = AltMatrix::from_arcs(3, 6, &[(1, 0, 1), (2, 0, 1)]).unwrap();
        let b = AltMatrix::from_arcs(3, 6, &[(0, 1, 1), (0, 2, 1)]).unwrap();
        assert_ne!(canonical_class_form(&a), canonical_class_form(&b));
    }

    #[test]
    fn isolation_displays() {
        // 1->2, 1->3, 1->4, 2->3, 4->3
        let g = AltMatrix::from_arcs(3, 4, &[(0, 1, 1), (0, 2, 1), (0, 3, 1), (1, 2, 1), (3, 2, 1)])
            .unwrap();
        let i1 = AltMatrix::from_arcs(3, 4, &[(1, 2, 1), (3, 2, 1)]).unwrap();
        let i2 = AltMatrix::from_arcs(3, 4, &[(2, 0, 1)]).unwrap();
        let i3 = AltMatrix::from_arcs(3, 4, &[(0, 1, 1), (0, 3, 1)]).unwrap();
        assert_eq!(g.isolate(0).unwrap(), i1);
        assert_eq!(g.isolate(1).unwrap(), i2);
        assert_eq!(g.isolate(3).unwrap(), i2);
        assert_eq!(g.isolate(2).unwrap(), i3);
        assert_eq!(i1.isolate(0).unwrap(), i1);
        assert!(g.isolate(4).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;
        use rand::Rng;

        fn matrix() -> impl Strategy<Value = AltMatrix> {
            (2u32..=6, 1usize..=6).prop_flat_map(|(l, n)| {
                proptest::collection::vec(0..l as i64, n * (n - 1) / 2)
                    .prop_map(move |u| AltMatrix::from_upper(l, n, &u).unwrap())
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn switch_has_order_l(m in matrix(), v in 0usize..6) {
                let v = v % m.size();
                let mut s = m.clone();
                for _ in 0..m.modulus() {
                    s = s.switch(v).unwrap();
                }
                prop_assert_eq!(s, m);
            }

            #[test]
            fn switch_everywhere_is_identity(m in matrix()) {
                let mut s = m.clone();
                for v in 0..m.size() {
                    s = s.switch(v).unwrap();
                }
                prop_assert_eq!(s, m);
            }

            #[test]
            fn switches_commute(m in matrix(), v in 0usize..6, w in 0usize..6) {
                let (v, w) = (v % m.size(), w % m.size());
                prop_assert_eq!(
                    m.switch(v).unwrap().switch(w).unwrap(),
                    m.switch(w).unwrap().switch(v).unwrap()
                );
            }

            #[test]
            fn triple_tensor_is_switching_invariant(m in matrix(), v in 0usize..6) {
                let v = v % m.size();
                prop_assert_eq!(m.switch(v).unwrap().triple_tensor(), m.triple_tensor());
            }

            #[test]
            fn triple_tensor_follows_relabeling(m in matrix(), seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let s = random_perm(&mut rng, m.size());
                let t = m.triple_tensor();
                let tr = m.relabel(&s).unwrap().triple_tensor();
                let n = m.size();
                for i in 0..n {
                    for j in i + 1..n {
                        for h in j + 1..n {
                            prop_assert_eq!(tr.get(s.apply(i), s.apply(j), s.apply(h)), t.get(i, j, h));
                        }
                    }
                }
            }

            #[test]
            fn isolation_is_idempotent(m in matrix(), v in 0usize..6) {
                let v = v % m.size();
                let i = m.isolate(v).unwrap();
                prop_assert!(i.row(v).iter().all(|&x| x == 0));
                prop_assert_eq!(i.isolate(v).unwrap(), i.clone());
                prop_assert_eq!(i.triple_tensor(), m.triple_tensor());
            }

            #[test]
            fn witnesses_verify_and_agree_with_class_forms(m in matrix(), seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let n = m.size();
                let l = m.modulus();
                let a: Vec<i64> = (0..n).map(|_| rng.gen_range(0..l) as i64).collect();
                let s = random_perm(&mut rng, n);
                let target = m.switch_many(&SwitchExponents::new(l, &a).unwrap()).unwrap().relabel(&s).unwrap();
                let w = switching_equivalent(&m, &target).unwrap();
                prop_assert!(w.as_ref().is_some_and(|w| w.verify(&m, &target)));
                prop_assert_eq!(canonical_class_form(&m), canonical_class_form(&target));

                let other = random_matrix(&mut rng, l, n);
                let w = switching_equivalent(&m, &other).unwrap();
                if let Some(w) = &w {
                    prop_assert!(w.verify(&m, &other));
                    prop_assert_eq!(w.exponents.get(0), 0);
                }
                prop_assert_eq!(w.is_some(), canonical_class_form(&m) == canonical_class_form(&other));
            }

            #[test]
            fn isomorphism_witness_verifies(m in matrix(), seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let s = random_perm(&mut rng, m.size());
                let r = m.relabel(&s).unwrap();
                let found = isomorphic(&m, &r).unwrap().unwrap();
                prop_assert_eq!(m.relabel(&found).unwrap(), r);
            }
        }
    }
}
