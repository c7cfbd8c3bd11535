//! Point simplicial complexes.
//!
//! A vertex set `F` is a face when every triple inside it has zero triple sum.
//! Faces are therefore determined by triples, and the facets are the maximal
//! faces. Each facet `F` is the support of a linear component `P(F)` of the
//! point variety.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::skewmat::AltMatrix;

/// Vertex count plus facet list; facets sorted ascending, list sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SimplicialComplex {
    n: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Build from (0-based) vertex sets; non-maximal sets are dropped.
    pub fn from_faces(n: usize, faces: &[Vec<usize>]) -> Result<Self> {
        if n > 64 {
            return Err(Error::TooManyVertices(n));
        }
        let mut masks = Vec::with_capacity(faces.len());
        for f in faces {
            let mut mask = 0u64;
            for &v in f {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, size: n });
                }
                mask |= 1 << v;
            }
            masks.push(mask);
        }
        Ok(Self::from_masks(n, masks))
    }

    fn from_masks(n: usize, mut masks: Vec<u64>) -> Self {
        masks.sort_unstable();
        masks.dedup();
        let maximal: Vec<u64> = masks
            .iter()
            .copied()
            .filter(|&f| !masks.iter().any(|&g| g != f && g & f == f))
            .collect();
        let mut facets: Vec<Vec<usize>> = maximal.into_iter().map(mask_to_vec).collect();
        facets.sort();
        Self { n, facets }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn dimension(&self) -> usize {
        self.facets.iter().map(Vec::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// Facets written as 1-indexed digit strings, e.g. `{123, 14}`.
    pub fn to_one_based(&self) -> Vec<Vec<usize>> {
        self.facets
            .iter()
            .map(|f| f.iter().map(|v| v + 1).collect())
            .collect()
    }

    /// The complex obtained by renaming vertex `v` to `sigma(v)`.
    pub fn relabel(&self, sigma: &Permutation) -> SimplicialComplex {
        let masks = self
            .masks()
            .into_iter()
            .map(|f| {
                mask_to_vec(f)
                    .into_iter()
                    .fold(0u64, |acc, v| acc | (1 << sigma.apply(v)))
            })
            .collect();
        Self::from_masks(self.n, masks)
    }

    fn masks(&self) -> Vec<u64> {
        self.facets
            .iter()
            .map(|f| f.iter().fold(0u64, |acc, &v| acc | (1 << v)))
            .collect()
    }

    /// No facet contains another and every vertex lies in some facet.
    pub fn is_valid(&self) -> bool {
        let masks = self.masks();
        let antichain = masks
            .iter()
            .enumerate()
            .all(|(i, &f)| masks.iter().enumerate().all(|(j, &g)| i == j || g & f != f));
        let cover = masks.iter().fold(0u64, |a, &f| a | f);
        antichain && cover == full_mask(self.n)
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .to_one_based()
            .iter()
            .map(|face| {
                let sep = if self.n > 9 { "," } else { "" };
                face.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn mask_to_vec(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let v = mask.trailing_zeros() as usize;
        out.push(v);
        mask &= mask - 1;
    }
    out
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_small(m: &AltMatrix) -> Result<()> {
    if m.size() > 64 {
        Err(Error::TooManyVertices(m.size()))
    } else {
        Ok(())
    }
}

/// `true` iff every 3-subset of `face` has zero triple sum.
pub fn is_face(m: &AltMatrix, face: &[usize]) -> Result<bool> {
    for &v in face {
        if v >= m.size() {
            return Err(Error::VertexOutOfRange {
                vertex: v,
                size: m.size(),
            });
        }
    }
    let mut f = face.to_vec();
    f.sort_unstable();
    f.dedup();
    for a in 0..f.len() {
        for b in a + 1..f.len() {
            for c in b + 1..f.len() {
                if m.triple_sum(f[a], f[b], f[c]) != 0 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Facets of the point simplicial complex of `m`.
///
/// Faces are grown by adding vertices in increasing order; `compatible[i][j]`
/// holds the vertices `w` with `t_ijw = 0`, so the vertices that may join a
/// face `S` are the intersection over the pairs of `S`. A face is emitted
/// when no outside vertex may join it.
pub fn facets(m: &AltMatrix) -> Result<SimplicialComplex> {
    check_small(m)?;
    let n = m.size();
    let mut compatible = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let mut mask = 0u64;
            for w in 0..n {
                if w != i && w != j && m.triple_sum(i, j, w) == 0 {
                    mask |= 1 << w;
                }
            }
            compatible[i][j] = mask;
            compatible[j][i] = mask;
        }
    }
    let mut out = Vec::new();
    grow(&compatible, n, 0, full_mask(n), &mut out);
    Ok(SimplicialComplex::from_masks(n, out))
}

fn grow(compatible: &[Vec<u64>], n: usize, face: u64, allowed: u64, out: &mut Vec<u64>) {
    let outside = allowed & !face;
    if outside == 0 {
        out.push(face);
        return;
    }
    let start = if face == 0 {
        0
    } else {
        64 - face.leading_zeros() as usize
    };
    for w in start..n {
        if outside & (1 << w) == 0 {
            continue;
        }
        let mut next = allowed;
        let mut rest = face;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            next &= compatible[i][w] | face | (1 << w);
            rest &= rest - 1;
        }
        grow(compatible, n, face | (1 << w), next, out);
    }
}

/// All maximal vertex sets on which `m` vanishes identically.
pub fn maximal_independent_sets(m: &AltMatrix) -> Result<Vec<Vec<usize>>> {
    check_small(m)?;
    let adj = m.support_masks();
    let n = m.size();
    // maximal cliques of the complement
    let non_adj: Vec<u64> = (0..n).map(|v| !adj[v] & full_mask(n) & !(1 << v)).collect();
    let mut out = Vec::new();
    bron_kerbosch(&non_adj, 0, full_mask(n), 0, &mut out);
    let mut sets: Vec<Vec<usize>> = out.into_iter().map(mask_to_vec).collect();
    sets.sort();
    Ok(sets)
}

fn bron_kerbosch(nbrs: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut candidates = p & !nbrs[pivot];
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        let bit = 1u64 << v;
        bron_kerbosch(nbrs, r | bit, p & nbrs[v], x & nbrs[v], out);
        p &= !bit;
        x |= bit;
        candidates &= !bit;
    }
}

/// Largest vertex set supporting an all-zero submatrix.
pub fn independence_number(m: &AltMatrix) -> Result<usize> {
    Ok(maximal_independent_sets(m)?
        .iter()
        .map(Vec::len)
        .max()
        .unwrap_or(0))
}

/// Facets assembled from the maximal independent sets of every isolation.
pub fn facets_via_isolations(m: &AltMatrix) -> Result<SimplicialComplex> {
    check_small(m)?;
    let mut faces = Vec::new();
    for v in 0..m.size() {
        faces.extend(maximal_independent_sets(&m.isolate(v)?)?);
    }
    SimplicialComplex::from_faces(m.size(), &faces)
}

pub fn dimension(complex: &SimplicialComplex) -> usize {
    complex.dimension()
}

/// A vertex bijection carrying the facets of `a` onto the facets of `b`,
/// lexicographically first in image order.
pub fn complexes_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> Option<Permutation> {
    if a.n != b.n || a.facets.len() != b.facets.len() {
        return None;
    }
    let n = a.n;
    let mut sizes_a: Vec<usize> = a.facets.iter().map(Vec::len).collect();
    let mut sizes_b: Vec<usize> = b.facets.iter().map(Vec::len).collect();
    sizes_a.sort_unstable();
    sizes_b.sort_unstable();
    if sizes_a != sizes_b {
        return None;
    }
    let (ma, mb) = (a.masks(), b.masks());
    let profile = |masks: &[u64]| -> Vec<Vec<u32>> {
        (0..n)
            .map(|v| {
                let mut p: Vec<u32> = masks
                    .iter()
                    .filter(|&&f| f & (1 << v) != 0)
                    .map(|f| f.count_ones())
                    .collect();
                p.sort_unstable();
                p
            })
            .collect()
    };
    let (pa, pb) = (profile(&ma), profile(&mb));
    let co = |masks: &[u64]| -> Vec<Vec<usize>> {
        (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| {
                        masks
                            .iter()
                            .filter(|&&f| f & (1 << u) != 0 && f & (1 << v) != 0)
                            .count()
                    })
                    .collect()
            })
            .collect()
    };
    let (ca, cb) = (co(&ma), co(&mb));
    let mut target: Vec<u64> = mb.clone();
    target.sort_unstable();

    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn dfs(
        i: usize,
        n: usize,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
        leaf: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if i == n {
            return leaf(sigma);
        }
        for j in 0..n {
            if used[j] || !ok(i, j, sigma) {
                continue;
            }
            sigma[i] = j;
            used[j] = true;
            if dfs(i + 1, n, sigma, used, ok, leaf) {
                return true;
            }
            used[j] = false;
            sigma[i] = usize::MAX;
        }
        false
    }
    let ok = |i: usize, j: usize, sigma: &[usize]| {
        pa[i] == pb[j] && ca[i][i] == cb[j][j] && (0..i).all(|k| ca[i][k] == cb[j][sigma[k]])
    };
    let leaf = |sigma: &[usize]| {
        let mut image: Vec<u64> = ma
            .iter()
            .map(|&f| mask_to_vec(f).into_iter().fold(0u64, |acc, v| acc | (1 << sigma[v])))
            .collect();
        image.sort_unstable();
        image == target
    };
    if dfs(0, n, &mut sigma, &mut used, &ok, &leaf) {
        Some(Permutation::from_images(sigma).expect("bijection"))
    } else {
        None
    }
}

/// A single `sigma` matching the support graph of every isolation `I_v(a)`
/// with that of `I_{sigma(v)}(b)`.
pub fn isolation_graphs_match(a: &AltMatrix, b: &AltMatrix) -> Result<Option<Permutation>> {
    check_small(a)?;
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(a.size(), b.size()));
    }
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(a.modulus(), b.modulus()));
    }
    let n = a.size();
    let graphs = |m: &AltMatrix| -> Result<Vec<Vec<u64>>> {
        (0..n).map(|v| Ok(m.isolate(v)?.support_masks())).collect()
    };
    let (ga, gb) = (graphs(a)?, graphs(b)?);
    let adj = |g: &[Vec<u64>], v: usize, x: usize, y: usize| g[v][x] & (1 << y) != 0;
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn dfs(
        i: usize,
        n: usize,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(usize, usize, &[usize]) -> bool,
    ) -> bool {
        if i == n {
            return true;
        }
        for j in 0..n {
            if used[j] || !ok(i, j, sigma) {
                continue;
            }
            sigma[i] = j;
            used[j] = true;
            if dfs(i + 1, n, sigma, used, ok) {
                return true;
            }
            used[j] = false;
            sigma[i] = usize::MAX;
        }
        false
    }
    let ok = |i: usize, j: usize, sigma: &[usize]| {
        let s = |k: usize| if k == i { j } else { sigma[k] };
        // every (v, x, y) among assigned vertices that involves i
        for v in 0..=i {
            for x in 0..=i {
                for y in 0..=i {
                    if x == y || (v != i && x != i && y != i) {
                        continue;
                    }
                    if adj(&ga, v, x, y) != adj(&gb, s(v), s(x), s(y)) {
                        return false;
                    }
                }
            }
        }
        true
    };
    Ok(dfs(0, n, &mut sigma, &mut used, &ok)
        .then(|| Permutation::from_images(sigma).expect("bijection")))
}

/// One linear component `P(F)` of the point variety per facet `F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDescriptor {
    pub support: Vec<usize>,
    pub projective_dimension: usize,
}

pub fn variety_components(complex: &SimplicialComplex) -> Vec<ComponentDescriptor> {
    complex
        .facets
        .iter()
        .map(|f| ComponentDescriptor {
            support: f.clone(),
            projective_dimension: f.len().saturating_sub(1),
        })
        .collect()
}

/// Dimension of the point variety: the largest component.
pub fn variety_dimension(complex: &SimplicialComplex) -> usize {
    variety_components(complex)
        .iter()
        .map(|c| c.projective_dimension)
        .max()
        .unwrap_or(0)
}
