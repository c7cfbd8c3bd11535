use std::fmt;

use crate::error::{Error, Result};

/// A permutation of `0..n`, stored as its image vector: `sigma(i) = images[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::NotAPermutation(n));
            }
            seen[x] = true;
        }
        Ok(Self { images })
    }

    /// Parse 1-indexed images, as used in files and on the command line.
    pub fn from_one_based(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let zero_based = images
            .iter()
            .map(|&x| x.checked_sub(1).ok_or(Error::NotAPermutation(n)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_images(zero_based)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|x| x + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x] = i;
        }
        Self { images: inv }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len());
        Self {
            images: other.images.iter().map(|&x| self.images[x]).collect(),
        }
    }

    /// Lengths of the cycles, in order of their smallest element.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            out.push(len);
        }
        out
    }

    /// Permutation with consecutive cycles of the given lengths:
    /// `(0 1 .. k-1)(k ..)`.
    pub fn from_cycle_type(lengths: &[usize]) -> Self {
        let n = lengths.iter().sum();
        let mut images = vec![0; n];
        let mut start = 0;
        for &len in lengths {
            for k in 0..len {
                images[start + k] = start + (k + 1) % len;
            }
            start += len;
        }
        Self { images }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_one_based().iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Visit every permutation of `0..n` in lexicographic order of the image vector.
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        visit(&p);
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![0, 2]).is_err());
        assert!(Permutation::from_one_based(&[0, 1]).is_err());
        assert!(Permutation::from_one_based(&[2, 1]).is_ok());
    }

    #[test]
    fn inverse_and_compose() {
        let p = Permutation::from_images(vec![1, 2, 0]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.compose(&p).images(), &[2, 0, 1]);
        assert_eq!(p.cycle_lengths(), vec![3]);
    }

    #[test]
    fn cycle_type_roundtrip() {
        let p = Permutation::from_cycle_type(&[3, 2, 1]);
        assert_eq!(p.cycle_lengths(), vec![3, 2, 1]);
        assert_eq!(p.images(), &[1, 2, 0, 4, 3, 5]);
    }

    #[test]
    fn enumerates_all_in_order() {
        let mut seen = Vec::new();
        for_each_permutation(3, |p| seen.push(p.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[5], vec![2, 1, 0]);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
        let mut count = 0;
        for_each_permutation(0, |_| count += 1);
        assert_eq!(count, 1);
    }
}
