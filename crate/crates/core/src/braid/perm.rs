use std::fmt;

use super::{BraidWord, Letter};

/// Bit set of generator indices; bit `i` stands for `σ_i`.
pub(crate) type DescentSet = u128;

/// A permutation braid: a positive braid in which every pair of strands
/// crosses at most once. Stored as the 0-based image table of its
/// underlying permutation, where `images[j]` is the final position of the
/// strand that starts at position `j`.
///
/// Composition follows diagram order: `a.then(&b)` is the braid `a·b`,
/// whose strands run through `a` first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermutationBraid {
    images: Vec<u8>,
}

impl PermutationBraid {
    pub fn identity(n: u16) -> Self {
        Self {
            images: (0..n as u8).collect(),
        }
    }

    /// The half-twist `Δ`, whose permutation reverses all strands.
    pub fn delta(n: u16) -> Self {
        Self {
            images: (0..n as u8).rev().collect(),
        }
    }

    /// The crossing `σ_i` (1-based), swapping positions `i-1` and `i`.
    pub fn generator(n: u16, i: u16) -> Self {
        let mut p = Self::identity(n);
        p.images.swap(i as usize - 1, i as usize);
        p
    }

    /// Builds from an image table, returning `None` unless it is a bijection
    /// on `0..len`.
    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            let slot = seen.get_mut(v as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Self { images })
    }

    pub fn strands(&self) -> u16 {
        self.images.len() as u16
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(j, &v)| j == v as usize)
    }

    pub fn is_delta(&self) -> bool {
        let n = self.images.len();
        self.images
            .iter()
            .enumerate()
            .all(|(j, &v)| v as usize == n - 1 - j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.images.len()];
        for (j, &v) in self.images.iter().enumerate() {
            inv[v as usize] = j as u8;
        }
        Self { images: inv }
    }

    /// Permutation of `self·other`: apply `self`, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        debug_assert_eq!(self.images.len(), other.images.len());
        Self {
            images: self
                .images
                .iter()
                .map(|&v| other.images[v as usize])
                .collect(),
        }
    }

    /// Conjugation by `Δ`, sending `σ_i` to `σ_{n-i}`.
    pub fn flip(&self) -> Self {
        let last = self.images.len() as u8 - 1;
        Self {
            images: self.images.iter().rev().map(|&v| last - v).collect(),
        }
    }

    /// The simple element `Δ·self⁻¹`.
    pub fn left_complement(&self) -> Self {
        Self::delta(self.strands()).then(&self.inverse())
    }

    /// Number of crossings (inversions of the permutation).
    pub fn length(&self) -> usize {
        let mut count = 0;
        for a in 0..self.images.len() {
            for b in a + 1..self.images.len() {
                if self.images[a] > self.images[b] {
                    count += 1;
                }
            }
        }
        count
    }

    /// Generators `σ_i` that can begin a positive factorization.
    pub fn starting_set(&self) -> DescentSet {
        descents(&self.images)
    }

    /// Generators `σ_i` that can end a positive factorization.
    pub fn finishing_set(&self) -> DescentSet {
        let mut inv = vec![0u8; self.images.len()];
        for (j, &v) in self.images.iter().enumerate() {
            inv[v as usize] = j as u8;
        }
        descents(&inv)
    }

    /// `self·σ_i`; the caller guarantees `σ_i` is not in the finishing set.
    pub(crate) fn push_crossing(&mut self, i: usize) {
        for v in self.images.iter_mut() {
            if *v as usize == i - 1 {
                *v = i as u8;
            } else if *v as usize == i {
                *v = (i - 1) as u8;
            }
        }
    }

    /// `σ_i⁻¹·self`; the caller guarantees `σ_i` is in the starting set.
    pub(crate) fn pop_crossing(&mut self, i: usize) {
        self.images.swap(i - 1, i);
    }

    /// A positive word spelling this permutation braid.
    pub fn to_word(&self) -> BraidWord {
        let n = self.strands();
        let mut rest = self.clone();
        let mut letters = Vec::with_capacity(rest.length());
        loop {
            let s = rest.starting_set();
            if s == 0 {
                break;
            }
            let i = s.trailing_zeros() as usize;
            letters.push(Letter::positive(i as u16));
            rest.pop_crossing(i);
        }
        BraidWord::from_letters_unchecked(n, letters)
    }
}

fn descents(images: &[u8]) -> DescentSet {
    let mut set = 0;
    for i in 1..images.len() {
        if images[i - 1] > images[i] {
            set |= 1 << i;
        }
    }
    set
}

impl fmt::Debug for PermutationBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}
