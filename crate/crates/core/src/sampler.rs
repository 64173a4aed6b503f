//! Seeded randomness and sampling from the commuting subgroups `LB_l`, `RB_r`.

use std::ops::RangeInclusive;

use sha2::{Digest, Sha256};

use crate::braid::{BraidWord, GroupParams, Letter};
use crate::error::{Error, Result};

/// Deterministic counter-mode generator: block `i` is
/// `SHA-256("tcsp-rng" || seed || i as u64 BE)`.
///
/// Equal seeds give equal draw sequences. Clone to fork a stream.
#[derive(Clone)]
pub struct SeededRng {
    seed: [u8; 32],
    counter: u64,
    block: [u8; 32],
    used: usize,
}

impl SeededRng {
    pub fn new(seed: [u8; 32]) -> Self {
        Self {
            seed,
            counter: 0,
            block: [0; 32],
            used: 32,
        }
    }

    /// Convenience seed for tests and fixtures: the 8-byte big-endian value,
    /// zero padded.
    pub fn from_u64(v: u64) -> Self {
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&v.to_be_bytes());
        Self::new(seed)
    }

    /// Parses a seed given as exactly 64 hex characters.
    pub fn from_hex(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.len() != 64 {
            return Err(Error::InvalidParams(format!(
                "seed must be 64 hex characters, got {}",
                s.len()
            )));
        }
        let mut seed = [0u8; 32];
        for (i, chunk) in s.as_bytes().chunks(2).enumerate() {
            let pair = std::str::from_utf8(chunk).unwrap_or("");
            seed[i] = u8::from_str_radix(pair, 16)
                .map_err(|_| Error::InvalidParams(format!("bad hex in seed at {}", 2 * i)))?;
        }
        Ok(Self::new(seed))
    }

    pub fn seed(&self) -> &[u8; 32] {
        &self.seed
    }

    /// Number of blocks drawn so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    fn refill(&mut self) {
        let mut h = Sha256::new();
        h.update(b"tcsp-rng");
        h.update(self.seed);
        h.update(self.counter.to_be_bytes());
        self.block.copy_from_slice(&h.finalize());
        self.counter += 1;
        self.used = 0;
    }

    pub fn fill_bytes(&mut self, out: &mut [u8]) {
        for b in out {
            if self.used == self.block.len() {
                self.refill();
            }
            *b = self.block[self.used];
            self.used += 1;
        }
    }

    pub fn next_u32(&mut self) -> u32 {
        let mut buf = [0u8; 4];
        self.fill_bytes(&mut buf);
        u32::from_be_bytes(buf)
    }

    /// Uniform value in `0..bound` by rejection sampling.
    pub fn below(&mut self, bound: u32) -> u32 {
        assert!(bound > 0, "empty range");
        let zone = u32::MAX - (u32::MAX % bound);
        loop {
            let v = self.next_u32();
            if v < zone {
                return v % bound;
            }
        }
    }

    pub fn coin(&mut self) -> bool {
        self.next_u32() & 1 == 1
    }

    pub fn bytes<const N: usize>(&mut self) -> [u8; N] {
        let mut out = [0u8; N];
        self.fill_bytes(&mut out);
        out
    }
}

impl std::fmt::Debug for SeededRng {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeededRng")
            .field("counter", &self.counter)
            .finish_non_exhaustive()
    }
}

/// Which commuting subgroup of `B_{l+r}` to draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubgroupSide {
    /// `LB_l`, generated by `σ_1..σ_{l-1}`.
    Left,
    /// `RB_r`, generated by `σ_{l+1}..σ_{l+r-1}`.
    Right,
}

impl SubgroupSide {
    /// Generator indices available to this side. `σ_l` belongs to neither.
    pub fn generators(self, params: &GroupParams) -> RangeInclusive<u16> {
        match self {
            SubgroupSide::Left => 1..=params.l() - 1,
            SubgroupSide::Right => params.l() + 1..=params.n() - 1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            SubgroupSide::Left => SubgroupSide::Right,
            SubgroupSide::Right => SubgroupSide::Left,
        }
    }

    pub fn contains(self, params: &GroupParams, word: &BraidWord) -> bool {
        let range = self.generators(params);
        word.strands() == params.n() && word.letters().iter().all(|l| range.contains(&l.index()))
    }
}

fn sample_range(
    n: u16,
    range: RangeInclusive<u16>,
    len: u16,
    rng: &mut SeededRng,
) -> Result<BraidWord> {
    if range.is_empty() {
        return Err(Error::EmptySubgroup);
    }
    let lo = *range.start();
    let count = (*range.end() - lo + 1) as u32;
    let letters = (0..len)
        .map(|_| {
            let i = lo + rng.below(count) as u16;
            if rng.coin() {
                Letter::positive(i).signed()
            } else {
                Letter::negative(i).signed()
            }
        })
        .collect::<Vec<_>>();
    Ok(BraidWord::new(n, letters)?.free_reduce())
}

/// Draws `W` uniform signed generators from the side's range and freely
/// reduces the result.
pub fn sample_subgroup(
    params: &GroupParams,
    side: SubgroupSide,
    rng: &mut SeededRng,
) -> Result<BraidWord> {
    sample_range(
        params.n(),
        side.generators(params),
        params.sample_len(),
        rng,
    )
}

/// Draws `W` uniform signed generators from all of `σ_1..σ_{n-1}`.
pub fn sample_element(params: &GroupParams, rng: &mut SeededRng) -> Result<BraidWord> {
    sample_range(params.n(), 1..=params.n() - 1, params.sample_len(), rng)
}

pub fn commutes(a: &BraidWord, b: &BraidWord) -> Result<bool> {
    a.commutes_with(b)
}
