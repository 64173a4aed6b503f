//! Test-side oracles that share no code with the library: a small PRNG, a
//! relation-by-relation word rewriter, strand tracking for permutations, and
//! the Burau representation over a prime field.

#![allow(dead_code)]

use tcsp_core::braid::BraidWord;

/// SplitMix64.
#[derive(Clone)]
pub struct Mix(u64);

impl Mix {
    pub fn new(seed: u64) -> Self {
        Mix(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (bias is irrelevant at test sizes).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }

    pub fn coin(&mut self) -> bool {
        self.next() & 1 == 1
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// Random signed letters over generators `lo..=hi`.
pub fn random_letters(rng: &mut Mix, lo: u16, hi: u16, len: usize) -> Vec<i16> {
    (0..len)
        .map(|_| {
            let i = rng.range(lo as i64, hi as i64) as i16;
            if rng.coin() {
                i
            } else {
                -i
            }
        })
        .collect()
}

pub fn random_word(rng: &mut Mix, n: u16, max_len: usize) -> BraidWord {
    let len = rng.below(max_len as u64 + 1) as usize;
    BraidWord::new(n, random_letters(rng, 1, n - 1, len)).unwrap()
}

pub fn letters(w: &BraidWord) -> Vec<i16> {
    w.letters().iter().map(|l| l.signed()).collect()
}

/// Final position of each strand, by moving strands around one crossing at a time.
pub fn strand_images(n: u16, word: &[i16]) -> Vec<u8> {
    let mut at: Vec<u8> = (0..n as u8).collect();
    for &l in word {
        let i = l.unsigned_abs() as usize;
        at.swap(i - 1, i);
    }
    let mut images = vec![0u8; n as usize];
    for (pos, &strand) in at.iter().enumerate() {
        images[strand as usize] = pos as u8;
    }
    images
}

/// Which rewrite was applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rewrite {
    InsertPair,
    CancelPair,
    FarCommute,
    BraidRelation,
    MixedRelation,
}

fn adjacent(a: i16, b: i16) -> bool {
    (a.abs() - b.abs()).abs() == 1
}

/// Applies one defining-relation rewrite at a random applicable site.
/// Falls back to inserting a cancelling pair when the chosen kind has no site.
pub fn rewrite_once(rng: &mut Mix, n: u16, w: &mut Vec<i16>) -> Rewrite {
    let kind = rng.below(5);
    let sites = |pred: &dyn Fn(&[i16]) -> bool, width: usize, w: &Vec<i16>| -> Vec<usize> {
        if w.len() < width {
            return Vec::new();
        }
        (0..=w.len() - width)
            .filter(|&p| pred(&w[p..p + width]))
            .collect()
    };
    match kind {
        1 => {
            let s = sites(&|s| s[0] == -s[1], 2, w);
            if !s.is_empty() {
                let p = s[rng.below(s.len() as u64) as usize];
                w.drain(p..p + 2);
                return Rewrite::CancelPair;
            }
        }
        2 => {
            let s = sites(&|s| (s[0].abs() - s[1].abs()).abs() >= 2, 2, w);
            if !s.is_empty() {
                let p = s[rng.below(s.len() as u64) as usize];
                w.swap(p, p + 1);
                return Rewrite::FarCommute;
            }
        }
        3 => {
            // aba -> bab, all letters of one sign.
            let s = sites(
                &|s| s[0] == s[2] && adjacent(s[0], s[1]) && (s[0] > 0) == (s[1] > 0),
                3,
                w,
            );
            if !s.is_empty() {
                let p = s[rng.below(s.len() as u64) as usize];
                let (a, b) = (w[p], w[p + 1]);
                w[p..p + 3].copy_from_slice(&[b, a, b]);
                return Rewrite::BraidRelation;
            }
        }
        4 => {
            let s = sites(&|s| s[2] == -s[0] && adjacent(s[0], s[1]), 3, w);
            if !s.is_empty() {
                let p = s[rng.below(s.len() as u64) as usize];
                let (a, b) = (w[p], w[p + 1]);
                // σiσjσi⁻¹ = σj⁻¹σiσj and its inverse/mirror forms:
                //   [ i,  j, -i] -> [-j,  i,  j]
                //   [-i, -j,  i] -> [ j, -i, -j]
                //   [ i, -j, -i] -> [-j, -i,  j]
                //   [-i,  j,  i] -> [ j,  i, -j]
                let out = if (a > 0) == (b > 0) {
                    [-b, a, b]
                } else {
                    [b, -a, -b]
                };
                w[p..p + 3].copy_from_slice(&out);
                return Rewrite::MixedRelation;
            }
        }
        _ => {}
    }
    let i = rng.range(1, n as i64 - 1) as i16;
    let l = if rng.coin() { i } else { -i };
    let p = rng.below(w.len() as u64 + 1) as usize;
    w.splice(p..p, [l, -l]);
    Rewrite::InsertPair
}

/// Burau representation over `F_p`, `p = 2^61 - 1`, at a fixed parameter `t`.
pub struct Burau {
    n: usize,
    t: u64,
    t_inv: u64,
}

pub const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

impl Burau {
    pub fn new(n: u16, t: u64) -> Self {
        let t = t % P;
        assert!(t > 1);
        Burau {
            n: n as usize,
            t,
            t_inv: pow(t, P - 2),
        }
    }

    /// Row-major `n × n` matrix of the word.
    pub fn matrix(&self, word: &[i16]) -> Vec<u64> {
        let n = self.n;
        let mut m = vec![0u64; n * n];
        for k in 0..n {
            m[k * n + k] = 1;
        }
        for &l in word {
            let (a, b) = (l.unsigned_abs() as usize - 1, l.unsigned_abs() as usize);
            for r in 0..n {
                let (ma, mb) = (m[r * n + a], m[r * n + b]);
                if l > 0 {
                    m[r * n + a] = add(mul(ma, sub(1, self.t)), mb);
                    m[r * n + b] = mul(ma, self.t);
                } else {
                    m[r * n + a] = mul(mb, self.t_inv);
                    m[r * n + b] = add(ma, mul(mb, sub(1, self.t_inv)));
                }
            }
        }
        m
    }

    pub fn of(&self, w: &BraidWord) -> Vec<u64> {
        self.matrix(&letters(w))
    }
}
