use std::fmt;

use super::perm::PermutationBraid;
use super::{check_strands, BraidWord};
use crate::error::{Error, Result};

/// Garside left-greedy normal form `Δ^p · A_1 ⋯ A_k`.
///
/// Every `A_i` is a permutation braid other than the identity and `Δ`, and
/// consecutive factors are left-weighted: `S(A_{i+1}) ⊆ F(A_i)`. Two words
/// represent the same group element exactly when their forms are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: u16,
    delta_exp: i32,
    factors: Vec<PermutationBraid>,
}

impl CanonicalForm {
    pub fn identity(n: u16) -> Self {
        Self {
            n,
            delta_exp: 0,
            factors: Vec::new(),
        }
    }

    /// Assembles a form from its parts, checking every normal-form invariant.
    pub fn from_parts(n: u16, delta_exp: i32, factors: Vec<PermutationBraid>) -> Result<Self> {
        check_strands(n)?;
        for f in &factors {
            if f.strands() != n {
                return Err(Error::StrandMismatch {
                    left: n,
                    right: f.strands(),
                });
            }
            if f.is_identity() || f.is_delta() {
                return Err(Error::InvalidParams(
                    "normal-form factors must be proper simple braids".into(),
                ));
            }
        }
        let cf = Self {
            n,
            delta_exp,
            factors,
        };
        if !cf.is_left_weighted() {
            return Err(Error::InvalidParams("factors are not left-weighted".into()));
        }
        Ok(cf)
    }

    pub fn strands(&self) -> u16 {
        self.n
    }

    pub fn delta_exp(&self) -> i32 {
        self.delta_exp
    }

    pub fn factors(&self) -> &[PermutationBraid] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.delta_exp == 0 && self.factors.is_empty()
    }

    pub fn is_left_weighted(&self) -> bool {
        self.factors
            .windows(2)
            .all(|w| w[1].starting_set() & !w[0].finishing_set() == 0)
    }

    /// Expands back into a word: `Δ^p` spelled out, then each factor.
    pub fn to_word(&self) -> BraidWord {
        let n = self.n;
        let delta = PermutationBraid::delta(n).to_word();
        let unit = if self.delta_exp >= 0 {
            delta
        } else {
            delta.invert()
        };
        let mut letters = Vec::new();
        for _ in 0..self.delta_exp.unsigned_abs() {
            letters.extend_from_slice(unit.letters());
        }
        for f in &self.factors {
            letters.extend_from_slice(f.to_word().letters());
        }
        BraidWord::from_letters_unchecked(n, letters)
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        Ok(Product::from_form(self).form(other)?.finish())
    }

    pub fn inverse(&self) -> Self {
        Product::new(self.n)
            .inverse_form(self)
            .expect("same strand count")
            .finish()
    }

    /// Normal form of `t·self·t⁻¹`.
    pub fn conjugate_by(&self, t: &BraidWord) -> Result<Self> {
        Ok(Product::new(self.n)
            .word(t)?
            .form(self)?
            .inverse_word(t)?
            .finish())
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NF{}(Δ^{}", self.n, self.delta_exp)?;
        for a in &self.factors {
            write!(f, " · {a:?}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Δ^{}", self.delta_exp)?;
        for a in &self.factors {
            let images: Vec<String> = a.images().iter().map(u8::to_string).collect();
            write!(f, " [{}]", images.join(" "))?;
        }
        Ok(())
    }
}

pub fn normal_form(word: &BraidWord) -> CanonicalForm {
    Product::new(word.strands())
        .word(word)
        .expect("same strand count")
        .finish()
}

/// Incremental right multiplication that keeps a left-normal form.
///
/// Factors are stored in a frame twisted by `Δ`: when `flipped` is set,
/// the true factor is the `Δ`-conjugate of the stored one. Right
/// multiplication by an odd power of `Δ` then only toggles the flag.
#[derive(Clone, Debug)]
pub struct Product {
    n: u16,
    delta_exp: i64,
    flipped: bool,
    factors: Vec<PermutationBraid>,
}

impl Product {
    pub fn new(n: u16) -> Self {
        Self {
            n,
            delta_exp: 0,
            flipped: false,
            factors: Vec::new(),
        }
    }

    pub fn from_form(cf: &CanonicalForm) -> Self {
        Self {
            n: cf.n,
            delta_exp: cf.delta_exp as i64,
            flipped: false,
            factors: cf.factors.clone(),
        }
    }

    fn check(&self, n: u16) -> Result<()> {
        if self.n == n {
            Ok(())
        } else {
            Err(Error::StrandMismatch {
                left: self.n,
                right: n,
            })
        }
    }

    pub fn word(mut self, w: &BraidWord) -> Result<Self> {
        self.check(w.strands())?;
        for l in w.letters() {
            let g = PermutationBraid::generator(self.n, l.index());
            if l.is_positive() {
                self.push_simple(g);
            } else {
                self.push_delta(-1);
                self.push_simple(g.left_complement());
            }
        }
        Ok(self)
    }

    pub fn inverse_word(self, w: &BraidWord) -> Result<Self> {
        self.word(&w.invert())
    }

    pub fn form(mut self, cf: &CanonicalForm) -> Result<Self> {
        self.check(cf.n)?;
        self.push_delta(cf.delta_exp as i64);
        for a in &cf.factors {
            self.push_simple(a.clone());
        }
        Ok(self)
    }

    /// Multiplies by `(Δ^p A_1⋯A_k)⁻¹ = A_k⁻¹⋯A_1⁻¹ Δ^{-p}`, with each
    /// `A⁻¹` written as `Δ⁻¹·(Δ A⁻¹)`.
    pub fn inverse_form(mut self, cf: &CanonicalForm) -> Result<Self> {
        self.check(cf.n)?;
        for a in cf.factors.iter().rev() {
            self.push_delta(-1);
            self.push_simple(a.left_complement());
        }
        self.push_delta(-(cf.delta_exp as i64));
        Ok(self)
    }

    pub fn finish(self) -> CanonicalForm {
        let flipped = self.flipped;
        let factors = self
            .factors
            .into_iter()
            .map(|f| if flipped { f.flip() } else { f })
            .collect();
        CanonicalForm {
            n: self.n,
            delta_exp: i32::try_from(self.delta_exp).expect("Δ exponent exceeds i32"),
            factors,
        }
    }

    fn push_delta(&mut self, e: i64) {
        self.delta_exp += e;
        if e % 2 != 0 {
            self.flipped = !self.flipped;
        }
    }

    fn push_simple(&mut self, simple: PermutationBraid) {
        if simple.is_identity() {
            return;
        }
        let simple = if self.flipped { simple.flip() } else { simple };
        self.factors.push(simple);

        let mut j = self.factors.len() - 1;
        while j > 0 {
            let (head, tail) = self.factors.split_at_mut(j);
            if !left_weight(&mut head[j - 1], &mut tail[0]) {
                break;
            }
            j -= 1;
        }

        let deltas = self.factors.iter().take_while(|f| f.is_delta()).count();
        if deltas > 0 {
            self.factors.drain(..deltas);
            self.delta_exp += deltas as i64;
        }
        while self
            .factors
            .last()
            .is_some_and(PermutationBraid::is_identity)
        {
            self.factors.pop();
        }
    }
}

/// Moves crossings from the front of `right` onto the end of `left` until
/// `S(right) ⊆ F(left)`. Returns whether anything moved.
fn left_weight(left: &mut PermutationBraid, right: &mut PermutationBraid) -> bool {
    let mut moved = false;
    loop {
        let movable = right.starting_set() & !left.finishing_set();
        if movable == 0 {
            return moved;
        }
        let i = movable.trailing_zeros() as usize;
        left.push_crossing(i);
        right.pop_crossing(i);
        moved = true;
    }
}
