//! Braid group arithmetic on `B_n`.
//!
//! Elements enter as [`BraidWord`]s over the Artin generators and are compared
//! through their Garside left-greedy normal form ([`CanonicalForm`]).

mod garside;
mod perm;

use std::fmt;

pub use garside::{normal_form, CanonicalForm, Product};
pub use perm::PermutationBraid;

use crate::error::{Error, Result};

/// Largest supported strand count. Descent sets are kept as `u128` bit sets.
pub const MAX_STRANDS: u16 = 128;

/// A signed Artin generator: `σ_i` for positive values, `σ_i⁻¹` for negative.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter(i16);

impl Letter {
    pub fn positive(i: u16) -> Self {
        Letter(i as i16)
    }

    pub fn negative(i: u16) -> Self {
        Letter(-(i as i16))
    }

    pub fn from_signed(v: i16) -> Self {
        Letter(v)
    }

    pub fn signed(self) -> i16 {
        self.0
    }

    pub fn index(self) -> u16 {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "s{}", self.index())
        } else {
            write!(f, "S{}", self.index())
        }
    }
}

/// A free word in the signed generators of `B_n`. The empty word is the
/// identity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    n: u16,
    letters: Vec<Letter>,
}

pub(crate) fn check_strands(n: u16) -> Result<()> {
    if (2..=MAX_STRANDS).contains(&n) {
        Ok(())
    } else {
        Err(Error::StrandCount(n))
    }
}

fn same_strands(a: u16, b: u16) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::StrandMismatch { left: a, right: b })
    }
}

impl BraidWord {
    pub fn identity(n: u16) -> Result<Self> {
        check_strands(n)?;
        Ok(Self {
            n,
            letters: Vec::new(),
        })
    }

    /// Builds a word from signed generator indices (`3` is `σ_3`, `-3` is
    /// `σ_3⁻¹`). The word is kept as given, without free reduction.
    pub fn new(n: u16, letters: impl IntoIterator<Item = i16>) -> Result<Self> {
        check_strands(n)?;
        let letters = letters
            .into_iter()
            .map(|v| {
                if v == 0 || v.unsigned_abs() >= n {
                    Err(Error::InvalidLetter { index: v as i32, n })
                } else {
                    Ok(Letter(v))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, letters })
    }

    pub(crate) fn from_letters_unchecked(n: u16, letters: Vec<Letter>) -> Self {
        Self { n, letters }
    }

    /// The half-twist `Δ_n = (σ_1⋯σ_{n-1})(σ_1⋯σ_{n-2})⋯(σ_1)`.
    pub fn delta(n: u16) -> Result<Self> {
        check_strands(n)?;
        let letters = (1..n)
            .rev()
            .flat_map(|top| (1..=top).map(Letter::positive))
            .collect();
        Ok(Self { n, letters })
    }

    pub fn strands(&self) -> u16 {
        self.n
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Cancels adjacent `σ_i σ_i⁻¹` pairs until none remain.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self {
            n: self.n,
            letters: out,
        }
    }

    /// The word for `self·other`, freely reduced.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        same_strands(self.n, other.n)?;
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Self { n: self.n, letters }.free_reduce())
    }

    /// The reversed word with every sign flipped.
    pub fn invert(&self) -> Self {
        Self {
            n: self.n,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
        .free_reduce()
    }

    /// The word for `t·self·t⁻¹`.
    pub fn conjugate(&self, t: &Self) -> Result<Self> {
        same_strands(self.n, t.n)?;
        t.multiply(self)?.multiply(&t.invert())
    }

    /// Image in the symmetric group; signs are ignored.
    pub fn permutation(&self) -> PermutationBraid {
        let mut p = PermutationBraid::identity(self.n);
        for l in &self.letters {
            p.push_crossing(l.index() as usize);
        }
        p
    }

    pub fn normal_form(&self) -> CanonicalForm {
        normal_form(self)
    }

    /// Group equality, decided by comparing normal forms.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        same_strands(self.n, other.n)?;
        Ok(self.normal_form() == other.normal_form())
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        self.multiply(other)?.equals(&other.multiply(self)?)
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}{:?}", self.n, self.letters)
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| l.signed().to_string())
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Free function forms of the word operations.
pub fn multiply(a: &BraidWord, b: &BraidWord) -> Result<BraidWord> {
    a.multiply(b)
}

pub fn invert(a: &BraidWord) -> BraidWord {
    a.invert()
}

pub fn conjugate(a: &BraidWord, t: &BraidWord) -> Result<BraidWord> {
    a.conjugate(t)
}

pub fn permutation_of(a: &BraidWord) -> PermutationBraid {
    a.permutation()
}

pub fn delta(n: u16) -> Result<BraidWord> {
    BraidWord::delta(n)
}

pub fn equals(a: &BraidWord, b: &BraidWord) -> Result<bool> {
    a.equals(b)
}

/// Public parameters shared by every party: `B_{l+r}` split into a left
/// block of `l` strands and a right block of `r` strands, the base element
/// `g`, and the number of generators drawn per sampled secret.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupParams {
    l: u16,
    r: u16,
    base: BraidWord,
    sample_len: u16,
}

pub const DEFAULT_SIDE_STRANDS: u16 = 8;
pub const DEFAULT_SAMPLE_LEN: u16 = 16;

impl GroupParams {
    pub fn new(l: u16, r: u16, base: BraidWord, sample_len: u16) -> Result<Self> {
        if l < 2 || r < 2 {
            return Err(Error::InvalidParams(format!(
                "each side needs at least 2 strands (l = {l}, r = {r})"
            )));
        }
        let n = l
            .checked_add(r)
            .ok_or_else(|| Error::InvalidParams("strand count overflow".into()))?;
        check_strands(n)?;
        same_strands(n, base.strands())?;
        if sample_len == 0 {
            return Err(Error::InvalidParams(
                "sample length must be at least 1".into(),
            ));
        }
        Ok(Self {
            l,
            r,
            base,
            sample_len,
        })
    }

    /// Parameters with the built-in base element [`default_base`].
    pub fn with_default_base(l: u16, r: u16, sample_len: u16) -> Result<Self> {
        let n = l
            .checked_add(r)
            .ok_or_else(|| Error::InvalidParams("strand count overflow".into()))?;
        check_strands(n)?;
        Self::new(l, r, default_base(l, r), sample_len)
    }

    pub fn n(&self) -> u16 {
        self.l + self.r
    }

    pub fn l(&self) -> u16 {
        self.l
    }

    pub fn r(&self) -> u16 {
        self.r
    }

    pub fn base(&self) -> &BraidWord {
        &self.base
    }

    pub fn sample_len(&self) -> u16 {
        self.sample_len
    }
}

impl Default for GroupParams {
    fn default() -> Self {
        Self::with_default_base(
            DEFAULT_SIDE_STRANDS,
            DEFAULT_SIDE_STRANDS,
            DEFAULT_SAMPLE_LEN,
        )
        .expect("default parameters are valid")
    }
}

/// The fixed base element `σ_1σ_2⋯σ_{n-1} · σ_{l-1}⁻¹ σ_l² σ_{l+1}⁻¹`.
///
/// It mixes generators from both halves and the coupling generator `σ_l`,
/// so neither subgroup centralizes it.
pub fn default_base(l: u16, r: u16) -> BraidWord {
    let n = l + r;
    let mut letters: Vec<Letter> = (1..n).map(Letter::positive).collect();
    letters.push(Letter::negative(l - 1));
    letters.push(Letter::positive(l));
    letters.push(Letter::positive(l));
    letters.push(Letter::negative(l + 1));
    BraidWord::from_letters_unchecked(n, letters)
}
