//! The trapdoor test: answer twin decision queries about `(X_1, X_2)`
//! without knowing any conjugator of either, by building `X_2` from `X_1`
//! with hidden `(r, s)`.
//!
//! Setup picks `r, s` and sets `X_2 = (s g s⁻¹)·(r X_1 r⁻¹)⁻¹`. A query
//! `(Ŷ, Ẑ_1, Ẑ_2)` is accepted iff `Ẑ_2 · r Ẑ_1 r⁻¹ = s Ŷ s⁻¹`.
//!
//! For an honest query `Ŷ = y g y⁻¹` with `y ∈ RB_r`, the left side equals
//! `(ys) g (ys)⁻¹` and the right side `(sy) g (sy)⁻¹`, so the check is exact
//! only when `s` commutes with every such `y`. `s` is therefore drawn from
//! `LB_l`, the same side as `r`.

use crate::braid::{BraidWord, CanonicalForm, GroupParams, Product};
use crate::error::{Error, Result};
use crate::sampler::{sample_subgroup, SeededRng, SubgroupSide};

/// Side `s` is sampled from. See the module docs.
pub const S_SIDE: SubgroupSide = SubgroupSide::Left;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trapdoor {
    r: BraidWord,
    s: BraidWord,
    x1: CanonicalForm,
    x2: CanonicalForm,
    base: BraidWord,
}

/// A twin decision query `(Ŷ, Ẑ_1, Ẑ_2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DecisionQuery {
    pub y: CanonicalForm,
    pub z1: CanonicalForm,
    pub z2: CanonicalForm,
}

impl DecisionQuery {
    pub fn new(y: CanonicalForm, z1: CanonicalForm, z2: CanonicalForm) -> Result<Self> {
        for other in [&z1, &z2] {
            if other.strands() != y.strands() {
                return Err(Error::StrandMismatch {
                    left: y.strands(),
                    right: other.strands(),
                });
            }
        }
        Ok(Self { y, z1, z2 })
    }

    pub fn strands(&self) -> u16 {
        self.y.strands()
    }
}

impl Trapdoor {
    /// Samples `r ← LB_l` and `s` and derives `X_2`.
    pub fn setup(params: &GroupParams, x1: &CanonicalForm, rng: &mut SeededRng) -> Result<Self> {
        let r = sample_subgroup(params, SubgroupSide::Left, rng)?;
        let s = sample_subgroup(params, S_SIDE, rng)?;
        Self::from_conjugators(params, x1, r, s)
    }

    /// Builds a trapdoor from explicit `r` and `s`, for fixtures and
    /// degenerate cases such as `r = s = ε`.
    pub fn from_conjugators(
        params: &GroupParams,
        x1: &CanonicalForm,
        r: BraidWord,
        s: BraidWord,
    ) -> Result<Self> {
        let n = params.n();
        if x1.strands() != n {
            return Err(Error::StrandMismatch {
                left: n,
                right: x1.strands(),
            });
        }
        let base = params.base().clone();
        // X_2 = s g s⁻¹ · r X_1⁻¹ r⁻¹
        let x2 = Product::new(n)
            .word(&s)?
            .word(&base)?
            .inverse_word(&s)?
            .word(&r)?
            .inverse_form(x1)?
            .inverse_word(&r)?
            .finish();
        Ok(Self {
            r,
            s,
            x1: x1.clone(),
            x2,
            base,
        })
    }

    pub fn x1(&self) -> &CanonicalForm {
        &self.x1
    }

    pub fn x2(&self) -> &CanonicalForm {
        &self.x2
    }

    pub fn r(&self) -> &BraidWord {
        &self.r
    }

    pub fn s(&self) -> &BraidWord {
        &self.s
    }

    pub fn strands(&self) -> u16 {
        self.x1.strands()
    }

    /// Whether `X_2 · r X_1 r⁻¹ = s g s⁻¹` holds.
    pub fn is_consistent(&self) -> bool {
        let lhs = Product::from_form(&self.x2)
            .word(&self.r)
            .and_then(|p| p.form(&self.x1))
            .and_then(|p| p.inverse_word(&self.r))
            .map(Product::finish);
        let rhs = self.base.conjugate(&self.s).map(|w| w.normal_form());
        matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b)
    }

    /// Decides `Ẑ_2 · r Ẑ_1 r⁻¹ = s Ŷ s⁻¹` by comparing normal forms.
    pub fn check(&self, q: &DecisionQuery) -> Result<bool> {
        let n = self.strands();
        if q.strands() != n || q.z1.strands() != n || q.z2.strands() != n {
            return Err(Error::StrandMismatch {
                left: n,
                right: q.strands(),
            });
        }
        let lhs = Product::from_form(&q.z2)
            .word(&self.r)?
            .form(&q.z1)?
            .inverse_word(&self.r)?
            .finish();
        let rhs = q.y.conjugate_by(&self.s)?;
        Ok(lhs == rhs)
    }
}

pub fn trapdoor_setup(
    params: &GroupParams,
    x1: &CanonicalForm,
    rng: &mut SeededRng,
) -> Result<Trapdoor> {
    Trapdoor::setup(params, x1, rng)
}

pub fn trapdoor_check(td: &Trapdoor, q: &DecisionQuery) -> Result<bool> {
    td.check(q)
}

/// Ground-truth twin predicate from the secret conjugators of `X_1, X_2`:
/// `x_1 Ŷ x_1⁻¹ = Ẑ_1 ∧ x_2 Ŷ x_2⁻¹ = Ẑ_2`.
pub fn truth_2ccsp(x1: &BraidWord, x2: &BraidWord, q: &DecisionQuery) -> Result<bool> {
    Ok(q.y.conjugate_by(x1)? == q.z1 && q.y.conjugate_by(x2)? == q.z2)
}

/// Ground-truth twin predicate from the `RB_r` conjugator `y` of
/// `Ŷ = y g y⁻¹`: `y X_1 y⁻¹ = Ẑ_1 ∧ y X_2 y⁻¹ = Ẑ_2`.
///
/// Agrees with [`truth_2ccsp`] whenever `X_i = x_i g x_i⁻¹` with
/// `x_i ∈ LB_l`, and is the only available ground truth for a trapdoor
/// `X_2`, which in general has no such conjugator.
pub fn truth_2ccsp_by_ephemeral(
    y: &BraidWord,
    x1: &CanonicalForm,
    x2: &CanonicalForm,
    q: &DecisionQuery,
) -> Result<bool> {
    Ok(x1.conjugate_by(y)? == q.z1 && x2.conjugate_by(y)? == q.z2)
}
