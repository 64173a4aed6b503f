//! Executable form of the reduction from the computational CCS problem to
//! the strong twin CCS problem, plus the decryption-oracle leak against the
//! plain CS scheme.
//!
//! The reduction `B` receives `(X, Y)`, embeds `X_1 = X`, builds `X_2` with a
//! [`Trapdoor`], and hands `(X_1, X_2, Y)` to a [`TwinAdversary`]. Every
//! decision query the adversary makes is answered with the trapdoor check.
//! The adversary's final `(Z_1, Z_2)` is checked the same way; on success
//! `B` outputs `Z_1 = ccs(X, Y)`.

use crate::braid::{BraidWord, CanonicalForm, GroupParams};
use crate::codec::{hash_elements, label, sym_encrypt};
use crate::elgamal::{cs_decrypt, Ciphertext, CsKeyPair};
use crate::error::{Error, Result};
use crate::sampler::{sample_subgroup, SeededRng, SubgroupSide};
use crate::trapdoor::{DecisionQuery, Trapdoor};

pub const DEFAULT_QUERY_BUDGET: usize = 1 << 10;

/// A CCS challenge `(X, Y)` with `X = xgx⁻¹`, `Y = ygy⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcsInstance {
    params: GroupParams,
    x: CanonicalForm,
    y: CanonicalForm,
}

/// The conjugators behind a [`CcsInstance`]. Kept apart from the instance
/// so that neither the reduction nor the adversary can see them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CcsWitness {
    pub x: BraidWord,
    pub y: BraidWord,
}

impl CcsWitness {
    /// `ccs(X, Y) = (xy) g (xy)⁻¹`, computed directly from the witnesses.
    pub fn shared(&self, params: &GroupParams) -> Result<CanonicalForm> {
        let xy = self.x.multiply(&self.y)?;
        Ok(params.base().conjugate(&xy)?.normal_form())
    }
}

impl CcsInstance {
    pub fn new(params: GroupParams, x: CanonicalForm, y: CanonicalForm) -> Result<Self> {
        for e in [&x, &y] {
            if e.strands() != params.n() {
                return Err(Error::StrandMismatch {
                    left: params.n(),
                    right: e.strands(),
                });
            }
        }
        Ok(Self { params, x, y })
    }

    /// Samples `x ← LB_l`, `y ← RB_r` and publishes their conjugates of `g`.
    pub fn generate(params: &GroupParams, rng: &mut SeededRng) -> Result<(Self, CcsWitness)> {
        let x = sample_subgroup(params, SubgroupSide::Left, rng)?;
        let y = sample_subgroup(params, SubgroupSide::Right, rng)?;
        let g = params.base().normal_form();
        let inst = Self::new(params.clone(), g.conjugate_by(&x)?, g.conjugate_by(&y)?)?;
        Ok((inst, CcsWitness { x, y }))
    }

    pub fn params(&self) -> &GroupParams {
        &self.params
    }

    pub fn x(&self) -> &CanonicalForm {
        &self.x
    }

    pub fn y(&self) -> &CanonicalForm {
        &self.y
    }
}

/// What the twin adversary is shown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinChallenge {
    pub params: GroupParams,
    pub x1: CanonicalForm,
    pub x2: CanonicalForm,
    pub y: CanonicalForm,
}

/// Access to the twin decision predicate.
pub trait DecisionOracle {
    fn query(&mut self, q: &DecisionQuery) -> Result<bool>;
}

/// An algorithm attacking the strong twin CCS problem. It sees only the
/// challenge and the oracle, and returns `(Z_1, Z_2)` or gives up.
pub trait TwinAdversary {
    fn solve(
        &mut self,
        challenge: &TwinChallenge,
        oracle: &mut dyn DecisionOracle,
    ) -> Option<(CanonicalForm, CanonicalForm)>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleCall {
    pub query: DecisionQuery,
    pub answer: bool,
}

struct TrapdoorOracle<'a> {
    trapdoor: &'a Trapdoor,
    budget: usize,
    transcript: Vec<OracleCall>,
}

impl DecisionOracle for TrapdoorOracle<'_> {
    fn query(&mut self, q: &DecisionQuery) -> Result<bool> {
        if self.transcript.len() >= self.budget {
            return Err(Error::BudgetExhausted);
        }
        let answer = self.trapdoor.check(q)?;
        self.transcript.push(OracleCall {
            query: q.clone(),
            answer,
        });
        Ok(answer)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReductionFailure {
    /// The adversary returned nothing.
    GaveUp,
    /// The adversary's answer failed the final trapdoor check.
    Rejected,
}

#[derive(Clone, Debug)]
pub struct ReductionRun {
    pub outcome: std::result::Result<CanonicalForm, ReductionFailure>,
    pub challenge: TwinChallenge,
    pub transcript: Vec<OracleCall>,
}

pub fn run_reduction(
    inst: &CcsInstance,
    adv: &mut dyn TwinAdversary,
    rng: &mut SeededRng,
) -> Result<ReductionRun> {
    run_reduction_with_budget(inst, adv, rng, DEFAULT_QUERY_BUDGET)
}

pub fn run_reduction_with_budget(
    inst: &CcsInstance,
    adv: &mut dyn TwinAdversary,
    rng: &mut SeededRng,
    budget: usize,
) -> Result<ReductionRun> {
    let trapdoor = Trapdoor::setup(&inst.params, &inst.x, rng)?;
    let challenge = TwinChallenge {
        params: inst.params.clone(),
        x1: trapdoor.x1().clone(),
        x2: trapdoor.x2().clone(),
        y: inst.y.clone(),
    };
    let mut oracle = TrapdoorOracle {
        trapdoor: &trapdoor,
        budget,
        transcript: Vec::new(),
    };
    let answer = adv.solve(&challenge, &mut oracle);
    let transcript = oracle.transcript;

    let outcome = match answer {
        None => Err(ReductionFailure::GaveUp),
        Some((z1, z2)) => {
            let q = DecisionQuery {
                y: inst.y.clone(),
                z1,
                z2,
            };
            match trapdoor.check(&q) {
                Ok(true) => Ok(q.z1),
                _ => Err(ReductionFailure::Rejected),
            }
        }
    };
    Ok(ReductionRun {
        outcome,
        challenge,
        transcript,
    })
}

/// Uses the decryption oracle of the plain CS scheme to evaluate
/// `ccsp(X, Ŷ, Ẑ)`: seal a known message under `H("cs", Ŷ, Ẑ)`, submit
/// `(Ŷ, ĉ)`, and see whether the oracle returns that message.
pub fn oracle_leak_demo(
    kp: &CsKeyPair,
    y_hat: &CanonicalForm,
    z_hat: &CanonicalForm,
    rng: &mut SeededRng,
) -> Result<bool> {
    let m_hat = rng.bytes::<32>();
    let k_hat = hash_elements(label::CS, &[y_hat, z_hat]);
    let forged = Ciphertext {
        header: y_hat.clone(),
        sealed: sym_encrypt(&k_hat, &m_hat),
    };
    match cs_decrypt(kp, &forged) {
        Ok(m) => Ok(m == m_hat),
        Err(Error::Authentication) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Scripted adversaries for exercising the reduction.
pub mod adversaries {
    use super::*;

    /// Knows the ephemeral `y` of the challenge and answers with
    /// `Z_i = y X_i y⁻¹`. It stands in for an adversary that actually
    /// solves the problem.
    pub struct WitnessAdversary {
        y: BraidWord,
    }

    impl WitnessAdversary {
        pub fn new(y: BraidWord) -> Self {
            Self { y }
        }
    }

    impl TwinAdversary for WitnessAdversary {
        fn solve(
            &mut self,
            c: &TwinChallenge,
            _oracle: &mut dyn DecisionOracle,
        ) -> Option<(CanonicalForm, CanonicalForm)> {
            Some((
                c.x1.conjugate_by(&self.y).ok()?,
                c.x2.conjugate_by(&self.y).ok()?,
            ))
        }
    }

    /// Answers with random conjugates of `g`.
    pub struct RandomAdversary {
        rng: SeededRng,
    }

    impl RandomAdversary {
        pub fn new(rng: SeededRng) -> Self {
            Self { rng }
        }
    }

    impl TwinAdversary for RandomAdversary {
        fn solve(
            &mut self,
            c: &TwinChallenge,
            _oracle: &mut dyn DecisionOracle,
        ) -> Option<(CanonicalForm, CanonicalForm)> {
            let g = c.params.base().normal_form();
            let a = crate::sampler::sample_element(&c.params, &mut self.rng).ok()?;
            let b = crate::sampler::sample_element(&c.params, &mut self.rng).ok()?;
            Some((g.conjugate_by(&a).ok()?, g.conjugate_by(&b).ok()?))
        }
    }

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum QueryKind {
        Honest,
        BadFirst,
        BadSecond,
        BadBoth,
    }

    impl QueryKind {
        pub fn is_honest(self) -> bool {
            self == QueryKind::Honest
        }
    }

    /// A query the probing adversary issued, with the `RB_r` conjugator it
    /// used for `Ŷ` so that ground truth can be recomputed afterwards.
    #[derive(Clone, Debug)]
    pub struct IssuedQuery {
        pub ephemeral: BraidWord,
        pub kind: QueryKind,
        pub query: DecisionQuery,
        pub answer: bool,
    }

    /// Issues a batch of honest and corrupted decision queries built from
    /// its own ephemerals, then delegates the final answer.
    pub struct ProbingAdversary<A> {
        rng: SeededRng,
        queries: usize,
        then: A,
        pub issued: Vec<IssuedQuery>,
    }

    impl<A: TwinAdversary> ProbingAdversary<A> {
        pub fn new(rng: SeededRng, queries: usize, then: A) -> Self {
            Self {
                rng,
                queries,
                then,
                issued: Vec::new(),
            }
        }

        fn make_query(
            &mut self,
            c: &TwinChallenge,
        ) -> Result<(BraidWord, QueryKind, DecisionQuery)> {
            let p = &c.params;
            let g = p.base().normal_form();
            let y = sample_subgroup(p, SubgroupSide::Right, &mut self.rng)?;
            let kind = match self.rng.below(4) {
                0 => QueryKind::Honest,
                1 => QueryKind::BadFirst,
                2 => QueryKind::BadSecond,
                _ => QueryKind::BadBoth,
            };
            let mut q = DecisionQuery {
                y: g.conjugate_by(&y)?,
                z1: c.x1.conjugate_by(&y)?,
                z2: c.x2.conjugate_by(&y)?,
            };
            if matches!(kind, QueryKind::BadFirst | QueryKind::BadBoth) {
                q.z1 = self.corrupt(p, &c.x1, &q.z1)?;
            }
            if matches!(kind, QueryKind::BadSecond | QueryKind::BadBoth) {
                q.z2 = self.corrupt(p, &c.x2, &q.z2)?;
            }
            Ok((y, kind, q))
        }

        /// A conjugate of `x` by a fresh `RB_r` element that differs from
        /// `honest`. Distinct ephemerals can give the same conjugate when
        /// their quotient centralizes `g`, so redraw until it differs.
        fn corrupt(
            &mut self,
            p: &GroupParams,
            x: &CanonicalForm,
            honest: &CanonicalForm,
        ) -> Result<CanonicalForm> {
            loop {
                let other = sample_subgroup(p, SubgroupSide::Right, &mut self.rng)?;
                let z = x.conjugate_by(&other)?;
                if z != *honest {
                    return Ok(z);
                }
            }
        }
    }

    impl<A: TwinAdversary> TwinAdversary for ProbingAdversary<A> {
        fn solve(
            &mut self,
            c: &TwinChallenge,
            oracle: &mut dyn DecisionOracle,
        ) -> Option<(CanonicalForm, CanonicalForm)> {
            for _ in 0..self.queries {
                let (ephemeral, kind, query) = self.make_query(c).ok()?;
                let answer = oracle.query(&query).ok()?;
                self.issued.push(IssuedQuery {
                    ephemeral,
                    kind,
                    query,
                    answer,
                });
            }
            self.then.solve(c, oracle)
        }
    }
}
