//! Hashed-ElGamal encryption over the conjugacy search problem, in the
//! single-key (CS) and twin-key (twin CS) variants.
//!
//! Secrets live in `LB_l`, encryption ephemerals in `RB_r`. Because the two
//! subgroups commute, `x·(ygy⁻¹)·x⁻¹ = y·(xgx⁻¹)·y⁻¹`, which is what lets
//! the receiver recover the sender's shared value.

use crate::braid::{BraidWord, CanonicalForm, GroupParams};
use crate::codec::{hash_elements, label, sym_decrypt, sym_encrypt, SealedBox, SymKey};
use crate::error::{Error, Result};
use crate::sampler::{sample_subgroup, SeededRng, SubgroupSide};

/// `ccs(X, Y)` from one secret conjugator and the other party's public
/// conjugate: the normal form of `secret · peer_public · secret⁻¹`.
pub fn ccs_shared(secret: &BraidWord, peer_public: &CanonicalForm) -> Result<CanonicalForm> {
    peer_public.conjugate_by(secret)
}

fn public_conjugate(params: &GroupParams, secret: &BraidWord) -> Result<CanonicalForm> {
    params.base().normal_form().conjugate_by(secret)
}

fn check_header(params: &GroupParams, header: &CanonicalForm) -> Result<()> {
    if header.strands() != params.n() {
        return Err(Error::StrandMismatch {
            left: params.n(),
            right: header.strands(),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsPublicKey {
    pub params: GroupParams,
    pub x: CanonicalForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CsKeyPair {
    secret: BraidWord,
    public: CsPublicKey,
}

impl CsKeyPair {
    /// Derives the public conjugate `xgx⁻¹` of a given secret.
    pub fn from_secret(params: GroupParams, secret: BraidWord) -> Result<Self> {
        let x = public_conjugate(&params, &secret)?;
        Ok(Self {
            secret,
            public: CsPublicKey { params, x },
        })
    }

    pub fn secret(&self) -> &BraidWord {
        &self.secret
    }

    pub fn public(&self) -> &CsPublicKey {
        &self.public
    }

    pub fn params(&self) -> &GroupParams {
        &self.public.params
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinPublicKey {
    pub params: GroupParams,
    pub x1: CanonicalForm,
    pub x2: CanonicalForm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwinKeyPair {
    secrets: [BraidWord; 2],
    public: TwinPublicKey,
}

impl TwinKeyPair {
    pub fn from_secrets(params: GroupParams, x1: BraidWord, x2: BraidWord) -> Result<Self> {
        let p1 = public_conjugate(&params, &x1)?;
        let p2 = public_conjugate(&params, &x2)?;
        Ok(Self {
            secrets: [x1, x2],
            public: TwinPublicKey {
                params,
                x1: p1,
                x2: p2,
            },
        })
    }

    pub fn secrets(&self) -> &[BraidWord; 2] {
        &self.secrets
    }

    pub fn public(&self) -> &TwinPublicKey {
        &self.public
    }

    pub fn params(&self) -> &GroupParams {
        &self.public.params
    }
}

/// `(Y, c)`: the ephemeral conjugate `ygy⁻¹` and the sealed payload. Twin
/// ciphertexts have the same shape as CS ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub header: CanonicalForm,
    pub sealed: SealedBox,
}

pub fn cs_keygen(params: &GroupParams, rng: &mut SeededRng) -> Result<CsKeyPair> {
    let x = sample_subgroup(params, SubgroupSide::Left, rng)?;
    CsKeyPair::from_secret(params.clone(), x)
}

fn cs_key(header: &CanonicalForm, shared: &CanonicalForm) -> SymKey {
    hash_elements(label::CS, &[header, shared])
}

pub fn cs_encrypt(pk: &CsPublicKey, m: &[u8], rng: &mut SeededRng) -> Result<Ciphertext> {
    let y = sample_subgroup(&pk.params, SubgroupSide::Right, rng)?;
    let header = public_conjugate(&pk.params, &y)?;
    let shared = pk.x.conjugate_by(&y)?;
    let k = cs_key(&header, &shared);
    Ok(Ciphertext {
        header,
        sealed: sym_encrypt(&k, m),
    })
}

/// Recomputes `Z = xYx⁻¹` and opens the box. A forged or mis-keyed
/// ciphertext fails with [`Error::Authentication`].
pub fn cs_decrypt(kp: &CsKeyPair, ct: &Ciphertext) -> Result<Vec<u8>> {
    check_header(kp.params(), &ct.header)?;
    let shared = ccs_shared(&kp.secret, &ct.header)?;
    sym_decrypt(&cs_key(&ct.header, &shared), &ct.sealed)
}

pub fn twin_keygen(params: &GroupParams, rng: &mut SeededRng) -> Result<TwinKeyPair> {
    let x1 = sample_subgroup(params, SubgroupSide::Left, rng)?;
    let x2 = sample_subgroup(params, SubgroupSide::Left, rng)?;
    TwinKeyPair::from_secrets(params.clone(), x1, x2)
}

fn twin_key(header: &CanonicalForm, z1: &CanonicalForm, z2: &CanonicalForm) -> SymKey {
    hash_elements(label::TWIN, &[header, z1, z2])
}

/// One ephemeral `y` serves both shared values `Z_i = y X_i y⁻¹`; the key is
/// `H("twin", Y, Z_1, Z_2)`.
pub fn twin_encrypt(pk: &TwinPublicKey, m: &[u8], rng: &mut SeededRng) -> Result<Ciphertext> {
    let y = sample_subgroup(&pk.params, SubgroupSide::Right, rng)?;
    let header = public_conjugate(&pk.params, &y)?;
    let z1 = pk.x1.conjugate_by(&y)?;
    let z2 = pk.x2.conjugate_by(&y)?;
    let k = twin_key(&header, &z1, &z2);
    Ok(Ciphertext {
        header,
        sealed: sym_encrypt(&k, m),
    })
}

pub fn twin_decrypt(kp: &TwinKeyPair, ct: &Ciphertext) -> Result<Vec<u8>> {
    check_header(kp.params(), &ct.header)?;
    let z1 = ccs_shared(&kp.secrets[0], &ct.header)?;
    let z2 = ccs_shared(&kp.secrets[1], &ct.header)?;
    sym_decrypt(&twin_key(&ct.header, &z1, &z2), &ct.sealed)
}
