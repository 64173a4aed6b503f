//! Key and ciphertext files.
//!
//! ```text
//! key file:        "TCSPKEY" | version:u8 | scheme:u8 | part:u8 | l:u16 | r:u16 | w:u16
//!                  | [side:u8, NIKE only] | chunk*
//! ciphertext file: "TCSPCT" | version:u8 | scheme:u8 | chunk(Y) | chunk(ct) | tag[32]
//! chunk:           len:u32 | bytes
//! ```
//!
//! Key chunks, in order: the base element `g` as a raw word, the public
//! conjugates as canonical forms, then (secret part only) the secret
//! conjugators as raw words. Everything is big-endian.

use crate::braid::{BraidWord, CanonicalForm, GroupParams};
use crate::codec::{
    deserialize_canonical_at, deserialize_word_at, put_chunk, serialize_canonical, serialize_word,
    Reader, SealedBox,
};
use crate::elgamal::{Ciphertext, CsKeyPair, CsPublicKey, TwinKeyPair, TwinPublicKey};
use crate::error::{Error, Result};
use crate::kex::{NikeIdentity, NikePublic};
use crate::sampler::SubgroupSide;

pub const KEY_MAGIC: &[u8; 7] = b"TCSPKEY";
pub const CT_MAGIC: &[u8; 6] = b"TCSPCT";
pub const FILE_VERSION: u8 = 0x01;

const PART_PUBLIC: u8 = 0x01;
const PART_SECRET: u8 = 0x02;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Cs = 0x01,
    Twin = 0x02,
    Nike = 0x03,
}

impl Scheme {
    fn from_byte(b: u8, at: usize) -> Result<Self> {
        match b {
            0x01 => Ok(Scheme::Cs),
            0x02 => Ok(Scheme::Twin),
            0x03 => Ok(Scheme::Nike),
            _ => Err(Error::parse(at, format!("unknown scheme {b:#04x}"))),
        }
    }

    fn public_elements(self) -> usize {
        match self {
            Scheme::Cs => 1,
            Scheme::Twin | Scheme::Nike => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PublicKeyFile {
    Cs(CsPublicKey),
    Twin(TwinPublicKey),
    Nike(GroupParams, NikePublic),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SecretKeyFile {
    Cs(CsKeyPair),
    Twin(TwinKeyPair),
    Nike(GroupParams, NikeIdentity),
}

impl PublicKeyFile {
    pub fn scheme(&self) -> Scheme {
        match self {
            PublicKeyFile::Cs(_) => Scheme::Cs,
            PublicKeyFile::Twin(_) => Scheme::Twin,
            PublicKeyFile::Nike(..) => Scheme::Nike,
        }
    }

    pub fn params(&self) -> &GroupParams {
        match self {
            PublicKeyFile::Cs(pk) => &pk.params,
            PublicKeyFile::Twin(pk) => &pk.params,
            PublicKeyFile::Nike(p, _) => p,
        }
    }

    fn side(&self) -> Option<SubgroupSide> {
        match self {
            PublicKeyFile::Nike(_, p) => Some(p.side),
            _ => None,
        }
    }

    fn elements(&self) -> Vec<&CanonicalForm> {
        match self {
            PublicKeyFile::Cs(pk) => vec![&pk.x],
            PublicKeyFile::Twin(pk) => vec![&pk.x1, &pk.x2],
            PublicKeyFile::Nike(_, p) => p.elements.iter().collect(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = key_header(self.scheme(), PART_PUBLIC, self.params(), self.side());
        put_chunk(&mut out, &serialize_word(self.params().base()));
        for e in self.elements() {
            put_chunk(&mut out, &serialize_canonical(e));
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let ParsedKey {
            scheme,
            params,
            side,
            elements,
            ..
        } = parse_key(bytes, PART_PUBLIC)?;
        Ok(match scheme {
            Scheme::Cs => PublicKeyFile::Cs(CsPublicKey {
                params,
                x: elements[0].clone(),
            }),
            Scheme::Twin => PublicKeyFile::Twin(TwinPublicKey {
                params,
                x1: elements[0].clone(),
                x2: elements[1].clone(),
            }),
            Scheme::Nike => PublicKeyFile::Nike(
                params,
                NikePublic {
                    side: side.expect("nike side"),
                    elements: [elements[0].clone(), elements[1].clone()],
                },
            ),
        })
    }
}

impl SecretKeyFile {
    pub fn scheme(&self) -> Scheme {
        match self {
            SecretKeyFile::Cs(_) => Scheme::Cs,
            SecretKeyFile::Twin(_) => Scheme::Twin,
            SecretKeyFile::Nike(..) => Scheme::Nike,
        }
    }

    pub fn params(&self) -> &GroupParams {
        match self {
            SecretKeyFile::Cs(kp) => kp.params(),
            SecretKeyFile::Twin(kp) => kp.params(),
            SecretKeyFile::Nike(p, _) => p,
        }
    }

    pub fn public(&self) -> PublicKeyFile {
        match self {
            SecretKeyFile::Cs(kp) => PublicKeyFile::Cs(kp.public().clone()),
            SecretKeyFile::Twin(kp) => PublicKeyFile::Twin(kp.public().clone()),
            SecretKeyFile::Nike(p, id) => PublicKeyFile::Nike(p.clone(), id.public().clone()),
        }
    }

    fn secrets(&self) -> Vec<&BraidWord> {
        match self {
            SecretKeyFile::Cs(kp) => vec![kp.secret()],
            SecretKeyFile::Twin(kp) => kp.secrets().iter().collect(),
            SecretKeyFile::Nike(_, id) => id.secrets().iter().collect(),
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let public = self.public();
        let mut out = key_header(self.scheme(), PART_SECRET, self.params(), public.side());
        put_chunk(&mut out, &serialize_word(self.params().base()));
        for e in public.elements() {
            put_chunk(&mut out, &serialize_canonical(e));
        }
        for s in self.secrets() {
            put_chunk(&mut out, &serialize_word(s));
        }
        out
    }

    /// Parses a secret key file and checks that the stored public elements
    /// are the conjugates of `g` by the stored secrets.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let parsed = parse_key(bytes, PART_SECRET)?;
        let ParsedKey {
            scheme,
            params,
            side,
            elements,
            secrets,
            secrets_at,
        } = parsed;
        let expected_side = side.unwrap_or(SubgroupSide::Left);
        for s in &secrets {
            if !expected_side.contains(&params, s) {
                return Err(Error::parse(secrets_at, "secret outside its subgroup"));
            }
        }
        let file = match scheme {
            Scheme::Cs => SecretKeyFile::Cs(CsKeyPair::from_secret(params, secrets[0].clone())?),
            Scheme::Twin => SecretKeyFile::Twin(TwinKeyPair::from_secrets(
                params,
                secrets[0].clone(),
                secrets[1].clone(),
            )?),
            Scheme::Nike => {
                let id = NikeIdentity::from_secrets(
                    &params,
                    expected_side,
                    [secrets[0].clone(), secrets[1].clone()],
                )?;
                SecretKeyFile::Nike(params, id)
            }
        };
        if file.public().elements() != elements.iter().collect::<Vec<_>>() {
            return Err(Error::parse(
                secrets_at,
                "public elements do not match secrets",
            ));
        }
        Ok(file)
    }
}

fn key_header(
    scheme: Scheme,
    part: u8,
    params: &GroupParams,
    side: Option<SubgroupSide>,
) -> Vec<u8> {
    let mut out = KEY_MAGIC.to_vec();
    out.push(FILE_VERSION);
    out.push(scheme as u8);
    out.push(part);
    out.extend_from_slice(&params.l().to_be_bytes());
    out.extend_from_slice(&params.r().to_be_bytes());
    out.extend_from_slice(&params.sample_len().to_be_bytes());
    if let Some(side) = side {
        out.push(match side {
            SubgroupSide::Left => 0x01,
            SubgroupSide::Right => 0x02,
        });
    }
    out
}

struct ParsedKey {
    scheme: Scheme,
    params: GroupParams,
    side: Option<SubgroupSide>,
    elements: Vec<CanonicalForm>,
    secrets: Vec<BraidWord>,
    secrets_at: usize,
}

fn version(r: &mut Reader<'_>) -> Result<()> {
    let v = r.u8()?;
    if v != FILE_VERSION {
        return Err(Error::UnsupportedVersion(v));
    }
    Ok(())
}

fn parse_key(bytes: &[u8], want_part: u8) -> Result<ParsedKey> {
    let mut r = Reader::new(bytes);
    r.expect(KEY_MAGIC, "magic")?;
    version(&mut r)?;
    let at = r.offset();
    let scheme = Scheme::from_byte(r.u8()?, at)?;
    let at = r.offset();
    let part = r.u8()?;
    if part != want_part {
        let what = if want_part == PART_PUBLIC {
            "public"
        } else {
            "secret"
        };
        return Err(Error::parse(at, format!("not a {what} key file")));
    }
    let params_at = r.offset();
    let (l, rr, w) = (r.u16()?, r.u16()?, r.u16()?);
    let side = if scheme == Scheme::Nike {
        let at = r.offset();
        Some(match r.u8()? {
            0x01 => SubgroupSide::Left,
            0x02 => SubgroupSide::Right,
            b => return Err(Error::parse(at, format!("unknown side {b:#04x}"))),
        })
    } else {
        None
    };

    let (at, g) = r.chunk()?;
    let base = deserialize_word_at(g, at)?;
    let params =
        GroupParams::new(l, rr, base, w).map_err(|e| Error::parse(params_at, e.to_string()))?;

    let mut elements = Vec::new();
    for _ in 0..scheme.public_elements() {
        let (at, bytes) = r.chunk()?;
        let e = deserialize_canonical_at(bytes, at)?;
        if e.strands() != params.n() {
            return Err(Error::parse(
                at,
                "element strand count differs from parameters",
            ));
        }
        elements.push(e);
    }
    let secrets_at = r.offset();
    let mut secrets = Vec::new();
    if want_part == PART_SECRET {
        for _ in 0..scheme.public_elements() {
            let (at, bytes) = r.chunk()?;
            secrets.push(deserialize_word_at(bytes, at)?);
        }
    }
    r.finish()?;
    Ok(ParsedKey {
        scheme,
        params,
        side,
        elements,
        secrets,
        secrets_at,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CiphertextFile {
    pub scheme: Scheme,
    pub ciphertext: Ciphertext,
}

impl CiphertextFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = CT_MAGIC.to_vec();
        out.push(FILE_VERSION);
        out.push(self.scheme as u8);
        put_chunk(&mut out, &serialize_canonical(&self.ciphertext.header));
        put_chunk(&mut out, &self.ciphertext.sealed.ct);
        out.extend_from_slice(&self.ciphertext.sealed.tag);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        r.expect(CT_MAGIC, "magic")?;
        version(&mut r)?;
        let at = r.offset();
        let scheme = Scheme::from_byte(r.u8()?, at)?;
        if scheme == Scheme::Nike {
            return Err(Error::parse(at, "NIKE keys do not encrypt"));
        }
        let (at, y) = r.chunk()?;
        let header = deserialize_canonical_at(y, at)?;
        let (_, ct) = r.chunk()?;
        let tag: [u8; 32] = r.take(32)?.try_into().unwrap();
        r.finish()?;
        Ok(Self {
            scheme,
            ciphertext: Ciphertext {
                header,
                sealed: SealedBox {
                    ct: ct.to_vec(),
                    tag,
                },
            },
        })
    }
}
