//! Byte encodings of braids, the hash `H` onto 256-bit keys, and the
//! symmetric cipher used by the hybrid schemes.
//!
//! Encodings are big-endian throughout:
//!
//! ```text
//! canonical form: "TCSP" | 0x01 | 0x02 | n:u16 | delta_exp:i32 | count:u32 | count × (n × u16 images)
//! raw word:       "TCSP" | 0x01 | 0x01 | n:u16 | count:u32 | count × i16 letters
//! hash input:     label_len:u8 | label | count:u8 | serializations...
//! ```

use sha2::{Digest, Sha256};
use subtle::ConstantTimeEq;

use crate::braid::{BraidWord, CanonicalForm, PermutationBraid};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"TCSP";
pub const VERSION: u8 = 0x01;
pub const KIND_WORD: u8 = 0x01;
pub const KIND_CANONICAL: u8 = 0x02;

/// Domain labels for every use of `H`.
pub mod label {
    pub const CS: &str = "cs";
    pub const TWIN: &str = "twin";
    pub const NIKE: &str = "nike";
    pub const KEX: &str = "kex";
    pub const CONFIRM: &str = "confirm";
}

/// Bounds-checked big-endian reader that reports absolute offsets.
pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
    base: usize,
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self::at(buf, 0)
    }

    /// A reader whose reported offsets start at `base`.
    pub(crate) fn at(buf: &'a [u8], base: usize) -> Self {
        Self { buf, pos: 0, base }
    }

    pub(crate) fn offset(&self) -> usize {
        self.base + self.pos
    }

    pub(crate) fn remaining(&self) -> usize {
        self.buf.len() - self.pos
    }

    pub(crate) fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.remaining() < len {
            return Err(Error::parse(
                self.offset(),
                format!("need {len} bytes, {} left", self.remaining()),
            ));
        }
        let out = &self.buf[self.pos..self.pos + len];
        self.pos += len;
        Ok(out)
    }

    pub(crate) fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    pub(crate) fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn i32(&mut self) -> Result<i32> {
        Ok(i32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn expect(&mut self, bytes: &[u8], what: &str) -> Result<()> {
        let at = self.offset();
        if self.take(bytes.len())? != bytes {
            return Err(Error::parse(at, format!("bad {what}")));
        }
        Ok(())
    }

    /// A `u32` length prefix followed by that many bytes.
    pub(crate) fn chunk(&mut self) -> Result<(usize, &'a [u8])> {
        let len = self.u32()? as usize;
        let at = self.offset();
        Ok((at, self.take(len)?))
    }

    pub(crate) fn finish(&self) -> Result<()> {
        if self.remaining() != 0 {
            return Err(Error::parse(
                self.offset(),
                format!("{} trailing bytes", self.remaining()),
            ));
        }
        Ok(())
    }
}

pub(crate) fn put_chunk(out: &mut Vec<u8>, bytes: &[u8]) {
    out.extend_from_slice(&(bytes.len() as u32).to_be_bytes());
    out.extend_from_slice(bytes);
}

fn header(reader: &mut Reader<'_>, kind: u8) -> Result<u16> {
    reader.expect(MAGIC, "magic")?;
    let version = reader.u8()?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let at = reader.offset();
    let got = reader.u8()?;
    if got != kind {
        return Err(Error::parse(
            at,
            format!("expected kind {kind:#04x}, got {got:#04x}"),
        ));
    }
    let at = reader.offset();
    let n = reader.u16()?;
    crate::braid::check_strands(n).map_err(|e| Error::parse(at, e.to_string()))?;
    Ok(n)
}

pub fn serialize_canonical(cf: &CanonicalForm) -> Vec<u8> {
    let n = cf.strands() as usize;
    let mut out = Vec::with_capacity(16 + cf.factors().len() * n * 2);
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(KIND_CANONICAL);
    out.extend_from_slice(&cf.strands().to_be_bytes());
    out.extend_from_slice(&cf.delta_exp().to_be_bytes());
    out.extend_from_slice(&(cf.factors().len() as u32).to_be_bytes());
    for f in cf.factors() {
        for &v in f.images() {
            out.extend_from_slice(&(v as u16).to_be_bytes());
        }
    }
    out
}

/// Parses one canonical form occupying all of `bytes`. Non-canonical
/// encodings (unweighted factors, identity or `Δ` factors) are rejected, so
/// the encoding stays injective in both directions.
pub fn deserialize_canonical(bytes: &[u8]) -> Result<CanonicalForm> {
    deserialize_canonical_at(bytes, 0)
}

pub(crate) fn deserialize_canonical_at(bytes: &[u8], base: usize) -> Result<CanonicalForm> {
    let mut r = Reader::at(bytes, base);
    let n = header(&mut r, KIND_CANONICAL)?;
    let delta_exp = r.i32()?;
    let count_at = r.offset();
    let count = r.u32()? as usize;
    if count.saturating_mul(n as usize * 2) != r.remaining() {
        return Err(Error::parse(
            count_at,
            "factor count does not match payload",
        ));
    }
    let mut factors = Vec::with_capacity(count);
    for _ in 0..count {
        let at = r.offset();
        let mut images = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let v = r.u16()?;
            if v >= n {
                return Err(Error::parse(at, "permutation image out of range"));
            }
            images.push(v as u8);
        }
        let p = PermutationBraid::from_images(images)
            .ok_or_else(|| Error::parse(at, "factor is not a permutation"))?;
        factors.push(p);
    }
    r.finish()?;
    CanonicalForm::from_parts(n, delta_exp, factors).map_err(|e| Error::parse(base, e.to_string()))
}

pub fn serialize_word(w: &BraidWord) -> Vec<u8> {
    let mut out = Vec::with_capacity(12 + 2 * w.len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(KIND_WORD);
    out.extend_from_slice(&w.strands().to_be_bytes());
    out.extend_from_slice(&(w.len() as u32).to_be_bytes());
    for l in w.letters() {
        out.extend_from_slice(&l.signed().to_be_bytes());
    }
    out
}

pub fn deserialize_word(bytes: &[u8]) -> Result<BraidWord> {
    deserialize_word_at(bytes, 0)
}

pub(crate) fn deserialize_word_at(bytes: &[u8], base: usize) -> Result<BraidWord> {
    let mut r = Reader::at(bytes, base);
    let n = header(&mut r, KIND_WORD)?;
    let count_at = r.offset();
    let count = r.u32()? as usize;
    if count.saturating_mul(2) != r.remaining() {
        return Err(Error::parse(
            count_at,
            "letter count does not match payload",
        ));
    }
    let letters_at = r.offset();
    let raw = r.take(2 * count)?;
    let letters = raw
        .chunks_exact(2)
        .map(|c| i16::from_be_bytes([c[0], c[1]]));
    BraidWord::new(n, letters).map_err(|e| Error::parse(letters_at, e.to_string()))
}

/// A 256-bit symmetric key.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymKey(pub [u8; 32]);

impl SymKey {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }
}

impl std::fmt::Debug for SymKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("SymKey(..)")
    }
}

/// `H(label, elems)`: SHA-256 over the label and the ordered canonical
/// serializations.
///
/// # Panics
///
/// If `elems` is empty or has more than 255 entries, or the label is longer
/// than 255 bytes.
pub fn hash_elements(label: &str, elems: &[&CanonicalForm]) -> SymKey {
    assert!(!elems.is_empty() && elems.len() <= 255, "1..=255 elements");
    assert!(label.len() <= 255, "label too long");
    let mut h = Sha256::new();
    h.update([label.len() as u8]);
    h.update(label.as_bytes());
    h.update([elems.len() as u8]);
    for e in elems {
        h.update(serialize_canonical(e));
    }
    SymKey(h.finalize().into())
}

/// Symmetric ciphertext with its authentication tag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SealedBox {
    pub ct: Vec<u8>,
    pub tag: [u8; 32],
}

fn keystream_block(k: &SymKey, i: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(k.0);
    h.update(b"ks");
    h.update(i.to_be_bytes());
    h.finalize().into()
}

fn apply_keystream(k: &SymKey, data: &mut [u8]) {
    for (i, chunk) in data.chunks_mut(32).enumerate() {
        let block = keystream_block(k, i as u64);
        for (b, s) in chunk.iter_mut().zip(block) {
            *b ^= s;
        }
    }
}

fn mac(k: &SymKey, ct: &[u8]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(k.0);
    h.update(b"mac");
    h.update(ct);
    h.finalize().into()
}

/// XOR with the hash keystream, then tag the ciphertext. Only meant for the
/// one-time keys the schemes derive; this is not a nonce-based AEAD.
pub fn sym_encrypt(k: &SymKey, m: &[u8]) -> SealedBox {
    let mut ct = m.to_vec();
    apply_keystream(k, &mut ct);
    let tag = mac(k, &ct);
    SealedBox { ct, tag }
}

pub fn sym_decrypt(k: &SymKey, sealed: &SealedBox) -> Result<Vec<u8>> {
    let expected = mac(k, &sealed.ct);
    if !bool::from(expected.ct_eq(&sealed.tag)) {
        return Err(Error::Authentication);
    }
    let mut m = sealed.ct.clone();
    apply_keystream(k, &mut m);
    Ok(m)
}

/// Constant-time equality for 32-byte tags.
pub fn tags_equal(a: &[u8; 32], b: &[u8; 32]) -> bool {
    a.ct_eq(b).into()
}
