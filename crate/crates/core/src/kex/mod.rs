//! Twin-conjugate key exchange, non-interactive and interactive.
//!
//! Both variants hash the four shared values `ccs(X_i, Y_j)` in the order
//! `(1,1), (1,2), (2,1), (2,2)`. The left party (Alice) holds `x_1, x_2 ∈
//! LB_l`, the right party (Bob) holds `y_1, y_2 ∈ RB_r`; each computes
//! `ccs(X_i, Y_j)` with its own secret.
//!
//! Interactive flights:
//!
//! ```text
//! initiator -> responder   INIT(X1, X2)
//! responder -> initiator   RESP(Y1, Y2), CONFIRM(tag_r)
//! initiator -> responder   CONFIRM(tag_i)
//! ```
//!
//! Frames are `len:u32 BE | type:u8 | payload`, where `len` counts the type
//! byte and payload. INIT and RESP carry two length-prefixed canonical
//! serializations; CONFIRM carries a 32-byte tag
//! `SHA-256(k || "confirm" || role)`.

pub mod pipe;

use std::io::{Read, Write};

use sha2::{Digest, Sha256};

use crate::braid::{BraidWord, CanonicalForm, GroupParams};
use crate::codec::{
    deserialize_canonical_at, hash_elements, label, put_chunk, serialize_canonical, tags_equal,
    Reader, SymKey,
};
use crate::error::{Error, Result};
use crate::sampler::{sample_subgroup, SeededRng, SubgroupSide};

pub const MSG_INIT: u8 = 0x01;
pub const MSG_RESP: u8 = 0x02;
pub const MSG_CONFIRM: u8 = 0x03;

/// Upper bound on `len` in a frame header.
pub const MAX_FRAME: usize = 1 << 20;

/// A party's long-term or per-session key material on one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NikeIdentity {
    side: SubgroupSide,
    secrets: [BraidWord; 2],
    public: NikePublic,
}

/// The public half of a [`NikeIdentity`], as distributed to peers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NikePublic {
    pub side: SubgroupSide,
    pub elements: [CanonicalForm; 2],
}

impl NikeIdentity {
    pub fn generate(params: &GroupParams, side: SubgroupSide, rng: &mut SeededRng) -> Result<Self> {
        let a = sample_subgroup(params, side, rng)?;
        let b = sample_subgroup(params, side, rng)?;
        Self::from_secrets(params, side, [a, b])
    }

    pub fn from_secrets(
        params: &GroupParams,
        side: SubgroupSide,
        secrets: [BraidWord; 2],
    ) -> Result<Self> {
        let g = params.base().normal_form();
        let elements = [g.conjugate_by(&secrets[0])?, g.conjugate_by(&secrets[1])?];
        Ok(Self {
            side,
            secrets,
            public: NikePublic { side, elements },
        })
    }

    pub fn side(&self) -> SubgroupSide {
        self.side
    }

    pub fn secrets(&self) -> &[BraidWord; 2] {
        &self.secrets
    }

    pub fn public(&self) -> &NikePublic {
        &self.public
    }

    /// The four shared values in `(i, j)` order, `i` indexing the left
    /// party's elements.
    fn shared_values(&self, peer: &[CanonicalForm; 2]) -> Result<[CanonicalForm; 4]> {
        let s = &self.secrets;
        let v = |secret: &BraidWord, public: &CanonicalForm| public.conjugate_by(secret);
        Ok(match self.side {
            SubgroupSide::Left => [
                v(&s[0], &peer[0])?,
                v(&s[0], &peer[1])?,
                v(&s[1], &peer[0])?,
                v(&s[1], &peer[1])?,
            ],
            SubgroupSide::Right => [
                v(&s[0], &peer[0])?,
                v(&s[1], &peer[0])?,
                v(&s[0], &peer[1])?,
                v(&s[1], &peer[1])?,
            ],
        })
    }

    fn derive(&self, domain: &str, peer: &[CanonicalForm; 2]) -> Result<SymKey> {
        let z = self.shared_values(peer)?;
        Ok(hash_elements(domain, &[&z[0], &z[1], &z[2], &z[3]]))
    }
}

/// `H("nike", ccs(X_1,Y_1), ccs(X_1,Y_2), ccs(X_2,Y_1), ccs(X_2,Y_2))`.
pub fn nike_shared_key(me: &NikeIdentity, peer: &NikePublic) -> Result<SymKey> {
    if me.side == peer.side {
        return Err(Error::SameSide);
    }
    me.derive(label::NIKE, &peer.elements)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Initiator,
    Responder,
}

impl Role {
    pub fn byte(self) -> u8 {
        match self {
            Role::Initiator => 0x01,
            Role::Responder => 0x02,
        }
    }

    pub fn side(self) -> SubgroupSide {
        match self {
            Role::Initiator => SubgroupSide::Left,
            Role::Responder => SubgroupSide::Right,
        }
    }

    pub fn peer(self) -> Role {
        match self {
            Role::Initiator => Role::Responder,
            Role::Responder => Role::Initiator,
        }
    }
}

pub fn confirmation_tag(k: &SymKey, role: Role) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(k.as_bytes());
    h.update(label::CONFIRM.as_bytes());
    h.update([role.byte()]);
    h.finalize().into()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KexMessage {
    Init([CanonicalForm; 2]),
    Resp([CanonicalForm; 2]),
    Confirm([u8; 32]),
}

impl KexMessage {
    pub fn msg_type(&self) -> u8 {
        match self {
            KexMessage::Init(_) => MSG_INIT,
            KexMessage::Resp(_) => MSG_RESP,
            KexMessage::Confirm(_) => MSG_CONFIRM,
        }
    }

    /// The full frame, length header included.
    pub fn encode(&self) -> Vec<u8> {
        let mut body = vec![self.msg_type()];
        match self {
            KexMessage::Init(e) | KexMessage::Resp(e) => {
                for x in e {
                    put_chunk(&mut body, &serialize_canonical(x));
                }
            }
            KexMessage::Confirm(tag) => body.extend_from_slice(tag),
        }
        let mut frame = (body.len() as u32).to_be_bytes().to_vec();
        frame.extend_from_slice(&body);
        frame
    }

    /// Parses a frame body (type byte and payload).
    pub fn decode_body(body: &[u8]) -> Result<Self> {
        let mut r = Reader::at(body, 4);
        let msg_type = r.u8()?;
        let msg = match msg_type {
            MSG_INIT | MSG_RESP => {
                let mut elems = Vec::with_capacity(2);
                for _ in 0..2 {
                    let (at, bytes) = r.chunk()?;
                    elems.push(deserialize_canonical_at(bytes, at)?);
                }
                let pair: [CanonicalForm; 2] = elems.try_into().expect("two elements");
                if msg_type == MSG_INIT {
                    KexMessage::Init(pair)
                } else {
                    KexMessage::Resp(pair)
                }
            }
            MSG_CONFIRM => KexMessage::Confirm(r.take(32)?.try_into().unwrap()),
            other => {
                return Err(Error::parse(
                    4,
                    format!("unknown message type {other:#04x}"),
                ))
            }
        };
        r.finish()?;
        Ok(msg)
    }
}

fn io_error(e: std::io::Error) -> Error {
    if e.kind() == std::io::ErrorKind::UnexpectedEof {
        Error::Protocol("truncated stream".into())
    } else {
        Error::Protocol(format!("transport: {e}"))
    }
}

pub fn write_message(w: &mut impl Write, msg: &KexMessage) -> Result<()> {
    w.write_all(&msg.encode()).map_err(io_error)?;
    w.flush().map_err(io_error)
}

pub fn read_message(r: &mut impl Read) -> Result<KexMessage> {
    let mut len = [0u8; 4];
    r.read_exact(&mut len).map_err(io_error)?;
    let len = u32::from_be_bytes(len) as usize;
    if len == 0 || len > MAX_FRAME {
        return Err(Error::Protocol(format!("bad frame length {len}")));
    }
    let mut body = vec![0u8; len];
    r.read_exact(&mut body).map_err(io_error)?;
    KexMessage::decode_body(&body).map_err(|e| Error::Protocol(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KexOptions {
    /// Exchange CONFIRM tags after deriving the key.
    pub confirm: bool,
}

impl Default for KexOptions {
    fn default() -> Self {
        Self { confirm: true }
    }
}

fn check_elements(params: &GroupParams, elems: &[CanonicalForm; 2]) -> Result<()> {
    for e in elems {
        if e.strands() != params.n() {
            return Err(Error::Protocol(format!(
                "peer element on {} strands, expected {}",
                e.strands(),
                params.n()
            )));
        }
    }
    Ok(())
}

fn expect_confirm(stream: &mut impl Read, k: &SymKey, peer: Role) -> Result<()> {
    match read_message(stream)? {
        KexMessage::Confirm(tag) if tags_equal(&tag, &confirmation_tag(k, peer)) => Ok(()),
        KexMessage::Confirm(_) => Err(Error::ConfirmationMismatch),
        other => Err(Error::Protocol(format!(
            "expected CONFIRM, got type {:#04x}",
            other.msg_type()
        ))),
    }
}

/// Runs one session over a reliable ordered byte stream. The initiator
/// plays the left subgroup, the responder the right one. The session key
/// is `H("kex", ...)` over the four shared values.
pub fn kex_run<S: Read + Write>(
    role: Role,
    stream: &mut S,
    params: &GroupParams,
    rng: &mut SeededRng,
    opts: KexOptions,
) -> Result<SymKey> {
    let me = NikeIdentity::generate(params, role.side(), rng)?;
    match role {
        Role::Initiator => {
            write_message(stream, &KexMessage::Init(me.public.elements.clone()))?;
            let peer = match read_message(stream)? {
                KexMessage::Resp(e) => e,
                other => {
                    return Err(Error::Protocol(format!(
                        "expected RESP, got type {:#04x}",
                        other.msg_type()
                    )))
                }
            };
            check_elements(params, &peer)?;
            let k = me.derive(label::KEX, &peer)?;
            if opts.confirm {
                expect_confirm(stream, &k, Role::Responder)?;
                write_message(stream, &KexMessage::Confirm(confirmation_tag(&k, role)))?;
            }
            Ok(k)
        }
        Role::Responder => {
            let peer = match read_message(stream)? {
                KexMessage::Init(e) => e,
                other => {
                    return Err(Error::Protocol(format!(
                        "expected INIT, got type {:#04x}",
                        other.msg_type()
                    )))
                }
            };
            check_elements(params, &peer)?;
            let k = me.derive(label::KEX, &peer)?;
            write_message(stream, &KexMessage::Resp(me.public.elements.clone()))?;
            if opts.confirm {
                write_message(stream, &KexMessage::Confirm(confirmation_tag(&k, role)))?;
                expect_confirm(stream, &k, Role::Initiator)?;
            }
            Ok(k)
        }
    }
}

/// Outcome of a two-party run over an in-process [`pipe`].
#[derive(Debug)]
pub struct LoopbackRun {
    pub initiator: Result<SymKey>,
    pub responder: Result<SymKey>,
    /// Bytes written by the initiator and by the responder, as delivered.
    pub transcript: [Vec<u8>; 2],
}

/// Runs initiator and responder on two threads joined by an in-memory pipe,
/// optionally corrupting one byte in transit.
pub fn run_loopback(
    params: &GroupParams,
    initiator_rng: SeededRng,
    responder_rng: SeededRng,
    opts: KexOptions,
    tamper: Option<pipe::Tamper>,
) -> LoopbackRun {
    let (mut a, mut b, log) = pipe::duplex(tamper);
    let (initiator, responder) = std::thread::scope(|scope| {
        let mut ri = initiator_rng;
        let mut rr = responder_rng;
        let ti = scope.spawn(move || {
            let out = kex_run(Role::Initiator, &mut a, params, &mut ri, opts);
            drop(a);
            out
        });
        let tr = scope.spawn(move || {
            let out = kex_run(Role::Responder, &mut b, params, &mut rr, opts);
            drop(b);
            out
        });
        (
            ti.join().expect("initiator thread"),
            tr.join().expect("responder thread"),
        )
    });
    LoopbackRun {
        initiator,
        responder,
        transcript: [log.written(0), log.written(1)],
    }
}
