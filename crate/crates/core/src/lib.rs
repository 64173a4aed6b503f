//! Twin conjugacy search toolkit over braid groups.
//!
//! - [`braid`]: words, permutation braids and Garside normal forms
//! - [`sampler`]: seeded randomness and the commuting subgroups `LB_l`, `RB_r`
//! - [`codec`]: byte encodings, the hash onto keys, the symmetric cipher
//! - [`elgamal`]: CS and twin CS hashed-ElGamal encryption
//! - [`trapdoor`]: the trapdoor test for twin decision queries
//! - [`reduction`]: the CCS to strong-twin-CCS reduction and the decryption-oracle leak
//! - [`kex`]: non-interactive and interactive key exchange
//! - [`files`]: key and ciphertext file formats

pub mod braid;
pub mod codec;
pub mod elgamal;
pub mod error;
pub mod files;
pub mod kex;
pub mod reduction;
pub mod sampler;
pub mod trapdoor;

pub use error::{Error, Result};
