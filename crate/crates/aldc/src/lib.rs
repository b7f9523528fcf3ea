//! Amortized locally decodable codes for Hamming and insertion/deletion
//! channels.
//!
//! The crate is organized around three layers:
//!
//! * a private-key Hamming code whose local decoder recovers whole intervals
//!   of the message while reading only disjoint, fixed-size contiguous ranges
//!   of the codeword ([`paldc`]);
//! * a Hamming-to-insdel compiler that wraps each codeword block in a
//!   buffered, weight-balanced insdel block code and locates blocks after
//!   corruption with a noisy binary search ([`compiler`], [`block_code`]);
//! * a puzzle-based wrapper that embeds the secret key in the codeword so
//!   only a resource-rich decoder can recover it ([`resource`]).
//!
//! Supporting machinery: query-counted codeword access ([`oracle`]),
//! adversarial channels with ground-truth edit scripts and the good-block
//! classification oracle ([`channels`]), and a reproducible experiment
//! harness ([`harness`]).

pub mod align;
pub mod bits;
pub mod block_code;
pub mod channels;
pub mod compiler;
pub mod ecc;
pub mod error;
pub mod gf256;
pub mod harness;
pub mod oracle;
pub mod paldc;
pub mod resource;
pub mod seed;

pub use bits::BitString;
pub use error::{Error, Result};
pub use oracle::{CorruptedOracle, QueryLog};
