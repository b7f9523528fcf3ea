//! Seed derivation for reproducible experiments.
//!
//! Every random choice in the crate flows from a ChaCha20 stream keyed by a
//! 32-byte seed. Trial seeds are derived as hash(master_seed, trial_index)
//! with a domain tag so independent components never share a stream.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

pub type Seed = [u8; 32];

pub fn derive(master: u64, domain: &str, index: u64) -> Seed {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(domain.as_bytes());
    h.update(index.to_le_bytes());
    h.finalize().into()
}

pub fn rng_from(seed: Seed) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(seed)
}

pub fn rng(master: u64, domain: &str, index: u64) -> ChaCha20Rng {
    rng_from(derive(master, domain, index))
}
