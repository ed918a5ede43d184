//! Deterministic random streams.
//!
//! Every random quantity is drawn from a ChaCha stream whose key is derived
//! from a master seed and a `(domain, index)` pair, so results never depend
//! on how work is scheduled across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Stream domains. Distinct domains never share a derived seed for the
/// same master seed and index.
pub mod domain {
    pub const BOOTSTRAP: u64 = 0x6f6f_7473_7472_6170;
    pub const MC_DATA: u64 = 0x6d63_2d64_6174_6100;
    pub const MC_TEST: u64 = 0x6d63_2d74_6573_7400;
    pub const SIMULATE: u64 = 0x7369_6d75_6c61_7465;
}

/// Derives a child seed from `(master, domain, index)`.
pub fn derive_seed(master: u64, domain: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master ^ domain.rotate_left(17));
    rng.set_stream(index);
    rng.next_u64()
}

pub fn stream(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn derived_stream(master: u64, domain: u64, index: u64) -> StreamRng {
    stream(derive_seed(master, domain, index))
}
