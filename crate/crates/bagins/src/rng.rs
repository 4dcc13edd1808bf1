//! Deterministic substream seeding.
//!
//! Every random draw in the crate flows from an explicit `u64` seed through
//! a (seed, domain, index) triple, so independent components (weight
//! sampling, perturbation, random-index chunks) never share a stream and
//! results are reproducible across platforms.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DOMAIN_RANDOM_INDEX: u64 = 0x5249; // "RI"
pub const DOMAIN_WEIGHTS: u64 = 0x5754; // "WT"
pub const DOMAIN_PERTURB: u64 = 0x5054; // "PT"

/// RNG for substream `index` of `domain` under the run-level `seed`.
pub fn substream(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[0..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&domain.to_le_bytes());
    bytes[16..24].copy_from_slice(&index.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}
