//! Seed-stream derivation. One user seed fans out into independent ChaCha
//! streams keyed by a purpose string, so adding a diagnostic draw never
//! perturbs the training draws of an existing experiment.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// FNV-1a over the domain bytes; stable across platforms.
pub fn domain_hash(domain: &str) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in domain.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// ChaCha stream for (seed, purpose-domain).
pub fn stream_rng(seed: u64, domain: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(domain_hash(domain));
    rng
}

/// Derived 64-bit seed for modules that split their own streams internally.
pub fn derive_seed(seed: u64, domain: &str) -> u64 {
    let mut hash = domain_hash(domain);
    for byte in seed.to_le_bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}
