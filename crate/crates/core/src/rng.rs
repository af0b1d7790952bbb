//! Seeded random streams.
//!
//! Every generator in the crate is a ChaCha8 stream keyed by a 64-bit seed
//! (expanded with `SeedableRng::seed_from_u64`) and a 64-bit stream id.
//! Distinct purposes use distinct stream ids, so reproducing any single
//! stream needs only `(seed, stream)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use rand_chacha::ChaCha8Rng as Rng;

/// Stream ids used inside the crate.
pub mod streams {
    pub const GENERATOR: u64 = 1;
    pub const LIPSCHITZ: u64 = 2;
    pub const CHECKS: u64 = 3;
    pub const SAMPLING: u64 = 4;
}

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
