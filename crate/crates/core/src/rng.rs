//! The one random stream used everywhere: ChaCha8 (a counter-based stream
//! cipher), seeded through `SeedableRng::seed_from_u64`. All integer draws
//! go through `u32` ranges so the stream is identical on 32- and 64-bit
//! targets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn stream(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform index in `0..len`; `len` must be nonzero and fit in `u32`.
pub(crate) fn index(rng: &mut StreamRng, len: usize) -> usize {
    rng.gen_range(0..len as u32) as usize
}
