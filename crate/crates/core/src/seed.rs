//! Deterministic random streams derived from a root seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator for `stream` under `seed`. Distinct streams are
/// independent, so trial loops can run in any order and still reproduce.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
