//! Per-trial seeds split from one master seed.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed of trial `index`: the first word of ChaCha stream `index` under the
/// master key. Adding trials never changes the seeds of earlier ones.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng.next_u64()
}
