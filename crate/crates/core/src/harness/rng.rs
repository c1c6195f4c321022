//! Counter-based RNG streams.
//!
//! Every random draw in a sweep comes from a ChaCha8 stream whose 256-bit key
//! is the little-endian concatenation of `(seed, snr_index, trial_index,
//! role)`. A trial's randomness therefore depends only on its coordinates,
//! never on which worker runs it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// What a stream is used for within one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamRole {
    Bits = 1,
    Channel = 2,
    Noise = 3,
    Csi = 4,
}

pub fn stream(seed: u64, snr_index: u64, trial_index: u64, role: StreamRole) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    for (chunk, word) in key.chunks_exact_mut(8).zip([seed, snr_index, trial_index, role as u64]) {
        chunk.copy_from_slice(&word.to_le_bytes());
    }
    ChaCha8Rng::from_seed(key)
}
