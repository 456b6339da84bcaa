//! Per-frame seed derivation.
//!
//! Seeds are mixed with the SplitMix64 finalizer, so a frame's randomness
//! depends only on `(master, stream, index)` and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for every random stream.
pub type FrameRng = ChaCha8Rng;

/// Independent random streams drawn for one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Info = 1,
    Channel = 2,
    Interleaver = 3,
}

/// SplitMix64 output function.
#[inline]
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(stream as u64)) ^ index)
}

pub fn frame_rng(master: u64, stream: Stream, index: u64) -> FrameRng {
    FrameRng::seed_from_u64(derive_seed(master, stream, index))
}
