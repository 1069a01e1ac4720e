//! Shared helpers for the criterion benchmarks; the interesting code lives
//! under `benches/`.

use stegafly_core::ImageBuffer;

/// Deterministic pseudo-random RGB cover, sized for benchmark inputs.
pub fn synthetic_cover(width: usize, height: usize, seed: u64) -> ImageBuffer {
    // xorshift keeps this dependency-free for downstream bench targets
    let mut state = seed | 1;
    let data = (0..width * height * 3)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 24) as u8
        })
        .collect();
    ImageBuffer::new(width, height, data).expect("valid dimensions")
}
