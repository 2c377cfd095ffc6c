//! Seedable, portable random source.
//!
//! The generator is xoshiro256** (Blackman & Vigna, 2018) with its 256-bit
//! state filled by four successive outputs of splitmix64 applied to the
//! 64-bit seed. This is the seeding procedure recommended by the xoshiro
//! authors, so any reference implementation seeded the same way produces the
//! same stream.
//!
//! Draw accounting, which every caller relies on for reproducibility:
//!
//! * [`RandomSource::next_f64`], [`RandomSource::next_uniform`] and
//!   [`RandomSource::next_index`] consume one 64-bit output each.
//! * [`RandomSource::next_normal`] consumes exactly two uniform draws
//!   (Box–Muller, cosine branch only; the sine variate is discarded).

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One splitmix64 step: advances `state` and returns the mixed output.
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xoshiro256** generator seeded through splitmix64.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomSource {
    seed: u64,
    state: [u64; 4],
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        let mut sm = seed;
        let state = [
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
            splitmix64(&mut sm),
        ];
        Self { seed, state }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child source for stream `stream`.
    ///
    /// The child seed is `splitmix64(seed ^ stream)`; it depends only on the
    /// parent's seed, never on how far the parent has advanced.
    pub fn split(&self, stream: u64) -> RandomSource {
        let mut s = self.seed ^ stream;
        RandomSource::new(splitmix64(&mut s))
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform on `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[lo, hi)`.
    pub fn next_uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::argument(format!(
                "uniform range requires finite lo < hi, got [{lo}, {hi})"
            )));
        }
        let v = lo + (hi - lo) * self.next_f64();
        // Rounding can land exactly on `hi` when the interval is tiny.
        Ok(if v >= hi { hi.next_down().max(lo) } else { v })
    }

    /// Uniform index in `0..n`. `n` must be positive.
    pub fn next_index(&mut self, n: usize) -> usize {
        assert!(n > 0, "next_index requires a non-empty range");
        ((self.next_f64() * n as f64) as usize).min(n - 1)
    }

    /// Standard normal variate via Box–Muller on two uniform draws.
    pub fn next_normal(&mut self) -> f64 {
        // 1 - u lies in (0, 1], keeping the logarithm finite.
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Fisher–Yates shuffle, one `next_index` draw per position from the end.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_index(i + 1);
            items.swap(i, j);
        }
    }
}
