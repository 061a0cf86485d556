//! Counter-based random streams.
//!
//! Every draw is a pure function of (seed, stream, pixel, slot): nothing is
//! sequential, so fields can be generated in any order, in parallel, or one
//! sub-window at a time and still come out bit-identical. Gaussians use a
//! fixed Box-Muller transform of two hashed 53-bit uniforms, which keeps
//! cross-platform runs exactly reproducible.

use crate::math;
use crate::params::ParamError;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
const ROW_SALT: u64 = 0xA24B_AED4_963E_E407;
const COL_SALT: u64 = 0x9FB2_1C65_1E98_DF25;
const SLOT_SALT: u64 = 0xD6E8_FEB8_6659_FD93;

/// SplitMix64 finalizer.
#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent purposes draw from disjoint streams of the same seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamKind {
    /// Tie-break noise added to density estimates.
    TieBreak,
    /// Pixel noise of the synthetic image models.
    PixelNoise,
}

/// A keyed, counter-based random stream over pixel coordinates.
#[derive(Debug, Clone, Copy)]
pub struct PixelStream {
    key: u64,
}

impl PixelStream {
    pub fn new(seed: u64, kind: StreamKind) -> Self {
        let tag = match kind {
            StreamKind::TieBreak => 1u64,
            StreamKind::PixelNoise => 2u64,
        };
        Self {
            key: mix(seed ^ tag.wrapping_mul(GOLDEN)),
        }
    }

    #[inline]
    fn word(&self, row: u64, col: u64, slot: u64) -> u64 {
        let mut h = self.key;
        h = mix(h ^ row.wrapping_mul(ROW_SALT));
        h = mix(h ^ col.wrapping_mul(COL_SALT));
        h = mix(h ^ slot.wrapping_mul(SLOT_SALT));
        h
    }

    /// Uniform draw in `(0, 1]` (left-open so it can feed a logarithm).
    #[inline]
    pub fn uniform_open(&self, row: usize, col: usize, slot: u32) -> f64 {
        let w = self.word(row as u64, col as u64, slot as u64);
        ((w >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform draw in `[0, 1)`.
    #[inline]
    pub fn uniform(&self, row: usize, col: usize, slot: u32) -> f64 {
        let w = self.word(row as u64, col as u64, slot as u64);
        (w >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// The `n`-th standard normal draw at a pixel. Draws `2k` and `2k+1`
    /// come from one Box-Muller pair over uniform slots `(2k, 2k+1)`.
    pub fn normal(&self, row: usize, col: usize, n: u32) -> f64 {
        let pair = n / 2;
        let u1 = self.uniform_open(row, col, 2 * pair);
        let u2 = self.uniform(row, col, 2 * pair + 1);
        let r = math::sqrt(-2.0 * math::ln(u1));
        let theta = 2.0 * math::PI * u2;
        if n % 2 == 0 {
            r * math::cos(theta)
        } else {
            r * math::sin(theta)
        }
    }

    /// Three standard normal draws for one pixel (one per color channel).
    pub fn normal3(&self, row: usize, col: usize) -> [f64; 3] {
        let u1 = self.uniform_open(row, col, 0);
        let u2 = self.uniform(row, col, 1);
        let r = math::sqrt(-2.0 * math::ln(u1));
        let theta = 2.0 * math::PI * u2;
        let z0 = r * math::cos(theta);
        let z1 = r * math::sin(theta);
        let u3 = self.uniform_open(row, col, 2);
        let z2 = math::sqrt(-2.0 * math::ln(u3)) * math::cos(2.0 * math::PI * self.uniform(row, col, 3));
        [z0, z1, z2]
    }
}

/// Tie-break noise for density estimates: `draw(i, j)` is `sigma` times a
/// standard normal that depends only on `(seed, i, j)`.
#[derive(Debug, Clone, Copy)]
pub struct NoiseModel {
    seed: u64,
    sigma: f64,
    stream: PixelStream,
}

impl NoiseModel {
    pub fn new(seed: u64, sigma: f64) -> Result<Self, ParamError> {
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(ParamError::BadNoiseScale);
        }
        Ok(Self {
            seed,
            sigma,
            stream: PixelStream::new(seed, StreamKind::TieBreak),
        })
    }

    /// Zero noise; density estimates come out exactly deterministic.
    pub fn disabled() -> Self {
        Self::new(0, 0.0).expect("zero is valid")
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    #[inline]
    pub fn draw(&self, row: usize, col: usize) -> f64 {
        if self.sigma == 0.0 {
            return 0.0;
        }
        self.sigma * self.stream.normal(row, col, 0)
    }
}
