//! Seeded generators for the two noise models: a flat patch with i.i.d.
//! Gaussian pixel noise, and a bicolor image split by a vertical boundary.
//!
//! Noise is keyed by absolute pixel coordinates, so a generator with smaller
//! dimensions produces exactly the top-left crop of a larger one with the
//! same seed.

use crate::image::Image;
use crate::noise::{PixelStream, StreamKind};
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SynthError {
    EmptyDims,
    /// Sigma must be finite and non-negative.
    BadSigma,
    /// Color components must be finite.
    BadColor,
    /// The boundary column must satisfy `1 <= boundary_col < width`.
    BoundaryOutOfRange { boundary_col: usize, width: usize },
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::EmptyDims => write!(f, "model dimensions must be at least 1x1"),
            SynthError::BadSigma => write!(f, "sigma must be finite and non-negative"),
            SynthError::BadColor => write!(f, "color components must be finite"),
            SynthError::BoundaryOutOfRange { boundary_col, width } => write!(
                f,
                "boundary column {boundary_col} must be in 1..{width}"
            ),
        }
    }
}

impl core::error::Error for SynthError {}

fn check_color(c: [f64; 3]) -> Result<(), SynthError> {
    if c.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(SynthError::BadColor)
    }
}

/// Flat patch: every pixel is `color + sigma * g(seed, i, j)` with `g` a
/// standard 3-vector Gaussian from the counter-based stream.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatModel {
    pub height: usize,
    pub width: usize,
    pub color: [f64; 3],
    pub sigma: f64,
    pub seed: u64,
}

impl FlatModel {
    pub fn new(
        height: usize,
        width: usize,
        color: [f64; 3],
        sigma: f64,
        seed: u64,
    ) -> Result<Self, SynthError> {
        if height == 0 || width == 0 {
            return Err(SynthError::EmptyDims);
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(SynthError::BadSigma);
        }
        check_color(color)?;
        Ok(Self { height, width, color, sigma, seed })
    }

    pub fn generate(&self) -> Image {
        let stream = PixelStream::new(self.seed, StreamKind::PixelNoise);
        let c = self.color;
        let sigma = self.sigma;
        Image::from_fn(self.height, self.width, |i, j| {
            if sigma == 0.0 {
                return c;
            }
            let z = stream.normal3(i, j);
            [c[0] + sigma * z[0], c[1] + sigma * z[1], c[2] + sigma * z[2]]
        })
        .expect("finite noise")
    }
}

/// Bicolor image: columns `0..boundary_col` are drawn around `left_color`,
/// columns `boundary_col..width` around `right_color`, with the same noise
/// contract as the flat model. `boundary_col` is the size of the left patch.
#[derive(Debug, Clone, PartialEq)]
pub struct BicolorModel {
    pub height: usize,
    pub width: usize,
    pub left_color: [f64; 3],
    pub right_color: [f64; 3],
    pub boundary_col: usize,
    pub sigma: f64,
    pub seed: u64,
}

impl BicolorModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        height: usize,
        width: usize,
        left_color: [f64; 3],
        right_color: [f64; 3],
        boundary_col: usize,
        sigma: f64,
        seed: u64,
    ) -> Result<Self, SynthError> {
        if height == 0 || width == 0 {
            return Err(SynthError::EmptyDims);
        }
        if boundary_col == 0 || boundary_col >= width {
            return Err(SynthError::BoundaryOutOfRange { boundary_col, width });
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(SynthError::BadSigma);
        }
        check_color(left_color)?;
        check_color(right_color)?;
        Ok(Self {
            height,
            width,
            left_color,
            right_color,
            boundary_col,
            sigma,
            seed,
        })
    }

    pub fn generate(&self) -> Image {
        let stream = PixelStream::new(self.seed, StreamKind::PixelNoise);
        let sigma = self.sigma;
        Image::from_fn(self.height, self.width, |i, j| {
            let c = if j < self.boundary_col {
                self.left_color
            } else {
                self.right_color
            };
            if sigma == 0.0 {
                return c;
            }
            let z = stream.normal3(i, j);
            [c[0] + sigma * z[0], c[1] + sigma * z[1], c[2] + sigma * z[2]]
        })
        .expect("finite noise")
    }
}
