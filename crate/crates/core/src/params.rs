//! Segmentation hyperparameters.

use crate::math;
use core::fmt;

/// Default scale of the tie-breaking noise added to density estimates.
pub const DEFAULT_NOISE_SCALE: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamError {
    /// Kernel size must be a positive finite number.
    BadKernelSize,
    /// Max distance must be positive (infinity means "no cutoff").
    BadMaxDist,
    /// Color ratio must be a positive finite number.
    BadColorRatio,
    /// Noise scale must be finite and non-negative.
    BadNoiseScale,
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            ParamError::BadKernelSize => "kernel size must be positive and finite",
            ParamError::BadMaxDist => "max distance must be positive",
            ParamError::BadColorRatio => "color ratio must be positive and finite",
            ParamError::BadNoiseScale => "noise scale must be non-negative and finite",
        };
        f.write_str(msg)
    }
}

impl core::error::Error for ParamError {}

/// Quickshift hyperparameters.
///
/// The window radius is derived, not set: `window_radius = ceil(3 *
/// kernel_size)`, so non-integer kernel sizes err toward a larger window.
/// `max_dist = f64::INFINITY` disables the distance cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparams {
    kernel_size: f64,
    max_dist: f64,
    window_radius: u32,
    color_ratio: f64,
    noise_scale: f64,
    seed: u64,
}

impl Hyperparams {
    pub fn new(kernel_size: f64, max_dist: f64) -> Result<Self, ParamError> {
        if !(kernel_size.is_finite() && kernel_size > 0.0 && kernel_size < 1e6) {
            return Err(ParamError::BadKernelSize);
        }
        if !(max_dist > 0.0) || max_dist.is_nan() {
            return Err(ParamError::BadMaxDist);
        }
        Ok(Self {
            kernel_size,
            max_dist,
            window_radius: math::ceil(3.0 * kernel_size) as u32,
            color_ratio: 1.0,
            noise_scale: DEFAULT_NOISE_SCALE,
            seed: 0,
        })
    }

    pub fn with_color_ratio(mut self, ratio: f64) -> Result<Self, ParamError> {
        if !(ratio.is_finite() && ratio >= 0.0) {
            return Err(ParamError::BadColorRatio);
        }
        self.color_ratio = ratio;
        Ok(self)
    }

    pub fn with_noise_scale(mut self, scale: f64) -> Result<Self, ParamError> {
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(ParamError::BadNoiseScale);
        }
        self.noise_scale = scale;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn kernel_size(&self) -> f64 {
        self.kernel_size
    }

    pub fn max_dist(&self) -> f64 {
        self.max_dist
    }

    pub fn window_radius(&self) -> u32 {
        self.window_radius
    }

    pub fn color_ratio(&self) -> f64 {
        self.color_ratio
    }

    pub fn noise_scale(&self) -> f64 {
        self.noise_scale
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Scales both `kernel_size` and `max_dist` by `factor`; infinity stays
    /// infinity. The window radius is re-derived.
    pub fn rescaled(&self, factor: f64) -> Result<Self, ParamError> {
        let mut hp = Hyperparams::new(self.kernel_size * factor, self.max_dist * factor)?;
        hp.color_ratio = self.color_ratio;
        hp.noise_scale = self.noise_scale;
        hp.seed = self.seed;
        Ok(hp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_radius_is_ceil_of_3ks() {
        assert_eq!(Hyperparams::new(5.0, 10.0).unwrap().window_radius(), 15);
        assert_eq!(Hyperparams::new(2.5, 10.0).unwrap().window_radius(), 8);
        assert_eq!(Hyperparams::new(1.4, 10.0).unwrap().window_radius(), 5);
    }

    #[test]
    fn infinity_is_a_legal_max_dist() {
        let hp = Hyperparams::new(5.0, f64::INFINITY).unwrap();
        assert!(hp.max_dist().is_infinite());
        let scaled = hp.rescaled(3.0).unwrap();
        assert!(scaled.max_dist().is_infinite());
        assert_eq!(scaled.kernel_size(), 15.0);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(Hyperparams::new(0.0, 10.0).is_err());
        assert!(Hyperparams::new(f64::NAN, 10.0).is_err());
        assert!(Hyperparams::new(5.0, 0.0).is_err());
        assert!(Hyperparams::new(5.0, -1.0).is_err());
        assert!(Hyperparams::new(5.0, 10.0).unwrap().with_noise_scale(-1.0).is_err());
    }
}
