//! Scalar per-pixel fields (density estimates and their approximations).

use crate::image::GridError;
use alloc::vec;
use alloc::vec::Vec;

/// `height x width` grid of finite scalars, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityField {
    height: usize,
    width: usize,
    values: Vec<f64>,
}

impl DensityField {
    pub fn from_values(height: usize, width: usize, values: Vec<f64>) -> Result<Self, GridError> {
        if height == 0 || width == 0 {
            return Err(GridError::EmptyDims);
        }
        if values.len() != height * width {
            return Err(GridError::SizeMismatch {
                expected: height * width,
                actual: values.len(),
            });
        }
        if let Some(idx) = values.iter().position(|v| !v.is_finite()) {
            return Err(GridError::NonFinite {
                row: idx / width,
                col: idx % width,
            });
        }
        Ok(Self { height, width, values })
    }

    pub fn from_fn(
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self, GridError> {
        let mut values = Vec::with_capacity(height * width);
        for i in 0..height {
            for j in 0..width {
                values.push(f(i, j));
            }
        }
        Self::from_values(height, width, values)
    }

    pub(crate) fn zeroed(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            values: vec![0.0; height * width],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.width + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Applies a scalar map to every value (used to probe order-invariance).
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self, GridError> {
        Self::from_values(self.height, self.width, self.values.iter().map(|&v| f(v)).collect())
    }
}
