//! Image containers, rectangular regions, and label maps.
//!
//! Pixel coordinates are `(row, col)` throughout, 0-based, row-major.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Errors from constructing or validating grid containers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GridError {
    /// Height or width is zero.
    EmptyDims,
    /// A pixel channel is NaN or infinite.
    NonFinite { row: usize, col: usize },
    /// Backing buffer length does not match `height * width`.
    SizeMismatch { expected: usize, actual: usize },
    /// Region does not fit inside the image.
    RegionOutOfBounds,
    /// Labels are not a contiguous `0..num_labels` range with every label
    /// occurring at least once.
    LabelsNotContiguous,
}

impl fmt::Display for GridError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridError::EmptyDims => write!(f, "image dimensions must be at least 1x1"),
            GridError::NonFinite { row, col } => {
                write!(f, "non-finite channel value at ({row}, {col})")
            }
            GridError::SizeMismatch { expected, actual } => {
                write!(f, "buffer holds {actual} pixels, dimensions need {expected}")
            }
            GridError::RegionOutOfBounds => write!(f, "region exceeds image bounds"),
            GridError::LabelsNotContiguous => {
                write!(f, "labels must cover 0..num_labels with no gaps")
            }
        }
    }
}

impl core::error::Error for GridError {}

/// 8-bit RGB raster, the shape PPM files decode to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    height: usize,
    width: usize,
    data: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn from_pixels(height: usize, width: usize, data: Vec<[u8; 3]>) -> Result<Self, GridError> {
        if height == 0 || width == 0 {
            return Err(GridError::EmptyDims);
        }
        if data.len() != height * width {
            return Err(GridError::SizeMismatch {
                expected: height * width,
                actual: data.len(),
            });
        }
        Ok(Self { height, width, data })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> [u8; 3] {
        self.data[row * self.width + col]
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.data
    }
}

/// Three-channel float raster; after conversion the channels are CIELAB.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    height: usize,
    width: usize,
    data: Vec<[f64; 3]>,
}

impl Image {
    /// Constant image.
    pub fn filled(height: usize, width: usize, value: [f64; 3]) -> Result<Self, GridError> {
        if height == 0 || width == 0 {
            return Err(GridError::EmptyDims);
        }
        if value.iter().any(|v| !v.is_finite()) {
            return Err(GridError::NonFinite { row: 0, col: 0 });
        }
        Ok(Self {
            height,
            width,
            data: vec![value; height * width],
        })
    }

    pub fn from_pixels(
        height: usize,
        width: usize,
        data: Vec<[f64; 3]>,
    ) -> Result<Self, GridError> {
        if height == 0 || width == 0 {
            return Err(GridError::EmptyDims);
        }
        if data.len() != height * width {
            return Err(GridError::SizeMismatch {
                expected: height * width,
                actual: data.len(),
            });
        }
        for (idx, px) in data.iter().enumerate() {
            if px.iter().any(|v| !v.is_finite()) {
                return Err(GridError::NonFinite {
                    row: idx / width,
                    col: idx % width,
                });
            }
        }
        Ok(Self { height, width, data })
    }

    /// Builds the image pixel-by-pixel in row-major order.
    pub fn from_fn(
        height: usize,
        width: usize,
        mut f: impl FnMut(usize, usize) -> [f64; 3],
    ) -> Result<Self, GridError> {
        if height == 0 || width == 0 {
            return Err(GridError::EmptyDims);
        }
        let mut data = Vec::with_capacity(height * width);
        for i in 0..height {
            for j in 0..width {
                let px = f(i, j);
                if px.iter().any(|v| !v.is_finite()) {
                    return Err(GridError::NonFinite { row: i, col: j });
                }
                data.push(px);
            }
        }
        Ok(Self { height, width, data })
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
    pub fn get(&self, row: usize, col: usize) -> [f64; 3] {
        self.data[row * self.width + col]
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.data
    }

    /// Copies a rectangular sub-image.
    pub fn crop(&self, region: Region) -> Result<Image, GridError> {
        region.validate(self.height, self.width)?;
        let mut data = Vec::with_capacity(region.height * region.width);
        for i in region.top..region.top + region.height {
            for j in region.left..region.left + region.width {
                data.push(self.get(i, j));
            }
        }
        Image::from_pixels(region.height, region.width, data)
    }
}

/// Axis-aligned rectangle of pixels, `top/left` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub top: usize,
    pub left: usize,
    pub height: usize,
    pub width: usize,
}

impl Region {
    pub fn new(top: usize, left: usize, height: usize, width: usize) -> Self {
        Self { top, left, height, width }
    }

    /// Whole-image region for the given dimensions.
    pub fn full(height: usize, width: usize) -> Self {
        Self { top: 0, left: 0, height, width }
    }

    pub fn validate(&self, image_height: usize, image_width: usize) -> Result<(), GridError> {
        if self.top + self.height > image_height || self.left + self.width > image_width {
            return Err(GridError::RegionOutOfBounds);
        }
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.height == 0 || self.width == 0
    }

    pub fn num_pixels(&self) -> usize {
        self.height * self.width
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        row >= self.top
            && row < self.top + self.height
            && col >= self.left
            && col < self.left + self.width
    }

    /// Row-major iterator over the contained coordinates.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let left = self.left;
        let width = self.width;
        (self.top..self.top + self.height)
            .flat_map(move |i| (left..left + width).map(move |j| (i, j)))
    }
}

/// Per-pixel superpixel ids. Labels are a contiguous `0..num_labels` range
/// and every label occurs at least once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    height: usize,
    width: usize,
    labels: Vec<u32>,
    num_labels: u32,
}

impl LabelMap {
    pub fn from_labels(height: usize, width: usize, labels: Vec<u32>) -> Result<Self, GridError> {
        if height == 0 || width == 0 {
            return Err(GridError::EmptyDims);
        }
        if labels.len() != height * width {
            return Err(GridError::SizeMismatch {
                expected: height * width,
                actual: labels.len(),
            });
        }
        let max = *labels.iter().max().expect("non-empty");
        let num_labels = max as usize + 1;
        let mut seen = vec![false; num_labels];
        for &l in &labels {
            seen[l as usize] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(GridError::LabelsNotContiguous);
        }
        Ok(Self {
            height,
            width,
            labels,
            num_labels: num_labels as u32,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_labels(&self) -> u32 {
        self.num_labels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_dims() {
        assert_eq!(Image::filled(0, 3, [0.0; 3]).unwrap_err(), GridError::EmptyDims);
        assert_eq!(Image::filled(3, 0, [0.0; 3]).unwrap_err(), GridError::EmptyDims);
    }

    #[test]
    fn rejects_non_finite() {
        let err = Image::from_pixels(1, 2, vec![[0.0; 3], [f64::NAN, 0.0, 0.0]]).unwrap_err();
        assert_eq!(err, GridError::NonFinite { row: 0, col: 1 });
    }

    #[test]
    fn region_bounds() {
        let r = Region::new(2, 3, 4, 5);
        assert!(r.validate(6, 8).is_ok());
        assert_eq!(r.validate(5, 8).unwrap_err(), GridError::RegionOutOfBounds);
        assert_eq!(r.iter().count(), 20);
        assert!(r.contains(2, 3));
        assert!(!r.contains(6, 3));
    }

    #[test]
    fn crop_matches_indexing() {
        let img = Image::from_fn(4, 5, |i, j| [i as f64, j as f64, 0.0]).unwrap();
        let sub = img.crop(Region::new(1, 2, 2, 3)).unwrap();
        assert_eq!(sub.dims(), (2, 3));
        assert_eq!(sub.get(0, 0), img.get(1, 2));
        assert_eq!(sub.get(1, 2), img.get(2, 4));
    }

    #[test]
    fn label_map_contiguity() {
        assert!(LabelMap::from_labels(1, 3, vec![0, 1, 2]).is_ok());
        assert_eq!(
            LabelMap::from_labels(1, 3, vec![0, 2, 2]).unwrap_err(),
            GridError::LabelsNotContiguous
        );
    }
}
