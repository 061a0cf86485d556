//! Quickshift superpixel segmentation and its closed-form superpixel-count
//! predictors.
//!
//! The crate is split along the pipeline: CIELAB images ([`image`],
//! [`color`]), the Gaussian kernel density estimate and its main-term /
//! projection approximations ([`density`]), the parent-graph construction and
//! component labelling ([`graph`]), closed-form expectations for counts and
//! densities under the flat and bicolor noise models ([`theory`]), and seeded
//! generators for those models ([`synth`]).
//!
//! Everything is `no_std` + `alloc`; float math goes through `libm` so
//! results are bit-identical across platforms. File formats, CLI, and the
//! experiment harness live in the companion `quickshift-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod color;
pub mod density;
pub mod field;
pub mod graph;
pub mod image;
mod math;
pub mod noise;
pub mod params;
pub mod synth;
pub mod theory;

pub use field::DensityField;
pub use graph::{LookoutOffsets, OriginalVariantMode, ParentGraph};
pub use image::{Image, LabelMap, Region, RgbImage};
pub use noise::NoiseModel;
pub use params::Hyperparams;
pub use synth::{BicolorModel, FlatModel};
pub use theory::{Prediction, PredictionMethod, ShapeCase};
