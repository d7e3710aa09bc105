//! Segmentation of camera-captured business card images into text regions,
//! lines, and characters.
//!
//! The pipeline runs in four stages, each in its own module:
//!
//! 1. [`region`]: block classification, connected components, non-text removal.
//! 2. [`skew`]: integer projection-profile skew estimation and correction.
//! 3. [`binarize`]: per-region adaptive thresholding.
//! 4. [`segment`]: horizontal/vertical histogram line and character splitting.
//!
//! [`pipeline`] wires them together and owns the JSON output; [`synth`]
//! renders synthetic cards with exact ground truth for evaluation.

pub mod error;
pub mod raster;
pub mod trig;
mod trig_tables;

pub use error::{Error, Result};
pub use raster::{BinaryImage, GrayImage, Rect};
pub mod binarize;
pub mod pipeline;
pub mod region;
pub mod segment;
pub mod skew;
pub mod synth;
