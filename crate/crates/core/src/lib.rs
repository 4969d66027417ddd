//! Data pipeline for label-conditioned synthetic augmentation of damage
//! segmentation datasets.
//!
//! - [`raster`] / [`mask`]: pixel grids, binary masks, convolution, PNG I/O
//! - [`edges`]: structure-edge detectors (Sobel by default)
//! - [`labels`]: tri-categorical labels (background / edge / ROI)
//! - [`pipeline`]: tiling, class weights, partitioning, random crops, manifest
//! - [`genbridge`]: directory protocol for label→image generators, dataset merge
//! - [`metrics`]: confusion matrices, IoU, precision/recall, boundary F1
//! - [`report`]: overlays and run comparison tables

pub mod edges;
pub mod error;
pub mod genbridge;
pub mod labels;
pub mod mask;
pub mod metrics;
pub mod pipeline;
mod png_io;
pub mod raster;
pub mod report;

pub use error::{Error, Result};
pub use mask::{EdgeMap, Mask, RoiMask};
pub use raster::{FloatPlane, Kernel, Raster};
