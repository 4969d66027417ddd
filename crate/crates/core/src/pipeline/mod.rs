//! Dataset construction: tiling with cleansing, class weights, seeded
//! partitioning, random-crop augmentation and the manifest tying it together.
//!
//! All randomness flows from a single `u64` seed through ChaCha8, so every
//! operation is a deterministic function of its inputs and the seed.

mod crops;
mod manifest;
mod partition;
mod tiling;
mod weights;

pub use crops::{
    random_crops, working_size, Crop, DEFAULT_CROP_COUNT, DEFAULT_CROP_SIZE, MAX_CROP_RETRIES,
};
pub use manifest::{
    DatasetManifest, ManifestHeader, Provenance, Split, SplitCounts, TileRecord, MANIFEST_FORMAT,
};
pub use partition::{partition, train_count, PartitionOptions, DEFAULT_TRAIN_FRACTION};
pub use tiling::{
    grid, tile, tile_id, tile_paths, DropReason, Footprint, Tile, TileParams, TilingOutcome,
    DEFAULT_MIN_KEEP, DEFAULT_TILE_SIZE,
};
pub use weights::{class_weights, ClassWeights};
