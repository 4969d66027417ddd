//! Non-overlapping grid tiling with cleansing.
//!
//! The grid is anchored at the origin with stride `tile_size`. Remainder
//! strips along the right and bottom edges are kept only when both native
//! sides reach `min_keep`, and are then resized up to `tile_size` (image
//! bilinear, ROI nearest-neighbor). Tiles without any ROI pixel are dropped.

use super::manifest::{Provenance, TileRecord};
use crate::error::{Error, Result};
use crate::mask::RoiMask;
use crate::raster::Raster;

pub const DEFAULT_TILE_SIZE: usize = 224;
pub const DEFAULT_MIN_KEEP: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileParams {
    pub tile_size: usize,
    pub min_keep: usize,
}

impl Default for TileParams {
    fn default() -> Self {
        Self {
            tile_size: DEFAULT_TILE_SIZE,
            min_keep: DEFAULT_MIN_KEEP,
        }
    }
}

impl TileParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tile_size > self.min_keep && self.min_keep > 0) {
            return Err(Error::Parameter(format!(
                "need tile_size > min_keep > 0, got {} and {}",
                self.tile_size, self.min_keep
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Footprint {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DropReason {
    TooSmall,
    NoRoi,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tile {
    pub image: Raster,
    pub roi: RoiMask,
    pub record: TileRecord,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TilingOutcome {
    pub kept: Vec<Tile>,
    pub dropped: Vec<(Footprint, DropReason)>,
}

/// All grid cells of a `width`×`height` photo, row-major.
pub fn grid(width: usize, height: usize, tile_size: usize) -> Vec<Footprint> {
    let mut cells = Vec::new();
    for y in (0..height).step_by(tile_size) {
        for x in (0..width).step_by(tile_size) {
            cells.push(Footprint {
                x,
                y,
                w: tile_size.min(width - x),
                h: tile_size.min(height - y),
            });
        }
    }
    cells
}

pub fn tile_id(photo_id: &str, x: usize, y: usize) -> String {
    format!("{photo_id}_x{x}_y{y}")
}

/// Conventional manifest-relative paths for a tile's image and ROI mask.
pub fn tile_paths(tile_id: &str) -> (String, String) {
    (
        format!("images/{tile_id}.png"),
        format!("labels/{tile_id}.png"),
    )
}

pub fn tile(
    photo_id: &str,
    photo: &Raster,
    roi: &RoiMask,
    params: &TileParams,
) -> Result<TilingOutcome> {
    params.validate()?;
    if photo.dims() != roi.dims() {
        return Err(Error::dims("photo", photo.dims(), "roi mask", roi.dims()));
    }
    let ts = params.tile_size;
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for fp in grid(photo.width(), photo.height(), ts) {
        if fp.w < params.min_keep || fp.h < params.min_keep {
            dropped.push((fp, DropReason::TooSmall));
            continue;
        }
        let mut tile_roi = roi.crop(fp.x, fp.y, fp.w, fp.h)?;
        if !tile_roi.any() {
            dropped.push((fp, DropReason::NoRoi));
            continue;
        }
        let mut image = photo.crop(fp.x, fp.y, fp.w, fp.h)?;
        if (fp.w, fp.h) != (ts, ts) {
            image = image.resize_bilinear(ts, ts)?;
            tile_roi = tile_roi.resize_nearest(ts, ts)?;
        }
        let id = tile_id(photo_id, fp.x, fp.y);
        let (image_path, label_path) = tile_paths(&id);
        kept.push(Tile {
            image,
            roi: tile_roi,
            record: TileRecord {
                tile_id: id,
                source_photo_id: photo_id.to_string(),
                source_width: photo.width(),
                source_height: photo.height(),
                offset_x: fp.x,
                offset_y: fp.y,
                native_w: fp.w,
                native_h: fp.h,
                stored_size: ts,
                split: None,
                provenance: Provenance::Real,
                generator_id: None,
                image_path,
                label_path,
                trilabel_path: None,
            },
        });
    }
    Ok(TilingOutcome { kept, dropped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::Mask;
    use proptest::prelude::*;

    fn gray(w: usize, h: usize) -> Raster {
        Raster::gray_from_fn(w, h, |x, y| ((x + 3 * y) % 256) as u8).unwrap()
    }

    #[test]
    fn exact_fit() {
        let out = tile(
            "p",
            &gray(224, 224),
            &Mask::full(224, 224),
            &TileParams::default(),
        )
        .unwrap();
        assert_eq!(out.kept.len(), 1);
        let r = &out.kept[0].record;
        assert_eq!((r.offset_x, r.offset_y), (0, 0));
        assert_eq!(out.kept[0].image, gray(224, 224));
    }

    #[test]
    fn narrow_remainder_dropped() {
        let out = tile(
            "p",
            &gray(300, 224),
            &Mask::full(300, 224),
            &TileParams::default(),
        )
        .unwrap();
        assert_eq!(out.kept.len(), 1);
        assert_eq!(
            out.dropped,
            vec![(
                Footprint {
                    x: 224,
                    y: 0,
                    w: 76,
                    h: 224
                },
                DropReason::TooSmall
            )]
        );
    }

    #[test]
    fn roi_only_in_first_cell() {
        let roi = Mask::from_fn(500, 400, |x, y| x < 224 && y < 224);
        let out = tile("p", &gray(500, 400), &roi, &TileParams::default()).unwrap();
        // cells: (0,0) 224² roi; (224,0) 224² no roi; (448,0) 52 wide;
        // (0,224) 224×176 no roi; (224,224) 224×176 no roi; (448,224) small
        assert_eq!(out.kept.len(), 1);
        assert_eq!(out.kept[0].record.tile_id, "p_x0_y0");
        let reasons: Vec<DropReason> = out.dropped.iter().map(|d| d.1).collect();
        assert_eq!(
            reasons,
            vec![
                DropReason::NoRoi,
                DropReason::TooSmall,
                DropReason::NoRoi,
                DropReason::NoRoi,
                DropReason::TooSmall
            ]
        );
    }

    #[test]
    fn remainder_is_resized_and_aligned() {
        // 224 + 160 wide: the 160-wide strip is kept and stretched to 224
        let roi = Mask::from_fn(384, 224, |x, _| x >= 224 + 80);
        let out = tile("p", &gray(384, 224), &roi, &TileParams::default()).unwrap();
        assert_eq!(out.kept.len(), 1);
        let t = &out.kept[0];
        assert_eq!((t.record.native_w, t.record.native_h), (160, 224));
        assert_eq!(t.image.dims(), (224, 224));
        assert_eq!(t.roi.dims(), (224, 224));
        // the right half of the native strip maps to the right half of the tile
        assert!(!t.roi.get(111, 50) && t.roi.get(112, 50));
    }

    #[test]
    fn mismatch_and_bad_params() {
        assert!(tile(
            "p",
            &gray(10, 10),
            &Mask::full(10, 11),
            &TileParams::default()
        )
        .is_err());
        let bad = TileParams {
            tile_size: 100,
            min_keep: 100,
        };
        assert!(tile("p", &gray(10, 10), &Mask::full(10, 10), &bad).is_err());
    }

    proptest! {
        #[test]
        fn grid_covers_without_overlap(w in 1usize..700, h in 1usize..700, ts in 1usize..300) {
            let mut cover = vec![0u8; w * h];
            for fp in grid(w, h, ts) {
                for y in fp.y..fp.y + fp.h {
                    for x in fp.x..fp.x + fp.w {
                        cover[y * w + x] += 1;
                    }
                }
            }
            prop_assert!(cover.iter().all(|&c| c == 1));
        }

        #[test]
        fn kept_plus_dropped_is_the_grid(w in 1usize..600, h in 1usize..600, seed in 0u64..1000) {
            let roi = Mask::from_fn(w, h, |x, y| (x as u64 * 31 + y as u64 * 17 + seed).is_multiple_of(97));
            let params = TileParams { tile_size: 64, min_keep: 32 };
            let out = tile("p", &gray(w, h), &roi, &params).unwrap();
            let mut seen: Vec<Footprint> = out.dropped.iter().map(|d| d.0).collect();
            seen.extend(out.kept.iter().map(|t| Footprint {
                x: t.record.offset_x, y: t.record.offset_y, w: t.record.native_w, h: t.record.native_h,
            }));
            seen.sort_by_key(|f| (f.y, f.x));
            prop_assert_eq!(seen, grid(w, h, 64));
            for t in &out.kept {
                prop_assert!(t.roi.any());
                prop_assert!(t.record.validate().is_ok());
            }
        }
    }
}
