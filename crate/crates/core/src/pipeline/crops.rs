//! Standard augmentation: seeded random crops aligned between photo and ROI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mask::RoiMask;
use crate::raster::Raster;

pub const DEFAULT_CROP_COUNT: usize = 64;
pub const DEFAULT_CROP_SIZE: usize = 224;

/// Redraws allowed for a crop that misses the ROI entirely. After this many
/// the last draw is kept as is.
pub const MAX_CROP_RETRIES: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Crop {
    pub image: Raster,
    pub roi: RoiMask,
    /// Offset in the (possibly upscaled) working photo.
    pub offset_x: usize,
    pub offset_y: usize,
}

/// Dimensions after uniform upscaling so both sides reach `crop`.
pub fn working_size(width: usize, height: usize, crop: usize) -> (usize, usize) {
    let short = width.min(height);
    if short >= crop {
        return (width, height);
    }
    let s = crop as f64 / short as f64;
    let up = |d: usize| ((d as f64 * s).round() as usize).max(crop);
    (up(width), up(height))
}

pub fn random_crops(
    photo: &Raster,
    roi: &RoiMask,
    count: usize,
    crop: usize,
    seed: u64,
) -> Result<Vec<Crop>> {
    if photo.dims() != roi.dims() {
        return Err(Error::dims("photo", photo.dims(), "roi mask", roi.dims()));
    }
    if crop == 0 {
        return Err(Error::Parameter("crop size must be positive".into()));
    }
    let (w, h) = working_size(photo.width(), photo.height(), crop);
    let (photo, roi) = if (w, h) != photo.dims() {
        (photo.resize_bilinear(w, h)?, roi.resize_nearest(w, h)?)
    } else {
        (photo.clone(), roi.clone())
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let mut attempt = 0;
        let (x, y, crop_roi) = loop {
            let x = rng.gen_range(0..=w - crop);
            let y = rng.gen_range(0..=h - crop);
            let r = roi.crop(x, y, crop, crop)?;
            attempt += 1;
            if r.any() || attempt > MAX_CROP_RETRIES {
                break (x, y, r);
            }
        };
        out.push(Crop {
            image: photo.crop(x, y, crop, crop)?,
            roi: crop_roi,
            offset_x: x,
            offset_y: y,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::Mask;
    use proptest::prelude::*;

    fn photo(w: usize, h: usize) -> Raster {
        Raster::rgb_from_fn(w, h, |x, y| {
            [(x % 256) as u8, (y % 256) as u8, ((x ^ y) % 256) as u8]
        })
        .unwrap()
    }

    #[test]
    fn exact_size_photo_gives_identical_crops() {
        let p = photo(224, 224);
        let crops = random_crops(&p, &Mask::full(224, 224), 64, 224, 5).unwrap();
        assert_eq!(crops.len(), 64);
        assert!(crops
            .iter()
            .all(|c| (c.offset_x, c.offset_y) == (0, 0) && c.image == p));
    }

    #[test]
    fn reproducible_offsets() {
        let p = photo(448, 448);
        let roi = Mask::from_fn(448, 448, |x, y| {
            (100..300).contains(&x) && (50..400).contains(&y)
        });
        let a = random_crops(&p, &roi, 64, 224, 42).unwrap();
        let b = random_crops(&p, &roi, 64, 224, 42).unwrap();
        let offs = |v: &[Crop]| {
            v.iter()
                .map(|c| (c.offset_x, c.offset_y))
                .collect::<Vec<_>>()
        };
        assert_eq!(offs(&a), offs(&b));
        assert_ne!(
            offs(&a),
            offs(&random_crops(&p, &roi, 64, 224, 43).unwrap())
        );
        assert!(a.iter().all(|c| c.roi.any()));
    }

    #[test]
    fn crops_stay_aligned() {
        let p = photo(300, 260);
        let roi = Mask::from_fn(300, 260, |x, y| (x + y) % 7 == 0);
        for c in random_crops(&p, &roi, 8, 100, 1).unwrap() {
            assert_eq!(c.image, p.crop(c.offset_x, c.offset_y, 100, 100).unwrap());
            assert_eq!(c.roi, roi.crop(c.offset_x, c.offset_y, 100, 100).unwrap());
        }
    }

    #[test]
    fn small_photo_is_upscaled() {
        assert_eq!(working_size(112, 200, 224), (224, 400));
        let crops = random_crops(&photo(112, 200), &Mask::full(112, 200), 3, 224, 0).unwrap();
        assert!(crops
            .iter()
            .all(|c| c.image.dims() == (224, 224) && c.offset_x == 0));
    }

    #[test]
    fn roi_free_photo_falls_back() {
        let crops = random_crops(&photo(400, 300), &Mask::empty(400, 300), 4, 224, 9).unwrap();
        assert_eq!(crops.len(), 4);
        assert!(crops.iter().all(|c| !c.roi.any()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn crops_in_bounds(w in 1usize..400, h in 1usize..400, crop in 1usize..120, seed in any::<u64>()) {
            let p = Raster::filled(w, h, &[7]).unwrap();
            let roi = Mask::from_fn(w, h, |x, y| (x * 13 + y * 7) % 11 == 0);
            let (ww, hh) = working_size(w, h, crop);
            for c in random_crops(&p, &roi, 5, crop, seed).unwrap() {
                prop_assert!(c.offset_x + crop <= ww && c.offset_y + crop <= hh);
                prop_assert_eq!(c.image.dims(), (crop, crop));
            }
        }
    }
}
