//! Binary masks. The same type backs ROI annotations and edge maps.

use std::path::Path;

use crate::error::{Error, Result};
use crate::png_io::{self, PngColor};
use crate::raster::Raster;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

/// Annotated damage region.
pub type RoiMask = Mask;

/// Binary structure-edge map.
pub type EdgeMap = Mask;

impl Mask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::Parameter(format!(
                "mask data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![false; width * height],
        }
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![true; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.data[y * self.width + x] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn any(&self) -> bool {
        self.data.iter().any(|&b| b)
    }

    pub fn is_subset_of(&self, other: &Mask) -> bool {
        self.dims() == other.dims() && self.data.iter().zip(&other.data).all(|(&a, &b)| !a || b)
    }

    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Mask> {
        if w == 0 || h == 0 || x0 + w > self.width || y0 + h > self.height {
            return Err(Error::Parameter(format!(
                "crop {w}x{h}+{x0}+{y0} outside {}x{} mask",
                self.width, self.height
            )));
        }
        Ok(Mask::from_fn(w, h, |x, y| self.get(x0 + x, y0 + y)))
    }

    /// Nearest-neighbor resampling with pixel-center alignment; keeps the mask binary.
    pub fn resize_nearest(&self, new_w: usize, new_h: usize) -> Result<Mask> {
        if new_w == 0 || new_h == 0 {
            return Err(Error::Parameter(
                "resize target must be at least 1x1".into(),
            ));
        }
        let sx = self.width as f64 / new_w as f64;
        let sy = self.height as f64 / new_h as f64;
        let pick =
            |d: usize, s: f64, limit: usize| (((d as f64 + 0.5) * s) as usize).min(limit - 1);
        Ok(Mask::from_fn(new_w, new_h, |x, y| {
            self.get(pick(x, sx, self.width), pick(y, sy, self.height))
        }))
    }

    pub fn rotate_cw(&self) -> Mask {
        let h = self.height;
        Mask::from_fn(self.height, self.width, |nx, ny| self.get(ny, h - 1 - nx))
    }

    /// Any nonzero sample counts as set.
    pub fn from_raster(r: &Raster) -> Mask {
        let c = r.channels();
        Mask {
            width: r.width(),
            height: r.height(),
            data: r
                .data()
                .chunks_exact(c)
                .map(|p| p.iter().any(|&v| v != 0))
                .collect(),
        }
    }

    /// Gray raster with 0 for unset and 255 for set pixels.
    pub fn to_raster(&self) -> Raster {
        let data = self.data.iter().map(|&b| if b { 255 } else { 0 }).collect();
        Raster::new(self.width, self.height, 1, data).expect("mask dimensions are valid")
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let data: Vec<u8> = self.data.iter().map(|&b| if b { 255 } else { 0 }).collect();
        png_io::encode(self.width, self.height, PngColor::Gray, &data)
    }

    pub fn decode_png(bytes: &[u8]) -> Result<Mask> {
        Ok(Mask::from_raster(&Raster::decode_png(bytes)?))
    }

    pub fn read_png(path: impl AsRef<Path>) -> Result<Mask> {
        Ok(Mask::from_raster(&Raster::read_png(path)?))
    }

    pub fn write_png(&self, path: impl AsRef<Path>) -> Result<()> {
        png_io::write_file(path.as_ref(), &self.encode_png()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_upscale_keeps_every_source_pixel() {
        let m = Mask::from_fn(5, 3, |x, y| (x + y) % 2 == 0);
        let up = m.resize_nearest(13, 8).unwrap();
        assert_eq!(up.dims(), (13, 8));
        // every source pixel appears in the upscaled grid
        let sx = 5.0 / 13.0;
        let sy = 3.0 / 8.0;
        let mut hit = [false; 15];
        for y in 0..8 {
            for x in 0..13 {
                let ox = ((x as f64 + 0.5) * sx) as usize;
                let oy = ((y as f64 + 0.5) * sy) as usize;
                hit[oy * 5 + ox] = true;
                assert_eq!(up.get(x, y), m.get(ox, oy));
            }
        }
        assert!(hit.iter().all(|&h| h));
    }

    #[test]
    fn png_round_trip_is_zero_or_255() {
        let m = Mask::from_fn(9, 4, |x, y| x * y % 3 == 1);
        let bytes = m.encode_png().unwrap();
        let r = Raster::decode_png(&bytes).unwrap();
        assert!(r.data().iter().all(|&v| v == 0 || v == 255));
        assert_eq!(Mask::decode_png(&bytes).unwrap(), m);
    }

    #[test]
    fn rotation_and_subset() {
        let m = Mask::from_fn(4, 2, |x, _| x == 0);
        let r = m.rotate_cw();
        assert_eq!(r.dims(), (2, 4));
        // left column becomes top row
        assert!(r.get(0, 0) && r.get(1, 0) && !r.get(0, 1));
        assert_eq!(r.rotate_cw().rotate_cw().rotate_cw(), m);
        assert!(Mask::empty(4, 2).is_subset_of(&m));
        assert!(!Mask::full(4, 2).is_subset_of(&m));
    }
}
