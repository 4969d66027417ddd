//! Pixel grids and the convolution substrate shared by every other module.
//!
//! [`Raster`] holds 8-bit samples (gray or RGB, row-major, interleaved).
//! [`FloatPlane`] holds single-channel real values for gradient math; values
//! are only quantized back to 8 bits when written out.

use std::path::Path;

use crate::error::{Error, Result};
use crate::png_io::{self, PngColor};

/// ITU-R BT.601 luma weights.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    width: usize,
    height: usize,
    channels: usize,
    data: Vec<u8>,
}

impl Raster {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Parameter(format!(
                "raster must be at least 1x1, got {width}x{height}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::Parameter(format!(
                "raster channels must be 1 or 3, got {channels}"
            )));
        }
        if data.len() != width * height * channels {
            return Err(Error::Parameter(format!(
                "raster data length {} does not match {width}x{height}x{channels}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, pixel: &[u8]) -> Result<Self> {
        let data = pixel
            .iter()
            .copied()
            .cycle()
            .take(width * height * pixel.len())
            .collect();
        Self::new(width, height, pixel.len(), data)
    }

    /// Builds a grayscale raster from a per-pixel function.
    pub fn gray_from_fn(
        width: usize,
        height: usize,
        f: impl Fn(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, 1, data)
    }

    /// Builds an RGB raster from a per-pixel function.
    pub fn rgb_from_fn(
        width: usize,
        height: usize,
        f: impl Fn(usize, usize) -> [u8; 3],
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self::new(width, height, 3, data)
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

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn is_gray(&self) -> bool {
        self.channels == 1
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> &[u8] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }

    pub fn require_gray(&self) -> Result<()> {
        if self.channels != 1 {
            return Err(Error::Channels {
                expected: 1,
                actual: self.channels,
            });
        }
        Ok(())
    }

    /// Converts RGB to luma; grayscale input is returned unchanged.
    pub fn to_grayscale(&self) -> Raster {
        if self.is_gray() {
            return self.clone();
        }
        let data = self
            .data
            .chunks_exact(3)
            .map(|p| {
                let luma = LUMA_WEIGHTS[0] * f64::from(p[0])
                    + LUMA_WEIGHTS[1] * f64::from(p[1])
                    + LUMA_WEIGHTS[2] * f64::from(p[2]);
                luma.round().clamp(0.0, 255.0) as u8
            })
            .collect();
        Raster {
            width: self.width,
            height: self.height,
            channels: 1,
            data,
        }
    }

    /// Replicates a gray raster into three channels; RGB input is returned unchanged.
    pub fn to_rgb(&self) -> Raster {
        if self.channels == 3 {
            return self.clone();
        }
        let data = self.data.iter().flat_map(|&v| [v, v, v]).collect();
        Raster {
            width: self.width,
            height: self.height,
            channels: 3,
            data,
        }
    }

    pub fn to_plane(&self) -> Result<FloatPlane> {
        self.require_gray()?;
        Ok(FloatPlane {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f64::from(v)).collect(),
        })
    }

    /// Copies the `w`×`h` window at (`x0`, `y0`). The window must lie inside the raster.
    pub fn crop(&self, x0: usize, y0: usize, w: usize, h: usize) -> Result<Raster> {
        if w == 0 || h == 0 || x0 + w > self.width || y0 + h > self.height {
            return Err(Error::Parameter(format!(
                "crop {w}x{h}+{x0}+{y0} outside {}x{} raster",
                self.width, self.height
            )));
        }
        let c = self.channels;
        let mut data = Vec::with_capacity(w * h * c);
        for y in y0..y0 + h {
            let start = (y * self.width + x0) * c;
            data.extend_from_slice(&self.data[start..start + w * c]);
        }
        Raster::new(w, h, c, data)
    }

    /// Bilinear resampling with pixel-center alignment and edge clamping.
    pub fn resize_bilinear(&self, new_w: usize, new_h: usize) -> Result<Raster> {
        if new_w == 0 || new_h == 0 {
            return Err(Error::Parameter(
                "resize target must be at least 1x1".into(),
            ));
        }
        if (new_w, new_h) == self.dims() {
            return Ok(self.clone());
        }
        let c = self.channels;
        let sx = self.width as f64 / new_w as f64;
        let sy = self.height as f64 / new_h as f64;
        let max_x = (self.width - 1) as f64;
        let max_y = (self.height - 1) as f64;
        let mut data = Vec::with_capacity(new_w * new_h * c);
        for y in 0..new_h {
            let fy = ((y as f64 + 0.5) * sy - 0.5).clamp(0.0, max_y);
            let y0 = fy.floor() as usize;
            let y1 = (y0 + 1).min(self.height - 1);
            let wy = fy - y0 as f64;
            for x in 0..new_w {
                let fx = ((x as f64 + 0.5) * sx - 0.5).clamp(0.0, max_x);
                let x0 = fx.floor() as usize;
                let x1 = (x0 + 1).min(self.width - 1);
                let wx = fx - x0 as f64;
                for ch in 0..c {
                    let at = |xx: usize, yy: usize| {
                        f64::from(self.data[(yy * self.width + xx) * c + ch])
                    };
                    let top = at(x0, y0) * (1.0 - wx) + at(x1, y0) * wx;
                    let bottom = at(x0, y1) * (1.0 - wx) + at(x1, y1) * wx;
                    let v = top * (1.0 - wy) + bottom * wy;
                    data.push(v.round().clamp(0.0, 255.0) as u8);
                }
            }
        }
        Raster::new(new_w, new_h, c, data)
    }

    /// Rotates 90° clockwise.
    pub fn rotate_cw(&self) -> Raster {
        let (w, h, c) = (self.width, self.height, self.channels);
        let mut data = vec![0u8; self.data.len()];
        // new(x', y') = old(y', h - 1 - x'), new width = h
        for ny in 0..w {
            for nx in 0..h {
                let (ox, oy) = (ny, h - 1 - nx);
                let src = (oy * w + ox) * c;
                let dst = (ny * h + nx) * c;
                data[dst..dst + c].copy_from_slice(&self.data[src..src + c]);
            }
        }
        Raster {
            width: h,
            height: w,
            channels: c,
            data,
        }
    }

    pub fn read_png(path: impl AsRef<Path>) -> Result<Raster> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode_png(&bytes)
    }

    pub fn decode_png(bytes: &[u8]) -> Result<Raster> {
        let img = png_io::decode_normalized(bytes)?;
        Raster::new(img.width, img.height, img.channels, img.data)
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        let color = if self.is_gray() {
            PngColor::Gray
        } else {
            PngColor::Rgb
        };
        png_io::encode(self.width, self.height, color, &self.data)
    }

    pub fn write_png(&self, path: impl AsRef<Path>) -> Result<()> {
        png_io::write_file(path.as_ref(), &self.encode_png()?)
    }
}

/// Single-channel real-valued image. Every value is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPlane {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl FloatPlane {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::Parameter(format!(
                "plane data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("plane contains non-finite values".into()));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0.0; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self::new(width, height, data)
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

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Reads with edge replication for out-of-range coordinates.
    pub fn get_clamped(&self, x: isize, y: isize) -> f64 {
        let xx = x.clamp(0, self.width as isize - 1) as usize;
        let yy = y.clamp(0, self.height as isize - 1) as usize;
        self.data[yy * self.width + xx]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> FloatPlane {
        FloatPlane {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two planes of equal size.
    pub fn zip_with(&self, other: &FloatPlane, f: impl Fn(f64, f64) -> f64) -> Result<FloatPlane> {
        if self.dims() != other.dims() {
            return Err(Error::dims(
                "left plane",
                self.dims(),
                "right plane",
                other.dims(),
            ));
        }
        Ok(FloatPlane {
            width: self.width,
            height: self.height,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }
}

/// Convolution kernel with odd side lengths; the anchor is the center cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl Kernel {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || width.is_multiple_of(2) || height.is_multiple_of(2) {
            return Err(Error::Parameter(format!(
                "kernel sides must be odd and >= 1, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::Parameter(format!(
                "kernel data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Builds a kernel from rows; every row must have the same length.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::Parameter("kernel rows differ in length".into()));
        }
        Self::new(
            width,
            height,
            rows.iter().flat_map(|r| r.iter().copied()).collect(),
        )
    }

    /// Outer product `column ⊗ row`.
    pub fn separable(column: &[f64], row: &[f64]) -> Result<Self> {
        let data = column
            .iter()
            .flat_map(|&c| row.iter().map(move |&r| c * r))
            .collect();
        Self::new(row.len(), column.len(), data)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Weight at column `i`, row `j`.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.width + i]
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Rotated by 180°. Convolving with the flipped kernel is correlation
    /// with the original.
    pub fn flipped(&self) -> Kernel {
        Kernel {
            width: self.width,
            height: self.height,
            data: self.data.iter().rev().copied().collect(),
        }
    }

    pub fn transposed(&self) -> Kernel {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.width {
            for j in 0..self.height {
                data.push(self.at(i, j));
            }
        }
        Kernel {
            width: self.height,
            height: self.width,
            data,
        }
    }
}

/// True 2-D convolution with edge-replicated borders:
/// `out(x, y) = Σ k(i, j) · plane(x − i + cx, y − j + cy)`.
pub fn convolve2d(plane: &FloatPlane, kernel: &Kernel) -> FloatPlane {
    let (w, h) = plane.dims();
    let cx = (kernel.width / 2) as isize;
    let cy = (kernel.height / 2) as isize;
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let mut acc = 0.0;
            for j in 0..kernel.height {
                for i in 0..kernel.width {
                    let k = kernel.at(i, j);
                    if k != 0.0 {
                        acc += k * plane.get_clamped(x - i as isize + cx, y - j as isize + cy);
                    }
                }
            }
            out.push(acc);
        }
    }
    FloatPlane {
        width: w,
        height: h,
        data: out,
    }
}
