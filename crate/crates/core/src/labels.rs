//! Tri-categorical labels: background, structure edge, damage ROI.
//!
//! On disk a label is a single-channel 8-bit PNG holding the raw class
//! indices 0, 1 and 2. Indexed PNGs whose palette indices are in range are
//! accepted on read. Display colors live in the report module.

use std::path::Path;

use crate::error::{Error, Result};
use crate::mask::{EdgeMap, RoiMask};
use crate::png_io::{self, PngColor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum LabelClass {
    Background = 0,
    Edge = 1,
    Roi = 2,
}

impl LabelClass {
    pub const ALL: [LabelClass; 3] = [LabelClass::Background, LabelClass::Edge, LabelClass::Roi];

    pub fn from_index(v: u8) -> Option<LabelClass> {
        match v {
            0 => Some(LabelClass::Background),
            1 => Some(LabelClass::Edge),
            2 => Some(LabelClass::Roi),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        self as u8
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriLabel {
    width: usize,
    height: usize,
    data: Vec<LabelClass>,
}

impl TriLabel {
    pub fn new(width: usize, height: usize, data: Vec<LabelClass>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::Parameter(format!(
                "label data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, class: LabelClass) -> Self {
        Self {
            width,
            height,
            data: vec![class; width * height],
        }
    }

    pub fn from_indices(width: usize, height: usize, indices: &[u8]) -> Result<Self> {
        let mut bad: Vec<u8> = indices
            .iter()
            .copied()
            .filter(|&v| LabelClass::from_index(v).is_none())
            .collect();
        if !bad.is_empty() {
            bad.sort_unstable();
            bad.dedup();
            return Err(Error::LabelValues { values: bad });
        }
        let data = indices
            .iter()
            .map(|&v| LabelClass::from_index(v).expect("checked above"))
            .collect();
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

    pub fn data(&self) -> &[LabelClass] {
        &self.data
    }

    pub fn get(&self, x: usize, y: usize) -> LabelClass {
        self.data[y * self.width + x]
    }

    pub fn indices(&self) -> Vec<u8> {
        self.data.iter().map(|c| c.index()).collect()
    }

    /// Pixel count per class, indexed by class value.
    pub fn class_counts(&self) -> [usize; 3] {
        let mut counts = [0usize; 3];
        for c in &self.data {
            counts[c.index() as usize] += 1;
        }
        counts
    }

    pub fn encode_png(&self) -> Result<Vec<u8>> {
        png_io::encode(self.width, self.height, PngColor::Gray, &self.indices())
    }

    pub fn decode_png(bytes: &[u8]) -> Result<TriLabel> {
        let (w, h, data) = png_io::decode_raw_indices(bytes)?;
        Self::from_indices(w, h, &data)
    }

    pub fn read_png(path: impl AsRef<Path>) -> Result<TriLabel> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Self::decode_png(&bytes)
    }

    pub fn write_png(&self, path: impl AsRef<Path>) -> Result<()> {
        png_io::write_file(path.as_ref(), &self.encode_png()?)
    }
}

/// ROI wins over edge, edge wins over background.
pub fn compose_trilabel(roi: &RoiMask, edge: &EdgeMap) -> Result<TriLabel> {
    if roi.dims() != edge.dims() {
        return Err(Error::dims("roi mask", roi.dims(), "edge map", edge.dims()));
    }
    let data = roi
        .data()
        .iter()
        .zip(edge.data())
        .map(|(&r, &e)| match (r, e) {
            (true, _) => LabelClass::Roi,
            (false, true) => LabelClass::Edge,
            (false, false) => LabelClass::Background,
        })
        .collect();
    TriLabel::new(roi.width(), roi.height(), data)
}

/// Recovers the ROI and edge channels. Edge pixels that were covered by the
/// ROI at composition time are not recoverable.
pub fn split_trilabel(label: &TriLabel) -> (RoiMask, EdgeMap) {
    let (w, h) = label.dims();
    let roi = RoiMask::new(
        w,
        h,
        label.data.iter().map(|&c| c == LabelClass::Roi).collect(),
    )
    .expect("label dimensions are valid");
    let edge = EdgeMap::new(
        w,
        h,
        label.data.iter().map(|&c| c == LabelClass::Edge).collect(),
    )
    .expect("label dimensions are valid");
    (roi, edge)
}
