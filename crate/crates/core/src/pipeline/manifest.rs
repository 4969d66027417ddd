//! JSON-lines dataset manifest: one header object, then one record per tile.
//! Paths inside are relative to the manifest's directory.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::partition::train_count;
use super::weights::ClassWeights;
use crate::error::{Error, Result};

pub const MANIFEST_FORMAT: &str = "synaug-manifest/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Real,
    Synthetic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileRecord {
    pub tile_id: String,
    pub source_photo_id: String,
    pub source_width: usize,
    pub source_height: usize,
    pub offset_x: usize,
    pub offset_y: usize,
    pub native_w: usize,
    pub native_h: usize,
    pub stored_size: usize,
    /// `None` until the manifest is partitioned.
    pub split: Option<Split>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_id: Option<String>,
    pub image_path: String,
    /// Binary ROI mask (segmentation ground truth).
    pub label_path: String,
    /// Tri-categorical generator input, once composed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trilabel_path: Option<String>,
}

impl TileRecord {
    pub fn is_real(&self) -> bool {
        self.provenance == Provenance::Real
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Manifest(format!("record {}: {msg}", self.tile_id)));
        if self.tile_id.is_empty() {
            return Err(Error::Manifest("record with empty tile_id".into()));
        }
        if self.native_w == 0 || self.native_h == 0 || self.stored_size == 0 {
            return fail("zero-sized tile".into());
        }
        if self.offset_x + self.native_w > self.source_width
            || self.offset_y + self.native_h > self.source_height
        {
            return fail(format!(
                "footprint {}x{}+{}+{} exceeds source {}x{}",
                self.native_w,
                self.native_h,
                self.offset_x,
                self.offset_y,
                self.source_width,
                self.source_height
            ));
        }
        match (self.provenance, &self.generator_id) {
            (Provenance::Synthetic, None) => fail("synthetic record without generator_id".into()),
            (Provenance::Synthetic, Some(_)) if self.split != Some(Split::Train) => {
                fail("synthetic record outside the train split".into())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub format: String,
    pub seed: u64,
    pub tile_size: usize,
    pub min_keep: usize,
    #[serde(default)]
    pub train_fraction: Option<f64>,
    #[serde(default)]
    pub grouped_split: Option<bool>,
    #[serde(default)]
    pub class_weights: Option<ClassWeights>,
    /// Edge extraction settings used to build the tri-labels.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_method: Option<String>,
}

impl ManifestHeader {
    pub fn new(seed: u64, tile_size: usize, min_keep: usize) -> Self {
        Self {
            format: MANIFEST_FORMAT.to_string(),
            seed,
            tile_size,
            min_keep,
            train_fraction: None,
            grouped_split: None,
            class_weights: None,
            edge_method: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub header: ManifestHeader,
    pub records: Vec<TileRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SplitCounts {
    pub train: usize,
    pub test: usize,
    pub unassigned: usize,
}

impl DatasetManifest {
    pub fn new(header: ManifestHeader) -> Self {
        Self {
            header,
            records: Vec::new(),
        }
    }

    pub fn record(&self, tile_id: &str) -> Option<&TileRecord> {
        self.records.iter().find(|r| r.tile_id == tile_id)
    }

    pub fn split_counts(&self) -> SplitCounts {
        let mut c = SplitCounts::default();
        for r in &self.records {
            match r.split {
                Some(Split::Train) => c.train += 1,
                Some(Split::Test) => c.test += 1,
                None => c.unassigned += 1,
            }
        }
        c
    }

    pub fn records_in(&self, split: Split) -> impl Iterator<Item = &TileRecord> {
        self.records.iter().filter(move |r| r.split == Some(split))
    }

    pub fn validate(&self) -> Result<()> {
        if self.header.format != MANIFEST_FORMAT {
            return Err(Error::Manifest(format!(
                "unsupported manifest format {:?}",
                self.header.format
            )));
        }
        let mut seen = HashSet::new();
        for r in &self.records {
            r.validate()?;
            if !seen.insert(r.tile_id.as_str()) {
                return Err(Error::Manifest(format!("duplicate tile_id {}", r.tile_id)));
            }
        }
        if let (Some(f), Some(false)) = (self.header.train_fraction, self.header.grouped_split) {
            let real: Vec<&TileRecord> = self.records.iter().filter(|r| r.is_real()).collect();
            let train = real
                .iter()
                .filter(|r| r.split == Some(Split::Train))
                .count();
            if real.iter().all(|r| r.split.is_some()) && train != train_count(real.len(), f) {
                return Err(Error::Manifest(format!(
                    "{train} real train records, expected {} for fraction {f}",
                    train_count(real.len(), f)
                )));
            }
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        out.push_str(&json_line(&self.header)?);
        out.push('\n');
        for r in &self.records {
            out.push_str(&json_line(r)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        Self::read_from(text.as_bytes())
    }

    pub fn read_from(reader: impl std::io::Read) -> Result<Self> {
        let mut lines = BufReader::new(reader).lines().enumerate();
        let header: ManifestHeader = loop {
            match lines.next() {
                None => return Err(Error::Manifest("missing header line".into())),
                Some((i, line)) => {
                    let line = line.map_err(|e| Error::Manifest(e.to_string()))?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    break serde_json::from_str(&line)
                        .map_err(|e| Error::Manifest(format!("line {}: header: {e}", i + 1)))?;
                }
            }
        };
        let mut records = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(|e| Error::Manifest(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            records.push(
                serde_json::from_str(&line)
                    .map_err(|e| Error::Manifest(format!("line {}: {e}", i + 1)))?,
            );
        }
        let m = DatasetManifest { header, records };
        m.validate()?;
        Ok(m)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(f)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        self.validate()?;
        let path = path.as_ref();
        let text = self.to_jsonl()?;
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
    }
}

fn json_line<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string(value).map_err(|e| Error::Manifest(e.to_string()))
}
