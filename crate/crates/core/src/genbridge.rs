//! Generator adapter.
//!
//! A generator turns tri-label tiles into synthetic RGB tiles through a plain
//! directory protocol:
//!
//! ```text
//! <workdir>/in/<tile_id>.png    tri-label, 8-bit gray, raw values {0,1,2}
//! <workdir>/out/<tile_id>.png   generated image, 8-bit RGB, same size
//! <workdir>/batch.json          the assembled SyntheticBatch
//! ```
//!
//! The built-in reference generator runs in-process; an external generator is
//! a command template containing `{in}` and `{out}` placeholders, split on
//! whitespace and executed once per batch without a shell.
//!
//! [`merge_synthetic`] then adds one train-only synthetic record per batch
//! item. Synthetic records reuse the source tile's label files; only the image
//! differs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::labels::{LabelClass, TriLabel};
use crate::pipeline::{DatasetManifest, Provenance, Split, TileRecord};
use crate::raster::Raster;

pub const INPUT_DIR: &str = "in";
pub const OUTPUT_DIR: &str = "out";
pub const BATCH_FILE: &str = "batch.json";
pub const REFERENCE_GENERATOR_ID: &str = "reference";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Palette {
    pub background: [u8; 3],
    pub edge: [u8; 3],
    pub roi: [u8; 3],
}

impl Default for Palette {
    fn default() -> Self {
        Self {
            background: [96, 96, 96],
            edge: [200, 200, 200],
            roi: [150, 75, 40],
        }
    }
}

impl Palette {
    pub fn color(&self, class: LabelClass) -> [u8; 3] {
        match class {
            LabelClass::Background => self.background,
            LabelClass::Edge => self.edge,
            LabelClass::Roi => self.roi,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceOptions {
    pub seed: u64,
    /// Per-channel uniform noise in `[-noise, +noise]`.
    pub noise: u8,
    pub palette: Palette,
}

impl Default for ReferenceOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            noise: 10,
            palette: Palette::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorKind {
    Reference(ReferenceOptions),
    External { command: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub generator_id: String,
    pub kind: GeneratorKind,
}

impl GeneratorSpec {
    pub fn reference(options: ReferenceOptions) -> Self {
        Self {
            generator_id: REFERENCE_GENERATOR_ID.to_string(),
            kind: GeneratorKind::Reference(options),
        }
    }

    pub fn external(generator_id: impl Into<String>, command: impl Into<String>) -> Self {
        Self {
            generator_id: generator_id.into(),
            kind: GeneratorKind::External {
                command: command.into(),
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let id = &self.generator_id;
        if id.is_empty()
            || !id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            return Err(Error::Parameter(format!(
                "generator id {id:?} must be non-empty and use only [A-Za-z0-9_-]"
            )));
        }
        if let GeneratorKind::External { command } = &self.kind {
            if !command.contains("{in}") || !command.contains("{out}") {
                return Err(Error::Parameter(format!(
                    "external command {command:?} must contain {{in}} and {{out}}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchItem {
    pub tile_id: String,
    pub generator_id: String,
    /// Relative to the batch root (the generator workdir).
    pub trilabel_path: String,
    pub image_path: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyntheticBatch {
    pub generator_id: String,
    /// Seed of the reference generator, when it produced the batch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub items: Vec<BatchItem>,
    #[serde(skip)]
    pub root: PathBuf,
}

impl SyntheticBatch {
    pub fn empty(generator_id: impl Into<String>, root: impl Into<PathBuf>) -> Self {
        Self {
            generator_id: generator_id.into(),
            seed: None,
            items: Vec::new(),
            root: root.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn image_file(&self, item: &BatchItem) -> PathBuf {
        self.root.join(&item.image_path)
    }

    pub fn trilabel_file(&self, item: &BatchItem) -> PathBuf {
        self.root.join(&item.trilabel_path)
    }

    /// Writes `batch.json` into the batch root.
    pub fn write(&self) -> Result<PathBuf> {
        let path = self.root.join(BATCH_FILE);
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| Error::Manifest(e.to_string()))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }

    /// Reads a batch file; its parent directory becomes the batch root.
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut batch: SyntheticBatch = serde_json::from_str(&text)
            .map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?;
        batch.root = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(batch)
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Seed for one tile, independent of batch order.
pub fn tile_seed(seed: u64, tile_id: &str) -> u64 {
    seed ^ fnv1a(tile_id)
}

pub fn reference_generate(label: &TriLabel, options: &ReferenceOptions) -> Raster {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let amp = options.noise as i16;
    let mut data = Vec::with_capacity(label.data().len() * 3);
    for &class in label.data() {
        for c in options.palette.color(class) {
            let noise = if amp == 0 {
                0
            } else {
                rng.gen_range(-amp..=amp)
            };
            data.push((c as i16 + noise).clamp(0, 255) as u8);
        }
    }
    Raster::new(label.width(), label.height(), 3, data).expect("buffer sized from label")
}

fn fresh_dir(path: &Path) -> Result<()> {
    if path.exists() {
        fs::remove_dir_all(path).map_err(|e| Error::io(path, e))?;
    }
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn run_external(command: &str, input: &Path, output: &Path) -> Result<()> {
    let tokens: Vec<String> = command
        .split_whitespace()
        .map(|t| {
            t.replace("{in}", &input.to_string_lossy())
                .replace("{out}", &output.to_string_lossy())
        })
        .collect();
    let (program, args) = tokens
        .split_first()
        .ok_or_else(|| Error::Parameter("empty external command".into()))?;
    let out = Command::new(program)
        .args(args)
        .output()
        .map_err(|e| Error::io(program, e))?;
    if !out.status.success() {
        return Err(Error::GeneratorFailed {
            status: out.status.to_string(),
            stderr: String::from_utf8_lossy(&out.stderr).trim().to_string(),
        });
    }
    Ok(())
}

fn validate_outputs(labels: &[(String, TriLabel)], output: &Path) -> Result<()> {
    let mut missing = Vec::new();
    let mut bad = Vec::new();
    for (id, label) in labels {
        let path = output.join(format!("{id}.png"));
        if !path.is_file() {
            missing.push(id.clone());
            continue;
        }
        match Raster::read_png(&path) {
            Err(e) => bad.push(format!("{id}: {e}")),
            Ok(img) if img.channels() != 3 => bad.push(format!(
                "{id}: expected RGB, got {} channel(s)",
                img.channels()
            )),
            Ok(img) if img.dims() != label.dims() => bad.push(format!(
                "{id}: size {}x{} differs from label {}x{}",
                img.width(),
                img.height(),
                label.width(),
                label.height()
            )),
            Ok(_) => {}
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingOutputs(missing));
    }
    if !bad.is_empty() {
        return Err(Error::BadOutputs(bad));
    }
    Ok(())
}

/// Runs one generator invocation over `labels` (tile id, tri-label) inside
/// `workdir`. The `in/` and `out/` subdirectories are recreated on each call.
pub fn run_generator(
    labels: &[(String, TriLabel)],
    spec: &GeneratorSpec,
    workdir: &Path,
) -> Result<SyntheticBatch> {
    spec.validate()?;
    if labels.is_empty() {
        return Ok(SyntheticBatch::empty(&spec.generator_id, workdir));
    }
    let mut seen = std::collections::HashSet::new();
    if let Some((id, _)) = labels.iter().find(|(id, _)| !seen.insert(id.as_str())) {
        return Err(Error::Parameter(format!(
            "duplicate tile id {id} in generator input"
        )));
    }
    let input = workdir.join(INPUT_DIR);
    let output = workdir.join(OUTPUT_DIR);
    fresh_dir(&input)?;
    fresh_dir(&output)?;
    for (id, label) in labels {
        label.write_png(input.join(format!("{id}.png")))?;
    }

    match &spec.kind {
        GeneratorKind::Reference(opts) => {
            for (id, label) in labels {
                let tile_opts = ReferenceOptions {
                    seed: tile_seed(opts.seed, id),
                    ..*opts
                };
                reference_generate(label, &tile_opts)
                    .write_png(output.join(format!("{id}.png")))?;
            }
        }
        GeneratorKind::External { command } => {
            let abs = |p: &Path| fs::canonicalize(p).map_err(|e| Error::io(p, e));
            run_external(command, &abs(&input)?, &abs(&output)?)?;
        }
    }

    validate_outputs(labels, &output)?;
    Ok(SyntheticBatch {
        generator_id: spec.generator_id.clone(),
        seed: match &spec.kind {
            GeneratorKind::Reference(opts) => Some(opts.seed),
            GeneratorKind::External { .. } => None,
        },
        items: labels
            .iter()
            .map(|(id, _)| BatchItem {
                tile_id: id.clone(),
                generator_id: spec.generator_id.clone(),
                trilabel_path: format!("{INPUT_DIR}/{id}.png"),
                image_path: format!("{OUTPUT_DIR}/{id}.png"),
            })
            .collect(),
        root: workdir.to_path_buf(),
    })
}

pub fn synthetic_tile_id(tile_id: &str, generator_id: &str) -> String {
    format!("{tile_id}__syn_{generator_id}")
}

/// Manifest-relative location of a merged synthetic image.
pub fn synthetic_image_path(tile_id: &str, generator_id: &str) -> String {
    format!("synthetic/{generator_id}/{tile_id}.png")
}

/// Appends one synthetic train record per batch item. Every item must name a
/// real train tile of `manifest`.
pub fn merge_synthetic(
    manifest: &DatasetManifest,
    batch: &SyntheticBatch,
) -> Result<DatasetManifest> {
    let mut out = manifest.clone();
    for item in &batch.items {
        let src = manifest.record(&item.tile_id).ok_or_else(|| {
            Error::Manifest(format!("batch references unknown tile {}", item.tile_id))
        })?;
        if !src.is_real() {
            return Err(Error::Manifest(format!(
                "batch references synthetic tile {}",
                item.tile_id
            )));
        }
        match src.split {
            Some(Split::Train) => {}
            Some(Split::Test) => return Err(Error::TestContamination(item.tile_id.clone())),
            None => {
                return Err(Error::Manifest(format!(
                    "tile {} has no split; partition before merging",
                    item.tile_id
                )))
            }
        }
        let id = synthetic_tile_id(&src.tile_id, &item.generator_id);
        out.records.push(TileRecord {
            image_path: synthetic_image_path(&src.tile_id, &item.generator_id),
            tile_id: id,
            split: Some(Split::Train),
            provenance: Provenance::Synthetic,
            generator_id: Some(item.generator_id.clone()),
            ..src.clone()
        });
    }
    out.validate()?;
    Ok(out)
}

/// Copies batch images to their merged locations under `dataset_dir`.
pub fn install_images(batch: &SyntheticBatch, dataset_dir: &Path) -> Result<()> {
    for item in &batch.items {
        let from = batch.image_file(item);
        let to = dataset_dir.join(synthetic_image_path(&item.tile_id, &item.generator_id));
        if let Some(parent) = to.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        fs::copy(&from, &to).map_err(|e| Error::io(&from, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{partition, ManifestHeader, PartitionOptions};

    fn label(w: usize, h: usize, f: impl Fn(usize, usize) -> u8) -> TriLabel {
        let idx: Vec<u8> = (0..w * h).map(|i| f(i % w, i / w)).collect();
        TriLabel::from_indices(w, h, &idx).unwrap()
    }

    fn three_labels() -> Vec<(String, TriLabel)> {
        vec![
            ("a".to_string(), label(16, 12, |x, _| (x % 3) as u8)),
            ("b".to_string(), label(16, 12, |_, y| (y % 3) as u8)),
            ("c".to_string(), label(8, 8, |x, y| ((x + y) % 3) as u8)),
        ]
    }

    fn manifest(n: usize) -> DatasetManifest {
        let mut m = DatasetManifest::new(ManifestHeader::new(0, 224, 128));
        for i in 0..n {
            m.records.push(TileRecord {
                tile_id: format!("t{i:04}"),
                source_photo_id: format!("p{i:04}"),
                source_width: 224,
                source_height: 224,
                offset_x: 0,
                offset_y: 0,
                native_w: 224,
                native_h: 224,
                stored_size: 224,
                split: None,
                provenance: Provenance::Real,
                generator_id: None,
                image_path: format!("images/t{i:04}.png"),
                label_path: format!("labels/t{i:04}.png"),
                trilabel_path: Some(format!("trilabels/t{i:04}.png")),
            });
        }
        m
    }

    fn batch_for<'a>(ids: impl IntoIterator<Item = &'a str>) -> SyntheticBatch {
        SyntheticBatch {
            generator_id: "reference".into(),
            seed: None,
            items: ids
                .into_iter()
                .map(|id| BatchItem {
                    tile_id: id.to_string(),
                    generator_id: "reference".into(),
                    trilabel_path: format!("in/{id}.png"),
                    image_path: format!("out/{id}.png"),
                })
                .collect(),
            root: PathBuf::new(),
        }
    }

    #[test]
    fn reference_colors() {
        let opts = ReferenceOptions {
            noise: 0,
            ..Default::default()
        };
        let img = reference_generate(&TriLabel::filled(5, 4, LabelClass::Background), &opts);
        assert!(img.data().iter().all(|&v| v == 96));
        let img = reference_generate(&label(3, 1, |x, _| x as u8), &opts);
        assert_eq!(img.data(), &[96, 96, 96, 200, 200, 200, 150, 75, 40]);
    }

    #[test]
    fn reference_noise_mean() {
        let opts = ReferenceOptions {
            seed: 17,
            ..Default::default()
        };
        let img = reference_generate(&TriLabel::filled(224, 224, LabelClass::Roi), &opts);
        let mut sums = [0f64; 3];
        for px in img.data().chunks(3) {
            for c in 0..3 {
                sums[c] += px[c] as f64;
            }
        }
        let n = (224 * 224) as f64;
        for (s, want) in sums.iter().zip([150.0, 75.0, 40.0]) {
            assert!((s / n - want).abs() <= 1.0, "{} vs {want}", s / n);
        }
        assert!(img.data().chunks(3).all(|p| (140..=160).contains(&p[0])));
        assert_eq!(
            img,
            reference_generate(&TriLabel::filled(224, 224, LabelClass::Roi), &opts)
        );
    }

    #[test]
    fn reference_run_is_deterministic() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let spec = GeneratorSpec::reference(ReferenceOptions {
            seed: 5,
            ..Default::default()
        });
        let ba = run_generator(&three_labels(), &spec, a.path()).unwrap();
        let bb = run_generator(&three_labels(), &spec, b.path()).unwrap();
        assert_eq!(ba.len(), 3);
        assert_eq!(ba.items, bb.items);
        for item in &ba.items {
            let x = fs::read(ba.image_file(item)).unwrap();
            assert_eq!(x, fs::read(bb.image_file(item)).unwrap());
            let label = TriLabel::read_png(ba.trilabel_file(item)).unwrap();
            assert_eq!(Raster::decode_png(&x).unwrap().dims(), label.dims());
        }
        // a different tile order does not change any tile's image
        let mut rev = three_labels();
        rev.reverse();
        let c = tempfile::tempdir().unwrap();
        let bc = run_generator(&rev, &spec, c.path()).unwrap();
        for item in &ba.items {
            assert_eq!(
                fs::read(ba.image_file(item)).unwrap(),
                fs::read(bc.image_file(item)).unwrap()
            );
        }
    }

    #[test]
    fn batch_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GeneratorSpec::reference(ReferenceOptions::default());
        let batch = run_generator(&three_labels(), &spec, dir.path()).unwrap();
        let path = batch.write().unwrap();
        assert_eq!(SyntheticBatch::read(&path).unwrap(), batch);
    }

    #[test]
    fn empty_input_skips_generator() {
        let dir = tempfile::tempdir().unwrap();
        let spec = GeneratorSpec::external("ext", "/nonexistent/generator {in} {out}");
        let batch = run_generator(&[], &spec, dir.path()).unwrap();
        assert!(batch.is_empty());
        assert!(!dir.path().join(INPUT_DIR).exists());
    }

    #[test]
    fn spec_validation() {
        assert!(GeneratorSpec::external("ext", "gen {in}")
            .validate()
            .is_err());
        assert!(GeneratorSpec::external("bad id", "gen {in} {out}")
            .validate()
            .is_err());
        assert!(
            GeneratorSpec::external("ok-1", "gen --from {in} --to {out}")
                .validate()
                .is_ok()
        );
    }

    #[cfg(unix)]
    mod external {
        use super::*;

        fn script(dir: &Path, name: &str, body: &str) -> String {
            let path = dir.join(name);
            fs::write(&path, body).unwrap();
            format!("sh {} {{in}} {{out}}", path.display())
        }

        fn stash(dir: &Path, files: &[(&str, Raster)]) -> PathBuf {
            let stash = dir.join("stash");
            for (id, img) in files {
                img.write_png(stash.join(format!("{id}.png"))).unwrap();
            }
            stash
        }

        fn rgb(w: usize, h: usize) -> Raster {
            Raster::filled(w, h, &[1, 2, 3]).unwrap()
        }

        #[test]
        fn copies_outputs() {
            let dir = tempfile::tempdir().unwrap();
            let stash = stash(
                dir.path(),
                &[("a", rgb(16, 12)), ("b", rgb(16, 12)), ("c", rgb(8, 8))],
            );
            let cmd = script(
                dir.path(),
                "gen.sh",
                &format!("cp {}/*.png \"$2\"/\n", stash.display()),
            );
            let work = dir.path().join("work");
            let batch = run_generator(&three_labels(), &GeneratorSpec::external("ext", cmd), &work)
                .unwrap();
            assert_eq!(batch.len(), 3);
            assert!(batch.items.iter().all(|i| i.generator_id == "ext"));
        }

        #[test]
        fn missing_output_is_named() {
            let dir = tempfile::tempdir().unwrap();
            let stash = stash(dir.path(), &[("a", rgb(16, 12)), ("c", rgb(8, 8))]);
            let cmd = script(
                dir.path(),
                "gen.sh",
                &format!("cp {}/*.png \"$2\"/\n", stash.display()),
            );
            let err = run_generator(
                &three_labels(),
                &GeneratorSpec::external("ext", cmd),
                &dir.path().join("w"),
            )
            .unwrap_err();
            assert!(
                matches!(err, Error::MissingOutputs(ref v) if v == &["b".to_string()]),
                "{err}"
            );
        }

        #[test]
        fn wrong_size_and_gray_reported_per_file() {
            let dir = tempfile::tempdir().unwrap();
            let gray = Raster::filled(16, 12, &[9]).unwrap();
            let stash = stash(
                dir.path(),
                &[("a", rgb(16, 12)), ("b", gray), ("c", rgb(9, 8))],
            );
            let cmd = script(
                dir.path(),
                "gen.sh",
                &format!("cp {}/*.png \"$2\"/\n", stash.display()),
            );
            let err = run_generator(
                &three_labels(),
                &GeneratorSpec::external("ext", cmd),
                &dir.path().join("w"),
            )
            .unwrap_err();
            match err {
                Error::BadOutputs(v) => {
                    assert_eq!(v.len(), 2);
                    assert!(v[0].starts_with("b:") && v[1].starts_with("c:"));
                }
                other => panic!("unexpected {other}"),
            }
        }

        #[test]
        fn failing_command_propagates_stderr() {
            let dir = tempfile::tempdir().unwrap();
            let cmd = script(
                dir.path(),
                "fail.sh",
                "echo 'model not found' >&2\nexit 3\n",
            );
            let err = run_generator(
                &three_labels(),
                &GeneratorSpec::external("ext", cmd),
                &dir.path().join("w"),
            )
            .unwrap_err();
            assert!(
                matches!(err, Error::GeneratorFailed { ref stderr, .. } if stderr == "model not found"),
                "{err}"
            );
        }
    }

    #[test]
    fn merge_doubles_train_split() {
        let opts = PartitionOptions {
            seed: 4,
            grouped: false,
            ..Default::default()
        };
        let m = partition(&manifest(840), &opts).unwrap();
        let train: Vec<&str> = m
            .records_in(Split::Train)
            .map(|r| r.tile_id.as_str())
            .collect();
        let merged = merge_synthetic(&m, &batch_for(train)).unwrap();
        let c = merged.split_counts();
        assert_eq!((c.train, c.test, merged.records.len()), (1596, 42, 1638));
        let tests = |m: &DatasetManifest| m.records_in(Split::Test).cloned().collect::<Vec<_>>();
        assert_eq!(tests(&m), tests(&merged));

        let mut all_train = manifest(840);
        for r in &mut all_train.records {
            r.split = Some(Split::Train);
        }
        let ids: Vec<String> = all_train
            .records
            .iter()
            .map(|r| r.tile_id.clone())
            .collect();
        let merged =
            merge_synthetic(&all_train, &batch_for(ids.iter().map(String::as_str))).unwrap();
        assert_eq!(merged.records.len(), 1680);
    }

    #[test]
    fn synthetic_records_reuse_labels() {
        let mut m = manifest(2);
        m.records[0].split = Some(Split::Train);
        m.records[1].split = Some(Split::Test);
        let merged = merge_synthetic(&m, &batch_for(["t0000"])).unwrap();
        let syn = merged.record("t0000__syn_reference").unwrap();
        assert_eq!(syn.label_path, "labels/t0000.png");
        assert_eq!(syn.trilabel_path.as_deref(), Some("trilabels/t0000.png"));
        assert_eq!(syn.image_path, "synthetic/reference/t0000.png");
        assert_eq!(syn.provenance, Provenance::Synthetic);
        assert_eq!(syn.split, Some(Split::Train));
    }

    #[test]
    fn merge_rejections() {
        let mut m = manifest(3);
        m.records[0].split = Some(Split::Train);
        m.records[1].split = Some(Split::Test);
        assert_eq!(merge_synthetic(&m, &batch_for([])).unwrap(), m);
        assert!(
            matches!(merge_synthetic(&m, &batch_for(["t0001"])), Err(Error::TestContamination(id)) if id == "t0001")
        );
        assert!(merge_synthetic(&m, &batch_for(["t0002"])).is_err());
        assert!(merge_synthetic(&m, &batch_for(["nope"])).is_err());
        let once = merge_synthetic(&m, &batch_for(["t0000"])).unwrap();
        assert!(merge_synthetic(&once, &batch_for(["t0000__syn_reference"])).is_err());
        // the same generator twice over a tile would duplicate the id
        assert!(merge_synthetic(&once, &batch_for(["t0000"])).is_err());
    }
}
