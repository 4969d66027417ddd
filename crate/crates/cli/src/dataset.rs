use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use synaug_core::pipeline::{
    class_weights, partition, random_crops, tile as tile_photo, DatasetManifest, DropReason,
    ManifestHeader, PartitionOptions, Split, TileParams, DEFAULT_CROP_COUNT, DEFAULT_CROP_SIZE,
    DEFAULT_MIN_KEEP, DEFAULT_TILE_SIZE, DEFAULT_TRAIN_FRACTION,
};
use synaug_core::{Raster, RoiMask};

use crate::util::{
    check_output_manifest, list_pngs, manifest_dir, read_manifest, require_dir, require_file, stem,
    write_manifest, write_text,
};

#[derive(Debug, Args)]
pub struct TileArgs {
    /// Directory of source photos (`*.png`).
    #[arg(long)]
    photos: PathBuf,
    /// Directory of ROI masks, file names matching the photos.
    #[arg(long)]
    masks: PathBuf,
    /// Dataset directory to create (images/, labels/, manifest).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TILE_SIZE)]
    tile_size: usize,
    /// Smallest native side for keeping a remainder tile.
    #[arg(long, default_value_t = DEFAULT_MIN_KEEP)]
    min_keep: usize,
    /// Recorded in the manifest header for later pipeline steps.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "manifest.jsonl")]
    manifest_name: String,
}

pub fn tile(args: &TileArgs) -> Result<()> {
    let params = TileParams {
        tile_size: args.tile_size,
        min_keep: args.min_keep,
    };
    params.validate()?;
    require_dir(&args.masks)?;
    let photos = list_pngs(&args.photos)?;
    if photos.is_empty() {
        bail!("{}: no PNG photos found", args.photos.display());
    }
    let mut pairs = Vec::new();
    for photo in &photos {
        let mask = args.masks.join(photo.file_name().expect("listed file"));
        require_file(&mask).with_context(|| format!("ROI mask for {}", photo.display()))?;
        pairs.push((stem(photo)?, photo.clone(), mask));
    }

    let outcomes: Vec<Result<_>> = pairs
        .par_iter()
        .map(|(id, photo, mask)| {
            let img =
                Raster::read_png(photo).with_context(|| format!("reading {}", photo.display()))?;
            let roi =
                RoiMask::read_png(mask).with_context(|| format!("reading {}", mask.display()))?;
            let outcome = tile_photo(id, &img, &roi, &params)
                .with_context(|| format!("tiling {}", photo.display()))?;
            for t in &outcome.kept {
                let image_file = args.out.join(&t.record.image_path);
                let label_file = args.out.join(&t.record.label_path);
                t.image
                    .write_png(&image_file)
                    .with_context(|| format!("writing {}", image_file.display()))?;
                t.roi
                    .write_png(&label_file)
                    .with_context(|| format!("writing {}", label_file.display()))?;
            }
            Ok(outcome)
        })
        .collect();

    let mut manifest = DatasetManifest::new(ManifestHeader::new(
        args.seed,
        args.tile_size,
        args.min_keep,
    ));
    let (mut small, mut empty) = (0, 0);
    for outcome in outcomes {
        let outcome = outcome?;
        for (_, reason) in &outcome.dropped {
            match reason {
                DropReason::TooSmall => small += 1,
                DropReason::NoRoi => empty += 1,
            }
        }
        manifest
            .records
            .extend(outcome.kept.into_iter().map(|t| t.record));
    }
    let path = args.out.join(&args.manifest_name);
    write_manifest(&manifest, &path)?;
    eprintln!(
        "{}: {} photos, {} tiles kept, {} dropped as too small, {} dropped without ROI",
        path.display(),
        photos.len(),
        manifest.records.len(),
        small,
        empty
    );
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitChoice {
    Train,
    Test,
    All,
}

#[derive(Debug, Args)]
pub struct WeightsArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Tiles to count (default: train when partitioned, otherwise all).
    #[arg(long, value_enum)]
    split: Option<SplitChoice>,
    /// Also write a manifest with the weights recorded in its header.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

pub fn weights(args: &WeightsArgs) -> Result<()> {
    let mut manifest = read_manifest(&args.manifest)?;
    if let Some(out) = &args.output {
        check_output_manifest(&args.manifest, out)?;
    }
    let partitioned = manifest.records.iter().any(|r| r.split.is_some());
    let choice = args.split.unwrap_or(if partitioned {
        SplitChoice::Train
    } else {
        SplitChoice::All
    });
    let wanted = match choice {
        SplitChoice::Train => Some(Split::Train),
        SplitChoice::Test => Some(Split::Test),
        SplitChoice::All => None,
    };
    let root = manifest_dir(&args.manifest);
    let files: Vec<PathBuf> = manifest
        .records
        .iter()
        .filter(|r| r.is_real() && (wanted.is_none() || r.split == wanted))
        .map(|r| root.join(&r.label_path))
        .collect();
    let masks: Vec<RoiMask> = files
        .par_iter()
        .map(|f| RoiMask::read_png(f).with_context(|| format!("reading {}", f.display())))
        .collect::<Result<_>>()?;
    let w = class_weights(&masks)?;
    println!("{}", serde_json::to_string_pretty(&w)?);
    if let Some(out) = &args.output {
        manifest.header.class_weights = Some(w);
        write_manifest(&manifest, out)?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long)]
    manifest: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, default_value_t = DEFAULT_TRAIN_FRACTION)]
    train_fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Split individual tiles instead of keeping each photo's tiles together.
    #[arg(long)]
    per_tile: bool,
}

pub fn split(args: &SplitArgs) -> Result<()> {
    let manifest = read_manifest(&args.manifest)?;
    check_output_manifest(&args.manifest, &args.output)?;
    let opts = PartitionOptions {
        train_fraction: args.train_fraction,
        seed: args.seed,
        grouped: !args.per_tile,
    };
    let out = partition(&manifest, &opts)?;
    write_manifest(&out, &args.output)?;
    let c = out.split_counts();
    eprintln!(
        "{}: {} train, {} test",
        args.output.display(),
        c.train,
        c.test
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct CropsArgs {
    #[arg(long)]
    photo: PathBuf,
    #[arg(long)]
    mask: PathBuf,
    /// Output directory (images/, labels/, crops.json).
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_CROP_COUNT)]
    count: usize,
    #[arg(long, default_value_t = DEFAULT_CROP_SIZE)]
    size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

pub fn crops(args: &CropsArgs) -> Result<()> {
    require_file(&args.photo)?;
    require_file(&args.mask)?;
    let id = stem(&args.photo)?;
    let img = Raster::read_png(&args.photo)
        .with_context(|| format!("reading {}", args.photo.display()))?;
    let roi = RoiMask::read_png(&args.mask)
        .with_context(|| format!("reading {}", args.mask.display()))?;
    let crops = random_crops(&img, &roi, args.count, args.size, args.seed)?;
    let mut listing = Vec::new();
    for (i, c) in crops.iter().enumerate() {
        let image = format!("images/{id}_c{i:03}.png");
        let label = format!("labels/{id}_c{i:03}.png");
        c.image
            .write_png(args.out.join(&image))
            .with_context(|| format!("writing {}", args.out.join(&image).display()))?;
        c.roi
            .write_png(args.out.join(&label))
            .with_context(|| format!("writing {}", args.out.join(&label).display()))?;
        listing.push(json!({
            "index": i,
            "offset_x": c.offset_x,
            "offset_y": c.offset_y,
            "image_path": image,
            "label_path": label,
        }));
    }
    let doc = json!({
        "source": id,
        "seed": args.seed,
        "size": args.size,
        "crops": listing,
    });
    write_text(
        &args.out.join("crops.json"),
        &(serde_json::to_string_pretty(&doc)? + "\n"),
    )?;
    eprintln!("{}: {} crops", args.out.display(), crops.len());
    Ok(())
}
