use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use synaug_core::edges::{detect_edges, dilate, EdgeMethod};
use synaug_core::labels::{compose_trilabel, TriLabel};
use synaug_core::report::render_overlay;
use synaug_core::{EdgeMap, Raster, RoiMask};

use crate::util::{
    check_output_manifest, manifest_dir, read_manifest, require_file, write_manifest,
};
use crate::EdgeArgs;

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[command(flatten)]
    edge: crate::EdgeArgs,
    /// Manifest whose real tiles get a tri-label each (manifest mode).
    #[arg(long, conflicts_with_all = ["roi", "image", "edges"], requires = "output")]
    manifest: Option<PathBuf>,
    /// ROI mask of a single tile.
    #[arg(long, requires = "output")]
    roi: Option<PathBuf>,
    /// Tile image; edges are detected with --method.
    #[arg(long, requires = "roi", conflicts_with = "edges")]
    image: Option<PathBuf>,
    /// Precomputed edge map instead of --image.
    #[arg(long, requires = "roi")]
    edges: Option<PathBuf>,
    /// Tri-label PNG (single mode) or derived manifest (manifest mode).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn edge_method(args: &EdgeArgs) -> Result<EdgeMethod> {
    Ok(args.method.build(args.threshold, args.sigma)?)
}

fn edge_map(image: &Raster, method: &EdgeMethod, radius: usize) -> Result<EdgeMap> {
    let map = detect_edges(&image.to_grayscale(), method)?;
    Ok(dilate(&map, radius))
}

pub fn edges(args: &EdgeArgs, input: &Path, output: &Path) -> Result<()> {
    let method = edge_method(args)?;
    require_file(input)?;
    let img = Raster::read_png(input).with_context(|| format!("reading {}", input.display()))?;
    let map = edge_map(&img, &method, args.dilate)?;
    map.write_png(output)
        .with_context(|| format!("writing {}", output.display()))?;
    eprintln!(
        "{}: {} edge pixels ({method})",
        output.display(),
        map.count()
    );
    Ok(())
}

pub fn compose(args: &ComposeArgs) -> Result<()> {
    let output = args.output.as_deref().context("--output is required")?;
    match (&args.manifest, &args.roi) {
        (Some(manifest), _) => compose_manifest(args, manifest, output),
        (None, Some(roi)) => compose_single(args, roi, output),
        (None, None) => bail!("give either --manifest or --roi with --image/--edges"),
    }
}

fn compose_single(args: &ComposeArgs, roi_path: &Path, output: &Path) -> Result<()> {
    require_file(roi_path)?;
    let roi =
        RoiMask::read_png(roi_path).with_context(|| format!("reading {}", roi_path.display()))?;
    let edges = match (&args.image, &args.edges) {
        (Some(image), None) => {
            require_file(image)?;
            let method = edge_method(&args.edge)?;
            let img =
                Raster::read_png(image).with_context(|| format!("reading {}", image.display()))?;
            edge_map(&img, &method, args.edge.dilate)?
        }
        (None, Some(edges)) => {
            require_file(edges)?;
            EdgeMap::read_png(edges).with_context(|| format!("reading {}", edges.display()))?
        }
        _ => bail!("single-tile compose needs exactly one of --image or --edges"),
    };
    let label = compose_trilabel(&roi, &edges)?;
    label
        .write_png(output)
        .with_context(|| format!("writing {}", output.display()))?;
    let [bg, edge, roi] = label.class_counts();
    eprintln!(
        "{}: background {bg}, edge {edge}, roi {roi}",
        output.display()
    );
    Ok(())
}

pub fn trilabel_path(tile_id: &str) -> String {
    format!("trilabels/{tile_id}.png")
}

fn compose_manifest(args: &ComposeArgs, input: &Path, output: &Path) -> Result<()> {
    let mut manifest = read_manifest(input)?;
    check_output_manifest(input, output)?;
    let method = edge_method(&args.edge)?;
    let root = manifest_dir(input);

    let jobs: Vec<(usize, String, String, String)> = manifest
        .records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_real())
        .map(|(i, r)| {
            (
                i,
                r.image_path.clone(),
                r.label_path.clone(),
                trilabel_path(&r.tile_id),
            )
        })
        .collect();
    let results: Vec<Result<(usize, String)>> = jobs
        .par_iter()
        .map(|(i, image, label, tri)| {
            let image_file = root.join(image);
            let label_file = root.join(label);
            let img = Raster::read_png(&image_file)
                .with_context(|| format!("reading {}", image_file.display()))?;
            let roi = RoiMask::read_png(&label_file)
                .with_context(|| format!("reading {}", label_file.display()))?;
            let edges = edge_map(&img, &method, args.edge.dilate)?;
            let tri_label: TriLabel = compose_trilabel(&roi, &edges)
                .with_context(|| format!("composing {}", image_file.display()))?;
            let tri_file = root.join(tri);
            tri_label
                .write_png(&tri_file)
                .with_context(|| format!("writing {}", tri_file.display()))?;
            Ok((*i, tri.clone()))
        })
        .collect();
    for result in results {
        let (i, tri) = result?;
        manifest.records[i].trilabel_path = Some(tri);
    }
    manifest.header.edge_method = Some(format!("{method}{}", dilation_suffix(args.edge.dilate)));
    write_manifest(&manifest, output)?;
    eprintln!("{}: {} tri-labels composed", output.display(), jobs.len());
    Ok(())
}

fn dilation_suffix(radius: usize) -> String {
    if radius == 0 {
        String::new()
    } else {
        format!("+dilate({radius})")
    }
}

pub fn overlay(photo: &Path, gt: &Path, pred: &Path, output: &Path) -> Result<()> {
    for p in [photo, gt, pred] {
        require_file(p)?;
    }
    let img = Raster::read_png(photo).with_context(|| format!("reading {}", photo.display()))?;
    let g = RoiMask::read_png(gt).with_context(|| format!("reading {}", gt.display()))?;
    let p = RoiMask::read_png(pred).with_context(|| format!("reading {}", pred.display()))?;
    render_overlay(&img, &g, &p)?
        .write_png(output)
        .with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}
