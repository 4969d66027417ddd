use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use rayon::prelude::*;
use synaug_core::metrics::{aggregate, evaluate_pair, Aggregation, BfTolerance, MetricsReport};
use synaug_core::pipeline::Split;
use synaug_core::report::{render_comparison, RunComparison, TableFormat};
use synaug_core::RoiMask;

use crate::util::{list_pngs, manifest_dir, read_manifest, require_dir, require_file, write_text};

fn parse_tolerance(s: &str) -> Result<BfTolerance, String> {
    if s == "auto" {
        return Ok(BfTolerance::Diagonal);
    }
    s.parse::<u32>()
        .map(BfTolerance::Pixels)
        .map_err(|_| format!("expected `auto` or a pixel count, got {s:?}"))
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Ground-truth mask directory (name-matched with --pred).
    #[arg(
        long,
        required_unless_present = "manifest",
        conflicts_with = "manifest"
    )]
    gt: Option<PathBuf>,
    /// Take ground truth from a manifest split instead; predictions are
    /// looked up as `<pred>/<tile_id>.png`.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, default_value = "test", requires = "manifest")]
    split: String,
    /// Predicted mask directory.
    #[arg(long)]
    pred: PathBuf,
    /// per-image-mean or global.
    #[arg(long, default_value = "per-image-mean")]
    mode: Aggregation,
    /// BF tolerance in pixels, or `auto` for 0.75% of each image diagonal.
    #[arg(long, default_value = "auto", value_parser = parse_tolerance)]
    bf_tolerance: BfTolerance,
    /// Write the report as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Row label in the printed table.
    #[arg(long, default_value = "run")]
    label: String,
}

fn pairs_from_dirs(gt: &Path, pred: &Path) -> Result<Vec<(String, PathBuf, PathBuf)>> {
    let gts = list_pngs(gt)?;
    if gts.is_empty() {
        bail!("{}: no ground-truth masks", gt.display());
    }
    let mut missing = Vec::new();
    let mut pairs = Vec::new();
    for g in gts {
        let name = g.file_name().expect("listed file").to_owned();
        let p = pred.join(&name);
        if p.is_file() {
            pairs.push((name.to_string_lossy().into_owned(), g, p));
        } else {
            missing.push(name.to_string_lossy().into_owned());
        }
    }
    if !missing.is_empty() {
        bail!(
            "{}: missing predictions for {}",
            pred.display(),
            missing.join(", ")
        );
    }
    Ok(pairs)
}

fn pairs_from_manifest(
    manifest: &Path,
    split: &str,
    pred: &Path,
) -> Result<Vec<(String, PathBuf, PathBuf)>> {
    let m = read_manifest(manifest)?;
    let split = match split {
        "train" => Split::Train,
        "test" => Split::Test,
        other => bail!("unknown split {other:?} (train, test)"),
    };
    let root = manifest_dir(manifest);
    let pairs: Vec<_> = m
        .records_in(split)
        .filter(|r| r.is_real())
        .map(|r| {
            (
                r.tile_id.clone(),
                root.join(&r.label_path),
                pred.join(format!("{}.png", r.tile_id)),
            )
        })
        .collect();
    if pairs.is_empty() {
        bail!("{}: no real {split} tiles", manifest.display());
    }
    let missing: Vec<&str> = pairs
        .iter()
        .filter(|(_, _, p)| !p.is_file())
        .map(|(id, _, _)| id.as_str())
        .collect();
    if !missing.is_empty() {
        bail!(
            "{}: missing predictions for {}",
            pred.display(),
            missing.join(", ")
        );
    }
    Ok(pairs)
}

pub fn evaluate(args: &EvaluateArgs) -> Result<()> {
    require_dir(&args.pred)?;
    let pairs = match (&args.gt, &args.manifest) {
        (Some(gt), None) => pairs_from_dirs(gt, &args.pred)?,
        (None, Some(m)) => pairs_from_manifest(m, &args.split, &args.pred)?,
        _ => bail!("give exactly one of --gt or --manifest"),
    };
    let images = pairs
        .par_iter()
        .map(|(name, g, p)| {
            let gt = RoiMask::read_png(g).with_context(|| format!("reading {}", g.display()))?;
            let pred = RoiMask::read_png(p).with_context(|| format!("reading {}", p.display()))?;
            evaluate_pair(&gt, &pred, args.bf_tolerance)
                .with_context(|| format!("evaluating {name}"))
        })
        .collect::<Result<Vec<_>>>()?;
    let report = aggregate(&images, args.mode, args.bf_tolerance)?;
    if let Some(path) = &args.json {
        write_text(path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    let mut cmp = RunComparison::default();
    cmp.push(args.label.clone(), report, None);
    print!("{}", render_comparison(&cmp, TableFormat::Text)?);
    Ok(())
}

fn split_pair(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .filter(|(a, b)| !a.is_empty() && !b.is_empty())
        .ok_or_else(|| format!("expected LABEL=VALUE, got {s:?}"))
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// LABEL=REPORT.json from `evaluate --json`; repeat per run, in order.
    #[arg(long = "run", required = true, value_parser = split_pair)]
    runs: Vec<(String, String)>,
    /// LABEL=SECONDS wall-clock time for a run.
    #[arg(long = "time", value_parser = split_pair)]
    times: Vec<(String, String)>,
    /// text, csv or json.
    #[arg(long, default_value = "text")]
    format: TableFormat,
    /// Output file (default: stdout).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

pub fn report(args: &ReportArgs) -> Result<()> {
    for (_, path) in &args.runs {
        require_file(Path::new(path))?;
    }
    let mut cmp = RunComparison::default();
    for (label, path) in &args.runs {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let report: MetricsReport =
            serde_json::from_str(&text).with_context(|| format!("{path}: not a metrics report"))?;
        let seconds = args
            .times
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, s)| {
                s.parse::<f64>()
                    .with_context(|| format!("time for {label}: {s:?}"))
            })
            .transpose()?;
        cmp.push(label.clone(), report, seconds);
    }
    if let Some((label, _)) = args
        .times
        .iter()
        .find(|(l, _)| !args.runs.iter().any(|(r, _)| r == l))
    {
        bail!("--time given for unknown run {label:?}");
    }
    let table = render_comparison(&cmp, args.format)?;
    match &args.output {
        Some(path) => write_text(path, &table),
        None => {
            print!("{table}");
            Ok(())
        }
    }
}
