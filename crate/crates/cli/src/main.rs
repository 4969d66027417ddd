mod dataset;
mod evaluate;
mod generate;
mod imaging;
mod util;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use synaug_core::edges::EdgeMethodKind;

/// Synthetic augmentation pipeline for damage-region segmentation datasets.
#[derive(Debug, Parser)]
#[command(name = "synaug", version, about)]
struct Cli {
    /// Worker threads for per-file work (0 = all cores).
    #[arg(short, long, global = true, env = "SYNAUG_JOBS", default_value_t = 0)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct EdgeArgs {
    /// Edge detector: roberts, prewitt, sobel, log, zerocross, canny.
    #[arg(long, default_value = "sobel")]
    method: EdgeMethodKind,
    /// Gradient detectors: fraction of the peak magnitude. LoG/zerocross:
    /// fraction of the peak response (default: mean response). Canny: high
    /// hysteresis threshold, low = high/2.
    #[arg(long)]
    threshold: Option<f64>,
    /// Gaussian scale for log, zerocross and canny.
    #[arg(long)]
    sigma: Option<f64>,
    /// Thicken detected edges by this many pixels.
    #[arg(long, default_value_t = 0)]
    dilate: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Detect structure edges in one image.
    Edges {
        #[command(flatten)]
        edge: EdgeArgs,
        input: PathBuf,
        output: PathBuf,
    },
    /// Compose tri-labels, for one tile or for every real tile of a manifest.
    Compose(imaging::ComposeArgs),
    /// Cut photos and ROI masks into cleansed fixed-size tiles.
    Tile(dataset::TileArgs),
    /// Median-frequency class weights over a manifest's tiles.
    Weights(dataset::WeightsArgs),
    /// Seeded train/test partition of a manifest.
    Split(dataset::SplitArgs),
    /// Seeded random crops of one photo and its ROI mask.
    Crops(dataset::CropsArgs),
    /// Run a generator over the train tri-labels of a manifest.
    Gen(generate::GenArgs),
    /// Add a generated batch to a manifest as synthetic train tiles.
    Merge(generate::MergeArgs),
    /// Score predicted masks against ground truth.
    Evaluate(evaluate::EvaluateArgs),
    /// Render a ground-truth/prediction overlay.
    Overlay {
        #[arg(long)]
        photo: PathBuf,
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        output: PathBuf,
    },
    /// Compare evaluation reports side by side.
    Report(evaluate::ReportArgs),
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()?;
    }
    match cli.command {
        Command::Edges {
            edge,
            input,
            output,
        } => imaging::edges(&edge, &input, &output),
        Command::Compose(args) => imaging::compose(&args),
        Command::Tile(args) => dataset::tile(&args),
        Command::Weights(args) => dataset::weights(&args),
        Command::Split(args) => dataset::split(&args),
        Command::Crops(args) => dataset::crops(&args),
        Command::Gen(args) => generate::gen(&args),
        Command::Merge(args) => generate::merge(&args),
        Command::Evaluate(args) => evaluate::evaluate(&args),
        Command::Overlay {
            photo,
            gt,
            pred,
            output,
        } => imaging::overlay(&photo, &gt, &pred, &output),
        Command::Report(args) => evaluate::report(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
