use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use synaug_core::genbridge::{
    install_images, merge_synthetic, run_generator, GeneratorSpec, ReferenceOptions, SyntheticBatch,
};
use synaug_core::labels::TriLabel;
use synaug_core::pipeline::Split;

use crate::util::{
    check_output_manifest, manifest_dir, read_manifest, require_file, write_manifest,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorChoice {
    Reference,
    External,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Partitioned manifest with composed tri-labels.
    #[arg(long)]
    manifest: PathBuf,
    /// Generator working directory (in/, out/ and batch.json).
    #[arg(long)]
    workdir: PathBuf,
    #[arg(long, value_enum, default_value = "reference")]
    generator: GeneratorChoice,
    /// External command template with {in} and {out} placeholders.
    #[arg(long, required_if_eq("generator", "external"))]
    cmd: Option<String>,
    /// Generator id recorded on synthetic tiles (default: reference, or
    /// external for --generator external).
    #[arg(long)]
    id: Option<String>,
    /// Reference generator noise seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Reference generator noise amplitude.
    #[arg(long, default_value_t = 10)]
    noise: u8,
}

pub fn gen(args: &GenArgs) -> Result<()> {
    let manifest = read_manifest(&args.manifest)?;
    let spec = match args.generator {
        GeneratorChoice::Reference => {
            if args.cmd.is_some() {
                bail!("--cmd only applies to --generator external");
            }
            let mut spec = GeneratorSpec::reference(ReferenceOptions {
                seed: args.seed,
                noise: args.noise,
                ..Default::default()
            });
            if let Some(id) = &args.id {
                spec.generator_id = id.clone();
            }
            spec
        }
        GeneratorChoice::External => GeneratorSpec::external(
            args.id.clone().unwrap_or_else(|| "external".into()),
            args.cmd
                .clone()
                .context("--cmd is required for an external generator")?,
        ),
    };
    spec.validate()?;
    let root = manifest_dir(&args.manifest);
    let mut labels = Vec::new();
    for r in manifest.records_in(Split::Train).filter(|r| r.is_real()) {
        let rel = r
            .trilabel_path
            .as_ref()
            .with_context(|| format!("tile {} has no tri-label; run compose first", r.tile_id))?;
        let path = root.join(rel);
        require_file(&path)?;
        let label =
            TriLabel::read_png(&path).with_context(|| format!("reading {}", path.display()))?;
        labels.push((r.tile_id.clone(), label));
    }
    if labels.is_empty() && manifest.records.iter().all(|r| r.split.is_none()) {
        bail!(
            "{}: manifest is not partitioned; run split first",
            args.manifest.display()
        );
    }
    let batch = run_generator(&labels, &spec, &args.workdir)?;
    std::fs::create_dir_all(&args.workdir)
        .with_context(|| format!("creating {}", args.workdir.display()))?;
    let path = batch.write()?;
    eprintln!(
        "{}: {} images from generator {}",
        path.display(),
        batch.len(),
        spec.generator_id
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// batch.json written by `gen`.
    #[arg(long)]
    batch: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
}

pub fn merge(args: &MergeArgs) -> Result<()> {
    let manifest = read_manifest(&args.manifest)?;
    check_output_manifest(&args.manifest, &args.output)?;
    require_file(&args.batch)?;
    let batch = SyntheticBatch::read(&args.batch)?;
    let merged = merge_synthetic(&manifest, &batch)?;
    install_images(&batch, &manifest_dir(&args.manifest))?;
    write_manifest(&merged, &args.output)?;
    let c = merged.split_counts();
    eprintln!(
        "{}: {} records ({} train, {} test)",
        args.output.display(),
        merged.records.len(),
        c.train,
        c.test
    );
    Ok(())
}
