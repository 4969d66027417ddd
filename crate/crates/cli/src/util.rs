use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use synaug_core::pipeline::DatasetManifest;

pub fn require_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        bail!("{}: no such file", path.display());
    }
    Ok(())
}

pub fn require_dir(path: &Path) -> Result<()> {
    if !path.is_dir() {
        bail!("{}: no such directory", path.display());
    }
    Ok(())
}

/// `*.png` files of a directory, sorted by file name.
pub fn list_pngs(dir: &Path) -> Result<Vec<PathBuf>> {
    require_dir(dir)?;
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = entry
            .with_context(|| format!("reading {}", dir.display()))?
            .path();
        if path.is_file()
            && path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("png"))
        {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

pub fn stem(path: &Path) -> Result<String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_string)
        .with_context(|| format!("{}: file name is not valid UTF-8", path.display()))
}

pub fn manifest_dir(manifest: &Path) -> PathBuf {
    manifest
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

pub fn read_manifest(path: &Path) -> Result<DatasetManifest> {
    require_file(path)?;
    DatasetManifest::read(path).with_context(|| format!("loading manifest {}", path.display()))
}

/// Rejects an output manifest outside the input's directory or with the
/// input's file name.
pub fn check_output_manifest(input: &Path, output: &Path) -> Result<()> {
    let in_dir = fs::canonicalize(manifest_dir(input))
        .with_context(|| format!("resolving {}", input.display()))?;
    let out_dir = fs::canonicalize(manifest_dir(output))
        .with_context(|| format!("resolving {}", output.display()))?;
    if in_dir != out_dir {
        bail!(
            "output manifest {} must be in the same directory as {}",
            output.display(),
            input.display()
        );
    }
    if input.file_name() == output.file_name() {
        bail!(
            "output manifest {} would overwrite its input",
            output.display()
        );
    }
    Ok(())
}

pub fn write_manifest(manifest: &DatasetManifest, path: &Path) -> Result<()> {
    manifest
        .write(path)
        .with_context(|| format!("writing manifest {}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}
