//! Seeded train/test partition.
//!
//! The train count is `round_half_up(N · fraction)`. In grouped mode every
//! tile of a source photo lands in the same split; groups are shuffled and a
//! subset whose size hits the target exactly is selected when one exists,
//! otherwise the closest achievable size (ties resolved downwards).

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::manifest::{DatasetManifest, Split};
use crate::error::{Error, Result};

pub const DEFAULT_TRAIN_FRACTION: f64 = 0.95;

pub fn train_count(n: usize, fraction: f64) -> usize {
    ((n as f64 * fraction + 0.5).floor() as usize).min(n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionOptions {
    pub train_fraction: f64,
    pub seed: u64,
    /// Keep all tiles of one source photo in the same split.
    pub grouped: bool,
}

impl Default for PartitionOptions {
    fn default() -> Self {
        Self {
            train_fraction: DEFAULT_TRAIN_FRACTION,
            seed: 0,
            grouped: true,
        }
    }
}

/// Assigns every (real) record to train or test. Synthetic records must not
/// exist yet: partitioning happens before any merge.
pub fn partition(manifest: &DatasetManifest, opts: &PartitionOptions) -> Result<DatasetManifest> {
    let f = opts.train_fraction;
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::Parameter(format!(
            "train fraction must lie in (0, 1), got {f}"
        )));
    }
    let n = manifest.records.len();
    if n == 0 {
        return Err(Error::Empty("manifest has no records to partition"));
    }
    if let Some(r) = manifest.records.iter().find(|r| !r.is_real()) {
        return Err(Error::Manifest(format!(
            "cannot partition after synthetic merge (record {})",
            r.tile_id
        )));
    }
    let target = train_count(n, f);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let is_train: Vec<bool> = if opts.grouped {
        let mut order: Vec<&str> = Vec::new();
        let mut members: HashMap<&str, Vec<usize>> = HashMap::new();
        for (i, r) in manifest.records.iter().enumerate() {
            let key = r.source_photo_id.as_str();
            members
                .entry(key)
                .or_insert_with(|| {
                    order.push(key);
                    Vec::new()
                })
                .push(i);
        }
        order.shuffle(&mut rng);
        let sizes: Vec<usize> = order.iter().map(|k| members[k].len()).collect();
        let chosen = choose_groups(&sizes, target);
        let mut flags = vec![false; n];
        for (k, take) in order.iter().zip(chosen) {
            if take {
                for &i in &members[k] {
                    flags[i] = true;
                }
            }
        }
        flags
    } else {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(&mut rng);
        let mut flags = vec![false; n];
        for &i in &idx[..target] {
            flags[i] = true;
        }
        flags
    };

    let mut out = manifest.clone();
    for (r, train) in out.records.iter_mut().zip(is_train) {
        r.split = Some(if train { Split::Train } else { Split::Test });
    }
    out.header.train_fraction = Some(f);
    out.header.grouped_split = Some(opts.grouped);
    out.header.seed = opts.seed;
    Ok(out)
}

/// Picks groups (in the given order) whose sizes sum to `target`, or to the
/// closest reachable total.
fn choose_groups(sizes: &[usize], target: usize) -> Vec<bool> {
    let total: usize = sizes.iter().sum();
    let g = sizes.len();
    // reach[i][s]: some subset of groups i.. sums to s
    let mut reach = vec![vec![false; total + 1]; g + 1];
    reach[g][0] = true;
    for i in (0..g).rev() {
        let (head, tail) = reach.split_at_mut(i + 1);
        let next = &tail[0];
        let cur = &mut head[i];
        for s in 0..=total {
            cur[s] = next[s] || (s >= sizes[i] && next[s - sizes[i]]);
        }
    }
    let goal = (0..=total)
        .filter(|&s| reach[0][s])
        .min_by_key(|&s| (s.abs_diff(target), s))
        .unwrap_or(0);
    let mut remaining = goal;
    sizes
        .iter()
        .enumerate()
        .map(|(i, &size)| {
            let take = size <= remaining && reach[i + 1][remaining - size];
            if take {
                remaining -= size;
            }
            take
        })
        .collect()
}
