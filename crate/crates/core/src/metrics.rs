//! Segmentation evaluation over the two classes `roi` and `background`.
//!
//! Every pixel metric is read off a [`ConfusionMatrix`]. A metric whose
//! denominator is zero is `None` ("undefined") and is left out of any mean.
//!
//! The boundary F1 (BF) score matches boundary pixels of prediction and
//! ground truth within a Euclidean pixel tolerance. A boundary pixel is a
//! class pixel with a 4-neighbor of another class, or a class pixel on the
//! image border.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::RoiMask;

/// Class order used by every report: ROI first, then background.
pub const CLASS_NAMES: [&str; 2] = ["roi", "background"];

/// Fraction of the image diagonal used as the default BF tolerance.
pub const BF_TOLERANCE_FRACTION: f64 = 0.0075;

/// Square matrix of pixel tallies, rows = ground truth, columns = prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    classes: Vec<String>,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn zeros(classes: &[&str]) -> Self {
        let n = classes.len();
        Self {
            classes: classes.iter().map(|s| s.to_string()).collect(),
            counts: vec![0; n * n],
        }
    }

    pub fn from_counts(classes: &[&str], counts: Vec<u64>) -> Result<Self> {
        let n = classes.len();
        if counts.len() != n * n {
            return Err(Error::Parameter(format!(
                "{} counts for {n} classes",
                counts.len()
            )));
        }
        Ok(Self {
            classes: classes.iter().map(|s| s.to_string()).collect(),
            counts,
        })
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.classes.len() + predicted]
    }

    pub fn increment(&mut self, truth: usize, predicted: usize, by: u64) {
        let n = self.classes.len();
        self.counts[truth * n + predicted] += by;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn true_positives(&self, c: usize) -> u64 {
        self.get(c, c)
    }

    /// Predicted as `c` but truly something else.
    pub fn false_positives(&self, c: usize) -> u64 {
        (0..self.num_classes())
            .filter(|&t| t != c)
            .map(|t| self.get(t, c))
            .sum()
    }

    /// Truly `c` but predicted as something else.
    pub fn false_negatives(&self, c: usize) -> u64 {
        (0..self.num_classes())
            .filter(|&p| p != c)
            .map(|p| self.get(c, p))
            .sum()
    }

    pub fn checked_add(&self, other: &ConfusionMatrix) -> Result<ConfusionMatrix> {
        if self.classes != other.classes {
            return Err(Error::Parameter(format!(
                "cannot add confusion matrices over {:?} and {:?}",
                self.classes, other.classes
            )));
        }
        Ok(ConfusionMatrix {
            classes: self.classes.clone(),
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }
}

impl Add for &ConfusionMatrix {
    type Output = ConfusionMatrix;

    /// Panics if the class lists differ; use [`ConfusionMatrix::checked_add`] otherwise.
    fn add(self, rhs: &ConfusionMatrix) -> ConfusionMatrix {
        self.checked_add(rhs)
            .expect("confusion matrices over different classes")
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn mean_defined(values: impl IntoIterator<Item = Option<f64>>) -> Option<f64> {
    let (sum, n) = values
        .into_iter()
        .flatten()
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Tallies `(truth, prediction)` over {roi, background}.
pub fn confusion(gt: &RoiMask, pred: &RoiMask) -> Result<ConfusionMatrix> {
    if gt.dims() != pred.dims() {
        return Err(Error::dims(
            "ground truth",
            gt.dims(),
            "prediction",
            pred.dims(),
        ));
    }
    let mut tallies = [0u64; 4];
    for (&t, &p) in gt.data().iter().zip(pred.data()) {
        // roi = 0, background = 1
        let ti = usize::from(!t);
        let pi = usize::from(!p);
        tallies[ti * 2 + pi] += 1;
    }
    ConfusionMatrix::from_counts(&CLASS_NAMES, tallies.to_vec())
}

#[derive(Debug, Clone, PartialEq)]
pub struct IouScores {
    pub per_class: Vec<Option<f64>>,
    pub mean: Option<f64>,
}

pub fn iou(cm: &ConfusionMatrix) -> IouScores {
    let per_class: Vec<Option<f64>> = (0..cm.num_classes())
        .map(|c| {
            let tp = cm.true_positives(c);
            ratio(tp, tp + cm.false_positives(c) + cm.false_negatives(c))
        })
        .collect();
    let mean = mean_iou(&per_class);
    IouScores { per_class, mean }
}

/// Arithmetic mean of the defined class IoUs.
pub fn mean_iou(per_class: &[Option<f64>]) -> Option<f64> {
    mean_defined(per_class.iter().copied())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionRecall {
    pub precision: Vec<Option<f64>>,
    pub recall: Vec<Option<f64>>,
}

pub fn precision_recall(cm: &ConfusionMatrix) -> PrecisionRecall {
    let n = cm.num_classes();
    PrecisionRecall {
        precision: (0..n)
            .map(|c| {
                ratio(
                    cm.true_positives(c),
                    cm.true_positives(c) + cm.false_positives(c),
                )
            })
            .collect(),
        recall: (0..n)
            .map(|c| {
                ratio(
                    cm.true_positives(c),
                    cm.true_positives(c) + cm.false_negatives(c),
                )
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// `max(1, round(0.75% of the diagonal))`.
pub fn default_bf_tolerance(width: usize, height: usize) -> u32 {
    let diag = ((width * width + height * height) as f64).sqrt();
    ((BF_TOLERANCE_FRACTION * diag).round() as u32).max(1)
}

/// Boundary pixels of the class selected by `member`.
pub fn class_boundary(mask: &RoiMask, member: bool) -> Vec<(usize, usize)> {
    let (w, h) = mask.dims();
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if mask.get(x, y) != member {
                continue;
            }
            let on_border = x == 0 || y == 0 || x + 1 == w || y + 1 == h;
            let differs = on_border
                || mask.get(x - 1, y) != member
                || mask.get(x + 1, y) != member
                || mask.get(x, y - 1) != member
                || mask.get(x, y + 1) != member;
            if differs {
                out.push((x, y));
            }
        }
    }
    out
}

/// Fraction of `from` lying within `tolerance` of some pixel of `to`.
/// `None` when `from` is empty.
fn matched_fraction(
    from: &[(usize, usize)],
    to: &[(usize, usize)],
    w: usize,
    h: usize,
    tolerance: u32,
) -> Option<f64> {
    if from.is_empty() {
        return None;
    }
    let mut grid = vec![false; w * h];
    for &(x, y) in to {
        grid[y * w + x] = true;
    }
    let t = tolerance as i64;
    let t2 = t * t;
    let hit = from
        .iter()
        .filter(|&&(x, y)| {
            let (xi, yi) = (x as i64, y as i64);
            for dy in -t..=t {
                let yy = yi + dy;
                if yy < 0 || yy >= h as i64 {
                    continue;
                }
                for dx in -t..=t {
                    let xx = xi + dx;
                    if xx < 0 || xx >= w as i64 || dx * dx + dy * dy > t2 {
                        continue;
                    }
                    if grid[yy as usize * w + xx as usize] {
                        return true;
                    }
                }
            }
            false
        })
        .count();
    Some(hit as f64 / from.len() as f64)
}

/// Per-class boundary F1 in [`CLASS_NAMES`] order. `None` for a class absent
/// from both masks.
pub fn bf_score(
    gt: &RoiMask,
    pred: &RoiMask,
    tolerance: u32,
) -> Result<Vec<Option<BoundaryScore>>> {
    if gt.dims() != pred.dims() {
        return Err(Error::dims(
            "ground truth",
            gt.dims(),
            "prediction",
            pred.dims(),
        ));
    }
    let (w, h) = gt.dims();
    Ok([true, false]
        .into_iter()
        .map(|member| {
            let gb = class_boundary(gt, member);
            let pb = class_boundary(pred, member);
            if gb.is_empty() && pb.is_empty() {
                return None;
            }
            let precision = matched_fraction(&pb, &gb, w, h, tolerance).unwrap_or(0.0);
            let recall = matched_fraction(&gb, &pb, w, h, tolerance).unwrap_or(0.0);
            let f1 = if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            };
            Some(BoundaryScore {
                precision,
                recall,
                f1,
            })
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    Global,
    #[default]
    PerImageMean,
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aggregation::Global => "global",
            Aggregation::PerImageMean => "per-image-mean",
        })
    }
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(Aggregation::Global),
            "per-image-mean" | "per-image" => Ok(Aggregation::PerImageMean),
            other => Err(Error::Parameter(format!(
                "unknown aggregation mode {other:?}"
            ))),
        }
    }
}

/// BF tolerance policy: relative to each image's diagonal, or a fixed pixel count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BfTolerance {
    #[default]
    Diagonal,
    Pixels(u32),
}

impl BfTolerance {
    pub fn resolve(self, width: usize, height: usize) -> u32 {
        match self {
            BfTolerance::Diagonal => default_bf_tolerance(width, height),
            BfTolerance::Pixels(p) => p,
        }
    }
}

/// Everything computed for one (ground truth, prediction) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageEvaluation {
    pub confusion: ConfusionMatrix,
    pub bf: Vec<Option<BoundaryScore>>,
}

pub fn evaluate_pair(
    gt: &RoiMask,
    pred: &RoiMask,
    tolerance: BfTolerance,
) -> Result<ImageEvaluation> {
    let confusion = confusion(gt, pred)?;
    let bf = bf_score(gt, pred, tolerance.resolve(gt.width(), gt.height()))?;
    Ok(ImageEvaluation { confusion, bf })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub name: String,
    pub iou: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub bf: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub mode: Aggregation,
    pub image_count: usize,
    pub bf_tolerance: BfTolerance,
    pub mean_iou: Option<f64>,
    pub classes: Vec<ClassMetrics>,
    /// Sum of the per-image confusion matrices.
    pub confusion: ConfusionMatrix,
}

impl MetricsReport {
    pub fn class(&self, name: &str) -> Option<&ClassMetrics> {
        self.classes.iter().find(|c| c.name == name)
    }

    pub fn class_names(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.name.as_str()).collect()
    }
}

/// Combines per-image evaluations. Global mode computes pixel metrics from
/// the summed matrix; per-image-mean averages the defined per-image values.
/// BF is always a per-image mean.
pub fn aggregate(
    images: &[ImageEvaluation],
    mode: Aggregation,
    tolerance: BfTolerance,
) -> Result<MetricsReport> {
    let first = images
        .first()
        .ok_or(Error::Empty("no image pairs to evaluate"))?;
    let mut total = first.confusion.clone();
    for img in &images[1..] {
        total = total.checked_add(&img.confusion)?;
    }
    let n = total.num_classes();

    let (ious, precisions, recalls) = match mode {
        Aggregation::Global => {
            let pr = precision_recall(&total);
            (iou(&total).per_class, pr.precision, pr.recall)
        }
        Aggregation::PerImageMean => {
            let per: Vec<(IouScores, PrecisionRecall)> = images
                .iter()
                .map(|e| (iou(&e.confusion), precision_recall(&e.confusion)))
                .collect();
            let column =
                |pick: fn(&IouScores, &PrecisionRecall, usize) -> Option<f64>| -> Vec<Option<f64>> {
                    (0..n)
                        .map(|c| mean_defined(per.iter().map(|(i, pr)| pick(i, pr, c))))
                        .collect()
                };
            (
                column(|i, _, c| i.per_class[c]),
                column(|_, pr, c| pr.precision[c]),
                column(|_, pr, c| pr.recall[c]),
            )
        }
    };
    let bfs: Vec<Option<f64>> = (0..n)
        .map(|c| {
            mean_defined(
                images
                    .iter()
                    .map(|e| e.bf.get(c).copied().flatten().map(|s| s.f1)),
            )
        })
        .collect();

    let classes = (0..n)
        .map(|c| ClassMetrics {
            name: total.classes()[c].clone(),
            iou: ious[c],
            precision: precisions[c],
            recall: recalls[c],
            bf: bfs[c],
        })
        .collect();
    Ok(MetricsReport {
        mode,
        image_count: images.len(),
        bf_tolerance: tolerance,
        mean_iou: mean_iou(&ious),
        classes,
        confusion: total,
    })
}

pub fn evaluate_run(
    pairs: &[(RoiMask, RoiMask)],
    mode: Aggregation,
    tolerance: BfTolerance,
) -> Result<MetricsReport> {
    if pairs.is_empty() {
        return Err(Error::Empty("no image pairs to evaluate"));
    }
    let images = pairs
        .iter()
        .map(|(gt, pred)| evaluate_pair(gt, pred, tolerance))
        .collect::<Result<Vec<_>>>()?;
    aggregate(&images, mode, tolerance)
}
