//! Brute-force reference implementations of the segmentation metrics.
//!
//! These deliberately share no code with the library: masks are read pixel by
//! pixel, boundaries are found on a padded copy, and boundary matching scans
//! every candidate pixel.

#![allow(dead_code)]

use synaug_core::Mask;

/// Class index 0 is roi (mask set), 1 is background.
pub fn class_of(v: bool) -> usize {
    if v {
        0
    } else {
        1
    }
}

/// `counts[truth][pred]`.
pub fn confusion(gt: &Mask, pred: &Mask) -> [[u64; 2]; 2] {
    let mut counts = [[0u64; 2]; 2];
    for y in 0..gt.height() {
        for x in 0..gt.width() {
            counts[class_of(gt.get(x, y))][class_of(pred.get(x, y))] += 1;
        }
    }
    counts
}

fn div(a: u64, b: u64) -> Option<f64> {
    if b == 0 {
        None
    } else {
        Some(a as f64 / b as f64)
    }
}

pub fn iou(cm: &[[u64; 2]; 2], c: usize) -> Option<f64> {
    let o = 1 - c;
    div(cm[c][c], cm[c][c] + cm[o][c] + cm[c][o])
}

pub fn precision(cm: &[[u64; 2]; 2], c: usize) -> Option<f64> {
    let o = 1 - c;
    div(cm[c][c], cm[c][c] + cm[o][c])
}

pub fn recall(cm: &[[u64; 2]; 2], c: usize) -> Option<f64> {
    let o = 1 - c;
    div(cm[c][c], cm[c][c] + cm[c][o])
}

pub fn mean_of_defined(values: &[Option<f64>]) -> Option<f64> {
    let defined: Vec<f64> = values.iter().flatten().copied().collect();
    if defined.is_empty() {
        None
    } else {
        Some(defined.iter().sum::<f64>() / defined.len() as f64)
    }
}

/// Pixels of class `c` with a 4-neighbour of another class, where everything
/// outside the image counts as another class.
pub fn boundary(mask: &Mask, c: usize) -> Vec<(i64, i64)> {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    // padded grid: None outside the image
    let at = |x: i64, y: i64| -> Option<usize> {
        if x < 0 || y < 0 || x >= w || y >= h {
            None
        } else {
            Some(class_of(mask.get(x as usize, y as usize)))
        }
    };
    let mut out = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if at(x, y) != Some(c) {
                continue;
            }
            if [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .any(|(dx, dy)| at(x + dx, y + dy) != Some(c))
            {
                out.push((x, y));
            }
        }
    }
    out
}

fn nearest_sq(p: (i64, i64), set: &[(i64, i64)]) -> Option<i64> {
    set.iter()
        .map(|q| (p.0 - q.0).pow(2) + (p.1 - q.1).pow(2))
        .min()
}

fn matched(from: &[(i64, i64)], to: &[(i64, i64)], tol: u32) -> Option<f64> {
    if from.is_empty() {
        return None;
    }
    let t2 = (tol as i64) * (tol as i64);
    let hits = from
        .iter()
        .filter(|&&p| nearest_sq(p, to).is_some_and(|d| d <= t2))
        .count();
    Some(hits as f64 / from.len() as f64)
}

/// `(precision, recall, f1)` per class, `None` when the class has no
/// boundary in either mask.
pub fn bf(gt: &Mask, pred: &Mask, tol: u32) -> Vec<Option<(f64, f64, f64)>> {
    (0..2)
        .map(|c| {
            let g = boundary(gt, c);
            let p = boundary(pred, c);
            if g.is_empty() && p.is_empty() {
                return None;
            }
            let prec = matched(&p, &g, tol).unwrap_or(0.0);
            let rec = matched(&g, &p, tol).unwrap_or(0.0);
            let f1 = if prec + rec == 0.0 {
                0.0
            } else {
                2.0 * prec * rec / (prec + rec)
            };
            Some((prec, rec, f1))
        })
        .collect()
}
