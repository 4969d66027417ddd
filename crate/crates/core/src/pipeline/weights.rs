//! Median-frequency class balancing: `weight_c = median(counts) / count_c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::RoiMask;
use crate::metrics::CLASS_NAMES;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassWeights {
    pub classes: Vec<String>,
    pub pixel_counts: Vec<u64>,
    pub weights: Vec<f64>,
}

impl ClassWeights {
    /// Weights from per-class pixel totals. Every class must be present.
    pub fn from_counts(classes: &[&str], counts: &[u64]) -> Result<Self> {
        if classes.len() != counts.len() || classes.is_empty() {
            return Err(Error::Parameter(format!(
                "{} class names for {} counts",
                classes.len(),
                counts.len()
            )));
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(Error::AbsentClass(classes[i].to_string()));
        }
        let mut sorted = counts.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let median = if n % 2 == 1 {
            sorted[n / 2] as f64
        } else {
            (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
        };
        Ok(Self {
            classes: classes.iter().map(|s| s.to_string()).collect(),
            pixel_counts: counts.to_vec(),
            weights: counts.iter().map(|&c| median / c as f64).collect(),
        })
    }

    pub fn weight(&self, class: &str) -> Option<f64> {
        self.classes
            .iter()
            .position(|c| c == class)
            .map(|i| self.weights[i])
    }
}

/// ROI/background weights over a set of tile masks.
pub fn class_weights<'a>(masks: impl IntoIterator<Item = &'a RoiMask>) -> Result<ClassWeights> {
    let mut roi = 0u64;
    let mut total = 0u64;
    let mut n = 0usize;
    for m in masks {
        roi += m.count() as u64;
        total += m.len() as u64;
        n += 1;
    }
    if n == 0 {
        return Err(Error::Empty("no tiles for class weights"));
    }
    ClassWeights::from_counts(&CLASS_NAMES, &[roi, total - roi])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mask::Mask;

    #[test]
    fn balanced_dataset() {
        let m = Mask::from_fn(10, 10, |x, _| x < 5);
        let w = class_weights([&m]).unwrap();
        assert_eq!(w.weights, vec![1.0, 1.0]);
    }

    #[test]
    fn three_tile_hand_tally() {
        // tile A 4×4 with 3 roi px, tile B 4×4 with 5, tile C 2×2 with 0
        // roi = 8, background = 16 + 16 + 4 - 8 = 28, median = 18
        // weights: 18/8 = 2.25, 18/28 = 0.642857…
        let a = Mask::from_fn(4, 4, |x, y| y == 0 && x < 3);
        let b = Mask::from_fn(4, 4, |x, y| y == 1 || (y == 2 && x == 0));
        let c = Mask::empty(2, 2);
        let w = class_weights([&a, &b, &c]).unwrap();
        assert_eq!(w.pixel_counts, vec![8, 28]);
        assert_eq!(w.weights[0], 2.25);
        assert!((w.weights[1] - 18.0 / 28.0).abs() < 1e-15);
    }

    #[test]
    fn absent_class_rejected() {
        let m = Mask::empty(3, 3);
        assert!(matches!(class_weights([&m]), Err(Error::AbsentClass(c)) if c == "roi"));
        assert!(matches!(
            class_weights(std::iter::empty()),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn odd_class_count_uses_middle_value() {
        let w = ClassWeights::from_counts(&["a", "b", "c"], &[10, 40, 20]).unwrap();
        assert_eq!(w.weights, vec![2.0, 0.5, 1.0]);
        assert_eq!(w.weight("c"), Some(1.0));
    }
}
