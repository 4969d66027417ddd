//! Structure-edge extraction.
//!
//! Three gradient operators (Roberts, Prewitt, Sobel) threshold the gradient
//! magnitude at a fraction of the per-image maximum. Two Laplacian variants
//! mark zero crossings, and Canny is the usual smooth / NMS / hysteresis
//! chain. Sobel with `t = 0.25` is the default.
//!
//! Zero-crossing detection needs a slope threshold. Unless a fraction of the
//! peak absolute response is given, the mean absolute filter response is used.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mask::EdgeMap;
use crate::raster::{convolve2d, FloatPlane, Kernel, Raster};

pub const DEFAULT_GRADIENT_THRESHOLD: f64 = 0.25;
pub const DEFAULT_LOG_SIGMA: f64 = 2.0;
pub const DEFAULT_CANNY_SIGMA: f64 = 1.4;
pub const DEFAULT_CANNY_LOW: f64 = 0.1;
pub const DEFAULT_CANNY_HIGH: f64 = 0.2;

/// Responses below this are treated as numerical noise by the zero-crossing
/// detector.
const ZERO_CROSS_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GradientOperator {
    Roberts,
    Prewitt,
    Sobel,
}

impl GradientOperator {
    /// Correlation masks `(x, y)`. Roberts' 2×2 diagonal pair is embedded in
    /// a 3×3 grid with its top-left cell on the anchor.
    pub fn masks(self) -> (Kernel, Kernel) {
        let x = match self {
            GradientOperator::Roberts => {
                Kernel::from_rows(&[&[0.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, -1.0]])
            }
            GradientOperator::Prewitt => {
                Kernel::from_rows(&[&[-1.0, 0.0, 1.0], &[-1.0, 0.0, 1.0], &[-1.0, 0.0, 1.0]])
            }
            GradientOperator::Sobel => {
                Kernel::from_rows(&[&[-1.0, 0.0, 1.0], &[-2.0, 0.0, 2.0], &[-1.0, 0.0, 1.0]])
            }
        }
        .expect("static kernel");
        let y = match self {
            GradientOperator::Roberts => {
                Kernel::from_rows(&[&[0.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, -1.0, 0.0]])
                    .expect("static kernel")
            }
            _ => x.transposed(),
        };
        (x, y)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradient {
    pub gx: FloatPlane,
    pub gy: FloatPlane,
    pub magnitude: FloatPlane,
}

/// Gradient of a grayscale raster. RGB input is rejected.
pub fn gradient(img: &Raster, operator: GradientOperator) -> Result<Gradient> {
    img.require_gray()?;
    Ok(gradient_plane(&img.to_plane()?, operator))
}

fn gradient_plane(plane: &FloatPlane, operator: GradientOperator) -> Gradient {
    let (mx, my) = operator.masks();
    let gx = convolve2d(plane, &mx.flipped());
    let gy = convolve2d(plane, &my.flipped());
    let magnitude = gx
        .zip_with(&gy, |a, b| (a * a + b * b).sqrt())
        .expect("same dimensions");
    Gradient { gx, gy, magnitude }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeMethod {
    Roberts {
        threshold: f64,
    },
    Prewitt {
        threshold: f64,
    },
    Sobel {
        threshold: f64,
    },
    /// Analytic Laplacian-of-Gaussian kernel, then zero crossings.
    /// `threshold` is a fraction of the peak |response|; `None` uses the mean.
    Log {
        sigma: f64,
        threshold: Option<f64>,
    },
    /// Gaussian smoothing followed by the 4-neighbor discrete Laplacian, then
    /// zero crossings.
    ZeroCross {
        sigma: f64,
        threshold: Option<f64>,
    },
    Canny {
        sigma: f64,
        low: f64,
        high: f64,
    },
}

impl Default for EdgeMethod {
    fn default() -> Self {
        EdgeMethod::Sobel {
            threshold: DEFAULT_GRADIENT_THRESHOLD,
        }
    }
}

impl fmt::Display for EdgeMethod {
    /// Compact form such as `sobel(threshold=0.25)`, used in manifests.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |t: Option<f64>| t.map_or_else(|| "mean".to_string(), |t| t.to_string());
        match *self {
            EdgeMethod::Roberts { threshold } => write!(f, "roberts(threshold={threshold})"),
            EdgeMethod::Prewitt { threshold } => write!(f, "prewitt(threshold={threshold})"),
            EdgeMethod::Sobel { threshold } => write!(f, "sobel(threshold={threshold})"),
            EdgeMethod::Log { sigma, threshold } => {
                write!(f, "log(sigma={sigma},threshold={})", opt(threshold))
            }
            EdgeMethod::ZeroCross { sigma, threshold } => {
                write!(f, "zerocross(sigma={sigma},threshold={})", opt(threshold))
            }
            EdgeMethod::Canny { sigma, low, high } => {
                write!(f, "canny(sigma={sigma},low={low},high={high})")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeMethodKind {
    Roberts,
    Prewitt,
    Sobel,
    Log,
    ZeroCross,
    Canny,
}

impl EdgeMethodKind {
    pub const ALL: [EdgeMethodKind; 6] = [
        EdgeMethodKind::Roberts,
        EdgeMethodKind::Prewitt,
        EdgeMethodKind::Sobel,
        EdgeMethodKind::Log,
        EdgeMethodKind::ZeroCross,
        EdgeMethodKind::Canny,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EdgeMethodKind::Roberts => "roberts",
            EdgeMethodKind::Prewitt => "prewitt",
            EdgeMethodKind::Sobel => "sobel",
            EdgeMethodKind::Log => "log",
            EdgeMethodKind::ZeroCross => "zerocross",
            EdgeMethodKind::Canny => "canny",
        }
    }

    /// Method with defaults, optionally overriding the threshold and σ.
    /// For Canny the threshold overrides `high`, and `low` becomes half of it.
    pub fn build(self, threshold: Option<f64>, sigma: Option<f64>) -> Result<EdgeMethod> {
        let t = threshold.unwrap_or(DEFAULT_GRADIENT_THRESHOLD);
        let method = match self {
            EdgeMethodKind::Roberts => EdgeMethod::Roberts { threshold: t },
            EdgeMethodKind::Prewitt => EdgeMethod::Prewitt { threshold: t },
            EdgeMethodKind::Sobel => EdgeMethod::Sobel { threshold: t },
            EdgeMethodKind::Log => EdgeMethod::Log {
                sigma: sigma.unwrap_or(DEFAULT_LOG_SIGMA),
                threshold,
            },
            EdgeMethodKind::ZeroCross => EdgeMethod::ZeroCross {
                sigma: sigma.unwrap_or(DEFAULT_LOG_SIGMA),
                threshold,
            },
            EdgeMethodKind::Canny => {
                let (low, high) = match threshold {
                    Some(h) => (h / 2.0, h),
                    None => (DEFAULT_CANNY_LOW, DEFAULT_CANNY_HIGH),
                };
                EdgeMethod::Canny {
                    sigma: sigma.unwrap_or(DEFAULT_CANNY_SIGMA),
                    low,
                    high,
                }
            }
        };
        method.validate()?;
        Ok(method)
    }
}

impl fmt::Display for EdgeMethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdgeMethodKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EdgeMethodKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parameter(format!("unknown edge method {s:?}")))
    }
}

impl EdgeMethod {
    pub fn kind(&self) -> EdgeMethodKind {
        match self {
            EdgeMethod::Roberts { .. } => EdgeMethodKind::Roberts,
            EdgeMethod::Prewitt { .. } => EdgeMethodKind::Prewitt,
            EdgeMethod::Sobel { .. } => EdgeMethodKind::Sobel,
            EdgeMethod::Log { .. } => EdgeMethodKind::Log,
            EdgeMethod::ZeroCross { .. } => EdgeMethodKind::ZeroCross,
            EdgeMethod::Canny { .. } => EdgeMethodKind::Canny,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::Parameter(format!(
                    "{name} must lie in (0, 1), got {v}"
                )))
            }
        };
        let positive = |v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Parameter(format!("sigma must be > 0, got {v}")))
            }
        };
        match *self {
            EdgeMethod::Roberts { threshold }
            | EdgeMethod::Prewitt { threshold }
            | EdgeMethod::Sobel { threshold } => open_unit("threshold", threshold),
            EdgeMethod::Log { sigma, threshold } | EdgeMethod::ZeroCross { sigma, threshold } => {
                positive(sigma)?;
                threshold.map_or(Ok(()), |t| open_unit("threshold", t))
            }
            EdgeMethod::Canny { sigma, low, high } => {
                positive(sigma)?;
                open_unit("low threshold", low)?;
                open_unit("high threshold", high)?;
                if low > high {
                    return Err(Error::Parameter(format!(
                        "low threshold {low} exceeds high threshold {high}"
                    )));
                }
                Ok(())
            }
        }
    }
}

pub fn detect_edges(img: &Raster, method: &EdgeMethod) -> Result<EdgeMap> {
    method.validate()?;
    img.require_gray()?;
    let plane = img.to_plane()?;
    let map = match *method {
        EdgeMethod::Roberts { threshold } => {
            gradient_edges(&plane, GradientOperator::Roberts, threshold)
        }
        EdgeMethod::Prewitt { threshold } => {
            gradient_edges(&plane, GradientOperator::Prewitt, threshold)
        }
        EdgeMethod::Sobel { threshold } => {
            gradient_edges(&plane, GradientOperator::Sobel, threshold)
        }
        EdgeMethod::Log { sigma, threshold } => {
            let response = convolve2d(&plane, &log_kernel(sigma)?);
            zero_crossings(&response, threshold)
        }
        EdgeMethod::ZeroCross { sigma, threshold } => {
            let smooth = gaussian_blur(&plane, sigma)?;
            let response = convolve2d(&smooth, &laplacian_kernel());
            zero_crossings(&response, threshold)
        }
        EdgeMethod::Canny { sigma, low, high } => canny(&plane, sigma, low, high)?,
    };
    Ok(map)
}

fn gradient_edges(plane: &FloatPlane, op: GradientOperator, threshold: f64) -> EdgeMap {
    let mag = gradient_plane(plane, op).magnitude;
    let cut = threshold * mag.max();
    EdgeMap::from_fn(mag.width(), mag.height(), |x, y| mag.get(x, y) > cut)
}

fn gaussian_1d(sigma: f64) -> Vec<f64> {
    let radius = (3.0 * sigma).ceil() as i64;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-((i * i) as f64) / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= total);
    k
}

pub fn gaussian_blur(plane: &FloatPlane, sigma: f64) -> Result<FloatPlane> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::Parameter(format!("sigma must be > 0, got {sigma}")));
    }
    let g = gaussian_1d(sigma);
    let row = Kernel::new(g.len(), 1, g.clone())?;
    let col = Kernel::new(1, g.len(), g)?;
    Ok(convolve2d(&convolve2d(plane, &row), &col))
}

/// Zero-mean Laplacian-of-Gaussian kernel of radius ⌈3σ⌉.
pub fn log_kernel(sigma: f64) -> Result<Kernel> {
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::Parameter(format!("sigma must be > 0, got {sigma}")));
    }
    let radius = (3.0 * sigma).ceil() as i64;
    let side = (2 * radius + 1) as usize;
    let s2 = sigma * sigma;
    let norm = -1.0 / (std::f64::consts::PI * s2 * s2);
    let mut data = Vec::with_capacity(side * side);
    for y in -radius..=radius {
        for x in -radius..=radius {
            let r2 = (x * x + y * y) as f64 / (2.0 * s2);
            data.push(norm * (1.0 - r2) * (-r2).exp());
        }
    }
    let mean = data.iter().sum::<f64>() / data.len() as f64;
    data.iter_mut().for_each(|v| *v -= mean);
    Kernel::new(side, side, data)
}

fn laplacian_kernel() -> Kernel {
    Kernel::from_rows(&[&[0.0, 1.0, 0.0], &[1.0, -4.0, 1.0], &[0.0, 1.0, 0.0]])
        .expect("static kernel")
}

fn zero_crossings(response: &FloatPlane, threshold: Option<f64>) -> EdgeMap {
    let (w, h) = response.dims();
    let abs_max = response.data().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let slope = match threshold {
        Some(t) => t * abs_max,
        None => response.data().iter().map(|v| v.abs()).sum::<f64>() / response.data().len() as f64,
    }
    .max(ZERO_CROSS_FLOOR);
    let opposite = |a: f64, b: f64| (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0);
    let mut map = EdgeMap::empty(w, h);
    for y in 0..h {
        for x in 0..w {
            let p = response.get(x, y);
            for (nx, ny) in [(x + 1, y), (x, y + 1)] {
                if nx >= w || ny >= h {
                    continue;
                }
                let q = response.get(nx, ny);
                if opposite(p, q) && (p - q).abs() > slope {
                    if p.abs() <= q.abs() {
                        map.set(x, y, true);
                    } else {
                        map.set(nx, ny, true);
                    }
                }
            }
            if p == 0.0 && x > 0 && y > 0 && x + 1 < w && y + 1 < h {
                let pairs = [
                    (response.get(x - 1, y), response.get(x + 1, y)),
                    (response.get(x, y - 1), response.get(x, y + 1)),
                ];
                if pairs
                    .iter()
                    .any(|&(a, b)| opposite(a, b) && (a - b).abs() > slope)
                {
                    map.set(x, y, true);
                }
            }
        }
    }
    map
}

fn canny(plane: &FloatPlane, sigma: f64, low: f64, high: f64) -> Result<EdgeMap> {
    let smooth = gaussian_blur(plane, sigma)?;
    let g = gradient_plane(&smooth, GradientOperator::Sobel);
    let (w, h) = g.magnitude.dims();
    let mag = &g.magnitude;

    // non-maximum suppression along the gradient direction quantized to 45°
    let mut thin = vec![0.0f64; w * h];
    for y in 0..h {
        for x in 0..w {
            let m = mag.get(x, y);
            if m <= 0.0 {
                continue;
            }
            let angle =
                g.gy.get(x, y)
                    .atan2(g.gx.get(x, y))
                    .to_degrees()
                    .rem_euclid(180.0);
            let (dx, dy): (isize, isize) = if !(22.5..157.5).contains(&angle) {
                (1, 0)
            } else if angle < 67.5 {
                (1, 1)
            } else if angle < 112.5 {
                (0, 1)
            } else {
                (-1, 1)
            };
            let (xi, yi) = (x as isize, y as isize);
            let behind = mag.get_clamped(xi - dx, yi - dy);
            let ahead = mag.get_clamped(xi + dx, yi + dy);
            if m >= behind && m > ahead {
                thin[y * w + x] = m;
            }
        }
    }

    let peak = mag.max();
    let hi = high * peak;
    let lo = low * peak;
    let mut out = EdgeMap::empty(w, h);
    let mut queue = VecDeque::new();
    for y in 0..h {
        for x in 0..w {
            if thin[y * w + x] > hi {
                out.set(x, y, true);
                queue.push_back((x, y));
            }
        }
    }
    while let Some((x, y)) = queue.pop_front() {
        for ny in y.saturating_sub(1)..=(y + 1).min(h - 1) {
            for nx in x.saturating_sub(1)..=(x + 1).min(w - 1) {
                if !out.get(nx, ny) && thin[ny * w + nx] > lo {
                    out.set(nx, ny, true);
                    queue.push_back((nx, ny));
                }
            }
        }
    }
    Ok(out)
}

/// Morphological dilation with a `(2r+1)`-sided square. Radius 0 is the identity.
pub fn dilate(map: &EdgeMap, radius: usize) -> EdgeMap {
    if radius == 0 {
        return map.clone();
    }
    let (w, h) = map.dims();
    let horizontal = EdgeMap::from_fn(w, h, |x, y| {
        (x.saturating_sub(radius)..=(x + radius).min(w - 1)).any(|xx| map.get(xx, y))
    });
    EdgeMap::from_fn(w, h, |x, y| {
        (y.saturating_sub(radius)..=(y + radius).min(h - 1)).any(|yy| horizontal.get(x, yy))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn step_image(w: usize, h: usize, at: usize) -> Raster {
        Raster::gray_from_fn(w, h, |x, _| if x < at { 0 } else { 255 }).unwrap()
    }

    fn transpose(p: &FloatPlane) -> FloatPlane {
        FloatPlane::from_fn(p.height(), p.width(), |x, y| p.get(y, x)).unwrap()
    }

    #[test]
    fn constant_image_has_zero_gradient() {
        let img = Raster::filled(10, 10, &[77]).unwrap();
        for op in [
            GradientOperator::Roberts,
            GradientOperator::Prewitt,
            GradientOperator::Sobel,
        ] {
            let g = gradient(&img, op).unwrap();
            assert!(g.magnitude.data().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn ramp_sobel_interior() {
        let img = Raster::gray_from_fn(6, 6, |x, _| x as u8).unwrap();
        let g = gradient(&img, GradientOperator::Sobel).unwrap();
        for y in 1..5 {
            for x in 1..5 {
                assert_eq!(g.gx.get(x, y), 8.0);
                assert_eq!(g.gy.get(x, y), 0.0);
            }
        }
    }

    #[test]
    fn rgb_rejected() {
        let img = Raster::filled(3, 3, &[1, 2, 3]).unwrap();
        assert!(matches!(
            gradient(&img, GradientOperator::Sobel),
            Err(Error::Channels { .. })
        ));
        assert!(detect_edges(&img, &EdgeMethod::default()).is_err());
    }

    #[test]
    fn vertical_step_peaks_beside_the_step() {
        let img = step_image(10, 8, 5);
        let g = gradient(&img, GradientOperator::Sobel).unwrap();
        let peak = g.magnitude.max();
        assert_eq!(peak, 4.0 * 255.0);
        for y in 0..8 {
            for x in 0..10 {
                let expected = if x == 4 || x == 5 { peak } else { 0.0 };
                assert_eq!(g.magnitude.get(x, y), expected);
            }
        }
        // transposing the input swaps gx and gy
        let t = Raster::gray_from_fn(8, 10, |x, y| img.pixel(y, x)[0]).unwrap();
        let gt = gradient(&t, GradientOperator::Sobel).unwrap();
        assert_eq!(gt.gx, transpose(&g.gy));
        assert_eq!(gt.gy, transpose(&g.gx));
        assert_eq!(gt.magnitude, transpose(&g.magnitude));
    }

    #[test]
    fn rotation_maps_gradient_components() {
        let img = Raster::gray_from_fn(9, 6, |x, y| ((x * 37 + y * 91) % 251) as u8).unwrap();
        let g = gradient(&img, GradientOperator::Sobel).unwrap();
        let rot = img.rotate_cw();
        let gr = gradient(&rot, GradientOperator::Sobel).unwrap();
        let h = img.height();
        for ny in 0..rot.height() {
            for nx in 0..rot.width() {
                let (ox, oy) = (ny, h - 1 - nx);
                assert_eq!(gr.gx.get(nx, ny), -g.gy.get(ox, oy));
                assert_eq!(gr.gy.get(nx, ny), g.gx.get(ox, oy));
            }
        }
    }

    #[test]
    fn step_edges_only_in_flanking_columns() {
        let img = step_image(12, 9, 6);
        let map = detect_edges(&img, &EdgeMethod::default()).unwrap();
        for y in 0..9 {
            for x in 0..12 {
                assert_eq!(map.get(x, y), x == 5 || x == 6, "({x},{y})");
            }
        }
    }

    #[test]
    fn constant_image_no_edges_any_method() {
        let img = Raster::filled(24, 24, &[200]).unwrap();
        for kind in EdgeMethodKind::ALL {
            let m = kind.build(None, None).unwrap();
            assert_eq!(detect_edges(&img, &m).unwrap().count(), 0, "{kind}");
        }
    }

    /// 50×50 white square on a 100×100 black field; perimeter 4·50 − 4 = 196.
    fn square_scene() -> Raster {
        Raster::gray_from_fn(100, 100, |x, y| {
            if (25..75).contains(&x) && (25..75).contains(&y) {
                255
            } else {
                0
            }
        })
        .unwrap()
    }

    #[test]
    fn square_perimeter_counts() {
        // Frozen from an independent scipy.ndimage reference (nearest-mode
        // borders, magnitude > 0.25·max): Sobel and Prewitt both mark 400
        // pixels, the inner (196) plus outer (204) contour of the square.
        let img = square_scene();
        let inner = 196.0;
        let two_sided = 196.0 + 204.0;
        for kind in [EdgeMethodKind::Sobel, EdgeMethodKind::Prewitt] {
            let n = detect_edges(&img, &kind.build(None, None).unwrap())
                .unwrap()
                .count() as f64;
            assert_eq!(n, 400.0, "{kind}");
            assert!((n - two_sided).abs() <= 0.2 * two_sided);
        }
        // single-sided detectors land within ±20% of the perimeter itself
        for kind in [
            EdgeMethodKind::Canny,
            EdgeMethodKind::Log,
            EdgeMethodKind::ZeroCross,
        ] {
            let n = detect_edges(&img, &kind.build(None, None).unwrap())
                .unwrap()
                .count() as f64;
            assert!((n - inner).abs() <= 0.2 * inner, "{kind} {n}");
        }
    }

    #[test]
    fn parameter_validation() {
        for t in [0.0, 1.0, -0.1, 1.5] {
            assert!(detect_edges(&square_scene(), &EdgeMethod::Sobel { threshold: t }).is_err());
        }
        assert!(EdgeMethodKind::Log.build(None, Some(0.0)).is_err());
        assert!(EdgeMethodKind::Canny.build(None, Some(-1.0)).is_err());
        assert!(EdgeMethod::Canny {
            sigma: 1.0,
            low: 0.3,
            high: 0.2
        }
        .validate()
        .is_err());
        assert!("SOBEL".parse::<EdgeMethodKind>().is_ok());
        assert!("scharr".parse::<EdgeMethodKind>().is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(EdgeMethod::default().to_string(), "sobel(threshold=0.25)");
        assert_eq!(
            EdgeMethodKind::Log.build(None, None).unwrap().to_string(),
            "log(sigma=2,threshold=mean)"
        );
        assert_eq!(
            EdgeMethodKind::Canny
                .build(Some(0.3), None)
                .unwrap()
                .to_string(),
            "canny(sigma=1.4,low=0.15,high=0.3)"
        );
    }

    #[test]
    fn dilate_examples() {
        let mut single = EdgeMap::empty(7, 7);
        single.set(3, 3, true);
        assert_eq!(dilate(&single, 0), single);
        let d = dilate(&single, 1);
        assert_eq!(
            d,
            EdgeMap::from_fn(7, 7, |x, y| (2..=4).contains(&x) && (2..=4).contains(&y))
        );

        let mut two = EdgeMap::empty(16, 9);
        two.set(3, 4, true);
        two.set(8, 4, true);
        let d = dilate(&two, 2);
        let expected = EdgeMap::from_fn(16, 9, |x, y| {
            (2..=6).contains(&y) && ((1..=5).contains(&x) || (6..=10).contains(&x))
        });
        assert_eq!(d, expected);
        assert_eq!(d.count(), 50);
    }

    fn random_gray(w: usize, h: usize) -> impl Strategy<Value = Raster> {
        prop::collection::vec(any::<u8>(), w * h)
            .prop_map(move |d| Raster::new(w, h, 1, d).unwrap())
    }

    proptest! {
        #[test]
        fn negation_antisymmetry(img in random_gray(8, 8)) {
            let neg = Raster::gray_from_fn(8, 8, |x, y| 255 - img.pixel(x, y)[0]).unwrap();
            for op in [GradientOperator::Roberts, GradientOperator::Prewitt, GradientOperator::Sobel] {
                let a = gradient(&img, op).unwrap();
                let b = gradient(&neg, op).unwrap();
                for y in 1..7 {
                    for x in 1..7 {
                        prop_assert_eq!(b.gx.get(x, y), -a.gx.get(x, y));
                        prop_assert_eq!(b.gy.get(x, y), -a.gy.get(x, y));
                    }
                }
            }
        }

        #[test]
        fn threshold_monotone(img in random_gray(12, 10), t1 in 0.05f64..0.95, t2 in 0.05f64..0.95) {
            let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
            for kind in [EdgeMethodKind::Roberts, EdgeMethodKind::Prewitt, EdgeMethodKind::Sobel] {
                let loose = detect_edges(&img, &kind.build(Some(lo), None).unwrap()).unwrap();
                let strict = detect_edges(&img, &kind.build(Some(hi), None).unwrap()).unwrap();
                prop_assert!(strict.is_subset_of(&loose));
            }
        }

        #[test]
        fn dilation_extensive_and_monotone(bits in prop::collection::vec(prop::bool::weighted(0.1), 100), r in 0usize..4) {
            let m = EdgeMap::new(10, 10, bits).unwrap();
            let a = dilate(&m, r);
            let b = dilate(&m, r + 1);
            prop_assert!(m.is_subset_of(&a));
            prop_assert!(a.is_subset_of(&b));
        }
    }
}
