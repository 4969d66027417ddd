//! Overlays and run comparison tables.
//!
//! Overlay colours (alpha 0.5 over the photo dimmed to 60%):
//!
//! | pixel              | tint          |
//! |--------------------|---------------|
//! | ground truth only  | green (0,255,0)   |
//! | prediction only    | red (255,0,0)     |
//! | both               | yellow (255,255,0)|
//!
//! Tri-labels are visualised with background black, edge white, ROI red.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::labels::{LabelClass, TriLabel};
use crate::mask::RoiMask;
use crate::metrics::{Aggregation, MetricsReport};
use crate::raster::Raster;

pub const DIM_FACTOR: f64 = 0.6;
pub const TINT_ALPHA: f64 = 0.5;
pub const GT_ONLY_TINT: [u8; 3] = [0, 255, 0];
pub const PRED_ONLY_TINT: [u8; 3] = [255, 0, 0];
pub const AGREEMENT_TINT: [u8; 3] = [255, 255, 0];

pub const TRILABEL_PALETTE: [[u8; 3]; 3] = [[0, 0, 0], [255, 255, 255], [255, 0, 0]];

/// Colour of one overlay pixel given the photo pixel and both mask bits.
pub fn overlay_pixel(photo: [u8; 3], gt: bool, pred: bool) -> [u8; 3] {
    let tint = match (gt, pred) {
        (false, false) => None,
        (true, false) => Some(GT_ONLY_TINT),
        (false, true) => Some(PRED_ONLY_TINT),
        (true, true) => Some(AGREEMENT_TINT),
    };
    let mut out = [0u8; 3];
    for c in 0..3 {
        let dimmed = (photo[c] as f64 * DIM_FACTOR).round();
        let v = match tint {
            None => dimmed,
            Some(t) => ((1.0 - TINT_ALPHA) * dimmed + TINT_ALPHA * t[c] as f64).round(),
        };
        out[c] = v as u8;
    }
    out
}

pub fn render_overlay(photo: &Raster, gt: &RoiMask, pred: &RoiMask) -> Result<Raster> {
    if photo.dims() != gt.dims() {
        return Err(Error::dims(
            "photo",
            photo.dims(),
            "ground truth",
            gt.dims(),
        ));
    }
    if gt.dims() != pred.dims() {
        return Err(Error::dims(
            "ground truth",
            gt.dims(),
            "prediction",
            pred.dims(),
        ));
    }
    let rgb = photo.to_rgb();
    let mut data = Vec::with_capacity(rgb.data().len());
    for (i, px) in rgb.data().chunks_exact(3).enumerate() {
        data.extend(overlay_pixel(
            [px[0], px[1], px[2]],
            gt.data()[i],
            pred.data()[i],
        ));
    }
    Raster::new(photo.width(), photo.height(), 3, data)
}

pub fn render_trilabel(label: &TriLabel) -> Raster {
    let data = label
        .data()
        .iter()
        .flat_map(|&c| TRILABEL_PALETTE[LabelClass::index(c) as usize])
        .collect();
    Raster::new(label.width(), label.height(), 3, data).expect("buffer sized from label")
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunEntry {
    pub label: String,
    pub report: MetricsReport,
    pub seconds: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunComparison {
    pub runs: Vec<RunEntry>,
}

impl RunComparison {
    pub fn push(&mut self, label: impl Into<String>, report: MetricsReport, seconds: Option<f64>) {
        self.runs.push(RunEntry {
            label: label.into(),
            report,
            seconds,
        });
    }

    pub fn validate(&self) -> Result<()> {
        let first = self
            .runs
            .first()
            .ok_or(Error::Empty("comparison needs at least one run"))?;
        let classes = first.report.class_names();
        for run in &self.runs[1..] {
            if run.report.class_names() != classes {
                return Err(Error::IncompatibleRuns(format!(
                    "run {:?} has classes {:?}, run {:?} has {:?}",
                    run.label,
                    run.report.class_names(),
                    first.label,
                    classes
                )));
            }
            if run.report.mode != first.report.mode {
                return Err(Error::IncompatibleRuns(format!(
                    "run {:?} aggregates {}, run {:?} aggregates {}",
                    run.label, run.report.mode, first.label, first.report.mode
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Text,
    Csv,
    Json,
}

impl std::str::FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(TableFormat::Text),
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            _ => Err(Error::Parameter(format!(
                "unknown table format {s:?} (text, csv, json)"
            ))),
        }
    }
}

pub const DELTA_LABEL: &str = "delta";

fn round4(x: f64) -> f64 {
    let r = (x * 1e4).round() / 1e4;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Serialize)]
struct Table {
    mode: Aggregation,
    columns: Vec<String>,
    rows: Vec<Row>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<Vec<Option<f64>>>,
}

#[derive(Serialize)]
struct Row {
    run: String,
    values: Vec<Option<f64>>,
}

fn build_table(cmp: &RunComparison) -> Result<Table> {
    cmp.validate()?;
    let with_time = cmp.runs.iter().any(|r| r.seconds.is_some());
    let mut columns = vec!["mean_iou".to_string()];
    for name in cmp.runs[0].report.class_names() {
        for m in ["iou", "precision", "recall", "bf"] {
            columns.push(format!("{name}_{m}"));
        }
    }
    if with_time {
        columns.push("seconds".into());
    }
    let rows: Vec<Row> = cmp
        .runs
        .iter()
        .map(|run| {
            let mut values = vec![run.report.mean_iou];
            for c in &run.report.classes {
                values.extend([c.iou, c.precision, c.recall, c.bf]);
            }
            if with_time {
                values.push(run.seconds);
            }
            Row {
                run: run.label.clone(),
                values: values.into_iter().map(|v| v.map(round4)).collect(),
            }
        })
        .collect();
    // delta between the rounded values
    let delta = (rows.len() == 2).then(|| {
        rows[0]
            .values
            .iter()
            .zip(&rows[1].values)
            .map(|(a, b)| Some(round4(b.as_ref()? - a.as_ref()?)))
            .collect()
    });
    Ok(Table {
        mode: cmp.runs[0].report.mode,
        columns,
        rows,
        delta,
    })
}

fn cell(v: Option<f64>, signed: bool, undefined: &str) -> String {
    match (v, signed) {
        (None, _) => undefined.to_string(),
        (Some(x), false) => format!("{x:.4}"),
        (Some(x), true) => format!("{x:+.4}"),
    }
}

fn text_rows(table: &Table, undefined: &str) -> Vec<Vec<String>> {
    let mut out = vec![std::iter::once("run".to_string())
        .chain(table.columns.iter().cloned())
        .collect::<Vec<_>>()];
    for row in &table.rows {
        let mut line = vec![row.run.clone()];
        line.extend(row.values.iter().map(|&v| cell(v, false, undefined)));
        out.push(line);
    }
    if let Some(delta) = &table.delta {
        let mut line = vec![DELTA_LABEL.to_string()];
        line.extend(delta.iter().map(|&v| cell(v, true, undefined)));
        out.push(line);
    }
    out
}

/// Renders one row per run (4 decimals). With exactly two runs a `delta` row
/// (second minus first) is appended. Undefined values print as `undefined`
/// in text, empty in CSV and `null` in JSON.
pub fn render_comparison(cmp: &RunComparison, format: TableFormat) -> Result<String> {
    let table = build_table(cmp)?;
    match format {
        TableFormat::Json => {
            let mut s =
                serde_json::to_string_pretty(&table).map_err(|e| Error::Manifest(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for line in text_rows(&table, "") {
                w.write_record(&line)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Manifest(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv of utf-8 strings"))
        }
        TableFormat::Text => {
            let lines = text_rows(&table, "undefined");
            let ncol = lines[0].len();
            let widths: Vec<usize> = (0..ncol)
                .map(|c| {
                    lines
                        .iter()
                        .map(|l| l[c].chars().count())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let mut out = format!("aggregation: {}\n", table.mode);
            for (i, line) in lines.iter().enumerate() {
                for (c, v) in line.iter().enumerate() {
                    if c == 0 {
                        let _ = write!(out, "{v:<w$}", w = widths[0]);
                    } else {
                        let _ = write!(out, "  {v:>w$}", w = widths[c]);
                    }
                }
                out.push('\n');
                if i == 0 {
                    let total = widths.iter().sum::<usize>() + 2 * (ncol - 1);
                    out.push_str(&"-".repeat(total));
                    out.push('\n');
                }
            }
            Ok(out)
        }
    }
}
