//! Meta-measures: tests of a similarity measure itself.
//!
//! * `mm1`: ranking drift when the ground truth is shrunk by a few pixels.
//! * `mm2`: ranking drift when the ground truth is rotated slightly.
//! * `mm3`: how often the average synthesis beats the light-stroke layer of
//!   the ground truth.
//! * `mm4`: agreement with human-ranked pairs.
//!
//! Drift is `theta = 1 - rho` with `rho` the Spearman correlation between the
//! algorithm scores before and after the perturbation, averaged over photos.

mod dataset;
mod measure;
mod rank;

pub use dataset::{BenchmarkDataset, RankedPair, RankedPairSet};
pub use measure::{
    score_pair, FnMeasure, SizeAlignment, GmsdMeasure, Measure, Negated, Polarity, Scored, ScootMeasure,
    SsimMeasure,
};
pub use rank::{average_ranks, spearman_rho, theta};

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ScootError};
use crate::imageio::{load_gray, resize_nn, rotate_nn, split_strokes, GrayImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetaId {
    Mm1,
    Mm2,
    Mm3,
    Mm4,
}

impl MetaId {
    pub fn as_str(self) -> &'static str {
        match self {
            MetaId::Mm1 => "mm1",
            MetaId::Mm2 => "mm2",
            MetaId::Mm3 => "mm3",
            MetaId::Mm4 => "mm4",
        }
    }
}

impl fmt::Display for MetaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetaId {
    type Err = ScootError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mm1" => Ok(MetaId::Mm1),
            "mm2" => Ok(MetaId::Mm2),
            "mm3" => Ok(MetaId::Mm3),
            "mm4" => Ok(MetaId::Mm4),
            other => Err(ScootError::InvalidConfig(format!(
                "unknown meta-measure `{other}` (expected mm1, mm2, mm3 or mm4)"
            ))),
        }
    }
}

/// Knobs of the meta-measure procedures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetaOptions {
    /// Pixels removed from both ground-truth dimensions in mm1.
    pub downsize_px: usize,
    /// Counter-clockwise ground-truth rotation in mm2.
    pub rotation_deg: f64,
    /// Intensity used to fill pixels rotated in from outside the frame.
    pub rotation_fill: u8,
    /// Light/dark stroke split point for mm3.
    pub threshold: u8,
    /// Worker threads; 0 lets the pool pick.
    pub jobs: usize,
    /// Size alignment for pixel-wise measures.
    pub alignment: SizeAlignment,
}

impl Default for MetaOptions {
    fn default() -> Self {
        Self {
            downsize_px: 5,
            rotation_deg: 5.0,
            rotation_fill: 255,
            threshold: 170,
            jobs: 1,
            alignment: SizeAlignment::Center,
        }
    }
}

/// Per-photo (or per-pair) value kept for auditing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemValue {
    pub id: String,
    pub value: f64,
    /// The value is a fallback rather than a measurement (undefined
    /// correlation).
    #[serde(default)]
    pub flagged: bool,
    /// Scores behind the value: mm3 `[mean synthesis, light strokes]`,
    /// mm4 `[better, worse]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaResult {
    pub meta: MetaId,
    pub measure: String,
    pub polarity: Polarity,
    /// Mean theta for mm1/mm2, a percentage for mm3/mm4.
    pub aggregate: f64,
    pub items: Vec<ItemValue>,
}

impl MetaResult {
    pub fn flagged(&self) -> usize {
        self.items.iter().filter(|i| i.flagged).count()
    }
}

fn with_pool<T: Send>(jobs: usize, work: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| ScootError::WorkerPool(e.to_string()))?;
    Ok(pool.install(work))
}

fn score_logged(
    m: &dyn Measure,
    alignment: SizeAlignment,
    gt: &GrayImage,
    syn: &GrayImage,
    gt_path: &Path,
    syn_path: &Path,
) -> Result<f64> {
    score_pair(m, gt, syn, alignment)
        .map(|s| s.score)
        .map_err(|e| ScootError::Scoring {
            measure: m.id().to_string(),
            gt: gt_path.display().to_string(),
            syn: syn_path.display().to_string(),
            source: Box::new(e),
        })
}

fn mean(values: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = values.len() as f64;
    values.sum::<f64>() / n
}

/// Shared body of mm1 and mm2: per photo, theta between the algorithm scores
/// against the original and against the perturbed ground truth.
fn ranking_stability(
    meta: MetaId,
    ds: &BenchmarkDataset,
    m: &dyn Measure,
    opts: &MetaOptions,
    perturb: &(dyn Fn(&GrayImage) -> Result<GrayImage> + Sync),
) -> Result<MetaResult> {
    let photos: Vec<&str> = ds.photos().collect();
    let align = opts.alignment;
    let items = with_pool(opts.jobs, || {
        photos
            .par_iter()
            .map(|&photo| -> Result<ItemValue> {
                let gt_path = ds.gt_path(photo).expect("validated dataset");
                let gt = load_gray(gt_path)?;
                let perturbed = perturb(&gt)?;
                let mut before = Vec::new();
                let mut after = Vec::new();
                for (_, syn_path) in ds.syntheses(photo) {
                    let syn = load_gray(syn_path)?;
                    before.push(score_logged(m, align, &gt, &syn, gt_path, syn_path)?);
                    after.push(score_logged(m, align, &perturbed, &syn, gt_path, syn_path)?);
                }
                let (value, flagged) = match theta(&before, &after) {
                    Ok(t) => (t, false),
                    Err(ScootError::ZeroRankVariance) => (1.0, true),
                    Err(e) => return Err(e),
                };
                Ok(ItemValue {
                    id: photo.to_string(),
                    value,
                    flagged,
                    scores: Vec::new(),
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    Ok(MetaResult {
        meta,
        measure: m.id().to_string(),
        polarity: m.polarity(),
        aggregate: mean(items.iter().map(|i| i.value)),
        items,
    })
}

/// Stability of the ranking when the ground truth loses `downsize_px`
/// pixels in each dimension (nearest neighbour). Lower is better.
pub fn mm1_resize_stability(ds: &BenchmarkDataset, m: &dyn Measure, opts: &MetaOptions) -> Result<MetaResult> {
    let px = opts.downsize_px;
    ranking_stability(MetaId::Mm1, ds, m, opts, &|gt: &GrayImage| {
        if gt.width() <= px || gt.height() <= px {
            return Err(ScootError::ImageTooSmall {
                width: gt.width(),
                height: gt.height(),
                requirement: "ground truth must be larger than the downsizing margin",
            });
        }
        resize_nn(gt, gt.width() - px, gt.height() - px)
    })
}

/// Stability of the ranking under a slight counter-clockwise rotation of
/// the ground truth. Lower is better.
pub fn mm2_rotation_stability(ds: &BenchmarkDataset, m: &dyn Measure, opts: &MetaOptions) -> Result<MetaResult> {
    let (deg, fill) = (opts.rotation_deg, opts.rotation_fill);
    ranking_stability(MetaId::Mm2, ds, m, opts, &|gt: &GrayImage| Ok(rotate_nn(gt, deg, fill)))
}

/// Percentage of photos where the mean synthesis score beats the score of
/// the ground truth's light-stroke layer.
pub fn mm3_content_capture(ds: &BenchmarkDataset, m: &dyn Measure, opts: &MetaOptions) -> Result<MetaResult> {
    let photos: Vec<&str> = ds.photos().collect();
    let (threshold, align) = (opts.threshold, opts.alignment);
    let items = with_pool(opts.jobs, || {
        photos
            .par_iter()
            .map(|&photo| -> Result<ItemValue> {
                let gt_path = ds.gt_path(photo).expect("validated dataset");
                let gt = load_gray(gt_path)?;
                let light = split_strokes(&gt, threshold).light;
                let light_score = score_logged(m, align, &gt, &light, gt_path, gt_path)?;
                let mut scores = Vec::new();
                for (_, syn_path) in ds.syntheses(photo) {
                    let syn = load_gray(syn_path)?;
                    scores.push(score_logged(m, align, &gt, &syn, gt_path, syn_path)?);
                }
                let mean_score = mean(scores.iter().copied());
                let success = m.polarity().prefers(mean_score, light_score);
                Ok(ItemValue {
                    id: photo.to_string(),
                    value: if success { 1.0 } else { 0.0 },
                    flagged: false,
                    scores: vec![mean_score, light_score],
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let successes = items.iter().filter(|i| i.value == 1.0).count();
    Ok(MetaResult {
        meta: MetaId::Mm3,
        measure: m.id().to_string(),
        polarity: m.polarity(),
        aggregate: 100.0 * successes as f64 / items.len() as f64,
        items,
    })
}

/// Percentage of ranked pairs where the measure strictly prefers the
/// human-preferred synthesis. Ties count as disagreement.
pub fn mm4_human_agreement(ps: &RankedPairSet, m: &dyn Measure, opts: &MetaOptions) -> Result<MetaResult> {
    if ps.is_empty() {
        return Err(ScootError::EmptyPairSet);
    }
    let width = ps.len().to_string().len();
    let align = opts.alignment;
    let items = with_pool(opts.jobs, || {
        ps.entries()
            .par_iter()
            .enumerate()
            .map(|(i, e)| -> Result<ItemValue> {
                let gt = load_gray(&e.gt)?;
                let better = load_gray(&e.better)?;
                let worse = load_gray(&e.worse)?;
                let sb = score_logged(m, align, &gt, &better, &e.gt, &e.better)?;
                let sw = score_logged(m, align, &gt, &worse, &e.gt, &e.worse)?;
                Ok(ItemValue {
                    id: format!("{i:0width$}"),
                    value: if m.polarity().prefers(sb, sw) { 1.0 } else { 0.0 },
                    flagged: false,
                    scores: vec![sb, sw],
                })
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let agree = items.iter().filter(|i| i.value == 1.0).count();
    Ok(MetaResult {
        meta: MetaId::Mm4,
        measure: m.id().to_string(),
        polarity: m.polarity(),
        aggregate: 100.0 * agree as f64 / items.len() as f64,
        items,
    })
}

/// Runs mm1..mm3 on a dataset. mm4 needs a [`RankedPairSet`] instead.
pub fn run_dataset_meta(meta: MetaId, ds: &BenchmarkDataset, m: &dyn Measure, opts: &MetaOptions) -> Result<MetaResult> {
    match meta {
        MetaId::Mm1 => mm1_resize_stability(ds, m, opts),
        MetaId::Mm2 => mm2_rotation_stability(ds, m, opts),
        MetaId::Mm3 => mm3_content_capture(ds, m, opts),
        MetaId::Mm4 => Err(ScootError::InvalidConfig(
            "mm4 runs on a ranked pair set, not a dataset manifest".into(),
        )),
    }
}
