//! Block-level style descriptors and the Scoot score.
//!
//! An image is tiled into a `k x k` grid. Every block yields a short feature
//! vector (by default the contrast and energy of its normalized co-occurrence
//! matrix), the block vectors are concatenated in row-major order, and the
//! concatenations for the configured neighbour offsets are averaged. Two
//! images are compared through the Euclidean distance of these averages:
//! `1 / (1 + ||a - b||)`, which is 1 exactly when the descriptors agree.

mod extractors;
mod glrlm;
mod sobel;

pub use extractors::{
    BlockFeatures, FeatureExtractor, FeatureInput, GlcmExtractor, GlrlmExtractor, SobelExtractor,
};
pub use glrlm::{glrlm_features, run_length_matrix, RunLengthMatrix};
pub use sobel::{sobel_features, SOBEL_MAX_MAGNITUDE};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cooccur::{Offset, Region};
use crate::error::{Result, ScootError};
use crate::imageio::{quantize, GrayImage, QuantizedImage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistic {
    Homogeneity,
    Contrast,
    Energy,
}

impl Statistic {
    pub fn letter(self) -> char {
        match self {
            Statistic::Homogeneity => 'h',
            Statistic::Contrast => 'c',
            Statistic::Energy => 'e',
        }
    }

    /// Parses a letter string such as `"ce"` or `"h,e,c"`, keeping the
    /// given order.
    pub fn parse_set(spec: &str) -> Result<Vec<Statistic>> {
        let mut out = Vec::new();
        for ch in spec.chars().filter(|c| !matches!(c, ',' | ' ')) {
            let stat = match ch.to_ascii_lowercase() {
                'h' => Statistic::Homogeneity,
                'c' => Statistic::Contrast,
                'e' => Statistic::Energy,
                other => {
                    return Err(ScootError::InvalidConfig(format!(
                        "unknown statistic `{other}` (expected h, c or e)"
                    )))
                }
            };
            if out.contains(&stat) {
                return Err(ScootError::InvalidConfig(format!("statistic `{ch}` repeated")));
            }
            out.push(stat);
        }
        if out.is_empty() {
            return Err(ScootError::InvalidConfig("no statistics selected".into()));
        }
        Ok(out)
    }
}

/// Parameters of the style descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScootConfig {
    /// Gray grades used by the quantizer.
    pub n_levels: usize,
    /// Blocks per side of the grid.
    pub grid_k: usize,
    pub directions: Vec<Offset>,
    pub statistics: Vec<Statistic>,
    /// When false the co-occurrence path sees all 256 raw intensities.
    pub quantize_enabled: bool,
}

impl Default for ScootConfig {
    fn default() -> Self {
        Self {
            n_levels: 6,
            grid_k: 4,
            directions: default_directions(),
            statistics: vec![Statistic::Contrast, Statistic::Energy],
            quantize_enabled: true,
        }
    }
}

/// `(0,1), (-1,1), (-1,0), (-1,-1)`: down, down-left, left, up-left.
pub fn default_directions() -> Vec<Offset> {
    [(0, 1), (-1, 1), (-1, 0), (-1, -1)]
        .into_iter()
        .map(|(dx, dy)| Offset::new(dx, dy).expect("nonzero"))
        .collect()
}

impl ScootConfig {
    pub fn validate(&self) -> Result<()> {
        if self.grid_k == 0 {
            return Err(ScootError::InvalidConfig("grid_k must be at least 1".into()));
        }
        if !(2..=256).contains(&self.n_levels) {
            return Err(ScootError::LevelsOutOfRange(self.n_levels));
        }
        if self.directions.is_empty() {
            return Err(ScootError::InvalidConfig("no directions configured".into()));
        }
        if self.statistics.is_empty() {
            return Err(ScootError::InvalidConfig("no statistics selected".into()));
        }
        Ok(())
    }

    /// Grade count actually seen by quantized extractors.
    pub fn effective_levels(&self) -> usize {
        if self.quantize_enabled {
            self.n_levels
        } else {
            256
        }
    }
}

/// Describes how a feature vector was produced. Vectors are comparable only
/// when their layouts are equal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layout {
    pub extractor: String,
    pub grid_k: usize,
    pub block_dim: usize,
    /// Grade count for quantized extractors, absent otherwise.
    pub n_levels: Option<usize>,
    pub statistics: Vec<Statistic>,
    pub directions: Vec<Offset>,
}

impl Layout {
    pub fn len(&self) -> usize {
        self.grid_k * self.grid_k * self.block_dim
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for Layout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let stats: String = self.statistics.iter().map(|s| s.letter()).collect();
        write!(
            f,
            "{}[k={} dim={} levels={:?} stats={} dirs={}]",
            self.extractor,
            self.grid_k,
            self.block_dim,
            self.n_levels,
            stats,
            self.directions.len()
        )
    }
}

/// A block whose co-occurrence matrix had no pairs at some offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateBlock {
    pub block: usize,
    pub direction: Offset,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleFeatureVector {
    pub values: Vec<f64>,
    pub layout: Layout,
    pub degenerate: Vec<DegenerateBlock>,
}

impl StyleFeatureVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Euclidean distance; vectors with different layouts are rejected.
    pub fn distance(&self, other: &StyleFeatureVector) -> Result<f64> {
        if self.layout != other.layout || self.values.len() != other.values.len() {
            return Err(ScootError::LayoutMismatch {
                left: self.layout.to_string(),
                right: other.layout.to_string(),
            });
        }
        let sq: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        Ok(sq.sqrt())
    }
}

/// Tiles a `width x height` image into `k * k` blocks, row-major. Block
/// `(r, c)` spans columns `[c W / k, (c + 1) W / k)` and rows likewise.
pub fn block_grid(width: usize, height: usize, k: usize) -> Result<Vec<Region>> {
    if k == 0 {
        return Err(ScootError::InvalidConfig("grid_k must be at least 1".into()));
    }
    if width < k || height < k {
        return Err(ScootError::ImageSmallerThanGrid { width, height, k });
    }
    let mut blocks = Vec::with_capacity(k * k);
    for r in 0..k {
        for c in 0..k {
            blocks.push(Region {
                x0: c * width / k,
                x1: (c + 1) * width / k,
                y0: r * height / k,
                y1: (r + 1) * height / k,
            });
        }
    }
    Ok(blocks)
}

/// An image readied for one extractor: quantized once when the extractor
/// works on grades.
#[derive(Debug)]
pub struct PreparedImage<'a> {
    gray: &'a GrayImage,
    quantized: Option<QuantizedImage>,
}

impl<'a> PreparedImage<'a> {
    pub fn new(
        gray: &'a GrayImage,
        config: &ScootConfig,
        extractor: &dyn FeatureExtractor,
    ) -> Result<Self> {
        config.validate()?;
        let quantized = if extractor.uses_quantized() {
            Some(quantize(gray, config.effective_levels())?)
        } else {
            None
        };
        Ok(Self { gray, quantized })
    }

    pub fn input(&self) -> FeatureInput<'_> {
        match &self.quantized {
            Some(q) => FeatureInput::Quantized(q),
            None => FeatureInput::Gray(self.gray),
        }
    }
}

fn layout(config: &ScootConfig, extractor: &dyn FeatureExtractor, directions: &[Offset]) -> Layout {
    let statistics = if extractor.uses_statistics() {
        config.statistics.clone()
    } else {
        Vec::new()
    };
    Layout {
        extractor: extractor.id().to_string(),
        grid_k: config.grid_k,
        block_dim: extractor.block_dim(config),
        n_levels: extractor.uses_quantized().then(|| config.effective_levels()),
        statistics,
        directions: if extractor.uses_direction() {
            directions.to_vec()
        } else {
            Vec::new()
        },
    }
}

fn phi_prepared(
    prepared: &PreparedImage<'_>,
    config: &ScootConfig,
    d: Offset,
    extractor: &dyn FeatureExtractor,
) -> Result<StyleFeatureVector> {
    let gray = prepared.gray;
    let blocks = block_grid(gray.width(), gray.height(), config.grid_k)?;
    let dim = extractor.block_dim(config);
    let mut values = Vec::with_capacity(blocks.len() * dim);
    let mut degenerate = Vec::new();
    for (index, region) in blocks.into_iter().enumerate() {
        let block = extractor.block_features(prepared.input(), region, d, config)?;
        debug_assert_eq!(block.values.len(), dim);
        if block.degenerate {
            degenerate.push(DegenerateBlock {
                block: index,
                direction: d,
            });
        }
        values.extend(block.values);
    }
    Ok(StyleFeatureVector {
        values,
        layout: layout(config, extractor, &[d]),
        degenerate,
    })
}

/// Concatenated per-block features of `img` at a single offset.
pub fn phi(
    img: &GrayImage,
    config: &ScootConfig,
    d: Offset,
    extractor: &dyn FeatureExtractor,
) -> Result<StyleFeatureVector> {
    let prepared = PreparedImage::new(img, config, extractor)?;
    phi_prepared(&prepared, config, d, extractor)
}

/// Componentwise mean of [`phi`] over the configured directions.
/// Direction-independent extractors are evaluated once.
pub fn psi(
    img: &GrayImage,
    config: &ScootConfig,
    extractor: &dyn FeatureExtractor,
) -> Result<StyleFeatureVector> {
    let prepared = PreparedImage::new(img, config, extractor)?;
    if !extractor.uses_direction() {
        return phi_prepared(&prepared, config, config.directions[0], extractor);
    }
    let mut sum: Option<Vec<f64>> = None;
    let mut degenerate = Vec::new();
    for &d in &config.directions {
        let v = phi_prepared(&prepared, config, d, extractor)?;
        degenerate.extend(v.degenerate);
        match sum.as_mut() {
            None => sum = Some(v.values),
            Some(acc) => acc.iter_mut().zip(&v.values).for_each(|(a, b)| *a += b),
        }
    }
    let count = config.directions.len() as f64;
    let values = sum
        .unwrap_or_default()
        .into_iter()
        .map(|v| v / count)
        .collect();
    Ok(StyleFeatureVector {
        values,
        layout: layout(config, extractor, &config.directions),
        degenerate,
    })
}

/// Score from two precomputed descriptors.
pub fn score_features(a: &StyleFeatureVector, b: &StyleFeatureVector) -> Result<f64> {
    Ok(1.0 / (1.0 + a.distance(b)?))
}

/// Detailed result of one comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScootScore {
    pub score: f64,
    pub distance: f64,
    pub warnings: Vec<String>,
}

/// Scoot score with the feature distance and degenerate-block warnings.
pub fn scoot_detailed(
    gt: &GrayImage,
    syn: &GrayImage,
    config: &ScootConfig,
    extractor: &dyn FeatureExtractor,
) -> Result<ScootScore> {
    let a = psi(gt, config, extractor)?;
    let b = psi(syn, config, extractor)?;
    let distance = a.distance(&b)?;
    let mut warnings = Vec::new();
    for (side, v) in [("gt", &a), ("syn", &b)] {
        for blk in &v.degenerate {
            warnings.push(format!(
                "{side}: block {} has no pixel pairs at offset {}",
                blk.block, blk.direction
            ));
        }
    }
    Ok(ScootScore {
        score: 1.0 / (1.0 + distance),
        distance,
        warnings,
    })
}

/// `1 / (1 + ||psi(gt) - psi(syn)||)`, in `(0, 1]`.
pub fn scoot(
    gt: &GrayImage,
    syn: &GrayImage,
    config: &ScootConfig,
    extractor: &dyn FeatureExtractor,
) -> Result<f64> {
    Ok(scoot_detailed(gt, syn, config, extractor)?.score)
}
