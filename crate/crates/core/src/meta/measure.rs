use std::fmt;

use serde::{Deserialize, Serialize};

use crate::baselines::{gmsd_with, ssim_with, GmsdParams, SsimParams};
use crate::error::Result;
use crate::imageio::{center_on_canvas, resize_nn, GrayImage};
use crate::style::{scoot_detailed, FeatureExtractor, ScootConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarity {
    HigherIsBetter,
    LowerIsBetter,
}

impl Polarity {
    /// True when score `a` is strictly better than `b`.
    pub fn prefers(self, a: f64, b: f64) -> bool {
        match self {
            Polarity::HigherIsBetter => a > b,
            Polarity::LowerIsBetter => a < b,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Polarity::HigherIsBetter => Polarity::LowerIsBetter,
            Polarity::LowerIsBetter => Polarity::HigherIsBetter,
        }
    }
}

/// A score plus anything worth surfacing in a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Scored {
    pub score: f64,
    pub warnings: Vec<String>,
}

/// A full-reference similarity measure comparing a ground-truth sketch with
/// a synthesized one.
pub trait Measure: Send + Sync {
    fn id(&self) -> &str;

    fn polarity(&self) -> Polarity;

    /// Pixel-level measures need equal sizes; the harness aligns the
    /// synthesis to the ground truth's dimensions for them.
    fn needs_equal_size(&self) -> bool {
        false
    }

    fn score(&self, gt: &GrayImage, syn: &GrayImage) -> Result<f64>;

    fn score_detailed(&self, gt: &GrayImage, syn: &GrayImage) -> Result<Scored> {
        Ok(Scored {
            score: self.score(gt, syn)?,
            warnings: Vec::new(),
        })
    }
}

impl fmt::Debug for dyn Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Measure({})", self.id())
    }
}

/// How a synthesis is brought to the ground truth's size for measures
/// that compare pixel by pixel.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SizeAlignment {
    /// Centre the synthesis on a white canvas of the ground-truth size,
    /// cropping or padding as needed. Pixels keep their scale.
    #[default]
    Center,
    /// Nearest-neighbour resample to the ground-truth size.
    Resize,
}

impl std::str::FromStr for SizeAlignment {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "center" => Ok(SizeAlignment::Center),
            "resize" => Ok(SizeAlignment::Resize),
            other => Err(format!("unknown alignment `{other}` (expected center or resize)")),
        }
    }
}

impl SizeAlignment {
    pub fn apply(self, syn: &GrayImage, width: usize, height: usize) -> Result<GrayImage> {
        match self {
            SizeAlignment::Center => center_on_canvas(syn, width, height, 255),
            SizeAlignment::Resize => resize_nn(syn, width, height),
        }
    }
}

/// Scores a pair, aligning the synthesis first when the measure needs
/// equal sizes and the two differ.
pub fn score_pair(
    m: &dyn Measure,
    gt: &GrayImage,
    syn: &GrayImage,
    alignment: SizeAlignment,
) -> Result<Scored> {
    if m.needs_equal_size() && (gt.width(), gt.height()) != (syn.width(), syn.height()) {
        let aligned = alignment.apply(syn, gt.width(), gt.height())?;
        m.score_detailed(gt, &aligned)
    } else {
        m.score_detailed(gt, syn)
    }
}

/// Scoot with a given configuration and feature extractor.
#[derive(Debug)]
pub struct ScootMeasure {
    id: String,
    pub config: ScootConfig,
    pub extractor: Box<dyn FeatureExtractor>,
}

impl ScootMeasure {
    pub fn new(
        id: impl Into<String>,
        config: ScootConfig,
        extractor: Box<dyn FeatureExtractor>,
    ) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            id: id.into(),
            config,
            extractor,
        })
    }
}

impl Measure for ScootMeasure {
    fn id(&self) -> &str {
        &self.id
    }

    fn polarity(&self) -> Polarity {
        Polarity::HigherIsBetter
    }

    fn score(&self, gt: &GrayImage, syn: &GrayImage) -> Result<f64> {
        Ok(self.score_detailed(gt, syn)?.score)
    }

    fn score_detailed(&self, gt: &GrayImage, syn: &GrayImage) -> Result<Scored> {
        let s = scoot_detailed(gt, syn, &self.config, self.extractor.as_ref())?;
        Ok(Scored {
            score: s.score,
            warnings: s.warnings,
        })
    }
}

#[derive(Debug, Clone, Default)]
pub struct SsimMeasure {
    pub params: SsimParams,
}

impl Measure for SsimMeasure {
    fn id(&self) -> &str {
        "ssim"
    }

    fn polarity(&self) -> Polarity {
        Polarity::HigherIsBetter
    }

    fn needs_equal_size(&self) -> bool {
        true
    }

    fn score(&self, gt: &GrayImage, syn: &GrayImage) -> Result<f64> {
        ssim_with(gt, syn, &self.params)
    }
}

#[derive(Debug, Clone, Default)]
pub struct GmsdMeasure {
    pub params: GmsdParams,
}

impl Measure for GmsdMeasure {
    fn id(&self) -> &str {
        "gmsd"
    }

    fn polarity(&self) -> Polarity {
        Polarity::LowerIsBetter
    }

    fn needs_equal_size(&self) -> bool {
        true
    }

    fn score(&self, gt: &GrayImage, syn: &GrayImage) -> Result<f64> {
        gmsd_with(gt, syn, &self.params)
    }
}

/// Negates another measure's scores and flips its polarity, which must
/// leave every meta-measure unchanged.
pub struct Negated<M> {
    inner: M,
    id: String,
}

impl<M: Measure> Negated<M> {
    pub fn new(inner: M) -> Self {
        let id = format!("neg-{}", inner.id());
        Self { inner, id }
    }
}

impl<M: Measure> Measure for Negated<M> {
    fn id(&self) -> &str {
        &self.id
    }

    fn polarity(&self) -> Polarity {
        self.inner.polarity().flipped()
    }

    fn needs_equal_size(&self) -> bool {
        self.inner.needs_equal_size()
    }

    fn score(&self, gt: &GrayImage, syn: &GrayImage) -> Result<f64> {
        Ok(-self.inner.score(gt, syn)?)
    }
}

/// Adapts a closure into a [`Measure`].
pub struct FnMeasure<F> {
    id: String,
    polarity: Polarity,
    f: F,
}

impl<F> FnMeasure<F>
where
    F: Fn(&GrayImage, &GrayImage) -> Result<f64> + Send + Sync,
{
    pub fn new(id: impl Into<String>, polarity: Polarity, f: F) -> Self {
        Self {
            id: id.into(),
            polarity,
            f,
        }
    }
}

impl<F> Measure for FnMeasure<F>
where
    F: Fn(&GrayImage, &GrayImage) -> Result<f64> + Send + Sync,
{
    fn id(&self) -> &str {
        &self.id
    }

    fn polarity(&self) -> Polarity {
        self.polarity
    }

    fn score(&self, gt: &GrayImage, syn: &GrayImage) -> Result<f64> {
        (self.f)(gt, syn)
    }
}
