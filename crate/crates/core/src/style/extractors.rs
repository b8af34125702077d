use std::fmt::Debug;

use super::{glrlm::glrlm_features, sobel::sobel_features, ScootConfig, Statistic};
use crate::cooccur::{Offset, Region, SparseCooccurrence};
use crate::error::{Result, ScootError};
use crate::imageio::{GrayImage, QuantizedImage};

/// The raster an extractor reads: grades for quantized extractors, raw
/// intensities otherwise.
#[derive(Debug, Clone, Copy)]
pub enum FeatureInput<'a> {
    Quantized(&'a QuantizedImage),
    Gray(&'a GrayImage),
}

/// Fixed-length features of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFeatures {
    pub values: Vec<f64>,
    /// The block offered no pixel pairs for the requested offset.
    pub degenerate: bool,
}

/// Per-block feature plug-in for [`super::phi`].
pub trait FeatureExtractor: Debug + Send + Sync {
    fn id(&self) -> &str;

    /// Length of [`BlockFeatures::values`] under `config`.
    fn block_dim(&self, config: &ScootConfig) -> usize;

    fn uses_quantized(&self) -> bool;

    fn uses_direction(&self) -> bool;

    /// Whether `config.statistics` selects what is emitted.
    fn uses_statistics(&self) -> bool {
        false
    }

    fn block_features(
        &self,
        input: FeatureInput<'_>,
        region: Region,
        d: Offset,
        config: &ScootConfig,
    ) -> Result<BlockFeatures>;
}

fn expect_quantized<'a>(id: &str, input: FeatureInput<'a>) -> Result<&'a QuantizedImage> {
    match input {
        FeatureInput::Quantized(q) => Ok(q),
        FeatureInput::Gray(_) => Err(ScootError::InvalidConfig(format!(
            "extractor `{id}` needs a quantized image"
        ))),
    }
}

/// Haralick statistics of the normalized per-block co-occurrence matrix,
/// in the order given by `config.statistics`.
#[derive(Debug, Clone, Copy, Default)]
pub struct GlcmExtractor;

impl FeatureExtractor for GlcmExtractor {
    fn id(&self) -> &str {
        "glcm"
    }

    fn block_dim(&self, config: &ScootConfig) -> usize {
        config.statistics.len()
    }

    fn uses_quantized(&self) -> bool {
        true
    }

    fn uses_direction(&self) -> bool {
        true
    }

    fn uses_statistics(&self) -> bool {
        true
    }

    fn block_features(
        &self,
        input: FeatureInput<'_>,
        region: Region,
        d: Offset,
        config: &ScootConfig,
    ) -> Result<BlockFeatures> {
        let q = expect_quantized(self.id(), input)?;
        let m = SparseCooccurrence::new(q, region, d)?;
        let values = config
            .statistics
            .iter()
            .map(|s| match s {
                Statistic::Homogeneity => m.homogeneity(),
                Statistic::Contrast => m.contrast(),
                Statistic::Energy => m.energy(),
            })
            .collect();
        Ok(BlockFeatures {
            values,
            degenerate: m.is_degenerate(),
        })
    }
}

/// Five run-length statistics (SRE, LRE, GLN, RLN, RP) per block.
#[derive(Debug, Clone, Copy, Default)]
pub struct GlrlmExtractor;

impl FeatureExtractor for GlrlmExtractor {
    fn id(&self) -> &str {
        "glrlm"
    }

    fn block_dim(&self, _: &ScootConfig) -> usize {
        5
    }

    fn uses_quantized(&self) -> bool {
        true
    }

    fn uses_direction(&self) -> bool {
        true
    }

    fn block_features(
        &self,
        input: FeatureInput<'_>,
        region: Region,
        d: Offset,
        _: &ScootConfig,
    ) -> Result<BlockFeatures> {
        let q = expect_quantized(self.id(), input)?;
        Ok(BlockFeatures {
            values: glrlm_features(q, region, d)?.to_vec(),
            degenerate: false,
        })
    }
}

/// Mean and spread of the Sobel gradient magnitude on raw intensities.
#[derive(Debug, Clone, Copy, Default)]
pub struct SobelExtractor;

impl FeatureExtractor for SobelExtractor {
    fn id(&self) -> &str {
        "sobel"
    }

    fn block_dim(&self, _: &ScootConfig) -> usize {
        2
    }

    fn uses_quantized(&self) -> bool {
        false
    }

    fn uses_direction(&self) -> bool {
        false
    }

    fn block_features(
        &self,
        input: FeatureInput<'_>,
        region: Region,
        _: Offset,
        _: &ScootConfig,
    ) -> Result<BlockFeatures> {
        let img = match input {
            FeatureInput::Gray(g) => g,
            FeatureInput::Quantized(_) => {
                return Err(ScootError::InvalidConfig(
                    "extractor `sobel` reads raw intensities".into(),
                ))
            }
        };
        Ok(BlockFeatures {
            values: sobel_features(img, region)?.to_vec(),
            degenerate: false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::style::{psi, scoot};

    fn stripes(w: usize, h: usize) -> GrayImage {
        GrayImage::from_fn(w, h, |x, y| if (x / 2 + y) % 3 == 0 { 30 } else { 240 }).unwrap()
    }

    #[test]
    fn glrlm_descriptor_shape() {
        let cfg = ScootConfig::default();
        let v = psi(&stripes(32, 32), &cfg, &GlrlmExtractor).unwrap();
        assert_eq!(v.len(), 16 * 5);
        assert!(v.values.iter().all(|x| x.is_finite()));
        assert_eq!(scoot(&stripes(32, 32), &stripes(32, 32), &cfg, &GlrlmExtractor).unwrap(), 1.0);
    }

    #[test]
    fn sobel_ignores_directions_and_quantization() {
        let cfg = ScootConfig::default();
        let v = psi(&stripes(32, 32), &cfg, &SobelExtractor).unwrap();
        assert_eq!(v.len(), 16 * 2);
        assert!(v.layout.directions.is_empty());
        assert_eq!(v.layout.n_levels, None);
        let other = ScootConfig { n_levels: 9, ..Default::default() };
        assert_eq!(psi(&stripes(32, 32), &other, &SobelExtractor).unwrap(), v);
    }

    #[test]
    fn sobel_needs_three_pixel_blocks() {
        // 8x8 over a 4x4 grid gives 2x2 blocks
        let img = stripes(8, 8);
        assert!(matches!(
            psi(&img, &ScootConfig::default(), &SobelExtractor),
            Err(ScootError::RegionTooSmall { .. })
        ));
    }

    #[test]
    fn wrong_input_kind_rejected() {
        let img = stripes(4, 4);
        let d = Offset::new(1, 0).unwrap();
        let cfg = ScootConfig::default();
        let r = Region::whole(4, 4);
        assert!(GlcmExtractor.block_features(FeatureInput::Gray(&img), r, d, &cfg).is_err());
        let q = crate::imageio::quantize(&img, 6).unwrap();
        assert!(SobelExtractor.block_features(FeatureInput::Quantized(&q), r, d, &cfg).is_err());
    }
}
