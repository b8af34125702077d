//! Command implementations behind the `scoot` binary: the measure registry,
//! run configuration, and JSON/CSV reports.
//!
//! Every command returns the full report text so the binary only parses
//! flags and prints. Reports are deterministic: keys appear in a fixed
//! order, records follow sorted ids, and floats use the shortest
//! representation that parses back to the same value.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::BaselineParams;
use crate::error::{Result, ScootError};
use crate::imageio::load_gray;
use crate::meta::{
    mm4_human_agreement, run_dataset_meta, score_pair, BenchmarkDataset, GmsdMeasure, Measure,
    MetaId, MetaOptions, MetaResult, Polarity, RankedPairSet, ScootMeasure, SsimMeasure,
};
use crate::style::{
    psi, FeatureExtractor, GlcmExtractor, GlrlmExtractor, Layout, ScootConfig, SobelExtractor,
    Statistic,
};

pub const TOOL: &str = "scoot";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Registered measure ids.
pub const MEASURE_IDS: &[&str] = &[
    "scoot-ce",
    "scoot-h",
    "scoot-e",
    "scoot-c",
    "scoot-ch",
    "scoot-he",
    "scoot-hec",
    "scoot-ce-nq",
    "scoot-glrlm",
    "scoot-sobel",
    "ssim",
    "gmsd",
];

fn unknown_measure(id: &str) -> ScootError {
    ScootError::UnknownMeasure {
        id: id.to_string(),
        valid: MEASURE_IDS.join(", "),
    }
}

/// Default style configuration for a registered Scoot variant.
pub fn scoot_defaults(id: &str) -> Result<ScootConfig> {
    let stats = |s: &str| Statistic::parse_set(s).expect("static statistic set");
    let base = ScootConfig::default();
    Ok(match id {
        "scoot-ce" | "scoot-glrlm" | "scoot-sobel" | "ssim" | "gmsd" => base,
        "scoot-h" => ScootConfig { statistics: stats("h"), ..base },
        "scoot-e" => ScootConfig { statistics: stats("e"), ..base },
        "scoot-c" => ScootConfig { statistics: stats("c"), ..base },
        "scoot-ch" => ScootConfig { statistics: stats("ch"), ..base },
        "scoot-he" => ScootConfig { statistics: stats("he"), ..base },
        "scoot-hec" => ScootConfig { statistics: stats("hec"), ..base },
        "scoot-ce-nq" => ScootConfig { quantize_enabled: false, ..base },
        other => return Err(unknown_measure(other)),
    })
}

fn extractor_for(id: &str) -> Option<Box<dyn FeatureExtractor>> {
    match id {
        "scoot-glrlm" => Some(Box::new(GlrlmExtractor)),
        "scoot-sobel" => Some(Box::new(SobelExtractor)),
        s if s.starts_with("scoot-") && MEASURE_IDS.contains(&s) => Some(Box::new(GlcmExtractor)),
        _ => None,
    }
}

/// Builds a registered measure from explicit parameters.
pub fn build_measure(
    id: &str,
    scoot: &ScootConfig,
    baselines: &BaselineParams,
) -> Result<Box<dyn Measure>> {
    baselines.validate()?;
    match id {
        "ssim" => Ok(Box::new(SsimMeasure { params: baselines.ssim })),
        "gmsd" => Ok(Box::new(GmsdMeasure { params: baselines.gmsd })),
        _ => {
            let extractor = extractor_for(id).ok_or_else(|| unknown_measure(id))?;
            Ok(Box::new(ScootMeasure::new(id, scoot.clone(), extractor)?))
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = ScootError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(ScootError::InvalidConfig(format!(
                "unknown output format `{other}` (expected json or csv)"
            ))),
        }
    }
}

/// Everything needed to reproduce a run; echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub measure: String,
    pub scoot: ScootConfig,
    pub baselines: BaselineParams,
    pub meta: MetaOptions,
    pub format: OutputFormat,
}

impl RunConfig {
    /// Registry defaults for `measure`.
    pub fn for_measure(measure: &str) -> Result<Self> {
        Ok(Self {
            measure: measure.to_string(),
            scoot: scoot_defaults(measure)?,
            baselines: BaselineParams::default(),
            meta: MetaOptions::default(),
            format: OutputFormat::Json,
        })
    }

    pub fn build_measure(&self) -> Result<Box<dyn Measure>> {
        build_measure(&self.measure, &self.scoot, &self.baselines)
    }

    /// The echo without parallelism, so reports do not depend on it.
    fn echo(&self) -> RunConfig {
        let mut c = self.clone();
        c.meta.jobs = 0;
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub gt: String,
    pub syn: String,
    pub score: f64,
    #[serde(default)]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub tool: String,
    pub version: String,
    pub measure: String,
    pub polarity: Polarity,
    pub config: RunConfig,
    pub records: Vec<ScoreRecord>,
}

impl ScoreReport {
    /// Score of the first record, for single-pair reports.
    pub fn score(&self) -> Option<f64> {
        self.records.first().map(|r| r.score)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetaReport {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub result: MetaResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub image: String,
    pub layout: Layout,
    pub values: Vec<f64>,
    pub warnings: Vec<String>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn render_scores(report: &ScoreReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => to_json(report),
        OutputFormat::Csv => {
            let mut out = String::from("gt,syn,measure,score\n");
            for r in &report.records {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    csv_field(&r.gt),
                    csv_field(&r.syn),
                    csv_field(&report.measure),
                    r.score
                );
            }
            out
        }
    }
}

fn score_records(
    measure: &dyn Measure,
    pairs: &[(String, String)],
    opts: &MetaOptions,
) -> Result<Vec<ScoreRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| ScootError::WorkerPool(e.to_string()))?;
    pool.install(|| {
        pairs
            .par_iter()
            .map(|(gt_path, syn_path)| {
                let gt = load_gray(gt_path)?;
                let syn = load_gray(syn_path)?;
                let scored = score_pair(measure, &gt, &syn, opts.alignment).map_err(|e| ScootError::Scoring {
                    measure: measure.id().to_string(),
                    gt: gt_path.clone(),
                    syn: syn_path.clone(),
                    source: Box::new(e),
                })?;
                if !scored.score.is_finite() {
                    return Err(ScootError::InvalidConfig(format!(
                        "measure `{}` produced a non-finite score for {gt_path} vs {syn_path}",
                        measure.id()
                    )));
                }
                Ok(ScoreRecord {
                    gt: gt_path.clone(),
                    syn: syn_path.clone(),
                    score: scored.score,
                    warnings: scored.warnings,
                })
            })
            .collect()
    })
}

fn score_report(cfg: &RunConfig, pairs: &[(String, String)]) -> Result<ScoreReport> {
    let measure = cfg.build_measure()?;
    let records = score_records(measure.as_ref(), pairs, &cfg.meta)?;
    Ok(ScoreReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        measure: measure.id().to_string(),
        polarity: measure.polarity(),
        config: cfg.echo(),
        records,
    })
}

/// Scores one synthesized sketch against its ground truth.
pub fn cmd_score(gt: &Path, syn: &Path, cfg: &RunConfig) -> Result<String> {
    let pairs = [(gt.display().to_string(), syn.display().to_string())];
    Ok(render_scores(&score_report(cfg, &pairs)?, cfg.format))
}

/// Input of the `batch` command.
#[derive(Debug, Clone, Copy)]
pub enum BatchSource<'a> {
    /// Every synthesis against its ground truth, by algorithm then photo.
    Manifest(&'a Path),
    /// Both sides of every ranked pair, in file order.
    Pairs(&'a Path),
}

pub fn cmd_batch(source: BatchSource<'_>, cfg: &RunConfig) -> Result<String> {
    let show = |p: &Path| p.display().to_string();
    let pairs: Vec<(String, String)> = match source {
        BatchSource::Manifest(path) => {
            let ds = BenchmarkDataset::load(path)?;
            let mut out = Vec::new();
            for algo in ds.algorithms() {
                for photo in ds.photos() {
                    out.push((
                        show(ds.gt_path(photo).expect("validated")),
                        show(ds.synthesis_path(algo, photo).expect("validated")),
                    ));
                }
            }
            out
        }
        BatchSource::Pairs(path) => RankedPairSet::load(path)?
            .entries()
            .iter()
            .flat_map(|e| [(show(&e.gt), show(&e.better)), (show(&e.gt), show(&e.worse))])
            .collect(),
    };
    Ok(render_scores(&score_report(cfg, &pairs)?, cfg.format))
}

/// Runs a meta-measure. mm1..mm3 read a dataset manifest, mm4 a ranked
/// pair set.
pub fn run_meta(
    meta: MetaId,
    manifest: Option<&Path>,
    pairs: Option<&Path>,
    cfg: &RunConfig,
) -> Result<MetaReport> {
    let measure = cfg.build_measure()?;
    let result = match meta {
        MetaId::Mm4 => {
            let path = pairs.ok_or_else(|| {
                ScootError::InvalidConfig("mm4 needs a ranked pair set (--pairs)".into())
            })?;
            mm4_human_agreement(&RankedPairSet::load(path)?, measure.as_ref(), &cfg.meta)?
        }
        _ => {
            let path = manifest.ok_or_else(|| {
                ScootError::InvalidConfig(format!("{meta} needs a dataset manifest (--manifest)"))
            })?;
            run_dataset_meta(meta, &BenchmarkDataset::load(path)?, measure.as_ref(), &cfg.meta)?
        }
    };
    Ok(MetaReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        config: cfg.echo(),
        result,
    })
}

pub fn cmd_meta(
    meta: MetaId,
    manifest: Option<&Path>,
    pairs: Option<&Path>,
    cfg: &RunConfig,
) -> Result<String> {
    let report = run_meta(meta, manifest, pairs, cfg)?;
    Ok(match cfg.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let r = &report.result;
            let mut out = String::from("meta,measure,item,value,flagged\n");
            for item in &r.items {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.meta,
                    csv_field(&r.measure),
                    csv_field(&item.id),
                    item.value,
                    item.flagged
                );
            }
            let _ = writeln!(
                out,
                "{},{},aggregate,{},{}",
                r.meta,
                csv_field(&r.measure),
                r.aggregate,
                r.flagged() > 0
            );
            out
        }
    })
}

/// Dumps the direction-averaged style descriptor of one image.
pub fn cmd_features(img: &Path, cfg: &RunConfig) -> Result<String> {
    let extractor = extractor_for(&cfg.measure).ok_or_else(|| {
        ScootError::InvalidConfig(format!(
            "measure `{}` has no style descriptor; use a scoot-* id",
            cfg.measure
        ))
    })?;
    let gray = load_gray(img)?;
    let v = psi(&gray, &cfg.scoot, extractor.as_ref())?;
    let warnings = v
        .degenerate
        .iter()
        .map(|b| format!("block {} has no pixel pairs at offset {}", b.block, b.direction))
        .collect();
    let report = FeatureReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        config: cfg.echo(),
        image: img.display().to_string(),
        layout: v.layout,
        values: v.values,
        warnings,
    };
    Ok(match cfg.format {
        OutputFormat::Json => to_json(&report),
        OutputFormat::Csv => {
            let mut out = String::from("index,value\n");
            for (i, v) in report.values.iter().enumerate() {
                let _ = writeln!(out, "{i},{v}");
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_registered_id_builds() {
        for id in MEASURE_IDS {
            let cfg = RunConfig::for_measure(id).unwrap();
            let m = cfg.build_measure().unwrap();
            assert_eq!(m.id(), *id);
        }
        assert_eq!(RunConfig::for_measure("gmsd").unwrap().build_measure().unwrap().polarity(), Polarity::LowerIsBetter);
    }

    #[test]
    fn unknown_id_lists_valid_ones() {
        let err = RunConfig::for_measure("fsim").unwrap_err().to_string();
        assert!(err.contains("fsim"));
        assert!(err.contains("scoot-ce") && err.contains("gmsd"));
        assert!(build_measure("scoot-x", &ScootConfig::default(), &BaselineParams::default()).is_err());
    }

    #[test]
    fn registry_statistics() {
        assert_eq!(scoot_defaults("scoot-hec").unwrap().statistics.len(), 3);
        assert!(!scoot_defaults("scoot-ce-nq").unwrap().quantize_enabled);
        assert_eq!(scoot_defaults("scoot-ce").unwrap(), ScootConfig::default());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("a.pgm"), "a.pgm");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn format_parsing() {
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert!("xml".parse::<OutputFormat>().is_err());
    }

    #[test]
    fn echo_round_trips() {
        let cfg = RunConfig::for_measure("scoot-he").unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&json).unwrap(), cfg);
    }
}
