use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, ScootError>;

#[derive(Debug, Error)]
pub enum ScootError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: cannot decode image: {message}", path.display())]
    Decode { path: PathBuf, message: String },
    #[error("{}: unsupported bit depth {depth} (expected 8-bit samples)", path.display())]
    UnsupportedBitDepth { path: PathBuf, depth: u32 },
    #[error("{}: image has a zero dimension", path.display())]
    ZeroDimension { path: PathBuf },

    #[error("invalid image: {0}")]
    InvalidImage(String),
    #[error("quantization level count {0} is outside [2, 256]")]
    LevelsOutOfRange(usize),
    #[error("target dimensions must be at least 1x1, got {width}x{height}")]
    ZeroTargetSize { width: usize, height: usize },
    #[error("offset (0, 0) does not define a neighbour")]
    ZeroOffset,
    #[error("region [{x0}, {x1}) x [{y0}, {y1}) does not fit a {width}x{height} image")]
    RegionOutOfBounds {
        x0: usize,
        y0: usize,
        x1: usize,
        y1: usize,
        width: usize,
        height: usize,
    },
    #[error("statistic requires a normalized co-occurrence matrix")]
    Unnormalized,
    #[error("{width}x{height} image is smaller than a {k}x{k} block grid")]
    ImageSmallerThanGrid { width: usize, height: usize, k: usize },
    #[error("region {width}x{height} is smaller than the 3x3 minimum")]
    RegionTooSmall { width: usize, height: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("feature layouts differ: {left} vs {right}")]
    LayoutMismatch { left: String, right: String },
    #[error("image sizes differ: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    #[error("image {width}x{height} is too small: {requirement}")]
    ImageTooSmall {
        width: usize,
        height: usize,
        requirement: &'static str,
    },

    #[error("score lists differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("rank correlation needs at least two observations, got {0}")]
    TooFewObservations(usize),
    #[error("rank correlation is undefined: a score list has zero rank variance")]
    ZeroRankVariance,
    #[error("{}: manifest error at `{key}`: {message}", path.display())]
    Manifest {
        path: PathBuf,
        key: String,
        message: String,
    },
    #[error("ranked pair set is empty")]
    EmptyPairSet,
    #[error("unknown measure `{id}`; valid ids: {valid}")]
    UnknownMeasure { id: String, valid: String },
    #[error("measure `{measure}` failed on {gt} vs {syn}: {source}")]
    Scoring {
        measure: String,
        gt: String,
        syn: String,
        #[source]
        source: Box<ScootError>,
    },
    #[error("cannot build worker pool: {0}")]
    WorkerPool(String),
}

impl ScootError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        ScootError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn decode(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        ScootError::Decode {
            path: path.into(),
            message: message.into(),
        }
    }
}
