//! Style similarity for face sketches.
//!
//! The [`style`] module computes the Scoot score: images are quantized to a
//! few gray grades, tiled into a `k x k` grid, and each block is described
//! by statistics of its gray-level co-occurrence matrix ([`cooccur`]). The
//! block descriptors, averaged over four neighbour offsets, are compared by
//! Euclidean distance and mapped to `(0, 1]`.
//!
//! ```no_run
//! use scoot::imageio::load_gray;
//! use scoot::style::{scoot, GlcmExtractor, ScootConfig};
//!
//! let gt = load_gray("gt.pgm")?;
//! let syn = load_gray("synthesized.png")?;
//! let score = scoot(&gt, &syn, &ScootConfig::default(), &GlcmExtractor)?;
//! println!("{score:.4}");
//! # Ok::<(), scoot::ScootError>(())
//! ```
//!
//! [`meta`] evaluates any [`meta::Measure`] (Scoot variants, or the SSIM and
//! GMSD baselines from [`baselines`]) for stability under slight resizing
//! and rotation of the ground truth, for content capture, and for agreement
//! with human-ranked pairs. [`cli`] holds the commands behind the `scoot`
//! binary.

pub mod baselines;
pub mod cli;
pub mod cooccur;
mod error;
pub mod imageio;
pub mod meta;
pub mod style;
pub mod synthetic;

pub use error::{Result, ScootError};
