//! Grayscale rasters, quantization, and the geometric/photometric
//! perturbations used by the meta-measures.

mod codec;
mod transform;

pub use codec::{load_gray, luma, read_pgm, save_pgm, write_pgm};
pub use transform::{center_on_canvas, quantize, resize_nn, rotate_nn, split_strokes, StrokeSplit};

use crate::error::{Result, ScootError};

/// 8-bit single-channel raster in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(ScootError::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(ScootError::InvalidImage(format!(
                "{} pixels supplied for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> u8,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.pixels[y * self.width..(y + 1) * self.width]
    }
}

/// Per-pixel grade indices in `[0, n_levels)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedImage {
    width: usize,
    height: usize,
    grades: Vec<u8>,
    n_levels: usize,
}

impl QuantizedImage {
    pub fn new(width: usize, height: usize, grades: Vec<u8>, n_levels: usize) -> Result<Self> {
        if !(2..=256).contains(&n_levels) {
            return Err(ScootError::LevelsOutOfRange(n_levels));
        }
        if width == 0 || height == 0 || grades.len() != width * height {
            return Err(ScootError::InvalidImage(format!(
                "{} grades supplied for a {width}x{height} image",
                grades.len()
            )));
        }
        if let Some(&g) = grades.iter().find(|&&g| g as usize >= n_levels) {
            return Err(ScootError::InvalidImage(format!(
                "grade {g} is not below n_levels {n_levels}"
            )));
        }
        Ok(Self {
            width,
            height,
            grades,
            n_levels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn n_levels(&self) -> usize {
        self.n_levels
    }

    pub fn grades(&self) -> &[u8] {
        &self.grades
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.grades[y * self.width + x]
    }
}
