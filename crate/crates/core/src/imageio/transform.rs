use super::{GrayImage, QuantizedImage};
use crate::error::{Result, ScootError};

/// Uniform binning into `n_levels` grades: `min(v * n_levels / 256, n_levels - 1)`.
pub fn quantize(img: &GrayImage, n_levels: usize) -> Result<QuantizedImage> {
    if !(2..=256).contains(&n_levels) {
        return Err(ScootError::LevelsOutOfRange(n_levels));
    }
    let mut table = [0u8; 256];
    for (v, slot) in table.iter_mut().enumerate() {
        *slot = (v * n_levels / 256).min(n_levels - 1) as u8;
    }
    let grades = img.pixels().iter().map(|&v| table[v as usize]).collect();
    QuantizedImage::new(img.width(), img.height(), grades, n_levels)
}

/// Nearest-neighbour resize with the pixel-centre convention:
/// source index `floor((x + 0.5) * W / W')`, clamped to the last column/row.
pub fn resize_nn(img: &GrayImage, new_width: usize, new_height: usize) -> Result<GrayImage> {
    if new_width == 0 || new_height == 0 {
        return Err(ScootError::ZeroTargetSize {
            width: new_width,
            height: new_height,
        });
    }
    let (w, h) = (img.width(), img.height());
    let src_index = |dst: usize, src_len: usize, dst_len: usize| {
        // (2 dst + 1) * src / (2 dst_len) is the exact integer form of the centre formula
        ((2 * dst + 1) * src_len / (2 * dst_len)).min(src_len - 1)
    };
    let xs: Vec<usize> = (0..new_width).map(|x| src_index(x, w, new_width)).collect();
    let mut pixels = Vec::with_capacity(new_width * new_height);
    for y in 0..new_height {
        let row = img.row(src_index(y, h, new_height));
        pixels.extend(xs.iter().map(|&sx| row[sx]));
    }
    GrayImage::new(new_width, new_height, pixels)
}

fn sin_cos_degrees(degrees: f64) -> (f64, f64) {
    let a = degrees.rem_euclid(360.0);
    // quarter turns are snapped so they permute pixels exactly
    if a == 0.0 {
        (0.0, 1.0)
    } else if a == 90.0 {
        (1.0, 0.0)
    } else if a == 180.0 {
        (0.0, -1.0)
    } else if a == 270.0 {
        (-1.0, 0.0)
    } else {
        a.to_radians().sin_cos()
    }
}

/// Counter-clockwise rotation about the image centre, same output size.
///
/// Each output pixel takes the nearest source pixel under the inverse
/// rotation; samples that land outside the source take `fill`.
pub fn rotate_nn(img: &GrayImage, degrees_ccw: f64, fill: u8) -> GrayImage {
    let (w, h) = (img.width(), img.height());
    let (sin, cos) = sin_cos_degrees(degrees_ccw);
    let cx = (w as f64 - 1.0) / 2.0;
    let cy = (h as f64 - 1.0) / 2.0;
    let mut pixels = Vec::with_capacity(w * h);
    for y in 0..h {
        // rows grow downwards, so flip to a y-up frame for the rotation
        let v = cy - y as f64;
        for x in 0..w {
            let u = x as f64 - cx;
            let su = cos * u + sin * v;
            let sv = -sin * u + cos * v;
            let sx = (cx + su).round();
            let sy = (cy - sv).round();
            let inside = sx >= 0.0 && sy >= 0.0 && sx < w as f64 && sy < h as f64;
            pixels.push(if inside {
                img.get(sx as usize, sy as usize)
            } else {
                fill
            });
        }
    }
    GrayImage::new(w, h, pixels).expect("rotation preserves dimensions")
}

/// Places `img` centred on a `width` x `height` canvas of `fill`.
///
/// Larger sources are cropped symmetrically (the extra odd pixel goes to
/// the right/bottom); smaller ones are padded.
pub fn center_on_canvas(img: &GrayImage, width: usize, height: usize, fill: u8) -> Result<GrayImage> {
    if width == 0 || height == 0 {
        return Err(ScootError::ZeroTargetSize { width, height });
    }
    let shift = |src: usize, dst: usize| src as isize / 2 - dst as isize / 2;
    let (ox, oy) = (shift(img.width(), width), shift(img.height(), height));
    GrayImage::from_fn(width, height, |x, y| {
        let (sx, sy) = (x as isize + ox, y as isize + oy);
        if sx < 0 || sy < 0 || sx >= img.width() as isize || sy >= img.height() as isize {
            fill
        } else {
            img.get(sx as usize, sy as usize)
        }
    })
}

/// Dark and light stroke layers of a sketch; removed pixels are white.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrokeSplit {
    pub dark: GrayImage,
    pub light: GrayImage,
}

/// Splits at `threshold`: `dark` keeps values below it, `light` keeps the rest.
pub fn split_strokes(img: &GrayImage, threshold: u8) -> StrokeSplit {
    let (w, h) = (img.width(), img.height());
    let dark = img
        .pixels()
        .iter()
        .map(|&v| if v < threshold { v } else { 255 })
        .collect();
    let light = img
        .pixels()
        .iter()
        .map(|&v| if v >= threshold { v } else { 255 })
        .collect();
    StrokeSplit {
        dark: GrayImage::new(w, h, dark).expect("same dimensions"),
        light: GrayImage::new(w, h, light).expect("same dimensions"),
    }
}
