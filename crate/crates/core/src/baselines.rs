//! Pixel-level full-reference measures used as comparison points: SSIM and
//! GMSD.

use serde::{Deserialize, Serialize};

use crate::error::{Result, ScootError};
use crate::imageio::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SsimParams {
    pub window: usize,
    pub sigma: f64,
    pub k1: f64,
    pub k2: f64,
    pub dynamic_range: f64,
}

impl Default for SsimParams {
    fn default() -> Self {
        Self {
            window: 11,
            sigma: 1.5,
            k1: 0.01,
            k2: 0.03,
            dynamic_range: 255.0,
        }
    }
}

impl SsimParams {
    pub fn c1(&self) -> f64 {
        (self.k1 * self.dynamic_range).powi(2)
    }

    pub fn c2(&self) -> f64 {
        (self.k2 * self.dynamic_range).powi(2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GmsdParams {
    pub downsample: usize,
    /// Stability constant of the similarity map.
    pub c: f64,
}

impl Default for GmsdParams {
    fn default() -> Self {
        Self {
            downsample: 2,
            c: 170.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineParams {
    pub ssim: SsimParams,
    pub gmsd: GmsdParams,
}

impl BaselineParams {
    pub fn validate(&self) -> Result<()> {
        let s = &self.ssim;
        let positive = [s.sigma, s.k1, s.k2, s.dynamic_range, self.gmsd.c];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0))
            || s.window == 0
            || s.window.is_multiple_of(2)
            || self.gmsd.downsample == 0
        {
            return Err(ScootError::InvalidConfig(
                "baseline parameters must be positive and the SSIM window odd".into(),
            ));
        }
        Ok(())
    }
}

fn same_size(x: &GrayImage, y: &GrayImage) -> Result<()> {
    if x.width() != y.width() || x.height() != y.height() {
        return Err(ScootError::SizeMismatch(
            x.width(),
            x.height(),
            y.width(),
            y.height(),
        ));
    }
    Ok(())
}

fn gaussian_kernel(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size / 2) as f64;
    let raw: Vec<f64> = (0..size)
        .map(|i| {
            let t = i as f64 - c;
            (-(t * t) / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / sum).collect()
}

/// Separable valid-region filtering; output is `(w - n + 1) x (h - n + 1)`.
fn filter_valid(data: &[f64], w: usize, h: usize, kernel: &[f64]) -> Vec<f64> {
    let n = kernel.len();
    let (ow, oh) = (w - n + 1, h - n + 1);
    let mut rows = vec![0.0; ow * h];
    for y in 0..h {
        let src = &data[y * w..(y + 1) * w];
        for x in 0..ow {
            rows[y * ow + x] = kernel.iter().zip(&src[x..x + n]).map(|(k, v)| k * v).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| k * rows[(y + i) * ow + x])
                .sum();
        }
    }
    out
}

/// Mean single-scale SSIM over every window that fits inside the image.
pub fn ssim(x: &GrayImage, y: &GrayImage) -> Result<f64> {
    ssim_with(x, y, &SsimParams::default())
}

pub fn ssim_with(x: &GrayImage, y: &GrayImage, params: &SsimParams) -> Result<f64> {
    same_size(x, y)?;
    let (w, h) = (x.width(), x.height());
    if w < params.window || h < params.window {
        return Err(ScootError::ImageTooSmall {
            width: w,
            height: h,
            requirement: "SSIM needs at least one full window",
        });
    }
    let kernel = gaussian_kernel(params.window, params.sigma);
    let xs: Vec<f64> = x.pixels().iter().map(|&v| f64::from(v)).collect();
    let ys: Vec<f64> = y.pixels().iter().map(|&v| f64::from(v)).collect();
    let prod = |a: &[f64], b: &[f64]| -> Vec<f64> { a.iter().zip(b).map(|(p, q)| p * q).collect() };

    let mu_x = filter_valid(&xs, w, h, &kernel);
    let mu_y = filter_valid(&ys, w, h, &kernel);
    let xx = filter_valid(&prod(&xs, &xs), w, h, &kernel);
    let yy = filter_valid(&prod(&ys, &ys), w, h, &kernel);
    let xy = filter_valid(&prod(&xs, &ys), w, h, &kernel);

    let (c1, c2) = (params.c1(), params.c2());
    let mut total = 0.0;
    for i in 0..mu_x.len() {
        let (mx, my) = (mu_x[i], mu_y[i]);
        let var_x = xx[i] - mx * mx;
        let var_y = yy[i] - my * my;
        let cov = xy[i] - mx * my;
        total += ((2.0 * mx * my + c1) * (2.0 * cov + c2))
            / ((mx * mx + my * my + c1) * (var_x + var_y + c2));
    }
    Ok(total / mu_x.len() as f64)
}

fn downsample_mean(img: &GrayImage, f: usize) -> (Vec<f64>, usize, usize) {
    let (w, h) = (img.width() / f, img.height() / f);
    let area = (f * f) as f64;
    let mut out = Vec::with_capacity(w * h);
    for by in 0..h {
        for bx in 0..w {
            let mut s = 0u32;
            for y in by * f..(by + 1) * f {
                for x in bx * f..(bx + 1) * f {
                    s += u32::from(img.get(x, y));
                }
            }
            out.push(f64::from(s) / area);
        }
    }
    (out, w, h)
}

/// Prewitt gradient magnitude with edge pixels replicated at the border.
fn prewitt_magnitude(data: &[f64], w: usize, h: usize) -> Vec<f64> {
    let at = |x: isize, y: isize| {
        let cx = x.clamp(0, w as isize - 1) as usize;
        let cy = y.clamp(0, h as isize - 1) as usize;
        data[cy * w + cx]
    };
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h as isize {
        for x in 0..w as isize {
            let gx = (at(x + 1, y - 1) + at(x + 1, y) + at(x + 1, y + 1)
                - at(x - 1, y - 1)
                - at(x - 1, y)
                - at(x - 1, y + 1))
                / 3.0;
            let gy = (at(x - 1, y + 1) + at(x, y + 1) + at(x + 1, y + 1)
                - at(x - 1, y - 1)
                - at(x, y - 1)
                - at(x + 1, y - 1))
                / 3.0;
            out.push((gx * gx + gy * gy).sqrt());
        }
    }
    out
}

/// Gradient magnitude similarity deviation; 0 for identical images and
/// larger for worse matches.
pub fn gmsd(x: &GrayImage, y: &GrayImage) -> Result<f64> {
    gmsd_with(x, y, &GmsdParams::default())
}

pub fn gmsd_with(x: &GrayImage, y: &GrayImage, params: &GmsdParams) -> Result<f64> {
    same_size(x, y)?;
    let min = 2 * params.downsample;
    if x.width() < min || x.height() < min {
        return Err(ScootError::ImageTooSmall {
            width: x.width(),
            height: x.height(),
            requirement: "GMSD needs two pixels per side after downsampling",
        });
    }
    let (dx, w, h) = downsample_mean(x, params.downsample);
    let (dy, _, _) = downsample_mean(y, params.downsample);
    let gx = prewitt_magnitude(&dx, w, h);
    let gy = prewitt_magnitude(&dy, w, h);
    let c = params.c;
    let map: Vec<f64> = gx
        .iter()
        .zip(&gy)
        .map(|(a, b)| (2.0 * a * b + c) / (a * a + b * b + c))
        .collect();
    let n = map.len() as f64;
    let mean = map.iter().sum::<f64>() / n;
    let var = map.iter().map(|m| (m - mean) * (m - mean)).sum::<f64>() / n;
    Ok(var.sqrt())
}
