//! Procedural pencil-sketch images and on-disk benchmark fixtures.
//!
//! Everything here is seeded, so a fixture written twice with the same
//! arguments is byte-identical. The generated faces are crude but carry the
//! ingredients the measures react to: dark hair hatching, contour strokes,
//! light shading strokes, and paper grain.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, ScootError};
use crate::imageio::{save_pgm, GrayImage};
use crate::meta::{BenchmarkDataset, RankedPair, RankedPairSet};

struct Canvas {
    w: usize,
    h: usize,
    px: Vec<u8>,
}

impl Canvas {
    /// Pencil marks only ever darken.
    fn mark(&mut self, x: f64, y: f64, v: u8) {
        let (xi, yi) = (x.round(), y.round());
        if xi >= 0.0 && yi >= 0.0 && (xi as usize) < self.w && (yi as usize) < self.h {
            let p = &mut self.px[yi as usize * self.w + xi as usize];
            *p = (*p).min(v);
        }
    }

    fn line(&mut self, (x0, y0): (f64, f64), (x1, y1): (f64, f64), v: u8, thick: usize) {
        let steps = ((x1 - x0).abs().max((y1 - y0).abs()) * 2.0).ceil().max(1.0) as usize;
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let (x, y) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
            for k in 0..thick {
                self.mark(x + k as f64 * 0.7, y + k as f64 * 0.7, v);
            }
        }
    }

    fn ellipse_outline(&mut self, c: (f64, f64), r: (f64, f64), v: u8, thick: usize) {
        let n = ((r.0 + r.1) * 4.0) as usize;
        for i in 0..n {
            let a = i as f64 / n as f64 * std::f64::consts::TAU;
            let b = (i + 1) as f64 / n as f64 * std::f64::consts::TAU;
            self.line(
                (c.0 + r.0 * a.cos(), c.1 + r.1 * a.sin()),
                (c.0 + r.0 * b.cos(), c.1 + r.1 * b.sin()),
                v,
                thick,
            );
        }
    }

    fn filled_ellipse(&mut self, c: (f64, f64), r: (f64, f64), v: u8) {
        for y in 0..self.h {
            for x in 0..self.w {
                let (dx, dy) = ((x as f64 - c.0) / r.0, (y as f64 - c.1) / r.1);
                if dx * dx + dy * dy <= 1.0 {
                    self.mark(x as f64, y as f64, v);
                }
            }
        }
    }

    /// Parallel strokes at `angle` clipped to `inside`.
    fn hatch(
        &mut self,
        rng: &mut impl Rng,
        angle: f64,
        spacing: f64,
        tone: (u8, u8),
        inside: impl Fn(f64, f64) -> bool,
    ) {
        let (dir_x, dir_y) = (angle.cos(), angle.sin());
        let (nx, ny) = (-dir_y, dir_x);
        let reach = (self.w + self.h) as f64;
        let (cx, cy) = (self.w as f64 / 2.0, self.h as f64 / 2.0);
        let mut offset = -reach;
        while offset < reach {
            let v = rng.gen_range(tone.0..=tone.1);
            let mut t = -reach;
            while t < reach {
                let x = cx + nx * offset + dir_x * t;
                let y = cy + ny * offset + dir_y * t;
                if inside(x, y) && rng.gen_bool(0.93) {
                    self.mark(x, y, v);
                }
                t += 0.5;
            }
            offset += spacing * rng.gen_range(0.8..1.25);
        }
    }
}

/// A face-like pencil sketch: hair hatching, contour, eyes, mouth, light
/// cheek shading and paper grain, on a near-white background.
pub fn sketch(width: usize, height: usize, seed: u64) -> Result<GrayImage> {
    if width < 16 || height < 16 {
        return Err(ScootError::ImageTooSmall {
            width,
            height,
            requirement: "sketches need at least 16x16 pixels",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (width as f64, height as f64);
    let mut c = Canvas {
        w: width,
        h: height,
        px: (0..width * height).map(|_| rng.gen_range(236..=252)).collect(),
    };

    let face_c = (w * rng.gen_range(0.46..0.54), h * rng.gen_range(0.54..0.6));
    let face_r = (w * rng.gen_range(0.26..0.33), h * rng.gen_range(0.3..0.36));
    let hair_line = face_c.1 - face_r.1 * rng.gen_range(0.55..0.8);
    let hair_angle = rng.gen_range(0.9..2.2);
    let hair_spacing = rng.gen_range(2.2..4.0);
    let hair_side = face_r.0 * rng.gen_range(1.05..1.25);
    c.hatch(&mut rng, hair_angle, hair_spacing, (25, 80), |x, y| {
        let dx = (x - face_c.0) / hair_side;
        let dy = (y - face_c.1) / (face_r.1 * 1.25);
        y > h * 0.04 && (y < hair_line || (dx.abs() > 0.82 && dx * dx + dy * dy < 1.0 && y < face_c.1))
            && dx * dx + dy * dy < 1.35
    });

    let shade_angle = rng.gen_range(-0.6..0.6);
    let cheek = if rng.gen_bool(0.5) { -1.0 } else { 1.0 };
    let shade_spacing = rng.gen_range(2.5..4.5);
    c.hatch(&mut rng, shade_angle, shade_spacing, (172, 215), |x, y| {
        let dx = (x - (face_c.0 + cheek * face_r.0 * 0.5)) / (face_r.0 * 0.35);
        let dy = (y - (face_c.1 + face_r.1 * 0.2)) / (face_r.1 * 0.35);
        dx * dx + dy * dy < 1.0
    });

    c.ellipse_outline(face_c, face_r, rng.gen_range(55..95), 2);
    let eye_y = face_c.1 - face_r.1 * rng.gen_range(0.1..0.25);
    let eye_dx = face_r.0 * rng.gen_range(0.35..0.48);
    let eye_r = (face_r.0 * 0.16, face_r.1 * 0.07);
    for side in [-1.0, 1.0] {
        let ec = (face_c.0 + side * eye_dx, eye_y);
        c.ellipse_outline(ec, eye_r, 70, 1);
        c.filled_ellipse(ec, (eye_r.0 * 0.4, eye_r.1 * 0.8), rng.gen_range(20..45));
        c.line(
            (ec.0 - eye_r.0, ec.1 - eye_r.1 * 2.2),
            (ec.0 + eye_r.0, ec.1 - eye_r.1 * 2.6),
            rng.gen_range(40..80),
            2,
        );
    }
    let nose_top = (face_c.0, eye_y + face_r.1 * 0.1);
    let nose_tip = (face_c.0 + face_r.0 * rng.gen_range(-0.1..0.1), face_c.1 + face_r.1 * 0.25);
    c.line(nose_top, nose_tip, rng.gen_range(100..150), 1);
    let mouth_y = face_c.1 + face_r.1 * rng.gen_range(0.45..0.6);
    let mouth_w = face_r.0 * rng.gen_range(0.3..0.45);
    c.line(
        (face_c.0 - mouth_w, mouth_y),
        (face_c.0 + mouth_w, mouth_y + rng.gen_range(-2.0..2.0)),
        rng.gen_range(50..90),
        2,
    );
    GrayImage::new(width, height, c.px)
}

/// Ways a fixture "algorithm" departs from the ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Degradation {
    /// Box blur of the given radius; smooths stroke texture away.
    BoxBlur(usize),
    /// Additive uniform noise of the given amplitude.
    Noise(u8),
    /// Content translated by whole pixels, white fill.
    Shift(i32, i32),
    /// Intensities pulled toward mid-gray by the given fraction.
    Flatten(f64),
}

impl Degradation {
    pub fn apply(self, img: &GrayImage, seed: u64) -> GrayImage {
        let (w, h) = (img.width(), img.height());
        match self {
            Degradation::BoxBlur(r) => GrayImage::from_fn(w, h, |x, y| {
                let (x0, x1) = (x.saturating_sub(r), (x + r).min(w - 1));
                let (y0, y1) = (y.saturating_sub(r), (y + r).min(h - 1));
                let mut sum = 0u32;
                for yy in y0..=y1 {
                    for xx in x0..=x1 {
                        sum += u32::from(img.get(xx, yy));
                    }
                }
                let n = ((x1 - x0 + 1) * (y1 - y0 + 1)) as u32;
                ((sum + n / 2) / n) as u8
            }),
            Degradation::Noise(amp) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let a = i32::from(amp);
                GrayImage::from_fn(w, h, |x, y| {
                    (i32::from(img.get(x, y)) + rng.gen_range(-a..=a)).clamp(0, 255) as u8
                })
            }
            Degradation::Shift(dx, dy) => GrayImage::from_fn(w, h, |x, y| {
                let (sx, sy) = (x as i64 - i64::from(dx), y as i64 - i64::from(dy));
                if sx >= 0 && sy >= 0 && (sx as usize) < w && (sy as usize) < h {
                    img.get(sx as usize, sy as usize)
                } else {
                    255
                }
            }),
            Degradation::Flatten(f) => GrayImage::from_fn(w, h, |x, y| {
                let v = f64::from(img.get(x, y));
                (v + (128.0 - v) * f).round().clamp(0.0, 255.0) as u8
            }),
        }
        .expect("same dimensions")
    }
}

/// Uniform random intensities.
pub fn uniform_noise(width: usize, height: usize, seed: u64) -> Result<GrayImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GrayImage::from_fn(width, height, |_, _| rng.gen())
}

/// Layout of a generated benchmark fixture.
#[derive(Debug, Clone)]
pub struct FixtureSpec {
    pub photos: usize,
    pub width: usize,
    pub height: usize,
    /// `(algorithm id, degradation)`; each photo gets every degradation of
    /// its ground truth, seeded per photo.
    pub algorithms: Vec<(String, Vec<Degradation>)>,
    pub seed: u64,
}

impl FixtureSpec {
    /// Three algorithms of clearly graded quality: light grain, blur with
    /// grain, and a heavy blur that also washes out the tones.
    pub fn standard(photos: usize, seed: u64) -> Self {
        Self {
            photos,
            width: 96,
            height: 120,
            algorithms: vec![
                ("good".into(), vec![Degradation::Noise(12)]),
                ("medium".into(), vec![Degradation::BoxBlur(1), Degradation::Noise(12)]),
                ("poor".into(), vec![Degradation::BoxBlur(2), Degradation::Flatten(0.3)]),
            ],
            seed,
        }
    }
}

fn write_image(img: &GrayImage, dir: &Path, rel: &str) -> Result<PathBuf> {
    let path = dir.join(rel);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| ScootError::io(parent, e))?;
    }
    save_pgm(img, &path)?;
    Ok(path)
}

fn write_json(value: &serde_json::Value, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("json value");
    fs::write(path, text + "\n").map_err(|e| ScootError::io(path, e))
}

/// Writes ground truths, syntheses and `manifest.json` under `dir` and
/// returns the manifest path.
pub fn write_benchmark_fixture(dir: &Path, spec: &FixtureSpec) -> Result<PathBuf> {
    let mut gt = BTreeMap::new();
    let mut algorithms: BTreeMap<String, BTreeMap<String, PathBuf>> = BTreeMap::new();
    for p in 0..spec.photos {
        let photo = format!("p{p:03}");
        let photo_seed = spec.seed.wrapping_mul(1_000_003).wrapping_add(p as u64);
        let truth = sketch(spec.width, spec.height, photo_seed)?;
        gt.insert(photo.clone(), write_image(&truth, dir, &format!("gt/{photo}.pgm"))?);
        for (a, (algo, steps)) in spec.algorithms.iter().enumerate() {
            let mut img = truth.clone();
            for (s, step) in steps.iter().enumerate() {
                img = step.apply(&img, photo_seed ^ ((a as u64) << 32) ^ ((s as u64) << 48));
            }
            let path = write_image(&img, dir, &format!("{algo}/{photo}.pgm"))?;
            algorithms.entry(algo.clone()).or_default().insert(photo.clone(), path);
        }
    }
    let ds = BenchmarkDataset::new(gt, algorithms)?;
    let manifest = dir.join("manifest.json");
    write_json(&ds.to_json(dir), &manifest)?;
    Ok(manifest)
}

/// Writes `entries` ranked pairs where the preferred synthesis is an exact
/// copy of the ground truth and the other is uniform noise. Returns the
/// pair-set path.
pub fn write_identity_pair_fixture(
    dir: &Path,
    entries: usize,
    width: usize,
    height: usize,
    seed: u64,
) -> Result<PathBuf> {
    let mut pairs = Vec::with_capacity(entries);
    for i in 0..entries {
        let s = seed.wrapping_mul(7_919).wrapping_add(i as u64);
        let truth = sketch(width, height, s)?;
        let noise = uniform_noise(width, height, !s)?;
        pairs.push(RankedPair {
            gt: write_image(&truth, dir, &format!("pairs/{i:03}_gt.pgm"))?,
            better: write_image(&truth, dir, &format!("pairs/{i:03}_better.pgm"))?,
            worse: write_image(&noise, dir, &format!("pairs/{i:03}_worse.pgm"))?,
        });
    }
    let set = RankedPairSet::new(pairs)?;
    let path = dir.join("pairs.json");
    write_json(&set.to_json(dir), &path)?;
    Ok(path)
}
