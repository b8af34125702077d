//! The ground-truth perturbations behind the meta-measures, written as PGM
//! files to an output directory (default `perturbations/`).

use std::path::PathBuf;

use scoot::imageio::{resize_nn, rotate_nn, save_pgm, split_strokes};
use scoot::synthetic::sketch;

fn main() -> scoot::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "perturbations".into()));
    std::fs::create_dir_all(&out).map_err(|e| scoot::ScootError::Io { path: out.clone(), source: e })?;

    let gt = sketch(200, 250, 11)?;
    let downsized = resize_nn(&gt, gt.width() - 5, gt.height() - 5)?;
    let rotated = rotate_nn(&gt, 5.0, 255);
    let strokes = split_strokes(&gt, 170);

    for (name, img) in [
        ("gt", &gt),
        ("downsized", &downsized),
        ("rotated", &rotated),
        ("dark_strokes", &strokes.dark),
        ("light_strokes", &strokes.light),
    ] {
        let path = out.join(format!("{name}.pgm"));
        save_pgm(img, &path)?;
        let dark = img.pixels().iter().filter(|&&v| v < 170).count();
        println!("{:<32} {}x{}, {dark} dark pixels", path.display(), img.width(), img.height());
    }
    Ok(())
}
