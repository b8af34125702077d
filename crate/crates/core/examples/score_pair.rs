//! Scoot score between two sketches.
//!
//! `cargo run --example score_pair -- gt.png synthesized.png`
//! Without arguments a synthetic sketch is compared with degraded copies.

use scoot::imageio::load_gray;
use scoot::style::{psi, scoot_detailed, GlcmExtractor, ScootConfig};
use scoot::synthetic::{sketch, Degradation};

fn main() -> scoot::Result<()> {
    let cfg = ScootConfig::default();
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let [gt, syn] = args.as_slice() {
        let r = scoot_detailed(&load_gray(gt)?, &load_gray(syn)?, &cfg, &GlcmExtractor)?;
        println!("scoot {:.6} (feature distance {:.6})", r.score, r.distance);
        for w in &r.warnings {
            println!("  warning: {w}");
        }
        return Ok(());
    }

    let gt = sketch(96, 120, 7)?;
    let descriptor = psi(&gt, &cfg, &GlcmExtractor)?;
    println!("descriptor: {} values ({})", descriptor.len(), descriptor.layout);
    let variants = [
        ("identical", gt.clone()),
        ("light noise", Degradation::Noise(12).apply(&gt, 1)),
        ("3x3 blur", Degradation::BoxBlur(1).apply(&gt, 0)),
        ("5x5 blur, flattened", Degradation::Flatten(0.3).apply(&Degradation::BoxBlur(2).apply(&gt, 0), 0)),
        ("another face", sketch(96, 120, 8)?),
    ];
    for (name, syn) in &variants {
        let r = scoot_detailed(&gt, syn, &cfg, &GlcmExtractor)?;
        println!("{name:>22}: {:.4}", r.score);
    }
    Ok(())
}
