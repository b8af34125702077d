//! SSIM and GMSD next to Scoot under a few degradations, including a small
//! misregistration that pixel measures punish and style features tolerate.

use scoot::baselines::{gmsd, ssim};
use scoot::style::{scoot, GlcmExtractor, ScootConfig};
use scoot::synthetic::{sketch, Degradation};

fn main() -> scoot::Result<()> {
    let gt = sketch(128, 160, 21)?;
    let cfg = ScootConfig::default();
    let cases = [
        ("identical", gt.clone()),
        ("shift 2px", Degradation::Shift(2, 1).apply(&gt, 0)),
        ("noise 30", Degradation::Noise(30).apply(&gt, 4)),
        ("blur 5x5", Degradation::BoxBlur(2).apply(&gt, 0)),
        ("flatten 50%", Degradation::Flatten(0.5).apply(&gt, 0)),
    ];
    println!("{:<12} {:>8} {:>8} {:>8}", "case", "ssim", "gmsd", "scoot");
    for (name, syn) in &cases {
        println!(
            "{name:<12} {:>8.4} {:>8.4} {:>8.4}",
            ssim(&gt, syn)?,
            gmsd(&gt, syn)?,
            scoot(&gt, syn, &cfg, &GlcmExtractor)?
        );
    }
    Ok(())
}
