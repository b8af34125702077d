//! Every registered measure on the same pair: the statistic ablations, the
//! non-quantized setting, the run-length and gradient extractors, and the
//! pixel baselines.

use scoot::cli::{build_measure, scoot_defaults, MEASURE_IDS};
use scoot::meta::{score_pair, SizeAlignment};
use scoot::style::{psi, GlrlmExtractor, ScootConfig, SobelExtractor};
use scoot::synthetic::{sketch, Degradation};

fn main() -> scoot::Result<()> {
    let gt = sketch(96, 120, 3)?;
    let syn = Degradation::Noise(20).apply(&Degradation::BoxBlur(1).apply(&gt, 0), 5);

    println!("{:<14} {:>10} {:>10}  polarity", "measure", "self", "degraded");
    for id in MEASURE_IDS {
        let m = build_measure(id, &scoot_defaults(id)?, &Default::default())?;
        let own = score_pair(m.as_ref(), &gt, &gt, SizeAlignment::Center)?.score;
        let other = score_pair(m.as_ref(), &gt, &syn, SizeAlignment::Center)?.score;
        println!("{id:<14} {own:>10.4} {other:>10.4}  {:?}", m.polarity());
    }

    let cfg = ScootConfig::default();
    let glrlm = psi(&gt, &cfg, &GlrlmExtractor)?;
    println!("\nrun-length descriptor of block 0 (SRE, LRE, GLN, RLN, RP): {:.4?}", &glrlm.values[..5]);
    let sobel = psi(&gt, &cfg, &SobelExtractor)?;
    println!("gradient descriptor of block 0 (mean, std): {:.4?}", &sobel.values[..2]);
    Ok(())
}
