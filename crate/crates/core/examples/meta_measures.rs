//! All four meta-measures for Scoot and the baselines on a synthetic
//! benchmark. Pass a manifest and a ranked-pair file to use real data:
//!
//! `cargo run --release --example meta_measures -- manifest.json pairs.json`

use std::path::PathBuf;

use scoot::cli::{build_measure, scoot_defaults};
use scoot::meta::{mm4_human_agreement, run_dataset_meta, BenchmarkDataset, MetaId, MetaOptions, RankedPairSet};
use scoot::synthetic::{write_benchmark_fixture, write_identity_pair_fixture, FixtureSpec};

fn main() -> scoot::Result<()> {
    let args: Vec<PathBuf> = std::env::args().skip(1).map(PathBuf::from).collect();
    let scratch = std::env::temp_dir().join(format!("scoot-meta-example-{}", std::process::id()));
    let (manifest, pairs) = match args.as_slice() {
        [m, p] => (m.clone(), p.clone()),
        _ => {
            println!("synthetic benchmark in {}", scratch.display());
            (
                write_benchmark_fixture(&scratch, &FixtureSpec::standard(12, 1))?,
                write_identity_pair_fixture(&scratch, 20, 96, 120, 1)?,
            )
        }
    };
    let ds = BenchmarkDataset::load(&manifest)?;
    let ranked = RankedPairSet::load(&pairs)?;
    let opts = MetaOptions { jobs: 0, ..MetaOptions::default() };

    println!("{:<10} {:>8} {:>8} {:>8} {:>8}", "measure", "mm1", "mm2", "mm3 %", "mm4 %");
    for id in ["scoot-ce", "scoot-hec", "ssim", "gmsd"] {
        let m = build_measure(id, &scoot_defaults(id)?, &Default::default())?;
        let mut row = Vec::new();
        for meta in [MetaId::Mm1, MetaId::Mm2, MetaId::Mm3] {
            let r = run_dataset_meta(meta, &ds, m.as_ref(), &opts)?;
            let flag = if r.flagged() > 0 { "*" } else { " " };
            row.push(format!("{:>7.3}{flag}", r.aggregate));
        }
        row.push(format!("{:>8.1}", mm4_human_agreement(&ranked, m.as_ref(), &opts)?.aggregate));
        println!("{id:<10} {}", row.join(" "));
    }
    println!("mm1/mm2: lower is more stable; * marks photos with a constant score list");
    if args.is_empty() {
        let _ = std::fs::remove_dir_all(&scratch);
    }
    Ok(())
}
