use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use scoot::cli::{cmd_batch, cmd_features, cmd_meta, cmd_score, BatchSource, OutputFormat, RunConfig};
use scoot::meta::{MetaId, SizeAlignment};
use scoot::style::Statistic;
use scoot::{Result, ScootError};

/// Face sketch style similarity and measure benchmarking.
#[derive(Parser)]
#[command(name = "scoot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score one synthesized sketch against its ground truth
    Score {
        gt: PathBuf,
        syn: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
    /// Score every pair of a dataset manifest or ranked pair set
    Batch {
        #[arg(long, conflicts_with = "pairs", required_unless_present = "pairs")]
        manifest: Option<PathBuf>,
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[command(flatten)]
        opts: Options,
    },
    /// Run a meta-measure (mm1, mm2, mm3 on --manifest; mm4 on --pairs)
    Meta {
        meta: MetaId,
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[command(flatten)]
        opts: Options,
    },
    /// Print the style descriptor of an image
    Features {
        image: PathBuf,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Args)]
struct Options {
    /// Measure id (scoot-ce, scoot-h, ..., ssim, gmsd)
    #[arg(long, default_value = "scoot-ce")]
    measure: String,
    /// Quantization grades
    #[arg(long)]
    levels: Option<usize>,
    /// Blocks per side of the grid
    #[arg(long)]
    grid: Option<usize>,
    /// Statistic letters, e.g. `ce` or `h,e,c`
    #[arg(long)]
    stats: Option<String>,
    /// Use raw 256-level intensities
    #[arg(long)]
    no_quantize: bool,
    /// Light/dark stroke split for mm3
    #[arg(long)]
    threshold: Option<u8>,
    /// How pixel-wise measures fit a synthesis to the ground truth size
    /// (center or resize)
    #[arg(long, default_value = "center")]
    align: SizeAlignment,
    #[arg(long, default_value = "json")]
    format: OutputFormat,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

impl Options {
    fn run_config(&self) -> Result<RunConfig> {
        let mut cfg = RunConfig::for_measure(&self.measure)?;
        if let Some(levels) = self.levels {
            cfg.scoot.n_levels = levels;
        }
        if let Some(k) = self.grid {
            cfg.scoot.grid_k = k;
        }
        if let Some(stats) = &self.stats {
            cfg.scoot.statistics = Statistic::parse_set(stats)?;
        }
        if self.no_quantize {
            cfg.scoot.quantize_enabled = false;
        }
        if let Some(t) = self.threshold {
            cfg.meta.threshold = t;
        }
        if self.jobs == 0 {
            return Err(ScootError::InvalidConfig("--jobs must be at least 1".into()));
        }
        cfg.meta.jobs = self.jobs;
        cfg.meta.alignment = self.align;
        cfg.format = self.format;
        cfg.scoot.validate()?;
        Ok(cfg)
    }
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Score { gt, syn, opts } => cmd_score(&gt, &syn, &opts.run_config()?),
        Command::Batch { manifest, pairs, opts } => {
            let cfg = opts.run_config()?;
            match (&manifest, &pairs) {
                (Some(m), _) => cmd_batch(BatchSource::Manifest(m), &cfg),
                (None, Some(p)) => cmd_batch(BatchSource::Pairs(p), &cfg),
                (None, None) => unreachable!("clap requires one source"),
            }
        }
        Command::Meta { meta, manifest, pairs, opts } => {
            cmd_meta(meta, manifest.as_deref(), pairs.as_deref(), &opts.run_config()?)
        }
        Command::Features { image, opts } => cmd_features(&image, &opts.run_config()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
