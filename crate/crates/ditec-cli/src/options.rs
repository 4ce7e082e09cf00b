//! Command-line surface: subcommands plus flags mirroring the pipeline
//! configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use ditec_core::learn::ClassifierSpec;
use ditec_core::pipeline::PipelineConfig;
use ditec_core::trace::{Functional, PhiRange, TraceParams};
use ditec_core::Error;

#[derive(Debug, Parser)]
#[command(
    name = "ditec",
    version,
    about = "Trace-transform image descriptors and domain classification",
    propagate_version = true
)]
pub struct Cli {
    #[command(flatten)]
    pub overrides: ConfigOverrides,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand; unset flags fall back to `--config`
/// and then to built-in defaults.
#[derive(Debug, Args)]
pub struct ConfigOverrides {
    /// Key-value config file (TOML); flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Angle count of the transform grid.
    #[arg(long, global = true)]
    pub nphi: Option<usize>,
    /// Radius count of the transform grid.
    #[arg(long, global = true)]
    pub nrho: Option<usize>,
    /// Samples per scan line.
    #[arg(long, global = true)]
    pub nxi: Option<usize>,
    /// Angular range: full or half.
    #[arg(long, global = true)]
    pub phi_range: Option<String>,
    /// Line functional: radon or if2.
    #[arg(long, global = true)]
    pub functional: Option<String>,
    /// IF2 inner exponent.
    #[arg(long, global = true)]
    pub q: Option<f64>,
    /// IF2 outer exponent.
    #[arg(long, global = true)]
    pub r: Option<f64>,
    /// Low-pass kernel side (odd).
    #[arg(long, global = true)]
    pub kernel_size: Option<usize>,
    /// Low-pass Gaussian sigma.
    #[arg(long, global = true)]
    pub kernel_sigma: Option<f64>,
    /// Kept descriptor values per channel.
    #[arg(long, global = true, value_name = "Y,CB,CR")]
    pub keep: Option<String>,
    /// Classifier: svm or gnb.
    #[arg(long, global = true)]
    pub classifier: Option<String>,
    /// SVM regularization parameter.
    #[arg(long, global = true)]
    pub svm_c: Option<f64>,
    /// SVM training epochs.
    #[arg(long, global = true)]
    pub svm_epochs: Option<usize>,
    /// Cross-validation fold count.
    #[arg(long, global = true)]
    pub folds: Option<usize>,
    /// Seed for fold assignment and classifier training.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (0 = all available).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Feature cache path.
    #[arg(long, global = true, value_name = "FILE")]
    pub cache: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan a class-per-subdirectory corpus and report its manifest.
    Ingest {
        /// Corpus root directory.
        root: PathBuf,
        /// Also write the manifest as CSV.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Extract descriptors for a corpus into the feature cache.
    Extract {
        /// Corpus root directory.
        root: PathBuf,
        /// Promote per-image failures to fatal errors.
        #[arg(long)]
        strict: bool,
    },
    /// Cross-validate the cached features and write evaluation reports.
    Evaluate {
        /// Report output directory.
        #[arg(long, default_value = "reports")]
        out_dir: PathBuf,
        /// Also run feature-subset selection and write its trace.
        #[arg(long)]
        fss: bool,
        /// Non-improving FSS steps tolerated before stopping.
        #[arg(long, default_value_t = 1)]
        patience: usize,
    },
    /// Greedy wrapper feature-subset selection over the cached features.
    Fss {
        /// Report output directory.
        #[arg(long, default_value = "reports")]
        out_dir: PathBuf,
        /// Non-improving steps tolerated before stopping.
        #[arg(long, default_value_t = 1)]
        patience: usize,
    },
    /// Contribution-mask analysis of the sampling parameters.
    Mask {
        #[arg(long, default_value_t = 384)]
        width: usize,
        #[arg(long, default_value_t = 256)]
        height: usize,
        /// Resolution triples `nphi,nrho,nxi` separated by `;`
        /// (default: the built-in reference sweep).
        #[arg(long)]
        rows: Option<String>,
    },
    /// Wall-time statistics per stage, or a resolution sweep.
    Bench {
        /// Measure on this image instead of a synthetic one.
        #[arg(long, value_name = "FILE")]
        image: Option<PathBuf>,
        #[arg(long, default_value_t = 384)]
        width: usize,
        #[arg(long, default_value_t = 256)]
        height: usize,
        /// Sweep one axis (nxi, nphi, nrho, grid) instead of staging.
        #[arg(long, value_name = "AXIS")]
        sweep: Option<String>,
        /// Sweep points, comma-separated.
        #[arg(long, value_name = "V1,V2,...")]
        points: Option<String>,
        /// Timing repetitions per measurement.
        #[arg(long, default_value_t = 21)]
        runs: usize,
    },
    /// Rebuild the misclassification graph from a confusion-matrix CSV.
    ExportGraph {
        /// Confusion matrix CSV (as written by `evaluate`).
        confusion: PathBuf,
        #[arg(long, default_value = "graph.dot")]
        dot: PathBuf,
        #[arg(long, default_value = "graph_edges.csv")]
        edges: PathBuf,
    },
}

impl ConfigOverrides {
    /// Resolves the effective configuration: defaults, then the config
    /// file, then explicit flags.
    pub fn resolve(&self) -> Result<PipelineConfig, Error> {
        let mut config = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Data(format!("read config `{}`: {e}", path.display()))
                })?;
                PipelineConfig::from_toml(&text)?
            }
            None => PipelineConfig::default(),
        };
        let base = config.trace;
        config.trace = TraceParams::new(
            self.nphi.unwrap_or(base.n_phi()),
            self.nrho.unwrap_or(base.n_rho()),
            self.nxi.unwrap_or(base.n_xi()),
            match &self.phi_range {
                Some(s) => PhiRange::parse(s)?,
                None => base.phi_range(),
            },
            match &self.functional {
                Some(s) => Functional::parse(s)?,
                None => base.functional(),
            },
            self.q.unwrap_or(base.q()),
            self.r.unwrap_or(base.r()),
        )?;
        if let Some(keep) = &self.keep {
            let parts: Vec<usize> = keep
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| Error::Contract(format!("bad --keep `{keep}`")))?;
            config.keep = parts
                .try_into()
                .map_err(|_| Error::Contract("--keep needs exactly 3 counts".into()))?;
        }
        match self.classifier.as_deref() {
            None => {
                if let (ClassifierSpec::LinearSvm { c, epochs }, _) =
                    (config.classifier, ())
                {
                    config.classifier = ClassifierSpec::LinearSvm {
                        c: self.svm_c.unwrap_or(c),
                        epochs: self.svm_epochs.unwrap_or(epochs),
                    };
                }
            }
            Some("gnb") => config.classifier = ClassifierSpec::GaussianNb,
            Some("svm") => {
                config.classifier = ClassifierSpec::LinearSvm {
                    c: self.svm_c.unwrap_or(1.0),
                    epochs: self.svm_epochs.unwrap_or(200),
                }
            }
            Some(other) => {
                return Err(Error::Contract(format!("unknown classifier `{other}`")))
            }
        }
        if let Some(v) = self.kernel_size {
            config.kernel_size = v;
        }
        if let Some(v) = self.kernel_sigma {
            config.kernel_sigma = v;
        }
        if let Some(v) = self.folds {
            config.folds = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
        if let Some(v) = self.threads {
            config.threads = v;
        }
        if let Some(v) = &self.cache {
            config.cache_path = v.clone();
        }
        Ok(config)
    }
}
