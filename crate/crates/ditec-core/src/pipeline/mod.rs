//! End-to-end orchestration: corpus ingestion, feature extraction into a
//! CSV cache, evaluation reports, sampling diagnostics, and timing sweeps.

pub mod bench;
pub mod config;
pub mod evaluate;
pub mod extract;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::trace::{self, Functional, MaskMetrics, PhiRange, TraceParams};

pub use bench::{bench_stages, bench_sweep, linear_fit, StageTiming, SweepAxis, SweepPoint};
pub use config::PipelineConfig;
pub use evaluate::{run_evaluation, EvaluationOutputs, FssOptions};
pub use extract::{
    attribute_names, compute_descriptor, extract_features, load_dataset, read_cache,
    ExtractSummary, FeatureCache,
};

const IMAGE_EXTENSIONS: [&str; 7] = ["png", "jpg", "jpeg", "ppm", "pgm", "pbm", "pnm"];

/// One corpus image: its path relative to the corpus root and its class
/// (the name of the directory it lives in).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub class: String,
}

/// A deterministic listing of a class-per-subdirectory corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusManifest {
    pub root: PathBuf,
    /// Sorted by (class, filename).
    pub entries: Vec<ManifestEntry>,
}

impl CorpusManifest {
    pub fn class_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for entry in &self.entries {
            *counts.entry(entry.class.clone()).or_insert(0) += 1;
        }
        counts
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Result of scanning a corpus: the manifest plus one warning per excluded
/// file.
#[derive(Debug, Clone)]
pub struct IngestReport {
    pub manifest: CorpusManifest,
    pub warnings: Vec<String>,
}

/// Scans `root` for class subdirectories of decodable images. Undecodable
/// files are excluded with a warning; an empty corpus is fatal.
pub fn ingest(root: &Path) -> Result<IngestReport> {
    if !root.is_dir() {
        return Err(Error::data(format!(
            "corpus root `{}` is not a directory",
            root.display()
        )));
    }
    let mut class_dirs: Vec<PathBuf> = std::fs::read_dir(root)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    class_dirs.sort();

    let mut entries = Vec::new();
    let mut warnings = Vec::new();
    for dir in class_dirs {
        let class = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut files: Vec<PathBuf> = std::fs::read_dir(&dir)?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| {
                p.is_file()
                    && p.extension()
                        .map(|e| {
                            IMAGE_EXTENSIONS.contains(&e.to_string_lossy().to_lowercase().as_str())
                        })
                        .unwrap_or(false)
            })
            .collect();
        files.sort();
        for file in files {
            match image::open(&file) {
                Ok(_) => entries.push(ManifestEntry {
                    path: file.strip_prefix(root).unwrap_or(&file).to_path_buf(),
                    class: class.clone(),
                }),
                Err(err) => warnings.push(format!(
                    "skipping `{}`: {err}",
                    file.display()
                )),
            }
        }
    }
    if entries.is_empty() {
        return Err(Error::data(format!(
            "no decodable images under `{}` (expected class subdirectories)",
            root.display()
        )));
    }
    Ok(IngestReport {
        manifest: CorpusManifest {
            root: root.to_path_buf(),
            entries,
        },
        warnings,
    })
}

/// The resolution triples of the reference sampling-quality sweep.
pub const REFERENCE_MASK_SWEEP: [(usize, usize, usize); 16] = [
    (64, 64, 15),
    (64, 64, 45),
    (64, 64, 85),
    (64, 64, 185),
    (300, 5, 45),
    (300, 5, 151),
    (5, 300, 45),
    (5, 300, 151),
    (5, 300, 218),
    (5, 300, 251),
    (384, 256, 15),
    (100, 100, 85),
    (100, 100, 185),
    (100, 100, 218),
    (100, 100, 2185),
    (42, 75, 12000),
];

/// Runs the contribution-mask analysis for each resolution triple on a
/// `width` × `height` raster.
pub fn analyze_mask(
    rows: &[(usize, usize, usize)],
    width: usize,
    height: usize,
) -> Result<Vec<(usize, usize, usize, MaskMetrics)>> {
    rows.iter()
        .map(|&(n_phi, n_rho, n_xi)| {
            let params = TraceParams::new(
                n_phi,
                n_rho,
                n_xi,
                PhiRange::Full,
                Functional::Radon,
                2.0,
                0.5,
            )?;
            let mask = trace::contribution_mask(&params, width, height);
            Ok((n_phi, n_rho, n_xi, trace::mask_metrics(&mask)))
        })
        .collect()
}

/// Runs `f` under the configured thread budget; 0 keeps the global pool.
pub fn with_thread_budget<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}
