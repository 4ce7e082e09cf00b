//! Global image descriptors from the trace transform, and the machinery to
//! turn them into a supervised domain classifier.
//!
//! The pipeline has five stages:
//!
//! 1. **[`preproc`]** – color-space conversion (YCbCr for the transform, HSV
//!    for summary statistics) and low-pass sensor modeling.
//! 2. **[`trace`]** – the discrete trace transform: a functional evaluated
//!    along every line of a (φ, ρ) grid, yielding one sinogram per channel,
//!    plus the contribution-mask analysis of its sampling quality.
//! 3. **[`descriptor`]** – 2D DCT of each sinogram, diagonal binning of the
//!    coefficients, and compression of every bin to a (mean, kurtosis) pair.
//! 4. **[`learn`]** – Gaussian naive Bayes and linear SVM classifiers,
//!    k-fold cross-validation, greedy wrapper feature-subset selection, and
//!    confusion-matrix metrics.
//! 5. **[`pipeline`]** – corpus ingestion, the CSV feature cache, evaluation
//!    reports, timing sweeps, and the configuration format used by the CLI.
//!
//! All numeric state is `f64`; images are normalized to `[0, 1]` at
//! ingestion. Every operation is deterministic for a fixed seed, including
//! under data-parallel execution.

pub mod descriptor;
pub mod error;
pub mod learn;
pub mod pipeline;
pub mod preproc;
pub mod trace;

pub use error::{Error, Result};
pub use preproc::{ColorSpace, HsvStats, ImagePlanes};
pub use trace::{
    Channel, ContributionMask, Functional, MaskMetrics, PhiRange, Sinogram, TraceParams,
};
pub use descriptor::{DctMatrix, DescriptorVector, DiagonalBins};
pub use learn::{ClassifierSpec, ConfusionMatrix, Dataset, FoldPlan, FssTrace};
pub use pipeline::{CorpusManifest, PipelineConfig};
