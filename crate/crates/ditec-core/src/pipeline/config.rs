//! Pipeline configuration: a flat key-value TOML file mirroring the CLI
//! flags, plus the hash that keys the feature cache.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::learn::ClassifierSpec;
use crate::trace::{Functional, PhiRange, TraceParams};

/// Everything a full pipeline run needs: transform sampling, sensor
/// modeling, descriptor truncation, classifier selection, and run plumbing.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub trace: TraceParams,
    pub kernel_size: usize,
    pub kernel_sigma: f64,
    /// Kept descriptor values per channel (Y, Cb, Cr); each even.
    pub keep: [usize; 3],
    pub classifier: ClassifierSpec,
    pub folds: usize,
    pub seed: u64,
    pub cache_path: PathBuf,
    /// Worker threads; 0 means all available. Outputs never depend on it.
    pub threads: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            trace: TraceParams::default(),
            kernel_size: 3,
            kernel_sigma: 1.0,
            keep: [104, 60, 60],
            classifier: ClassifierSpec::DEFAULT_SVM,
            folds: 10,
            seed: 42,
            cache_path: PathBuf::from("features.csv"),
            threads: 0,
        }
    }
}

/// On-disk mirror of [`PipelineConfig`]; every key optional so partial
/// files override defaults.
#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n_phi: Option<usize>,
    n_rho: Option<usize>,
    n_xi: Option<usize>,
    phi_range: Option<String>,
    functional: Option<String>,
    q: Option<f64>,
    r: Option<f64>,
    kernel_size: Option<usize>,
    kernel_sigma: Option<f64>,
    keep: Option<Vec<usize>>,
    classifier: Option<String>,
    svm_c: Option<f64>,
    svm_epochs: Option<usize>,
    folds: Option<usize>,
    seed: Option<u64>,
    cache_path: Option<String>,
    threads: Option<usize>,
}

impl PipelineConfig {
    /// Parses the key-value config text, filling unspecified keys from the
    /// defaults.
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::contract(format!("config: {e}")))?;
        let default = PipelineConfig::default();
        let trace = TraceParams::new(
            raw.n_phi.unwrap_or(default.trace.n_phi()),
            raw.n_rho.unwrap_or(default.trace.n_rho()),
            raw.n_xi.unwrap_or(default.trace.n_xi()),
            match raw.phi_range {
                Some(s) => PhiRange::parse(&s)?,
                None => default.trace.phi_range(),
            },
            match raw.functional {
                Some(s) => Functional::parse(&s)?,
                None => default.trace.functional(),
            },
            raw.q.unwrap_or(default.trace.q()),
            raw.r.unwrap_or(default.trace.r()),
        )?;
        let keep = match raw.keep {
            Some(k) => {
                let arr: [usize; 3] = k
                    .try_into()
                    .map_err(|_| Error::contract("keep needs exactly 3 counts"))?;
                arr
            }
            None => default.keep,
        };
        let classifier = match raw.classifier.as_deref() {
            None => default.classifier,
            Some("gnb") => ClassifierSpec::GaussianNb,
            Some("svm") => ClassifierSpec::LinearSvm {
                c: raw.svm_c.unwrap_or(1.0),
                epochs: raw.svm_epochs.unwrap_or(200),
            },
            Some(other) => {
                return Err(Error::contract(format!("unknown classifier `{other}`")))
            }
        };
        Ok(Self {
            trace,
            kernel_size: raw.kernel_size.unwrap_or(default.kernel_size),
            kernel_sigma: raw.kernel_sigma.unwrap_or(default.kernel_sigma),
            keep,
            classifier,
            folds: raw.folds.unwrap_or(default.folds),
            seed: raw.seed.unwrap_or(default.seed),
            cache_path: raw
                .cache_path
                .map(PathBuf::from)
                .unwrap_or(default.cache_path),
            threads: raw.threads.unwrap_or(default.threads),
        })
    }

    /// Serializes every field; parsing the result reproduces the config.
    pub fn to_toml(&self) -> String {
        let (classifier, svm_c, svm_epochs) = match self.classifier {
            ClassifierSpec::GaussianNb => ("gnb", None, None),
            ClassifierSpec::LinearSvm { c, epochs } => ("svm", Some(c), Some(epochs)),
        };
        let raw = RawConfig {
            n_phi: Some(self.trace.n_phi()),
            n_rho: Some(self.trace.n_rho()),
            n_xi: Some(self.trace.n_xi()),
            phi_range: Some(self.trace.phi_range().as_str().to_string()),
            functional: Some(self.trace.functional().as_str().to_string()),
            q: Some(self.trace.q()),
            r: Some(self.trace.r()),
            kernel_size: Some(self.kernel_size),
            kernel_sigma: Some(self.kernel_sigma),
            keep: Some(self.keep.to_vec()),
            classifier: Some(classifier.to_string()),
            svm_c,
            svm_epochs,
            folds: Some(self.folds),
            seed: Some(self.seed),
            cache_path: Some(self.cache_path.display().to_string()),
            threads: Some(self.threads),
        };
        toml::to_string(&raw).expect("flat config serializes")
    }

    /// Hash of every field that affects descriptor values. Evaluation
    /// settings (classifier, folds, seed, threads) do not invalidate a
    /// cache.
    pub fn feature_hash(&self) -> String {
        let t = &self.trace;
        let key = format!(
            "nphi={};nrho={};nxi={};range={};functional={};q={};r={};kernel={}x{};keep={},{},{}",
            t.n_phi(),
            t.n_rho(),
            t.n_xi(),
            t.phi_range().as_str(),
            t.functional().as_str(),
            t.q(),
            t.r(),
            self.kernel_size,
            self.kernel_sigma,
            self.keep[0],
            self.keep[1],
            self.keep[2],
        );
        let digest = Sha256::digest(key.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}
