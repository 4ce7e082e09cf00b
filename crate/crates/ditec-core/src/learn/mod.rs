//! Supervised classification and wrapper feature-subset selection.
//!
//! Two deterministic classifiers (Gaussian naive Bayes and a linear
//! one-vs-rest SVM trained by seeded subgradient descent), seeded k-fold
//! cross-validation, confusion-matrix metrics, and greedy forward selection
//! scored by cross-validated accuracy.

pub mod cv;
pub mod fss;
pub mod gnb;
pub mod metrics;
pub mod svm;

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};

pub use cv::{cross_validate, kfold_plan, FoldPlan};
pub use fss::{greedy_fss, FssStep, FssTrace};
pub use gnb::{gnb_predict, gnb_train, GnbModel};
pub use metrics::{misclassification_graph, ClassMetrics, ConfusionMatrix};
pub use svm::{svm_predict, svm_train, SvmModel};

/// A labeled feature matrix with shared attribute ordering.
#[derive(Debug, Clone)]
pub struct Dataset {
    /// Instances × attributes.
    pub features: Array2<f64>,
    /// Per-instance index into `class_names`.
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub attribute_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        features: Array2<f64>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        attribute_names: Vec<String>,
    ) -> Result<Self> {
        let (n, d) = features.dim();
        if labels.len() != n {
            return Err(Error::contract("one label per instance required"));
        }
        if attribute_names.len() != d {
            return Err(Error::contract("one name per attribute required"));
        }
        if labels.iter().any(|l| *l >= class_names.len()) {
            return Err(Error::contract("label indexes outside class_names"));
        }
        Ok(Self {
            features,
            labels,
            class_names,
            attribute_names,
        })
    }

    pub fn n_instances(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_attributes(&self) -> usize {
        self.features.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Restriction of the dataset to the given attribute columns, in the
    /// given order.
    pub fn select_attributes(&self, attrs: &[usize]) -> Dataset {
        let features = Array2::from_shape_fn((self.n_instances(), attrs.len()), |(i, j)| {
            self.features[[i, attrs[j]]]
        });
        Dataset {
            features,
            labels: self.labels.clone(),
            class_names: self.class_names.clone(),
            attribute_names: attrs
                .iter()
                .map(|a| self.attribute_names[*a].clone())
                .collect(),
        }
    }

    /// Restriction to the given instance rows, in the given order.
    pub fn select_instances(&self, rows: &[usize]) -> Dataset {
        let features = Array2::from_shape_fn((rows.len(), self.n_attributes()), |(i, j)| {
            self.features[[rows[i], j]]
        });
        Dataset {
            features,
            labels: rows.iter().map(|r| self.labels[*r]).collect(),
            class_names: self.class_names.clone(),
            attribute_names: self.attribute_names.clone(),
        }
    }
}

/// Per-attribute z-scoring fitted on a training set. Zero-variance
/// attributes pass through unchanged.
#[derive(Debug, Clone)]
pub struct Scaler {
    mu: Vec<f64>,
    sigma: Vec<f64>,
}

impl Scaler {
    pub fn transform_value(&self, attr: usize, v: f64) -> f64 {
        if self.sigma[attr] > 0.0 {
            (v - self.mu[attr]) / self.sigma[attr]
        } else {
            v
        }
    }

    pub fn transform(&self, data: &Dataset) -> Dataset {
        let mut out = data.clone();
        for ((_, j), v) in out.features.indexed_iter_mut() {
            *v = if self.sigma[j] > 0.0 {
                (*v - self.mu[j]) / self.sigma[j]
            } else {
                *v
            };
        }
        out
    }
}

/// Fits a z-scaler on the training set and returns it with the transformed
/// data: every non-constant attribute gets mean 0 and population std 1.
pub fn standardize(train: &Dataset) -> Result<(Scaler, Dataset)> {
    let n = train.n_instances();
    if n == 0 {
        return Err(Error::contract("cannot standardize an empty dataset"));
    }
    let nf = n as f64;
    let mut mu = Vec::with_capacity(train.n_attributes());
    let mut sigma = Vec::with_capacity(train.n_attributes());
    for col in train.features.columns() {
        let m = col.sum() / nf;
        let var = col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / nf;
        let s = var.sqrt();
        if s > 0.0 {
            mu.push(m);
            sigma.push(s);
        } else {
            mu.push(0.0);
            sigma.push(0.0);
        }
    }
    let scaler = Scaler { mu, sigma };
    let transformed = scaler.transform(train);
    Ok((scaler, transformed))
}

/// Which classifier a cross-validation or FSS run trains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClassifierSpec {
    GaussianNb,
    LinearSvm { c: f64, epochs: usize },
}

impl ClassifierSpec {
    pub const DEFAULT_SVM: ClassifierSpec = ClassifierSpec::LinearSvm {
        c: 1.0,
        epochs: 200,
    };

    pub fn fit(&self, train: &Dataset, seed: u64) -> Result<Model> {
        match self {
            ClassifierSpec::GaussianNb => Ok(Model::Gnb(gnb_train(train)?)),
            ClassifierSpec::LinearSvm { c, epochs } => {
                Ok(Model::Svm(svm_train(train, *c, *epochs, seed)?))
            }
        }
    }
}

/// A trained classifier; immutable and shareable for concurrent prediction.
#[derive(Debug, Clone)]
pub enum Model {
    Gnb(GnbModel),
    Svm(SvmModel),
}

impl Model {
    pub fn predict(&self, row: ArrayView1<'_, f64>) -> usize {
        match self {
            Model::Gnb(m) => gnb_predict(m, row),
            Model::Svm(m) => svm_predict(m, row),
        }
    }
}
