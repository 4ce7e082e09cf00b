//! Gaussian naive Bayes with class priors from frequencies and a variance
//! floor for constant attributes.

use ndarray::{Array2, ArrayView1};

use super::Dataset;
use crate::error::{Error, Result};

const VARIANCE_FLOOR: f64 = 1e-9;

/// Per-class Gaussian likelihood parameters plus log-priors.
#[derive(Debug, Clone)]
pub struct GnbModel {
    log_priors: Vec<f64>,
    means: Array2<f64>,
    variances: Array2<f64>,
}

/// Fits per-class, per-attribute Gaussians. Every class must have at least
/// one training instance.
pub fn gnb_train(train: &Dataset) -> Result<GnbModel> {
    let (n, d) = train.features.dim();
    let c = train.n_classes();
    if n == 0 {
        return Err(Error::contract("training set is empty"));
    }
    let mut counts = vec![0usize; c];
    for &label in &train.labels {
        counts[label] += 1;
    }
    if let Some(empty) = counts.iter().position(|&k| k == 0) {
        return Err(Error::contract(format!(
            "class `{}` has no training instances",
            train.class_names[empty]
        )));
    }

    let mut means = Array2::zeros((c, d));
    for (i, row) in train.features.rows().into_iter().enumerate() {
        let label = train.labels[i];
        for (j, v) in row.iter().enumerate() {
            means[[label, j]] += v;
        }
    }
    for (class, count) in counts.iter().enumerate() {
        for j in 0..d {
            means[[class, j]] /= *count as f64;
        }
    }

    let mut variances: Array2<f64> = Array2::zeros((c, d));
    for (i, row) in train.features.rows().into_iter().enumerate() {
        let label = train.labels[i];
        for (j, v) in row.iter().enumerate() {
            let dm = v - means[[label, j]];
            variances[[label, j]] += dm * dm;
        }
    }
    for (class, count) in counts.iter().enumerate() {
        for j in 0..d {
            variances[[class, j]] =
                (variances[[class, j]] / *count as f64).max(VARIANCE_FLOOR);
        }
    }

    let log_priors = counts
        .iter()
        .map(|&k| (k as f64 / n as f64).ln())
        .collect();
    Ok(GnbModel {
        log_priors,
        means,
        variances,
    })
}

/// Argmax of the log-posterior; ties break toward the lowest class index.
pub fn gnb_predict(model: &GnbModel, row: ArrayView1<'_, f64>) -> usize {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for (class, &log_prior) in model.log_priors.iter().enumerate() {
        let mut score = log_prior;
        for (j, v) in row.iter().enumerate() {
            let mu = model.means[[class, j]];
            let var = model.variances[[class, j]];
            let dm = v - mu;
            score -= 0.5 * ((std::f64::consts::TAU * var).ln() + dm * dm / var);
        }
        if score > best_score {
            best_score = score;
            best = class;
        }
    }
    best
}
