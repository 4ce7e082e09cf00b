//! Linear one-vs-rest soft-margin SVM trained by seeded subgradient descent
//! on the hinge objective.
//!
//! Each class gets a binary machine minimizing
//! `lambda/2 ||(w, b)||^2 + (1/n) sum max(0, 1 - y (w.x + b))` with
//! `lambda = 1 / (C n)` and step size `1/(lambda t)`; the bias rides along
//! as a unit feature. The second half of the iterates is averaged. Sample
//! order is reshuffled every epoch from a ChaCha stream, so identical
//! (data, C, epochs, seed) yield identical models.

use ndarray::{Array2, ArrayView1};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Dataset;
use crate::error::{Error, Result};

/// One weight row and bias per class.
#[derive(Debug, Clone)]
pub struct SvmModel {
    weights: Array2<f64>,
    biases: Vec<f64>,
}

impl SvmModel {
    /// Decision value of one binary machine.
    pub fn decision(&self, class: usize, row: ArrayView1<'_, f64>) -> f64 {
        self.weights.row(class).dot(&row) + self.biases[class]
    }
}

/// Trains one binary hinge machine per class.
pub fn svm_train(train: &Dataset, c: f64, epochs: usize, seed: u64) -> Result<SvmModel> {
    let n_classes = train.n_classes();
    if n_classes < 2 {
        return Err(Error::contract("SVM needs at least 2 classes"));
    }
    if !(c > 0.0) {
        return Err(Error::contract("C must be positive"));
    }
    let (n, d) = train.features.dim();
    if n == 0 {
        return Err(Error::contract("training set is empty"));
    }
    let lambda = 1.0 / (c * n as f64);

    let mut weights = Array2::zeros((n_classes, d));
    let mut biases = vec![0.0; n_classes];
    let total_steps = (epochs.max(1) as u64) * n as u64;
    let average_from = total_steps / 2;
    for class in 0..n_classes {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (class as u64).wrapping_mul(0x9e37_79b9));
        let mut order: Vec<usize> = (0..n).collect();
        let mut w = vec![0.0f64; d];
        let mut b = 0.0f64;
        let mut w_sum = vec![0.0f64; d];
        let mut b_sum = 0.0f64;
        let mut averaged = 0u64;
        let mut t = 0u64;
        for _ in 0..epochs {
            order.shuffle(&mut rng);
            for &i in &order {
                t += 1;
                let eta = 1.0 / (lambda * t as f64);
                let row = train.features.row(i);
                let y = if train.labels[i] == class { 1.0 } else { -1.0 };
                let margin = y * (row.dot(&ndarray::ArrayView1::from(&w[..])) + b);
                let decay = 1.0 - eta * lambda;
                for wj in w.iter_mut() {
                    *wj *= decay;
                }
                b *= decay;
                if margin < 1.0 {
                    let scale = eta * y;
                    for (wj, x) in w.iter_mut().zip(row.iter()) {
                        *wj += scale * x;
                    }
                    b += scale;
                }
                if t > average_from {
                    for (s, wj) in w_sum.iter_mut().zip(&w) {
                        *s += *wj;
                    }
                    b_sum += b;
                    averaged += 1;
                }
            }
        }
        let norm = averaged.max(1) as f64;
        for (j, s) in w_sum.into_iter().enumerate() {
            weights[[class, j]] = s / norm;
        }
        biases[class] = b_sum / norm;
    }
    Ok(SvmModel { weights, biases })
}

/// Argmax of the per-class decision values; ties break toward the lowest
/// class index.
pub fn svm_predict(model: &SvmModel, row: ArrayView1<'_, f64>) -> usize {
    let mut best = 0;
    let mut best_score = f64::NEG_INFINITY;
    for class in 0..model.biases.len() {
        let score = model.decision(class, row);
        if score > best_score {
            best_score = score;
            best = class;
        }
    }
    best
}
