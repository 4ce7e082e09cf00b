//! Seeded k-fold cross-validation.

use ndarray::Array1;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{standardize, ClassifierSpec, ConfusionMatrix, Dataset};
use crate::error::{Error, Result};

/// A fold assignment: a partition of `n` instances into `k` folds whose
/// sizes differ by at most one, reproducible from the seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub assignment: Vec<usize>,
    pub seed: u64,
}

/// Shuffles instance indices with a seeded generator and deals them
/// round-robin into `k` folds.
pub fn kfold_plan(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 || k > n {
        return Err(Error::contract(format!(
            "fold count {k} must satisfy 2 <= k <= {n}"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut assignment = vec![0usize; n];
    for (pos, &instance) in order.iter().enumerate() {
        assignment[instance] = pos % k;
    }
    Ok(FoldPlan {
        k,
        assignment,
        seed,
    })
}

/// Rotates through the folds: fit on k-1 folds (standardized on the
/// training rows only), predict the held-out fold, and aggregate counts
/// into one confusion matrix.
pub fn cross_validate(
    data: &Dataset,
    plan: &FoldPlan,
    spec: ClassifierSpec,
) -> Result<ConfusionMatrix> {
    if plan.assignment.len() != data.n_instances() {
        return Err(Error::contract("fold plan does not match dataset size"));
    }
    let mut cm = ConfusionMatrix::new(data.class_names.clone());
    for fold in 0..plan.k {
        let train_rows: Vec<usize> = (0..data.n_instances())
            .filter(|i| plan.assignment[*i] != fold)
            .collect();
        let test_rows: Vec<usize> = (0..data.n_instances())
            .filter(|i| plan.assignment[*i] == fold)
            .collect();
        let train = data.select_instances(&train_rows);
        let (scaler, train_std) = standardize(&train)?;
        let model = spec.fit(&train_std, plan.seed ^ fold as u64)?;
        for &i in &test_rows {
            let row: Array1<f64> = data
                .features
                .row(i)
                .iter()
                .enumerate()
                .map(|(j, v)| scaler.transform_value(j, *v))
                .collect();
            let pred = model.predict(row.view());
            cm.record(data.labels[i], pred);
        }
    }
    Ok(cm)
}
