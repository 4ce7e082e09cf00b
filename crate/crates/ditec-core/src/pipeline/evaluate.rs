//! Cross-validated evaluation reports: confusion matrix, per-class metrics,
//! misclassification graph, and the optional feature-selection trace.

use std::path::{Path, PathBuf};

use super::{extract, with_thread_budget, PipelineConfig};
use crate::error::{Error, Result};
use crate::learn::{
    cross_validate, greedy_fss, kfold_plan, metrics, ConfusionMatrix, Dataset,
};

/// Wrapper feature-selection settings for [`run_evaluation`].
#[derive(Debug, Clone, Copy)]
pub struct FssOptions {
    /// Consecutive non-improving steps tolerated before stopping.
    pub patience: usize,
}

impl Default for FssOptions {
    fn default() -> Self {
        Self { patience: 1 }
    }
}

/// Paths of the files an evaluation run wrote, plus its headline numbers.
#[derive(Debug, Clone)]
pub struct EvaluationOutputs {
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub confusion_csv: PathBuf,
    pub metrics_csv: PathBuf,
    pub graph_dot: PathBuf,
    pub edges_csv: PathBuf,
    pub fss_csv: Option<PathBuf>,
}

fn check_folds(data: &Dataset, folds: usize) -> Result<()> {
    let mut counts = vec![0usize; data.n_classes()];
    for &label in &data.labels {
        counts[label] += 1;
    }
    for (class, count) in counts.iter().enumerate() {
        if *count < folds {
            return Err(Error::data(format!(
                "class `{}` has {count} instances but k = {folds} folds; every training \
                 split must contain each class — reduce --folds or add data",
                data.class_names[class]
            )));
        }
    }
    Ok(())
}

/// Cross-validates the cached features under `config` and writes all report
/// files into `out_dir`.
pub fn run_evaluation(
    config: &PipelineConfig,
    out_dir: &Path,
    fss: Option<FssOptions>,
) -> Result<EvaluationOutputs> {
    let cache = extract::read_cache(&config.cache_path)?;
    if cache.config_hash != config.feature_hash() {
        return Err(Error::data(format!(
            "cache `{}` does not match the current feature configuration; re-extract first",
            config.cache_path.display()
        )));
    }
    let data = extract::load_dataset(&cache)?;
    if data.n_classes() < 2 {
        return Err(Error::data("evaluation needs at least 2 classes"));
    }
    check_folds(&data, config.folds)?;
    let plan = kfold_plan(data.n_instances(), config.folds, config.seed)?;
    let cm = cross_validate(&data, &plan, config.classifier)?;

    std::fs::create_dir_all(out_dir)?;
    let confusion_csv = out_dir.join("confusion.csv");
    cm.write_csv(std::fs::File::create(&confusion_csv)?)?;

    let metrics_csv = out_dir.join("metrics.csv");
    write_metrics_csv(&cm, std::fs::File::create(&metrics_csv)?)?;

    let graph_dot = out_dir.join("graph.dot");
    std::fs::write(&graph_dot, metrics::graph_to_dot(&cm))?;
    let edges_csv = out_dir.join("graph_edges.csv");
    metrics::write_edge_list(&cm, std::fs::File::create(&edges_csv)?)?;

    let fss_csv = match fss {
        Some(options) => {
            let trace = with_thread_budget(config.threads, || {
                greedy_fss(&data, config.classifier, &plan, options.patience)
            })?;
            let path = out_dir.join("fss_trace.csv");
            trace.write_csv(&data.attribute_names, std::fs::File::create(&path)?)?;
            Some(path)
        }
        None => None,
    };

    Ok(EvaluationOutputs {
        accuracy: cm.accuracy(),
        confusion: cm,
        confusion_csv,
        metrics_csv,
        graph_dot,
        edges_csv,
        fss_csv,
    })
}

/// Per-class precision/recall/F rows, an unweighted `(average)` row, and an
/// `(accuracy)` row.
pub fn write_metrics_csv<W: std::io::Write>(cm: &ConfusionMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["class", "precision", "recall", "f_measure"])
        .map_err(|e| Error::data(format!("csv: {e}")))?;
    let per_class = cm.per_class_metrics();
    for (name, m) in cm.class_names.iter().zip(&per_class) {
        w.write_record([
            name.clone(),
            m.precision.to_string(),
            m.recall.to_string(),
            m.f_measure.to_string(),
        ])
        .map_err(|e| Error::data(format!("csv: {e}")))?;
    }
    let n = per_class.len() as f64;
    let avg = |f: fn(&metrics::ClassMetrics) -> f64| {
        per_class.iter().map(f).sum::<f64>() / n
    };
    w.write_record([
        "(average)".to_string(),
        avg(|m| m.precision).to_string(),
        avg(|m| m.recall).to_string(),
        avg(|m| m.f_measure).to_string(),
    ])
    .map_err(|e| Error::data(format!("csv: {e}")))?;
    let acc = cm.accuracy().to_string();
    w.write_record(["(accuracy)".to_string(), acc.clone(), acc.clone(), acc])
        .map_err(|e| Error::data(format!("csv: {e}")))?;
    w.flush()?;
    Ok(())
}
