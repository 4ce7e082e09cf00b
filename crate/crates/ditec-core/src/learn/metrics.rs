//! Confusion-matrix metrics and the misclassification graph.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Class-indexed confusion counts: rows are ground truth, columns are
/// predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfusionMatrix {
    pub counts: Array2<u64>,
    pub class_names: Vec<String>,
}

/// Precision, recall, and their harmonic mean for one class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

impl ConfusionMatrix {
    pub fn new(class_names: Vec<String>) -> Self {
        let c = class_names.len();
        Self {
            counts: Array2::zeros((c, c)),
            class_names,
        }
    }

    pub fn from_counts(counts: Array2<u64>, class_names: Vec<String>) -> Result<Self> {
        let c = class_names.len();
        if counts.dim() != (c, c) {
            return Err(Error::contract("confusion matrix must be C x C"));
        }
        Ok(Self {
            counts,
            class_names,
        })
    }

    pub fn record(&mut self, truth: usize, predicted: usize) {
        self.counts[[truth, predicted]] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn accuracy(&self) -> f64 {
        let total = self.total();
        if total == 0 {
            return 0.0;
        }
        self.counts.diag().iter().sum::<u64>() as f64 / total as f64
    }

    /// Column-normalized diagonal; 0 when the class is never predicted.
    pub fn precision(&self, class: usize) -> f64 {
        let col: u64 = self.counts.column(class).iter().sum();
        if col == 0 {
            return 0.0;
        }
        self.counts[[class, class]] as f64 / col as f64
    }

    /// Row-normalized diagonal; 0 when the class has no instances.
    pub fn recall(&self, class: usize) -> f64 {
        let row: u64 = self.counts.row(class).iter().sum();
        if row == 0 {
            return 0.0;
        }
        self.counts[[class, class]] as f64 / row as f64
    }

    pub fn f_measure(&self, class: usize) -> f64 {
        let p = self.precision(class);
        let r = self.recall(class);
        if p + r == 0.0 {
            return 0.0;
        }
        2.0 * p * r / (p + r)
    }

    pub fn per_class_metrics(&self) -> Vec<ClassMetrics> {
        (0..self.class_names.len())
            .map(|c| ClassMetrics {
                precision: self.precision(c),
                recall: self.recall(c),
                f_measure: self.f_measure(c),
            })
            .collect()
    }

    /// CSV with a `truth\predicted` corner cell, one row per true class.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["truth\\predicted".to_string()];
        header.extend(self.class_names.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for (i, name) in self.class_names.iter().enumerate() {
            let mut record = vec![name.clone()];
            record.extend(self.counts.row(i).iter().map(|v| v.to_string()));
            w.write_record(&record).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses the format written by [`ConfusionMatrix::write_csv`].
    pub fn read_csv<R: std::io::Read>(input: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(input);
        let class_names: Vec<String> = reader
            .headers()
            .map_err(csv_err)?
            .iter()
            .skip(1)
            .map(|s| s.to_string())
            .collect();
        let c = class_names.len();
        if c == 0 {
            return Err(Error::data("confusion CSV has no classes"));
        }
        let mut counts = Array2::zeros((c, c));
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(csv_err)?;
            if i >= c || record.len() != c + 1 {
                return Err(Error::data("confusion CSV is not C x C"));
            }
            for (j, field) in record.iter().skip(1).enumerate() {
                counts[[i, j]] = field
                    .parse::<u64>()
                    .map_err(|_| Error::data(format!("bad count `{field}`")))?;
            }
        }
        Self::from_counts(counts, class_names)
    }
}

fn csv_err(err: csv::Error) -> Error {
    Error::data(format!("csv: {err}"))
}

/// Mutual-misclassification edges: weight(i, j) = counts[i][j] + counts[j][i]
/// for i < j, with zero-weight edges omitted.
pub fn misclassification_graph(cm: &ConfusionMatrix) -> Vec<(usize, usize, u64)> {
    let c = cm.class_names.len();
    let mut edges = Vec::new();
    for i in 0..c {
        for j in (i + 1)..c {
            let w = cm.counts[[i, j]] + cm.counts[[j, i]];
            if w > 0 {
                edges.push((i, j, w));
            }
        }
    }
    edges
}

/// Renders the misclassification graph in DOT, one node per class.
pub fn graph_to_dot(cm: &ConfusionMatrix) -> String {
    let mut out = String::from("graph misclassifications {\n");
    for name in &cm.class_names {
        out.push_str(&format!("    \"{name}\";\n"));
    }
    for (i, j, w) in misclassification_graph(cm) {
        out.push_str(&format!(
            "    \"{}\" -- \"{}\" [weight={w}, label=\"{w}\"];\n",
            cm.class_names[i], cm.class_names[j]
        ));
    }
    out.push_str("}\n");
    out
}

/// Writes the edge list as `class_a,class_b,weight` rows.
pub fn write_edge_list<W: std::io::Write>(cm: &ConfusionMatrix, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["class_a", "class_b", "weight"])
        .map_err(csv_err)?;
    for (i, j, weight) in misclassification_graph(cm) {
        w.write_record([
            cm.class_names[i].as_str(),
            cm.class_names[j].as_str(),
            &weight.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
