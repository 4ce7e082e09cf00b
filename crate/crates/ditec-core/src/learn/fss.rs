//! Greedy forward feature-subset selection scored by cross-validated
//! accuracy (a wrapper around the target classifier).

use rayon::prelude::*;

use super::{cross_validate, ClassifierSpec, Dataset, FoldPlan};
use crate::error::{Error, Result};

/// One forward-selection step: the attribute added and the cross-validated
/// accuracy of the subset after adding it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FssStep {
    pub attribute: usize,
    pub accuracy: f64,
    /// Whether this step strictly improved on the best accuracy so far.
    pub improved: bool,
}

/// The ordered record of a greedy forward-selection run.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FssTrace {
    pub steps: Vec<FssStep>,
}

impl FssTrace {
    /// Attributes up to and including the last improving step; trailing
    /// stalled probes are dropped.
    pub fn best_subset(&self) -> Vec<usize> {
        let last = match self.steps.iter().rposition(|s| s.improved) {
            Some(i) => i,
            None => return Vec::new(),
        };
        self.steps[..=last].iter().map(|s| s.attribute).collect()
    }

    /// Best cross-validated accuracy reached by the run.
    pub fn best_accuracy(&self) -> f64 {
        self.steps
            .iter()
            .filter(|s| s.improved)
            .map(|s| s.accuracy)
            .fold(0.0, f64::max)
    }

    /// Writes `step,attribute,accuracy` rows, resolving attribute names.
    pub fn write_csv<W: std::io::Write>(
        &self,
        attribute_names: &[String],
        out: W,
    ) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "attribute", "accuracy"])
            .map_err(|e| Error::data(format!("csv: {e}")))?;
        for (i, step) in self.steps.iter().enumerate() {
            w.write_record([
                (i + 1).to_string(),
                attribute_names[step.attribute].clone(),
                step.accuracy.to_string(),
            ])
            .map_err(|e| Error::data(format!("csv: {e}")))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Forward selection: each step cross-validates every remaining attribute
/// added to the current subset and takes the best candidate (ties to the
/// lowest attribute index). Steps that fail to strictly improve still join
/// the working subset but count toward `patience`; the run stops after
/// `patience` consecutive non-improving steps, when accuracy reaches 1, or
/// when attributes run out.
pub fn greedy_fss(
    data: &Dataset,
    spec: ClassifierSpec,
    plan: &FoldPlan,
    patience: usize,
) -> Result<FssTrace> {
    if data.n_attributes() == 0 {
        return Err(Error::contract("feature selection needs attributes"));
    }
    if patience == 0 {
        return Err(Error::contract("patience must be at least 1"));
    }
    let mut selected: Vec<usize> = Vec::new();
    let mut remaining: Vec<usize> = (0..data.n_attributes()).collect();
    let mut trace = FssTrace::default();
    let mut best = 0.0f64;
    let mut stall = 0usize;

    while !remaining.is_empty() && stall < patience && best < 1.0 {
        let scored: Vec<(usize, f64)> = remaining
            .par_iter()
            .map(|&attr| {
                let mut subset = selected.clone();
                subset.push(attr);
                let cm = cross_validate(&data.select_attributes(&subset), plan, spec)?;
                Ok((attr, cm.accuracy()))
            })
            .collect::<Result<_>>()?;
        // Best accuracy, ties to the lowest attribute index: `scored`
        // preserves ascending attribute order, so strict > keeps the first.
        let (attr, accuracy) = scored
            .iter()
            .copied()
            .fold((usize::MAX, f64::NEG_INFINITY), |acc, cand| {
                if cand.1 > acc.1 {
                    cand
                } else {
                    acc
                }
            });
        let improved = accuracy > best;
        trace.steps.push(FssStep {
            attribute: attr,
            accuracy,
            improved,
        });
        selected.push(attr);
        remaining.retain(|a| *a != attr);
        if improved {
            best = accuracy;
            stall = 0;
        } else {
            stall += 1;
        }
    }
    Ok(trace)
}
