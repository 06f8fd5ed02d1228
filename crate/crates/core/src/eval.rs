//! Stratified k-fold cross-validation and the one-vs-others metric suite.
//!
//! Per class `c`, with `c` as the positive class:
//!
//! - weight `W_c = n_c / n`
//! - recall `R_c = tp / (tp + fn)`
//! - specificity `S_c = tn / (fp + tn)`
//! - `AUC_c = (R_c + S_c) / 2` (balanced accuracy, not ROC area)
//! - one-vs-others accuracy `(tp + tn) / n`
//!
//! Weighted recall, specificity and AUC are `sum_c W_c * metric_c`.
//! Overall accuracy is `trace / n`. A zero denominator yields 0 and a
//! [`MetricWarning`] instead of an error so a degenerate fold cannot abort
//! a cross-validation run.

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{train_forest, ForestParams};
use crate::seed::{derive_seed, rng_for};
use crate::signal::Dataset;

pub const DEFAULT_FOLDS: usize = 10;

/// Splits row indices into `k` folds. Within each class the rows are
/// shuffled with `seed` and dealt round-robin, continuing the deal where
/// the previous class stopped, so per-class and overall fold sizes both
/// differ by at most one. Each fold is returned sorted.
pub fn stratified_kfold(dataset: &Dataset, k: usize, seed: u64) -> Result<Vec<Vec<usize>>> {
    stratified_kfold_labels(&dataset.labels(), dataset.class_count(), k, seed)
}

pub fn stratified_kfold_labels(
    labels: &[usize],
    class_count: usize,
    k: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "cross-validation needs at least 2 folds, got {k}"
        )));
    }
    let mut by_class: Vec<Vec<usize>> = vec![Vec::new(); class_count];
    for (i, &label) in labels.iter().enumerate() {
        if label >= class_count {
            return Err(Error::LabelOutOfRange { label, class_count });
        }
        by_class[label].push(i);
    }
    for (class, members) in by_class.iter().enumerate() {
        if !members.is_empty() && members.len() < k {
            return Err(Error::ClassTooSmall {
                class,
                count: members.len(),
                folds: k,
            });
        }
    }
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for (class, mut members) in by_class.into_iter().enumerate() {
        members.shuffle(&mut rng_for(seed, class as u64));
        for i in members {
            folds[next].push(i);
            next = (next + 1) % k;
        }
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(folds)
}

/// `cells[true][predicted]` counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub class_count: usize,
    pub cells: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn zeros(class_count: usize) -> Self {
        ConfusionMatrix {
            class_count,
            cells: vec![vec![0; class_count]; class_count],
        }
    }

    pub fn total(&self) -> usize {
        self.cells.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.class_count).map(|c| self.cells[c][c]).sum()
    }

    pub fn tp(&self, c: usize) -> usize {
        self.cells[c][c]
    }

    /// Rows of class `c` predicted as something else.
    pub fn fn_(&self, c: usize) -> usize {
        self.cells[c].iter().sum::<usize>() - self.tp(c)
    }

    /// Rows of other classes predicted as `c`.
    pub fn fp(&self, c: usize) -> usize {
        self.cells.iter().map(|row| row[c]).sum::<usize>() - self.tp(c)
    }

    pub fn tn(&self, c: usize) -> usize {
        self.total() - self.tp(c) - self.fn_(c) - self.fp(c)
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        for (row, other_row) in self.cells.iter_mut().zip(&other.cells) {
            for (cell, v) in row.iter_mut().zip(other_row) {
                *cell += v;
            }
        }
    }
}

pub fn confusion_matrix(
    y_true: &[usize],
    y_pred: &[usize],
    class_count: usize,
) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch {
            left: y_true.len(),
            right: y_pred.len(),
        });
    }
    let mut cm = ConfusionMatrix::zeros(class_count);
    for (&t, &p) in y_true.iter().zip(y_pred) {
        for label in [t, p] {
            if label >= class_count {
                return Err(Error::LabelOutOfRange { label, class_count });
            }
        }
        cm.cells[t][p] += 1;
    }
    Ok(cm)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricWarning {
    /// `tp + fn = 0`: recall set to 0.
    NoPositives { class: usize },
    /// `fp + tn = 0`: specificity set to 0.
    NoNegatives { class: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: usize,
    pub support: usize,
    pub weight: f64,
    pub recall: f64,
    pub specificity: f64,
    pub auc: f64,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub weighted_recall: f64,
    pub weighted_specificity: f64,
    pub weighted_auc: f64,
    pub per_class: Vec<ClassMetrics>,
    pub warnings: Vec<MetricWarning>,
}

fn ratio_or_zero(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

pub fn metrics(cm: &ConfusionMatrix) -> Result<Metrics> {
    let n = cm.total();
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut warnings = Vec::new();
    let per_class: Vec<ClassMetrics> = (0..cm.class_count)
        .map(|c| {
            let (tp, fn_, fp, tn) = (cm.tp(c), cm.fn_(c), cm.fp(c), cm.tn(c));
            let recall = ratio_or_zero(tp, tp + fn_).unwrap_or_else(|| {
                warnings.push(MetricWarning::NoPositives { class: c });
                0.0
            });
            let specificity = ratio_or_zero(tn, fp + tn).unwrap_or_else(|| {
                warnings.push(MetricWarning::NoNegatives { class: c });
                0.0
            });
            ClassMetrics {
                class: c,
                support: tp + fn_,
                weight: (tp + fn_) as f64 / n as f64,
                recall,
                specificity,
                auc: (recall + specificity) / 2.0,
                accuracy: (tp + tn) as f64 / n as f64,
            }
        })
        .collect();
    let weighted =
        |f: fn(&ClassMetrics) -> f64| -> f64 { per_class.iter().map(|m| m.weight * f(m)).sum() };
    Ok(Metrics {
        accuracy: cm.trace() as f64 / n as f64,
        weighted_recall: weighted(|m| m.recall),
        weighted_specificity: weighted(|m| m.specificity),
        weighted_auc: weighted(|m| m.auc),
        per_class,
        warnings,
    })
}

/// One-vs-others accuracy `(tp + tn) / n` per class.
pub fn per_class_accuracy(cm: &ConfusionMatrix) -> Vec<f64> {
    let n = cm.total();
    (0..cm.class_count)
        .map(|c| ratio_or_zero(cm.tp(c) + cm.tn(c), n).unwrap_or(0.0))
        .collect()
}

/// Headline numbers of one evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub accuracy: f64,
    pub recall: f64,
    pub specificity: f64,
    pub auc: f64,
}

impl From<&Metrics> for Summary {
    fn from(m: &Metrics) -> Self {
        Summary {
            accuracy: m.accuracy,
            recall: m.weighted_recall,
            specificity: m.weighted_specificity,
            auc: m.weighted_auc,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldResult {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub summary: Summary,
    pub confusion: ConfusionMatrix,
    pub warnings: Vec<MetricWarning>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub folds: Vec<FoldResult>,
    /// Mean of the per-fold summaries.
    pub headline: Summary,
    /// Metrics of the summed confusion matrix.
    pub aggregate: Metrics,
    pub confusion: ConfusionMatrix,
}

/// Seed of the forest trained for `fold`.
pub fn fold_forest_seed(master_seed: u64, fold: usize) -> u64 {
    derive_seed(master_seed, fold as u64)
}

/// Trains on `k - 1` folds and tests on the remaining one, `k` times.
/// Fold assignment is driven by `seed`; each fold's forest uses
/// [`fold_forest_seed`] of `forest_params.master_seed`.
pub fn cross_validate(
    dataset: &Dataset,
    forest_params: &ForestParams,
    k: usize,
    seed: u64,
) -> Result<EvaluationReport> {
    let folds = stratified_kfold(dataset, k, seed)?;
    let class_count = dataset.class_count();
    let mut fold_of = vec![0; dataset.len()];
    for (f, members) in folds.iter().enumerate() {
        for &i in members {
            fold_of[i] = f;
        }
    }

    let results = folds
        .par_iter()
        .enumerate()
        .map(|(f, test)| -> Result<FoldResult> {
            let train: Vec<usize> = (0..dataset.len()).filter(|&i| fold_of[i] != f).collect();
            let params = ForestParams {
                master_seed: fold_forest_seed(forest_params.master_seed, f),
                ..*forest_params
            };
            let forest = train_forest(&dataset.select(&train), &params)?;
            let rows = dataset.rows();
            let y_true: Vec<usize> = test.iter().map(|&i| rows[i].label).collect();
            let y_pred: Vec<usize> = test
                .iter()
                .map(|&i| forest.predict(&rows[i].values))
                .collect();
            let confusion = confusion_matrix(&y_true, &y_pred, class_count)?;
            let m = metrics(&confusion)?;
            log::debug!(
                "fold {f}: {} train, {} test, accuracy {:.4}",
                train.len(),
                test.len(),
                m.accuracy
            );
            if !m.warnings.is_empty() {
                log::warn!(
                    "fold {f}: {} undefined per-class metrics set to 0",
                    m.warnings.len()
                );
            }
            Ok(FoldResult {
                fold: f,
                train_size: train.len(),
                test_size: test.len(),
                summary: Summary::from(&m),
                confusion,
                warnings: m.warnings,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut confusion = ConfusionMatrix::zeros(class_count);
    for r in &results {
        confusion.add(&r.confusion);
    }
    let k = results.len() as f64;
    let mean = |f: fn(&Summary) -> f64| results.iter().map(|r| f(&r.summary)).sum::<f64>() / k;
    Ok(EvaluationReport {
        headline: Summary {
            accuracy: mean(|s| s.accuracy),
            recall: mean(|s| s.recall),
            specificity: mean(|s| s.specificity),
            auc: mean(|s| s.auc),
        },
        aggregate: metrics(&confusion)?,
        confusion,
        folds: results,
    })
}
