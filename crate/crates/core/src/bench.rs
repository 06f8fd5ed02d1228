//! Tree-count sweep: training time and cross-validated accuracy/AUC per
//! forest size.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;
use crate::eval::cross_validate;
use crate::forest::{train_forest, ForestParams};
use crate::signal::Dataset;

pub const TREE_SWEEP: [usize; 8] = [1, 2, 4, 8, 16, 32, 64, 128];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BenchRow {
    pub trees: usize,
    /// Median wall time of training on the full dataset.
    pub train_seconds: f64,
    pub accuracy: f64,
    pub auc: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len().is_multiple_of(2) {
        (xs[mid - 1] + xs[mid]) / 2.0
    } else {
        xs[mid]
    }
}

/// Median of `repeats` full-dataset training runs, in seconds.
pub fn time_training(dataset: &Dataset, params: &ForestParams, repeats: usize) -> Result<f64> {
    let mut times = Vec::with_capacity(repeats.max(1));
    for _ in 0..repeats.max(1) {
        let start = Instant::now();
        let forest = train_forest(dataset, params)?;
        times.push(start.elapsed().as_secs_f64());
        drop(forest);
    }
    Ok(median(times))
}

pub fn sweep(
    dataset: &Dataset,
    base: &ForestParams,
    tree_counts: &[usize],
    folds: usize,
    seed: u64,
    repeats: usize,
) -> Result<Vec<BenchRow>> {
    tree_counts
        .iter()
        .map(|&trees| {
            let params = base.with_tree_count(trees);
            let train_seconds = time_training(dataset, &params, repeats)?;
            let report = cross_validate(dataset, &params, folds, seed)?;
            Ok(BenchRow {
                trees,
                train_seconds,
                accuracy: report.headline.accuracy,
                auc: report.headline.auc,
            })
        })
        .collect()
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["trees", "train_seconds", "accuracy", "auc"])?;
    for r in rows {
        w.write_record([
            r.trees.to_string(),
            r.train_seconds.to_string(),
            r.accuracy.to_string(),
            r.auc.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
