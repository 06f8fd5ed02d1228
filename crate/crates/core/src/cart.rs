//! CART classification trees grown with Gini impurity.
//!
//! Node impurity is the sum of per-class `p(1 - p)` terms. A split is
//! scored by the impurity drop
//!
//! ```text
//! dI = p(parent) I(parent) - (p(left) I(left) + p(right) I(right))
//! ```
//!
//! where `p(n)` is the share of the *root* observations that reach node
//! `n`. Using the root total rescales scores between nodes but never
//! changes which split wins within a node.
//!
//! Candidate thresholds are midpoints between consecutive distinct values.
//! Ties go to the lower feature index, then the lower threshold. Rows with
//! `value <= threshold` go left.
//!
//! [`best_split`] reports only splits with a positive drop. Tree growth
//! stops at pure nodes, nodes below `min_samples_split`, the depth limit,
//! or when the sampled features are constant across the node.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal::FeatureVector;

/// Anything a tree can be trained on: a feature row plus a dense label.
pub trait Observation {
    fn features(&self) -> &[f64];
    fn label(&self) -> usize;
}

impl Observation for FeatureVector {
    fn features(&self) -> &[f64] {
        &self.values
    }

    fn label(&self) -> usize {
        self.label
    }
}

impl Observation for (Vec<f64>, usize) {
    fn features(&self) -> &[f64] {
        &self.0
    }

    fn label(&self) -> usize {
        self.1
    }
}

impl<O: Observation> Observation for &O {
    fn features(&self) -> &[f64] {
        (**self).features()
    }

    fn label(&self) -> usize {
        (**self).label()
    }
}

/// Gini term for one class proportion.
pub fn gini(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProportionOutOfRange(p));
    }
    Ok(p * (1.0 - p))
}

/// Sum of Gini terms over a class histogram.
pub fn node_impurity(class_histogram: &[usize]) -> Result<f64> {
    let total: usize = class_histogram.iter().sum();
    if total == 0 {
        return Err(Error::EmptyNode);
    }
    Ok(impurity_of(class_histogram, total))
}

fn impurity_of(hist: &[usize], total: usize) -> f64 {
    let n = total as f64;
    hist.iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * (1.0 - p)
        })
        .sum()
}

fn weighted_impurity(hist: &[usize], total: usize, root_total: usize) -> f64 {
    (total as f64 / root_total as f64) * impurity_of(hist, total)
}

/// Impurity drop of splitting `parent` into `left` and `right`.
pub fn impurity_drop(
    parent: &[usize],
    left: &[usize],
    right: &[usize],
    root_total: usize,
) -> Result<f64> {
    let parent_total: usize = parent.iter().sum();
    let left_total: usize = left.iter().sum();
    let right_total: usize = right.iter().sum();
    if left_total == 0 || right_total == 0 || parent_total == 0 {
        return Err(Error::EmptyNode);
    }
    if left_total + right_total != parent_total {
        return Err(Error::LengthMismatch {
            left: left_total + right_total,
            right: parent_total,
        });
    }
    if root_total < parent_total {
        return Err(Error::InvalidParameter(format!(
            "root total {root_total} is smaller than node total {parent_total}"
        )));
    }
    Ok(drop_of(
        parent,
        parent_total,
        left,
        left_total,
        right,
        right_total,
        root_total,
    ))
}

fn drop_of(
    parent: &[usize],
    parent_total: usize,
    left: &[usize],
    left_total: usize,
    right: &[usize],
    right_total: usize,
    root_total: usize,
) -> f64 {
    weighted_impurity(parent, parent_total, root_total)
        - (weighted_impurity(left, left_total, root_total)
            + weighted_impurity(right, right_total, root_total))
}

/// Lies in `[a, b)` for `a < b`, so `a` routes left and `b` right.
fn midpoint(a: f64, b: f64) -> f64 {
    let mid = (a + b) / 2.0;
    if mid < b {
        mid
    } else {
        a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature_index: usize,
    pub threshold: f64,
    pub impurity_drop: f64,
}

/// Best split over all rows. The class count is taken from the largest
/// label present.
pub fn best_split<O: Observation>(
    rows: &[O],
    candidate_features: &[usize],
    root_total: usize,
) -> Option<Split> {
    let class_count = rows.iter().map(|r| r.label() + 1).max().unwrap_or(0);
    let indices: Vec<usize> = (0..rows.len()).collect();
    best_split_among(rows, &indices, candidate_features, root_total, class_count)
        .filter(|s| s.impurity_drop > 0.0)
}

fn histogram<O: Observation>(rows: &[O], indices: &[usize], class_count: usize) -> Vec<usize> {
    let mut hist = vec![0; class_count];
    for &i in indices {
        hist[rows[i].label()] += 1;
    }
    hist
}

/// Highest-scoring partition, including zero-drop ones.
fn best_split_among<O: Observation>(
    rows: &[O],
    indices: &[usize],
    candidate_features: &[usize],
    root_total: usize,
    class_count: usize,
) -> Option<Split> {
    let n = indices.len();
    if n < 2 {
        return None;
    }
    let parent = histogram(rows, indices, class_count);
    let mut features = candidate_features.to_vec();
    features.sort_unstable();
    features.dedup();

    let mut best: Option<Split> = None;
    let mut column: Vec<(f64, usize)> = Vec::with_capacity(n);
    let mut left = vec![0; class_count];
    let mut right = vec![0; class_count];
    for &feature in &features {
        column.clear();
        column.extend(
            indices
                .iter()
                .map(|&i| (rows[i].features()[feature], rows[i].label())),
        );
        column.sort_by(|a, b| a.0.total_cmp(&b.0));
        left.iter_mut().for_each(|c| *c = 0);
        right.copy_from_slice(&parent);
        for i in 0..n - 1 {
            let (value, label) = column[i];
            left[label] += 1;
            right[label] -= 1;
            let next = column[i + 1].0;
            if value >= next {
                continue;
            }
            let drop = drop_of(&parent, n, &left, i + 1, &right, n - i - 1, root_total);
            if best.is_none_or(|b| drop > b.impurity_drop) {
                best = Some(Split {
                    feature_index: feature,
                    threshold: midpoint(value, next),
                    impurity_drop: drop,
                });
            }
        }
    }
    best
}

/// How many features each node may consider.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSubset {
    All,
    Count(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub feature_subset: FeatureSubset,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: None,
            min_samples_split: 2,
            feature_subset: FeatureSubset::All,
        }
    }
}

impl TreeParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_samples_split < 2 {
            return Err(Error::InvalidParameter(format!(
                "min_samples_split must be at least 2, got {}",
                self.min_samples_split
            )));
        }
        if self.feature_subset == FeatureSubset::Count(0) {
            return Err(Error::InvalidParameter(
                "feature subset size must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Internal {
        feature_index: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        class_label: usize,
        class_histogram: Vec<usize>,
    },
}

impl TreeNode {
    fn leaf(class_histogram: Vec<usize>) -> Self {
        TreeNode::Leaf {
            class_label: argmax_lowest(&class_histogram),
            class_histogram,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Internal { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Internal { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

/// Index of the largest count; ties resolve to the lowest index.
pub(crate) fn argmax_lowest(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

/// Grows a tree on all of `rows`.
pub fn build_tree<O: Observation, R: Rng + ?Sized>(
    rows: &[O],
    params: &TreeParams,
    rng: &mut R,
) -> Result<TreeNode> {
    let indices: Vec<usize> = (0..rows.len()).collect();
    let class_count = rows.iter().map(|r| r.label() + 1).max().unwrap_or(0);
    build_tree_on(rows, &indices, class_count, params, rng)
}

/// Grows a tree on `rows[indices]`; duplicate indices count as repeated
/// observations, which is how bootstrap samples are trained without
/// copying rows.
pub fn build_tree_on<O: Observation, R: Rng + ?Sized>(
    rows: &[O],
    indices: &[usize],
    class_count: usize,
    params: &TreeParams,
    rng: &mut R,
) -> Result<TreeNode> {
    params.validate()?;
    if indices.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let feature_count = rows[indices[0]].features().len();
    if let Some(r) = indices
        .iter()
        .map(|&i| &rows[i])
        .find(|r| r.features().len() != feature_count)
    {
        return Err(Error::LengthMismatch {
            left: feature_count,
            right: r.features().len(),
        });
    }
    if let Some(label) = indices
        .iter()
        .map(|&i| rows[i].label())
        .find(|&l| l >= class_count)
    {
        return Err(Error::LabelOutOfRange { label, class_count });
    }
    let grower = Grower {
        rows,
        class_count,
        feature_count,
        root_total: indices.len(),
        params,
    };
    Ok(grower.grow(indices.to_vec(), 0, rng))
}

struct Grower<'a, O> {
    rows: &'a [O],
    class_count: usize,
    feature_count: usize,
    root_total: usize,
    params: &'a TreeParams,
}

impl<O: Observation> Grower<'_, O> {
    fn candidates<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        match self.params.feature_subset {
            FeatureSubset::Count(k) if k < self.feature_count => {
                let mut picked = sample(rng, self.feature_count, k).into_vec();
                picked.sort_unstable();
                picked
            }
            _ => (0..self.feature_count).collect(),
        }
    }

    fn grow<R: Rng + ?Sized>(&self, indices: Vec<usize>, depth: usize, rng: &mut R) -> TreeNode {
        let hist = histogram(self.rows, &indices, self.class_count);
        let pure = hist.iter().filter(|&&c| c > 0).count() <= 1;
        let at_depth_limit = self.params.max_depth.is_some_and(|d| depth >= d);
        if pure || indices.len() < self.params.min_samples_split || at_depth_limit {
            return TreeNode::leaf(hist);
        }
        // Zero-drop splits are taken on impure nodes: XOR-like layouts have
        // no positive first cut but become pure one level down.
        let candidates = self.candidates(rng);
        let Some(split) = best_split_among(
            self.rows,
            &indices,
            &candidates,
            self.root_total,
            self.class_count,
        ) else {
            return TreeNode::leaf(hist);
        };
        let (left, right): (Vec<usize>, Vec<usize>) = indices
            .into_iter()
            .partition(|&i| self.rows[i].features()[split.feature_index] <= split.threshold);
        TreeNode::Internal {
            feature_index: split.feature_index,
            threshold: split.threshold,
            left: Box::new(self.grow(left, depth + 1, rng)),
            right: Box::new(self.grow(right, depth + 1, rng)),
        }
    }
}

pub fn predict(tree: &TreeNode, features: &[f64]) -> usize {
    let mut node = tree;
    loop {
        match node {
            TreeNode::Leaf { class_label, .. } => return *class_label,
            TreeNode::Internal {
                feature_index,
                threshold,
                left,
                right,
            } => {
                node = if features[*feature_index] <= *threshold {
                    left
                } else {
                    right
                };
            }
        }
    }
}
