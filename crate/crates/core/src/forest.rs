//! Random forest: bagged CART trees with per-node feature sampling and
//! plurality voting.
//!
//! Tree `i` draws its bootstrap sample and its node feature subsets from
//! its own `ChaCha8Rng`, seeded with `derive_seed(master_seed, i)`. Trees
//! are trained in parallel and stored by index, so the model does not
//! depend on scheduling.

use std::io::{Read, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cart::{argmax_lowest, build_tree_on, predict, FeatureSubset, TreeNode, TreeParams};
use crate::error::{Error, Result};
use crate::ingest::LabelMap;
use crate::seed::{derive_seed, rng_for};
use crate::signal::{Dataset, FEATURE_COUNT};

pub const MODEL_FORMAT: &str = "gaitrec-forest/1";

/// floor(sqrt(30))
pub const DEFAULT_K_TRY: usize = 5;

pub const DEFAULT_TREE_COUNT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestParams {
    pub tree_count: usize,
    pub tree: TreeParams,
    /// Train each tree on an n-of-n draw with replacement. Off for the
    /// single decision-tree baseline.
    pub bootstrap: bool,
    pub master_seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            tree_count: DEFAULT_TREE_COUNT,
            tree: TreeParams {
                feature_subset: FeatureSubset::Count(DEFAULT_K_TRY),
                ..TreeParams::default()
            },
            bootstrap: true,
            master_seed: 0,
        }
    }
}

impl ForestParams {
    /// One unbagged tree considering every feature at every node.
    pub fn decision_tree(master_seed: u64) -> Self {
        ForestParams {
            tree_count: 1,
            tree: TreeParams::default(),
            bootstrap: false,
            master_seed,
        }
    }

    pub fn with_tree_count(mut self, tree_count: usize) -> Self {
        self.tree_count = tree_count;
        self
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    pub fn validate(&self, feature_count: usize) -> Result<()> {
        if self.tree_count == 0 {
            return Err(Error::InvalidParameter(
                "tree count must be at least 1".into(),
            ));
        }
        if let FeatureSubset::Count(k) = self.tree.feature_subset {
            if k == 0 || k > feature_count {
                return Err(Error::InvalidParameter(format!(
                    "k_try must lie in 1..={feature_count}, got {k}"
                )));
            }
        }
        self.tree.validate()
    }
}

/// `n` indices drawn uniformly with replacement from `0..n`.
pub fn bootstrap_indices<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

pub fn bootstrap_sample<R: Rng + ?Sized>(dataset: &Dataset, rng: &mut R) -> Result<Dataset> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(dataset.select(&bootstrap_indices(dataset.len(), rng)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub params: ForestParams,
    pub class_count: usize,
    pub seeds: Vec<u64>,
    pub trees: Vec<TreeNode>,
}

pub fn train_forest(dataset: &Dataset, params: &ForestParams) -> Result<Forest> {
    params.validate(FEATURE_COUNT)?;
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if dataset.class_counts().iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::SingleClass);
    }
    let rows = dataset.rows();
    let all: Vec<usize> = (0..rows.len()).collect();
    let trees = (0..params.tree_count)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(params.master_seed, i as u64);
            let sample = if params.bootstrap {
                bootstrap_indices(rows.len(), &mut rng)
            } else {
                all.clone()
            };
            build_tree_on(rows, &sample, dataset.class_count(), &params.tree, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Forest {
        params: *params,
        class_count: dataset.class_count(),
        seeds: (0..params.tree_count)
            .map(|i| derive_seed(params.master_seed, i as u64))
            .collect(),
        trees,
    })
}

impl Forest {
    /// Per-class vote counts for one feature row.
    pub fn votes(&self, features: &[f64]) -> Vec<usize> {
        let mut votes = vec![0; self.class_count];
        for tree in &self.trees {
            votes[predict(tree, features)] += 1;
        }
        votes
    }

    pub fn predict(&self, features: &[f64]) -> usize {
        argmax_lowest(&self.votes(features))
    }
}

/// Plurality vote; ties go to the lowest label.
pub fn predict_forest(forest: &Forest, features: &[f64]) -> usize {
    forest.predict(features)
}

/// Persisted model: the forest plus the user names behind its labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format: String,
    pub master_seed: u64,
    pub labels: LabelMap,
    pub forest: Forest,
}

impl ModelDocument {
    pub fn new(forest: Forest, labels: LabelMap) -> Self {
        ModelDocument {
            format: MODEL_FORMAT.to_string(),
            master_seed: forest.params.master_seed,
            labels,
            forest,
        }
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer(out, self)?;
        Ok(())
    }

    pub fn read<R: Read>(input: R) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_reader(input)?;
        if doc.format != MODEL_FORMAT {
            return Err(Error::InvalidParameter(format!(
                "unsupported model format `{}`, expected `{MODEL_FORMAT}`",
                doc.format
            )));
        }
        Ok(doc)
    }
}
