use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{grow, FeatureSampler};
use super::{check_labels, Classifier, Matrix, TreeModel, TreeParams};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    /// `None` means `ceil(sqrt(p))`.
    pub features_per_split: Option<usize>,
    pub tree: TreeParams,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            bootstrap: true,
            features_per_split: None,
            tree: TreeParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub hyperparameters: ForestParams,
    pub seed: u64,
    pub features_per_split: usize,
    pub tree_seeds: Vec<u64>,
    pub trees: Vec<TreeModel>,
}

fn ceil_sqrt(p: usize) -> usize {
    let mut k = (p as f64).sqrt() as usize;
    while k * k < p {
        k += 1;
    }
    while k > 0 && (k - 1) * (k - 1) >= p {
        k -= 1;
    }
    k
}

pub fn fit_forest(x: &Matrix, y: &[u8], params: &ForestParams, seed: u64) -> Result<ForestModel> {
    check_labels(x, y)?;
    if params.n_trees == 0 {
        return Err(Error::InvalidArgument(
            "forest needs at least one tree".into(),
        ));
    }
    let p = x.n_cols();
    let k = params
        .features_per_split
        .unwrap_or_else(|| ceil_sqrt(p))
        .clamp(1, p.max(1));
    let mut stream = SplitMix64::new(seed);
    let tree_seeds: Vec<u64> = (0..params.n_trees).map(|_| stream.next_u64()).collect();
    let n = x.n_rows();
    // Each tree depends only on its own seed; collect keeps tree order.
    let trees = tree_seeds
        .par_iter()
        .map(|&s| {
            let mut rng = SplitMix64::new(s);
            let rows: Vec<usize> = if params.bootstrap && n > 0 {
                (0..n).map(|_| rng.below(n)).collect()
            } else {
                (0..n).collect()
            };
            let sampler = FeatureSampler { rng: &mut rng, k };
            grow(x, y, rows, &params.tree, Some(sampler))
        })
        .collect();
    Ok(ForestModel {
        hyperparameters: *params,
        seed,
        features_per_split: k,
        tree_seeds,
        trees,
    })
}

impl Classifier for ForestModel {
    fn n_features(&self) -> usize {
        self.trees.first().map_or(0, |t| t.n_features)
    }

    fn scores(&self, row: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.scores(row) >= 0.5).count();
        votes as f64 / self.trees.len() as f64
    }
}
