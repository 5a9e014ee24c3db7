use serde::{Deserialize, Serialize};

use super::{check_labels, Classifier, Matrix};
use crate::error::Result;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// `None` grows until purity or `min_samples_split`.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: Some(8),
            min_samples_split: 2,
        }
    }
}

/// Rows with `x[feature] <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        counts: [u64; 2],
    },
}

/// Flat node arena; index 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub hyperparameters: TreeParams,
    pub n_features: usize,
    pub nodes: Vec<Node>,
}

impl TreeModel {
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Features referenced by at least one split.
    pub fn used_features(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Split { feature, .. } => Some(*feature),
                Node::Leaf { .. } => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn leaf(&self, row: &[f64]) -> [u64; 2] {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { counts } => return counts,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    i = if row[feature] <= threshold {
                        left
                    } else {
                        right
                    }
                }
            }
        }
    }
}

impl Classifier for TreeModel {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn scores(&self, row: &[f64]) -> f64 {
        let [neg, pos] = self.leaf(row);
        pos as f64 / (neg + pos) as f64
    }
}

pub fn fit_tree(x: &Matrix, y: &[u8], params: &TreeParams) -> Result<TreeModel> {
    check_labels(x, y)?;
    let rows: Vec<usize> = (0..x.n_rows()).collect();
    Ok(grow(x, y, rows, params, None))
}

/// Per-split feature sampling for forests: `k` features drawn without
/// replacement from `rng` at every node.
pub(crate) struct FeatureSampler<'a> {
    pub rng: &'a mut SplitMix64,
    pub k: usize,
}

struct Candidate {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

/// Count-weighted Gini impurity, `n·(1 − Σ pᵢ²)`.
fn weighted_gini(c0: u64, c1: u64) -> f64 {
    let n = (c0 + c1) as f64;
    if n == 0.0 {
        return 0.0;
    }
    n - (c0 as f64 * c0 as f64 + c1 as f64 * c1 as f64) / n
}

fn best_split(x: &Matrix, y: &[u8], rows: &[usize], features: &[usize]) -> Option<Candidate> {
    let total1 = rows.iter().filter(|&&r| y[r] == 1).count() as u64;
    let total0 = rows.len() as u64 - total1;
    let mut best: Option<Candidate> = None;
    let mut pairs: Vec<(f64, u8)> = Vec::with_capacity(rows.len());
    for &f in features {
        pairs.clear();
        pairs.extend(rows.iter().map(|&r| (x.get(r, f), y[r])));
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (mut l0, mut l1) = (0u64, 0u64);
        for i in 0..pairs.len() - 1 {
            if pairs[i].1 == 1 {
                l1 += 1;
            } else {
                l0 += 1;
            }
            let (lo, hi) = (pairs[i].0, pairs[i + 1].0);
            if lo == hi {
                continue;
            }
            let impurity = weighted_gini(l0, l1) + weighted_gini(total0 - l0, total1 - l1);
            if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                let mut threshold = lo + (hi - lo) / 2.0;
                if threshold >= hi {
                    threshold = lo;
                }
                best = Some(Candidate {
                    feature: f,
                    threshold,
                    impurity,
                });
            }
        }
    }
    best
}

pub(crate) fn grow(
    x: &Matrix,
    y: &[u8],
    rows: Vec<usize>,
    params: &TreeParams,
    mut sampler: Option<FeatureSampler<'_>>,
) -> TreeModel {
    let p = x.n_cols();
    let mut nodes = vec![Node::Leaf { counts: [0, 0] }];
    let mut stack = vec![(0usize, rows, 0usize)];
    let mut pool: Vec<usize> = (0..p).collect();
    while let Some((id, rows, depth)) = stack.pop() {
        let pos = rows.iter().filter(|&&r| y[r] == 1).count() as u64;
        let counts = [rows.len() as u64 - pos, pos];
        let stop = counts[0] == 0
            || counts[1] == 0
            || rows.len() < params.min_samples_split.max(2)
            || params.max_depth.is_some_and(|d| depth >= d);
        nodes[id] = Node::Leaf { counts };
        if stop {
            continue;
        }
        let features: Vec<usize> = match sampler.as_mut() {
            Some(s) if s.k < p => {
                pool.sort_unstable();
                for i in 0..s.k {
                    let j = i + s.rng.below(p - i);
                    pool.swap(i, j);
                }
                let mut chosen = pool[..s.k].to_vec();
                chosen.sort_unstable();
                chosen
            }
            _ => (0..p).collect(),
        };
        let Some(split) = best_split(x, y, &rows, &features) else {
            continue;
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&r| x.get(r, split.feature) <= split.threshold);
        let (left, right) = (nodes.len(), nodes.len() + 1);
        nodes.push(Node::Leaf { counts: [0, 0] });
        nodes.push(Node::Leaf { counts: [0, 0] });
        nodes[id] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        stack.push((right, right_rows, depth + 1));
        stack.push((left, left_rows, depth + 1));
    }
    TreeModel {
        hyperparameters: *params,
        n_features: p,
        nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor() -> (Matrix, Vec<u8>) {
        let x = Matrix::from_rows(&[
            vec![0.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ]);
        (x, vec![0, 1, 1, 0])
    }

    #[test]
    fn fits_xor_at_depth_two() {
        let (x, y) = xor();
        let params = TreeParams {
            max_depth: Some(2),
            ..TreeParams::default()
        };
        let t = fit_tree(&x, &y, &params).unwrap();
        assert_eq!(t.predict(&x).unwrap(), y);
        assert_eq!(t.depth(), 2);
        // Root split: every candidate ties, so feature 0 at its midpoint wins.
        assert_eq!(
            t.nodes[0],
            Node::Split {
                feature: 0,
                threshold: 0.5,
                left: 1,
                right: 2
            }
        );
        let scores = t.predict_proba(&x).unwrap();
        assert!(scores.iter().all(|&s| s == 0.0 || s == 1.0));
    }

    #[test]
    fn depth_one_cannot_fit_xor() {
        let (x, y) = xor();
        let params = TreeParams {
            max_depth: Some(1),
            ..TreeParams::default()
        };
        let t = fit_tree(&x, &y, &params).unwrap();
        let hits = t
            .predict(&x)
            .unwrap()
            .iter()
            .zip(&y)
            .filter(|(a, b)| a == b)
            .count();
        assert_eq!(hits, 2);
    }

    #[test]
    fn constant_target_is_one_leaf() {
        let x = Matrix::from_columns(&[vec![1.0, 2.0, 3.0]]).unwrap();
        let t = fit_tree(&x, &[1, 1, 1], &TreeParams::default()).unwrap();
        assert_eq!(t.nodes, vec![Node::Leaf { counts: [0, 3] }]);
    }

    #[test]
    fn constant_features_give_positive_fraction() {
        let x = Matrix::from_columns(&[vec![4.0; 4]]).unwrap();
        let t = fit_tree(&x, &[1, 0, 1, 1], &TreeParams::default()).unwrap();
        assert_eq!(t.nodes.len(), 1);
        assert_eq!(t.predict_proba(&x).unwrap(), vec![0.75; 4]);
        assert_eq!(t.predict(&x).unwrap(), vec![1; 4]);
    }

    #[test]
    fn threshold_between_adjacent_floats() {
        let a = 1.0f64;
        let b = f64::from_bits(a.to_bits() + 1);
        let x = Matrix::from_columns(&[vec![a, b]]).unwrap();
        let t = fit_tree(&x, &[0, 1], &TreeParams::default()).unwrap();
        assert_eq!(t.predict(&x).unwrap(), vec![0, 1]);
    }

    #[test]
    fn min_samples_split_stops_growth() {
        let x = Matrix::from_columns(&[vec![1.0, 2.0, 3.0]]).unwrap();
        let params = TreeParams {
            max_depth: None,
            min_samples_split: 4,
        };
        assert_eq!(fit_tree(&x, &[0, 1, 0], &params).unwrap().nodes.len(), 1);
    }
}
