//! Random forest of Gini-impurity CART trees.

use std::path::Path;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::BaselineError;

#[derive(Debug, Clone)]
pub struct ForestConfig {
    pub n_estimators: usize,
    pub max_depth: usize,
    pub min_samples_split: usize,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self { n_estimators: 50, max_depth: 5, min_samples_split: 2, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf { counts: Vec<u32> },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    nodes: Vec<TreeNode>,
}

impl Tree {
    fn leaf_distribution(&self, row: &[f64]) -> Vec<f64> {
        let mut node = 0usize;
        loop {
            match &self.nodes[node] {
                TreeNode::Leaf { counts } => {
                    let total: u32 = counts.iter().sum();
                    return counts.iter().map(|&c| c as f64 / total as f64).collect();
                }
                TreeNode::Split { feature, threshold, left, right } => {
                    node = if row[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<Tree>,
    pub n_classes: usize,
    pub n_features: usize,
}

impl Forest {
    pub fn save_json(&self, path: &Path) -> Result<(), BaselineError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self, BaselineError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Trains `n_estimators` CART trees on bootstrap resamples. Each split draws
/// `floor(sqrt(d))` candidate features; per-tree RNGs derive deterministically
/// from the root seed, so trees could be grown in parallel without changing
/// the result.
pub fn train_forest(
    x: &[Vec<f64>],
    y: &[usize],
    cfg: &ForestConfig,
) -> Result<Forest, BaselineError> {
    assert_eq!(x.len(), y.len(), "one label per row");
    if x.is_empty() {
        return Err(BaselineError::DegenerateData("empty training set".into()));
    }
    let n_classes = y.iter().max().unwrap() + 1;
    if y.iter().all(|&l| l == y[0]) {
        return Err(BaselineError::DegenerateData("single-class labels".into()));
    }
    let n = x.len();
    let d = x[0].len();
    let features_per_split = ((d as f64).sqrt().floor() as usize).max(1);

    let mut trees = Vec::with_capacity(cfg.n_estimators);
    for t in 0..cfg.n_estimators {
        let mut rng =
            StdRng::seed_from_u64(cfg.seed.wrapping_add((t as u64).wrapping_mul(0x9E3779B97F4A7C15)));
        let indices: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
        let mut nodes = Vec::new();
        build_node(
            x,
            y,
            &indices,
            0,
            cfg,
            features_per_split,
            n_classes,
            &mut rng,
            &mut nodes,
        );
        trees.push(Tree { nodes });
    }
    Ok(Forest { trees, n_classes, n_features: d })
}

#[allow(clippy::too_many_arguments)]
fn build_node(
    x: &[Vec<f64>],
    y: &[usize],
    indices: &[usize],
    depth: usize,
    cfg: &ForestConfig,
    features_per_split: usize,
    n_classes: usize,
    rng: &mut StdRng,
    nodes: &mut Vec<TreeNode>,
) -> usize {
    let mut counts = vec![0u32; n_classes];
    for &i in indices {
        counts[y[i]] += 1;
    }
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    if depth >= cfg.max_depth || indices.len() < cfg.min_samples_split || pure {
        nodes.push(TreeNode::Leaf { counts });
        return nodes.len() - 1;
    }

    let d = x[0].len();
    let mut feature_pool: Vec<usize> = (0..d).collect();
    feature_pool.shuffle(rng);
    let candidates = &feature_pool[..features_per_split.min(d)];

    let mut best: Option<(usize, f64, f64)> = None; // (feature, threshold, weighted gini)
    for &feature in candidates {
        let mut values: Vec<(f64, usize)> =
            indices.iter().map(|&i| (x[i][feature], y[i])).collect();
        values.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total = values.len() as f64;
        let mut left_counts = vec![0u32; n_classes];
        let mut right_counts = counts.clone();
        for w in 0..values.len() - 1 {
            left_counts[values[w].1] += 1;
            right_counts[values[w].1] -= 1;
            if values[w].0 == values[w + 1].0 {
                continue;
            }
            let nl = (w + 1) as f64;
            let nr = total - nl;
            let score = (nl * gini(&left_counts) + nr * gini(&right_counts)) / total;
            if best.is_none_or(|(_, _, s)| score < s) {
                let threshold = (values[w].0 + values[w + 1].0) / 2.0;
                best = Some((feature, threshold, score));
            }
        }
    }

    let Some((feature, threshold, _)) = best else {
        // Every candidate feature was constant on this node.
        nodes.push(TreeNode::Leaf { counts });
        return nodes.len() - 1;
    };

    let (left_idx, right_idx): (Vec<usize>, Vec<usize>) =
        indices.iter().partition(|&&i| x[i][feature] <= threshold);
    // Reserve our slot before recursing so child indices are stable.
    nodes.push(TreeNode::Leaf { counts: vec![] });
    let slot = nodes.len() - 1;
    let left =
        build_node(x, y, &left_idx, depth + 1, cfg, features_per_split, n_classes, rng, nodes);
    let right =
        build_node(x, y, &right_idx, depth + 1, cfg, features_per_split, n_classes, rng, nodes);
    nodes[slot] = TreeNode::Split { feature, threshold, left, right };
    slot
}

fn gini(counts: &[u32]) -> f64 {
    let total: u32 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / total;
            p * p
        })
        .sum::<f64>()
}

/// Mean of per-tree leaf distributions; label is the argmax with ties going
/// to the lower class index.
pub fn predict_forest(
    forest: &Forest,
    rows: &[Vec<f64>],
) -> Result<(Vec<usize>, Vec<Vec<f64>>), BaselineError> {
    let mut labels = Vec::with_capacity(rows.len());
    let mut probabilities = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != forest.n_features {
            return Err(BaselineError::ShapeMismatch {
                expected: forest.n_features,
                got: row.len(),
            });
        }
        let mut acc = vec![0.0f64; forest.n_classes];
        for tree in &forest.trees {
            for (a, p) in acc.iter_mut().zip(tree.leaf_distribution(row)) {
                *a += p;
            }
        }
        for a in &mut acc {
            *a /= forest.trees.len() as f64;
        }
        let mut best = 0;
        for (i, &p) in acc.iter().enumerate().skip(1) {
            if p > acc[best] {
                best = i;
            }
        }
        labels.push(best);
        probabilities.push(acc);
    }
    Ok((labels, probabilities))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Noisy, linearly separable 2-D blobs.
    fn blobs(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..n {
            let label = i % 2;
            let c = if label == 0 { -1.0 } else { 1.0 };
            x.push(vec![c + 0.4 * rng.gen::<f64>(), c - 0.4 * rng.gen::<f64>()]);
            y.push(label);
        }
        (x, y)
    }

    #[test]
    fn separable_data_trains_to_high_accuracy() {
        let (x, y) = blobs(200, 1);
        let forest = train_forest(&x, &y, &ForestConfig::default()).unwrap();
        let (pred, _) = predict_forest(&forest, &x).unwrap();
        let correct = pred.iter().zip(&y).filter(|(a, b)| a == b).count();
        assert!(correct as f64 / y.len() as f64 >= 0.95);
    }

    #[test]
    fn training_is_deterministic_per_seed() {
        let (x, y) = blobs(80, 2);
        let cfg = ForestConfig { seed: 33, ..ForestConfig::default() };
        let a = train_forest(&x, &y, &cfg).unwrap();
        let b = train_forest(&x, &y, &cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn pure_leaf_predicts_its_class_with_certainty() {
        let tree = Tree { nodes: vec![TreeNode::Leaf { counts: vec![7, 0] }] };
        assert_eq!(tree.leaf_distribution(&[0.0]), vec![1.0, 0.0]);
    }

    #[test]
    fn unanimous_trees_give_probability_one() {
        // Large, well-separated blobs: every bootstrap keeps both classes and
        // every tree classifies a far probe the same way.
        let (x, y) = blobs(200, 11);
        let cfg = ForestConfig { n_estimators: 20, ..ForestConfig::default() };
        let forest = train_forest(&x, &y, &cfg).unwrap();
        let (pred, probs) = predict_forest(&forest, &[vec![-5.0, -5.0]]).unwrap();
        assert_eq!(pred[0], 0);
        assert!((probs[0][0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_votes_tie_toward_the_lower_class() {
        // Two hand-built stumps that disagree with certainty.
        let leaf_a = Tree { nodes: vec![TreeNode::Leaf { counts: vec![5, 0] }] };
        let leaf_b = Tree { nodes: vec![TreeNode::Leaf { counts: vec![0, 5] }] };
        let forest = Forest { trees: vec![leaf_a, leaf_b], n_classes: 2, n_features: 1 };
        let (pred, probs) = predict_forest(&forest, &[vec![0.0]]).unwrap();
        assert_eq!(probs[0], vec![0.5, 0.5]);
        assert_eq!(pred[0], 0);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let (x, y) = blobs(60, 3);
        let forest = train_forest(&x, &y, &ForestConfig::default()).unwrap();
        let (_, probs) = predict_forest(&forest, &x).unwrap();
        for p in probs {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn depth_limit_is_respected() {
        let (x, y) = blobs(200, 4);
        let cfg = ForestConfig { max_depth: 2, ..ForestConfig::default() };
        let forest = train_forest(&x, &y, &cfg).unwrap();
        for tree in &forest.trees {
            fn depth_of(nodes: &[TreeNode], node: usize) -> usize {
                match &nodes[node] {
                    TreeNode::Leaf { .. } => 0,
                    TreeNode::Split { left, right, .. } => {
                        1 + depth_of(nodes, *left).max(depth_of(nodes, *right))
                    }
                }
            }
            assert!(depth_of(&tree.nodes, 0) <= 2);
        }
    }

    #[test]
    fn single_class_labels_are_degenerate() {
        let x = vec![vec![0.0], vec![1.0]];
        assert!(matches!(
            train_forest(&x, &[1, 1], &ForestConfig::default()),
            Err(BaselineError::DegenerateData(_))
        ));
    }

    #[test]
    fn row_count_is_preserved_and_shape_checked() {
        let (x, y) = blobs(40, 5);
        let forest = train_forest(&x, &y, &ForestConfig::default()).unwrap();
        let (pred, _) = predict_forest(&forest, &x).unwrap();
        assert_eq!(pred.len(), 40);
        assert!(matches!(
            predict_forest(&forest, &[vec![0.0, 0.0, 0.0]]),
            Err(BaselineError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("forest.json");
        let (x, y) = blobs(40, 6);
        let forest = train_forest(&x, &y, &ForestConfig::default()).unwrap();
        forest.save_json(&path).unwrap();
        assert_eq!(Forest::load_json(&path).unwrap(), forest);
    }
}
