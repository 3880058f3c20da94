//! CART classification tree with weighted Gini impurity.

use serde::{Deserialize, Serialize};

use crate::data::{ClassLabel, Dataset};
use crate::error::{Error, Result};
use crate::rng::SeededRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureSubsample {
    All,
    /// `max(1, floor(sqrt(d)))` features drawn afresh at every split.
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    /// `None` grows until leaves are pure or unsplittable.
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    pub feature_subsample: FeatureSubsample,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_samples_split: 2,
            feature_subsample: FeatureSubsample::All,
        }
    }
}

impl TreeParams {
    pub fn forest() -> Self {
        Self {
            feature_subsample: FeatureSubsample::Sqrt,
            ..Self::default()
        }
    }

    pub fn stump() -> Self {
        Self {
            max_depth: Some(1),
            ..Self::default()
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.min_samples_split < 2 {
            return Err(Error::InvalidParameter("min_samples_split must be >= 2".into()));
        }
        if self.max_depth == Some(0) {
            return Err(Error::InvalidParameter("max_depth must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Node {
    Leaf {
        label: ClassLabel,
    },
    Split {
        feature: usize,
        /// Rows with `x[feature] <= threshold` go left.
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<Node>,
}

impl DecisionTree {
    pub fn predict_row(&self, row: &[f64]) -> ClassLabel {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { label } => return label,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

/// Heaviest class; ties go to the lowest code.
pub(crate) fn weighted_majority(totals: &[f64; 3]) -> ClassLabel {
    let mut best = 0;
    for c in 1..3 {
        if totals[c] > totals[best] {
            best = c;
        }
    }
    ClassLabel::from_index(best).expect("index < 3")
}

fn gini(totals: &[f64; 3], sum: f64) -> f64 {
    if sum <= 0.0 {
        return 0.0;
    }
    1.0 - totals.iter().map(|t| (t / sum) * (t / sum)).sum::<f64>()
}

struct Builder<'a> {
    ds: &'a Dataset,
    weights: &'a [f64],
    params: TreeParams,
    rng: &'a mut SeededRng,
    nodes: Vec<Node>,
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    score: f64,
}

impl Builder<'_> {
    fn totals(&self, idx: &[usize]) -> [f64; 3] {
        let mut t = [0.0; 3];
        for &i in idx {
            t[self.ds.label(i).index()] += self.weights[i];
        }
        t
    }

    fn build(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let totals = self.totals(&idx);
        let me = self.nodes.len();
        self.nodes.push(Node::Leaf {
            label: weighted_majority(&totals),
        });
        let pure = totals.iter().filter(|&&t| t > 0.0).count() <= 1;
        if pure || idx.len() < self.params.min_samples_split || self.params.max_depth.is_some_and(|m| depth >= m) {
            return me;
        }
        let Some(split) = self.best_split(&idx) else { return me };
        let (l, r): (Vec<usize>, Vec<usize>) = idx
            .into_iter()
            .partition(|&i| self.ds.row(i)[split.feature] <= split.threshold);
        let left = self.build(l, depth + 1);
        let right = self.build(r, depth + 1);
        self.nodes[me] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        me
    }

    fn best_split(&mut self, idx: &[usize]) -> Option<BestSplit> {
        let d = self.ds.n_features();
        let mut features: Vec<usize> = (0..d).collect();
        let take = match self.params.feature_subsample {
            FeatureSubsample::All => d,
            FeatureSubsample::Sqrt => ((d as f64).sqrt().floor() as usize).max(1),
        };
        if take < d {
            self.rng.shuffle(&mut features);
        }
        // Sampled features first; fall back to the rest only if none can split.
        let mut best = None;
        for (n, &f) in features.iter().enumerate() {
            if n >= take && best.is_some() {
                break;
            }
            if let Some(s) = self.best_threshold(idx, f) {
                if best.as_ref().is_none_or(|b: &BestSplit| s.score < b.score) {
                    best = Some(s);
                }
            }
        }
        best
    }

    fn best_threshold(&self, idx: &[usize], feature: usize) -> Option<BestSplit> {
        let mut order: Vec<(f64, usize)> = idx.iter().map(|&i| (self.ds.row(i)[feature], i)).collect();
        order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let total = self.totals(idx);
        let sum: f64 = total.iter().sum();
        let mut left = [0.0; 3];
        let mut left_sum = 0.0;
        let mut best: Option<BestSplit> = None;
        for w in 0..order.len() - 1 {
            let (v, i) = order[w];
            let wi = self.weights[i];
            left[self.ds.label(i).index()] += wi;
            left_sum += wi;
            let next = order[w + 1].0;
            if next <= v {
                continue;
            }
            let mut right = total;
            for c in 0..3 {
                right[c] -= left[c];
            }
            let right_sum = sum - left_sum;
            let score = (left_sum * gini(&left, left_sum) + right_sum * gini(&right, right_sum)) / sum;
            if best.as_ref().is_none_or(|b| score < b.score) {
                let mut threshold = v + (next - v) / 2.0;
                if threshold >= next {
                    threshold = v;
                }
                best = Some(BestSplit {
                    feature,
                    threshold,
                    score,
                });
            }
        }
        best
    }
}

/// Fits a tree on the rows listed in `idx` (repeats allowed) with per-row
/// weights indexed by dataset row.
pub(crate) fn build_tree(
    ds: &Dataset,
    idx: Vec<usize>,
    weights: &[f64],
    params: TreeParams,
    rng: &mut SeededRng,
) -> Result<DecisionTree> {
    params.validate()?;
    if idx.is_empty() {
        return Err(Error::InvalidDataset("empty training set".into()));
    }
    let mut b = Builder {
        ds,
        weights,
        params,
        rng,
        nodes: Vec::new(),
    };
    b.build(idx, 0);
    Ok(DecisionTree { nodes: b.nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ClassLabel::*;

    fn toy(rows: &[Vec<f64>], labels: Vec<ClassLabel>) -> Dataset {
        Dataset::with_generic_schema(rows, labels).unwrap()
    }

    fn fit(ds: &Dataset, weights: &[f64], params: TreeParams) -> DecisionTree {
        build_tree(ds, (0..ds.n_rows()).collect(), weights, params, &mut SeededRng::new(0)).unwrap()
    }

    #[test]
    fn single_class_is_a_leaf() {
        let ds = toy(&[vec![1.0], vec![2.0]], vec![Stunted, Stunted]);
        let t = fit(&ds, &[1.0, 1.0], TreeParams::default());
        assert_eq!(t.nodes, vec![Node::Leaf { label: Stunted }]);
        assert_eq!(t.depth(), 0);
    }

    #[test]
    fn separable_line_splits_once_near_zero() {
        let rows: Vec<Vec<f64>> = [-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0]
            .iter()
            .map(|&x| vec![x])
            .collect();
        let labels = vec![Normal, Normal, Normal, Normal, Stunted, Stunted, Stunted];
        let ds = toy(&rows, labels.clone());
        let t = fit(&ds, &[1.0; 7], TreeParams::default());
        assert_eq!(t.depth(), 1);
        match t.nodes[0] {
            Node::Split { threshold, .. } => assert_eq!(threshold, 0.0),
            _ => panic!(),
        }
        for (r, l) in rows.iter().zip(labels) {
            assert_eq!(t.predict_row(r), l);
        }
    }

    #[test]
    fn heavy_point_claims_its_region() {
        // Weighted Gini by hand: splitting {0,1,2} | {3} leaves the heavy Stunted
        // point at x=3 alone (score 0), any other cut mixes it with Normal mass.
        let rows: Vec<Vec<f64>> = (0..4).map(|x| vec![x as f64]).collect();
        let ds = toy(&rows, vec![Normal, Normal, Normal, Stunted]);
        let w = [0.1 / 3.0, 0.1 / 3.0, 0.1 / 3.0, 0.9];
        let stump = fit(&ds, &w, TreeParams::stump());
        assert_eq!(stump.predict_row(&[3.0]), Stunted);
        assert_eq!(stump.predict_row(&[0.0]), Normal);

        // The same mislabeled point inside a Normal run still wins its cell.
        let rows: Vec<Vec<f64>> = (0..8).map(|x| vec![x as f64]).collect();
        let mut labels = vec![Normal; 8];
        labels[4] = Stunted;
        let ds = toy(&rows, labels);
        let mut w = [0.1 / 7.0; 8];
        w[4] = 0.9;
        let t = fit(&ds, &w, TreeParams::default());
        assert_eq!(t.predict_row(&[4.0]), Stunted);
        // a depth-1 tree cannot isolate it; the heavy side becomes Stunted
        let stump = fit(&ds, &w, TreeParams::stump());
        assert_eq!(stump.predict_row(&[4.0]), Stunted);
    }

    #[test]
    fn xor_memorized_without_depth_limit() {
        let rows = vec![vec![0.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0], vec![1.0, 0.0]];
        let labels = vec![Normal, Normal, Stunted, Stunted];
        let ds = toy(&rows, labels.clone());
        let t = fit(&ds, &[1.0; 4], TreeParams::default());
        for (r, l) in rows.iter().zip(labels) {
            assert_eq!(t.predict_row(r), l);
        }
    }

    #[test]
    fn bad_params() {
        let ds = toy(&[vec![1.0]], vec![Normal]);
        let p = TreeParams {
            min_samples_split: 1,
            ..Default::default()
        };
        assert!(build_tree(&ds, vec![0], &[1.0], p, &mut SeededRng::new(0)).is_err());
        assert!(build_tree(&ds, vec![], &[1.0], TreeParams::default(), &mut SeededRng::new(0)).is_err());
    }
}
