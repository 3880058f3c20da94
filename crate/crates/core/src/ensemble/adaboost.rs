//! Multiclass AdaBoost (SAMME).
//!
//! Round weight: `α = ln((1 - ε) / ε) + ln(K - 1)`, with ε floored at
//! [`EPSILON_FLOOR`]. α is positive exactly when `ε < 1 - 1/K`; rounds at or
//! above that error are dropped and the sample weights restart from uniform.
//! A perfect round (ε = 0) ends training.

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

use super::tree::{build_tree, TreeParams};
use super::{FitReport, Model, ModelKind};

pub const EPSILON_FLOOR: f64 = 1e-10;

pub fn samme_alpha(epsilon: f64, n_classes: usize) -> f64 {
    let e = epsilon.max(EPSILON_FLOOR);
    ((1.0 - e) / e).ln() + ((n_classes - 1) as f64).ln()
}

pub fn fit_adaboost(train: &Dataset, n_rounds: usize, stump_params: TreeParams, rng: &mut SeededRng) -> Result<Model> {
    let classes = train.present_classes();
    let k = classes.len();
    if k < 2 {
        return Err(Error::SingleClass);
    }
    if n_rounds == 0 {
        return Err(Error::InvalidParameter("boosting needs at least one round".into()));
    }
    let n = train.n_rows();
    let uniform = 1.0 / n as f64;
    let mut weights = vec![uniform; n];
    let mut members = Vec::new();
    let mut alphas = Vec::new();
    let mut report = FitReport {
        seed: rng.seed(),
        ..Default::default()
    };
    let mut scores = vec![[0.0f64; 3]; n];
    let mut reset_last_round = false;

    for round in 0..n_rounds {
        let mut round_rng = rng.child(round as u64);
        let tree = build_tree(train, (0..n).collect(), &weights, stump_params, &mut round_rng)?;
        let pred: Vec<_> = train.rows().map(|r| tree.predict_row(r)).collect();
        let miss: Vec<bool> = pred.iter().zip(train.labels()).map(|(p, t)| p != t).collect();
        let total: f64 = weights.iter().sum();
        let eps = (weights
            .iter()
            .zip(&miss)
            .filter(|(_, &m)| m)
            .map(|(w, _)| w)
            .sum::<f64>()
            / total)
            .clamp(0.0, 1.0);
        let alpha = samme_alpha(eps, k);
        report.weighted_errors.push(eps);
        report.alphas.push(alpha);

        let discard = eps >= 1.0 - 1.0 / k as f64;
        report.discarded.push(discard);
        if discard {
            weights.fill(uniform);
            report.weight_sums.push(weights.iter().sum());
            report
                .round_errors
                .push(training_error(&scores, train, members.is_empty()));
            // Uniform weights twice in a row would only refit the same learner.
            if reset_last_round {
                break;
            }
            reset_last_round = true;
            continue;
        }
        reset_last_round = false;

        for (s, p) in scores.iter_mut().zip(&pred) {
            s[p.index()] += alpha;
        }
        members.push(Model::from_tree(tree, train, round_rng.seed()));
        alphas.push(alpha);

        if eps == 0.0 {
            report.weight_sums.push(weights.iter().sum());
            report.round_errors.push(training_error(&scores, train, false));
            break;
        }
        let boost = alpha.exp();
        for (w, &m) in weights.iter_mut().zip(&miss) {
            if m {
                *w *= boost;
            }
        }
        let sum: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= sum;
        }
        report.weight_sums.push(weights.iter().sum());
        report.round_errors.push(training_error(&scores, train, false));
    }

    if members.is_empty() {
        return Err(Error::AllRoundsDiscarded);
    }
    report.member_count = members.len();
    Ok(Model {
        kind: ModelKind::AdaBoost,
        members,
        weights: alphas,
        classes,
        n_features: train.n_features(),
        tree: None,
        report,
    })
}

fn training_error(scores: &[[f64; 3]], train: &Dataset, no_members: bool) -> f64 {
    if no_members {
        return 1.0;
    }
    let wrong = scores
        .iter()
        .zip(train.labels())
        .filter(|(s, t)| super::argmax_lowest(s) != **t)
        .count();
    wrong as f64 / train.n_rows() as f64
}
