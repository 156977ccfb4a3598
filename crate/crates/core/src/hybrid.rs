//! Weak-supervision fusion of the four lexicon scores.
//!
//! Consensus labels come from a plurality vote over the four per-tool
//! labels. A class-weighted multinomial logistic regression is then fit on
//! the standardized score vector, and its softmax output is the sentiment
//! distribution consumed by the recommendation agent.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicons::SentimentLabel;

pub const N_FEATURES: usize = 4;
pub const N_CLASSES: usize = 3;
pub const FEATURE_ORDER: [&str; N_FEATURES] =
    ["vader_compound", "textblob_polarity", "afinn_norm", "swn_score"];
pub const LABEL_ORDER: [&str; N_CLASSES] = ["Negative", "Neutral", "Positive"];

const STD_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Consensus {
    Label(SentimentLabel),
    Tie,
}

impl Consensus {
    pub fn label(self) -> Option<SentimentLabel> {
        match self {
            Consensus::Label(l) => Some(l),
            Consensus::Tie => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Consensus::Label(l) => l.as_str(),
            Consensus::Tie => "Tie",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        if s == "Tie" {
            Ok(Consensus::Tie)
        } else {
            s.parse().map(Consensus::Label)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub article_id: u64,
    /// `(vader_compound, textblob_polarity, afinn_norm, swn_score)`.
    pub features: [f64; N_FEATURES],
    /// Same tool order as `features`.
    pub tool_labels: [SentimentLabel; N_FEATURES],
    pub consensus: Consensus,
}

impl FeatureRow {
    pub fn new(article_id: u64, features: [f64; 4], tool_labels: [SentimentLabel; 4]) -> Self {
        FeatureRow {
            article_id,
            features,
            tool_labels,
            consensus: consensus_label(&tool_labels),
        }
    }
}

/// The label whose vote count is strictly greater than every other label's;
/// [`Consensus::Tie`] when the maximum is shared.
pub fn consensus_label(tool_labels: &[SentimentLabel; 4]) -> Consensus {
    let mut counts = [0usize; N_CLASSES];
    for l in tool_labels {
        counts[l.index()] += 1;
    }
    let max = *counts.iter().max().expect("three classes");
    let mut winners = SentimentLabel::ALL.into_iter().filter(|l| counts[l.index()] == max);
    match (winners.next(), winners.next()) {
        (Some(l), None) => Consensus::Label(l),
        _ => Consensus::Tie,
    }
}

/// Per-class seeded split. Each class sends `round(count * test_fraction)`
/// rows (half away from zero) to the test set, but always keeps at least one
/// row in train. Both halves keep the input order.
pub fn stratified_split(
    rows: &[FeatureRow],
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<FeatureRow>, Vec<FeatureRow>)> {
    if rows.is_empty() {
        return Err(Error::Empty("split input"));
    }
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Config(format!(
            "test fraction must be in (0, 1), got {test_fraction}"
        )));
    }
    let mut by_class: [Vec<usize>; N_CLASSES] = Default::default();
    for (i, row) in rows.iter().enumerate() {
        let label = row.consensus.label().ok_or_else(|| {
            Error::Config(format!("article {} has a tied consensus", row.article_id))
        })?;
        by_class[label.index()].push(i);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_test = vec![false; rows.len()];
    for members in &mut by_class {
        let n_test = test_count(members.len(), test_fraction);
        members.shuffle(&mut rng);
        for &i in &members[..n_test] {
            in_test[i] = true;
        }
    }
    let (test, train): (Vec<_>, Vec<_>) = rows
        .iter()
        .cloned()
        .zip(in_test)
        .partition(|(_, t)| *t);
    Ok((
        train.into_iter().map(|(r, _)| r).collect(),
        test.into_iter().map(|(r, _)| r).collect(),
    ))
}

pub fn test_count(class_size: usize, test_fraction: f64) -> usize {
    let n = (class_size as f64 * test_fraction).round() as usize;
    if class_size > 0 && n >= class_size {
        class_size - 1
    } else {
        n
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationParams {
    pub means: [f64; N_FEATURES],
    pub stds: [f64; N_FEATURES],
}

impl StandardizationParams {
    /// Population mean and standard deviation per feature; stds are floored
    /// at 1e-9.
    pub fn fit(features: &[[f64; N_FEATURES]]) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::Empty("standardizer input"));
        }
        let n = features.len() as f64;
        let mut means = [0.0; N_FEATURES];
        let mut stds = [0.0; N_FEATURES];
        for j in 0..N_FEATURES {
            means[j] = features.iter().map(|x| x[j]).sum::<f64>() / n;
            let var = features.iter().map(|x| (x[j] - means[j]).powi(2)).sum::<f64>() / n;
            stds[j] = var.sqrt().max(STD_FLOOR);
        }
        Ok(StandardizationParams { means, stds })
    }

    pub fn identity() -> Self {
        StandardizationParams {
            means: [0.0; N_FEATURES],
            stds: [1.0; N_FEATURES],
        }
    }

    pub fn transform(&self, x: &[f64; N_FEATURES]) -> [f64; N_FEATURES] {
        std::array::from_fn(|j| (x[j] - self.means[j]) / self.stds[j])
    }

    pub fn inverse(&self, z: &[f64; N_FEATURES]) -> [f64; N_FEATURES] {
        std::array::from_fn(|j| z[j] * self.stds[j] + self.means[j])
    }
}

/// Classifier output: a probability over (Negative, Neutral, Positive).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SentimentDistribution {
    pub p_negative: f64,
    pub p_neutral: f64,
    pub p_positive: f64,
}

impl SentimentDistribution {
    pub const UNIFORM: Self = SentimentDistribution {
        p_negative: 1.0 / 3.0,
        p_neutral: 1.0 / 3.0,
        p_positive: 1.0 / 3.0,
    };

    pub fn new(p_negative: f64, p_neutral: f64, p_positive: f64) -> Self {
        SentimentDistribution {
            p_negative,
            p_neutral,
            p_positive,
        }
    }

    pub fn one_hot(label: SentimentLabel) -> Self {
        let mut p = [0.0; N_CLASSES];
        p[label.index()] = 1.0;
        Self::from_array(p)
    }

    pub fn from_array(p: [f64; N_CLASSES]) -> Self {
        Self::new(p[0], p[1], p[2])
    }

    pub fn as_array(&self) -> [f64; N_CLASSES] {
        [self.p_negative, self.p_neutral, self.p_positive]
    }

    pub fn probability(&self, label: SentimentLabel) -> f64 {
        self.as_array()[label.index()]
    }

    /// Argmax; exact ties go to Neutral when it is among the maxima,
    /// otherwise to the earliest label.
    pub fn argmax(&self) -> SentimentLabel {
        let p = self.as_array();
        let max = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if p[SentimentLabel::Neutral.index()] == max {
            return SentimentLabel::Neutral;
        }
        SentimentLabel::ALL
            .into_iter()
            .find(|l| p[l.index()] == max)
            .unwrap_or(SentimentLabel::Neutral)
    }
}

/// Numerically stable softmax.
pub fn softmax(logits: &[f64; N_CLASSES]) -> [f64; N_CLASSES] {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exp: [f64; N_CLASSES] = std::array::from_fn(|k| (logits[k] - max).exp());
    let sum: f64 = exp.iter().sum();
    std::array::from_fn(|k| exp[k] / sum)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_iter: usize,
    pub l2: f64,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.1,
            max_iter: 200,
            l2: 1e-4,
            tolerance: 1e-6,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingMeta {
    pub iterations: usize,
    pub final_loss: f64,
    pub seed: u64,
    pub final_learning_rate: f64,
}

/// Weights and biases of the linear layer, in label order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub weights: [[f64; N_FEATURES]; N_CLASSES],
    pub biases: [f64; N_CLASSES],
}

impl Params {
    pub const ZERO: Params = Params {
        weights: [[0.0; N_FEATURES]; N_CLASSES],
        biases: [0.0; N_CLASSES],
    };

    pub fn logits(&self, z: &[f64; N_FEATURES]) -> [f64; N_CLASSES] {
        std::array::from_fn(|k| {
            self.biases[k]
                + self.weights[k]
                    .iter()
                    .zip(z)
                    .map(|(w, x)| w * x)
                    .sum::<f64>()
        })
    }

    fn step(&self, grad: &Params, lr: f64) -> Params {
        Params {
            weights: std::array::from_fn(|k| {
                std::array::from_fn(|j| self.weights[k][j] - lr * grad.weights[k][j])
            }),
            biases: std::array::from_fn(|k| self.biases[k] - lr * grad.biases[k]),
        }
    }

    fn is_finite(&self) -> bool {
        self.biases.iter().chain(self.weights.iter().flatten()).all(|v| v.is_finite())
    }
}

/// Class-weighted multinomial cross-entropy with an L2 penalty on the
/// weights (biases unpenalized):
///
/// `L = (1/N) Σ_i w[y_i] · −ln softmax(W z_i + b)[y_i] + (l2/2) ‖W‖²`
#[derive(Debug, Clone)]
pub struct WeightedSoftmaxLoss<'a> {
    pub inputs: &'a [[f64; N_FEATURES]],
    pub targets: &'a [SentimentLabel],
    pub class_weights: [f64; N_CLASSES],
    pub l2: f64,
}

impl WeightedSoftmaxLoss<'_> {
    pub fn loss(&self, params: &Params) -> f64 {
        let n = self.inputs.len() as f64;
        let data: f64 = self
            .inputs
            .iter()
            .zip(self.targets)
            .map(|(z, &y)| {
                let logits = params.logits(z);
                let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let log_sum = max + logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln();
                self.class_weights[y.index()] * (log_sum - logits[y.index()])
            })
            .sum();
        let penalty: f64 = params.weights.iter().flatten().map(|w| w * w).sum();
        data / n + 0.5 * self.l2 * penalty
    }

    pub fn gradient(&self, params: &Params) -> Params {
        let n = self.inputs.len() as f64;
        let mut grad = Params::ZERO;
        for (z, &y) in self.inputs.iter().zip(self.targets) {
            let p = softmax(&params.logits(z));
            let w = self.class_weights[y.index()] / n;
            for k in 0..N_CLASSES {
                let delta = w * (p[k] - if k == y.index() { 1.0 } else { 0.0 });
                grad.biases[k] += delta;
                for j in 0..N_FEATURES {
                    grad.weights[k][j] += delta * z[j];
                }
            }
        }
        for k in 0..N_CLASSES {
            for j in 0..N_FEATURES {
                grad.weights[k][j] += self.l2 * params.weights[k][j];
            }
        }
        grad
    }
}

/// `N / (K · N_c)` for each class present; absent classes get weight 1.
pub fn balanced_class_weights(targets: &[SentimentLabel]) -> [f64; N_CLASSES] {
    let mut counts = [0usize; N_CLASSES];
    for t in targets {
        counts[t.index()] += 1;
    }
    let n = targets.len() as f64;
    std::array::from_fn(|k| {
        if counts[k] == 0 {
            1.0
        } else {
            n / (N_CLASSES as f64 * counts[k] as f64)
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SoftmaxClassifier {
    pub weights: [[f64; N_FEATURES]; N_CLASSES],
    pub biases: [f64; N_CLASSES],
    pub class_weights: [f64; N_CLASSES],
    pub standardizer: StandardizationParams,
    pub training_meta: TrainingMeta,
}

/// On-disk model layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub weights: [[f64; N_FEATURES]; N_CLASSES],
    pub biases: [f64; N_CLASSES],
    pub means: [f64; N_FEATURES],
    pub stds: [f64; N_FEATURES],
    pub class_weights: [f64; N_CLASSES],
    pub label_order: Vec<String>,
    pub feature_order: Vec<String>,
    pub training_meta: TrainingMeta,
}

impl SoftmaxClassifier {
    /// A classifier with all-zero parameters; predicts the uniform
    /// distribution.
    pub fn untrained() -> Self {
        SoftmaxClassifier {
            weights: Params::ZERO.weights,
            biases: Params::ZERO.biases,
            class_weights: [1.0; N_CLASSES],
            standardizer: StandardizationParams::identity(),
            training_meta: TrainingMeta {
                iterations: 0,
                final_loss: 0.0,
                seed: 0,
                final_learning_rate: 0.0,
            },
        }
    }

    pub fn params(&self) -> Params {
        Params {
            weights: self.weights,
            biases: self.biases,
        }
    }

    pub fn predict_proba(&self, features: &[f64; N_FEATURES]) -> Result<SentimentDistribution> {
        if !features.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("features"));
        }
        let z = self.standardizer.transform(features);
        Ok(SentimentDistribution::from_array(softmax(&self.params().logits(&z))))
    }

    pub fn predict(&self, features: &[f64; N_FEATURES]) -> Result<SentimentLabel> {
        Ok(self.predict_proba(features)?.argmax())
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            weights: self.weights,
            biases: self.biases,
            means: self.standardizer.means,
            stds: self.standardizer.stds,
            class_weights: self.class_weights,
            label_order: LABEL_ORDER.iter().map(|s| s.to_string()).collect(),
            feature_order: FEATURE_ORDER.iter().map(|s| s.to_string()).collect(),
            training_meta: self.training_meta.clone(),
        }
    }

    pub fn from_file(file: ModelFile) -> Result<Self> {
        if file.label_order != LABEL_ORDER || file.feature_order != FEATURE_ORDER {
            return Err(Error::Config(
                "model label or feature order does not match this build".into(),
            ));
        }
        let model = SoftmaxClassifier {
            weights: file.weights,
            biases: file.biases,
            class_weights: file.class_weights,
            standardizer: StandardizationParams {
                means: file.means,
                stds: file.stds,
            },
            training_meta: file.training_meta,
        };
        if !model.params().is_finite() {
            return Err(Error::NonFinite("model parameters"));
        }
        Ok(model)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }
}

/// Fits the standardizer on `rows`, then runs full-batch gradient descent
/// from zero. A step that would raise the loss is rejected and the learning
/// rate halved; training stops after `max_iter` iterations or once an
/// accepted step improves the loss by less than `tolerance`.
pub fn train(rows: &[FeatureRow], config: &TrainConfig) -> Result<SoftmaxClassifier> {
    if !(config.learning_rate > 0.0 && config.l2 >= 0.0 && config.tolerance >= 0.0) {
        return Err(Error::Config("invalid optimizer settings".into()));
    }
    let mut features = Vec::with_capacity(rows.len());
    let mut targets = Vec::with_capacity(rows.len());
    for row in rows {
        let Some(label) = row.consensus.label() else {
            continue;
        };
        if !row.features.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("training features"));
        }
        features.push(row.features);
        targets.push(label);
    }
    if features.is_empty() {
        return Err(Error::Empty("training rows"));
    }
    let first = targets[0];
    if targets.iter().all(|&t| t == first) {
        return Err(Error::SingleClass);
    }

    let standardizer = StandardizationParams::fit(&features)?;
    let inputs: Vec<_> = features.iter().map(|x| standardizer.transform(x)).collect();
    let class_weights = balanced_class_weights(&targets);
    let objective = WeightedSoftmaxLoss {
        inputs: &inputs,
        targets: &targets,
        class_weights,
        l2: config.l2,
    };

    let mut params = Params::ZERO;
    let mut loss = objective.loss(&params);
    let mut lr = config.learning_rate;
    let mut iterations = 0;
    while iterations < config.max_iter {
        iterations += 1;
        let candidate = params.step(&objective.gradient(&params), lr);
        let candidate_loss = objective.loss(&candidate);
        if !(candidate_loss <= loss) {
            lr *= 0.5;
            continue;
        }
        let improvement = loss - candidate_loss;
        params = candidate;
        loss = candidate_loss;
        if improvement < config.tolerance {
            break;
        }
    }

    Ok(SoftmaxClassifier {
        weights: params.weights,
        biases: params.biases,
        class_weights,
        standardizer,
        training_meta: TrainingMeta {
            iterations,
            final_loss: loss,
            seed: config.seed,
            final_learning_rate: lr,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use SentimentLabel::*;

    fn row(id: u64, features: [f64; 4], label: SentimentLabel) -> FeatureRow {
        FeatureRow {
            article_id: id,
            features,
            tool_labels: [label; 4],
            consensus: Consensus::Label(label),
        }
    }

    #[test]
    fn consensus_examples() {
        assert_eq!(consensus_label(&[Positive; 4]), Consensus::Label(Positive));
        assert_eq!(
            consensus_label(&[Positive, Positive, Negative, Neutral]),
            Consensus::Label(Positive)
        );
        assert_eq!(
            consensus_label(&[Positive, Positive, Negative, Negative]),
            Consensus::Tie
        );
        assert_eq!(
            consensus_label(&[Neutral, Negative, Negative, Negative]),
            Consensus::Label(Negative)
        );
    }

    #[test]
    fn consensus_tie_iff_shared_maximum() {
        // Exhaustive over all 81 label tuples.
        for code in 0..81usize {
            let labels: [SentimentLabel; 4] =
                std::array::from_fn(|i| SentimentLabel::ALL[(code / 3usize.pow(i as u32)) % 3]);
            let mut counts = [0; 3];
            for l in labels {
                counts[l.index()] += 1;
            }
            let max = *counts.iter().max().unwrap();
            let shared = counts.iter().filter(|&&c| c == max).count() > 1;
            assert_eq!(consensus_label(&labels) == Consensus::Tie, shared, "{labels:?}");
        }
    }

    fn rows_with_sizes(sizes: [usize; 3]) -> Vec<FeatureRow> {
        let mut rows = Vec::new();
        for (label, &n) in SentimentLabel::ALL.iter().zip(&sizes) {
            for _ in 0..n {
                rows.push(row(rows.len() as u64, [0.0; 4], *label));
            }
        }
        rows
    }

    fn class_counts(rows: &[FeatureRow]) -> [usize; 3] {
        let mut c = [0; 3];
        for r in rows {
            c[r.consensus.label().unwrap().index()] += 1;
        }
        c
    }

    #[test]
    fn split_arithmetic() {
        let rows = rows_with_sizes([50, 30, 20]);
        let (train, test) = stratified_split(&rows, 0.2, 7).unwrap();
        assert_eq!(class_counts(&test), [10, 6, 4]);
        assert_eq!(class_counts(&train), [40, 24, 16]);
    }

    #[test]
    fn split_is_deterministic_and_partitions() {
        let rows = rows_with_sizes([37, 11, 52]);
        let a = stratified_split(&rows, 0.2, 99).unwrap();
        let b = stratified_split(&rows, 0.2, 99).unwrap();
        assert_eq!(a, b);
        let mut ids: Vec<u64> = a.0.iter().chain(&a.1).map(|r| r.article_id).collect();
        ids.sort_unstable();
        assert_eq!(ids, (0..100).collect::<Vec<_>>());
        let c = stratified_split(&rows, 0.2, 100).unwrap();
        assert_ne!(a.1, c.1);
    }

    #[test]
    fn singleton_class_stays_in_train() {
        let rows = rows_with_sizes([1, 10, 10]);
        let (train, test) = stratified_split(&rows, 0.2, 1).unwrap();
        assert_eq!(class_counts(&test)[0], 0);
        assert_eq!(class_counts(&train)[0], 1);
        // 0.9 of 2 rounds to 2 but one row must remain in train.
        assert_eq!(test_count(2, 0.9), 1);
    }

    #[test]
    fn split_rejects_bad_input() {
        assert!(matches!(stratified_split(&[], 0.2, 0), Err(Error::Empty(_))));
        let rows = rows_with_sizes([3, 3, 3]);
        assert!(stratified_split(&rows, 0.0, 0).is_err());
        assert!(stratified_split(&rows, 1.0, 0).is_err());
        let mut tied = rows.clone();
        tied[0].consensus = Consensus::Tie;
        assert!(stratified_split(&tied, 0.2, 0).is_err());
    }

    #[test]
    fn zero_model_is_uniform() {
        let m = SoftmaxClassifier::untrained();
        let p = m.predict_proba(&[0.3, -2.0, 5.0, 0.1]).unwrap();
        for v in p.as_array() {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
        assert_eq!(m.predict(&[1.0, 1.0, 1.0, 1.0]).unwrap(), Neutral);
    }

    #[test]
    fn predict_rejects_non_finite() {
        let m = SoftmaxClassifier::untrained();
        assert!(matches!(
            m.predict_proba(&[f64::NAN, 0.0, 0.0, 0.0]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn argmax_tie_rules() {
        assert_eq!(SentimentDistribution::new(0.9992, 0.0008, 0.0).argmax(), Negative);
        assert_eq!(SentimentDistribution::UNIFORM.argmax(), Neutral);
        assert_eq!(SentimentDistribution::new(0.0031, 0.9029, 0.0940).argmax(), Neutral);
        assert_eq!(SentimentDistribution::new(0.4, 0.2, 0.4).argmax(), Negative);
        assert_eq!(SentimentDistribution::new(0.2, 0.4, 0.4).argmax(), Neutral);
    }

    #[test]
    fn softmax_is_shift_invariant_and_stable() {
        let a = softmax(&[1.0, 2.0, 3.0]);
        let b = softmax(&[1001.0, 1002.0, 1003.0]);
        for k in 0..3 {
            assert!((a[k] - b[k]).abs() < 1e-15);
        }
        let c = softmax(&[1e308, -1e308, 0.0]);
        assert_eq!(c, [1.0, 0.0, 0.0]);
    }

    #[test]
    fn training_requires_two_classes() {
        let rows: Vec<_> = (0..5).map(|i| row(i, [i as f64; 4], Positive)).collect();
        assert!(matches!(train(&rows, &TrainConfig::default()), Err(Error::SingleClass)));
        let mut bad = rows.clone();
        bad[1] = row(1, [f64::INFINITY, 0.0, 0.0, 0.0], Negative);
        assert!(matches!(
            train(&bad, &TrainConfig::default()),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn separable_toy_set_is_fit_exactly() {
        let mut rows = Vec::new();
        for i in 0..30 {
            let jitter = (i % 5) as f64 * 0.02;
            rows.push(row(rows.len() as u64, [-1.0 + jitter; 4], Negative));
            rows.push(row(rows.len() as u64, [jitter; 4], Neutral));
            rows.push(row(rows.len() as u64, [1.0 + jitter; 4], Positive));
        }
        let model = train(&rows, &TrainConfig::default()).unwrap();
        for r in &rows {
            assert_eq!(model.predict(&r.features).unwrap(), r.consensus.label().unwrap());
        }
    }

    #[test]
    fn balanced_weights() {
        let t = [Negative, Negative, Negative, Positive];
        let w = balanced_class_weights(&t);
        assert!((w[0] - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!(w[1], 1.0);
        assert!((w[2] - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn model_json_round_trip() {
        let rows: Vec<_> = (0..20)
            .map(|i| {
                let x = i as f64 / 7.0 - 1.3;
                row(i, [x, x * 0.5, -x, x * x], if x < 0.0 { Negative } else { Positive })
            })
            .collect();
        let model = train(&rows, &TrainConfig::default()).unwrap();
        let back = SoftmaxClassifier::from_json(&model.to_json().unwrap()).unwrap();
        assert_eq!(back, model);
        let json: serde_json::Value = serde_json::from_str(&model.to_json().unwrap()).unwrap();
        assert_eq!(json["label_order"][2], "Positive");
        assert_eq!(json["feature_order"][2], "afinn_norm");
    }
}
