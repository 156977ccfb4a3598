//! Checks against independently computed reference values.
#![allow(clippy::needless_range_loop)]

use std::collections::HashMap;

use newsrec_core::agent::{select_action, value_iteration, Action, QTable, RewardModel};
use newsrec_core::corpus::ProcessedArticle;
use newsrec_core::evaluation::{
    ClassMetrics, ComparisonReport, ConfusionMatrix, DatasetSummary, MetricsReport, ModelReport,
};
use newsrec_core::hybrid::{Params, WeightedSoftmaxLoss};
use newsrec_core::lexicons::LexiconSources;
use newsrec_core::{LexiconBundle, SentimentLabel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain-loop loss with no shift trick, used as the finite-difference target.
fn naive_loss(
    params: &Params,
    inputs: &[[f64; 4]],
    targets: &[SentimentLabel],
    class_weights: [f64; 3],
    l2: f64,
) -> f64 {
    let mut total = 0.0;
    for (x, y) in inputs.iter().zip(targets) {
        let mut scores = [0.0; 3];
        for (k, s) in scores.iter_mut().enumerate() {
            *s = params.biases[k];
            for j in 0..4 {
                *s += params.weights[k][j] * x[j];
            }
        }
        let denom: f64 = scores.iter().map(|s| s.exp()).sum();
        let p = scores[y.index()].exp() / denom;
        total += -class_weights[y.index()] * p.ln();
    }
    let mut sq = 0.0;
    for row in &params.weights {
        for w in row {
            sq += w * w;
        }
    }
    total / inputs.len() as f64 + l2 / 2.0 * sq
}

fn flatten(p: &Params) -> Vec<f64> {
    p.weights.iter().flatten().chain(p.biases.iter()).copied().collect()
}

fn unflatten(v: &[f64]) -> Params {
    Params {
        weights: std::array::from_fn(|k| std::array::from_fn(|j| v[k * 4 + j])),
        biases: [v[12], v[13], v[14]],
    }
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..10 {
        let n = rng.random_range(5..40);
        let inputs: Vec<[f64; 4]> = (0..n)
            .map(|_| std::array::from_fn(|_| rng.random_range(-3.0..3.0)))
            .collect();
        let targets: Vec<SentimentLabel> = (0..n)
            .map(|_| SentimentLabel::ALL[rng.random_range(0..3)])
            .collect();
        let class_weights = std::array::from_fn(|_| rng.random_range(0.2..3.0));
        let l2 = rng.random_range(0.0..0.1);
        let theta: Vec<f64> = (0..15).map(|_| rng.random_range(-2.0..2.0)).collect();
        let params = unflatten(&theta);
        let loss = WeightedSoftmaxLoss {
            inputs: &inputs,
            targets: &targets,
            class_weights,
            l2,
        };
        let reference = naive_loss(&params, &inputs, &targets, class_weights, l2);
        assert!((loss.loss(&params) - reference).abs() <= 1e-12 * reference.abs().max(1.0));

        let analytic = flatten(&loss.gradient(&params));
        let h = 1e-6;
        for i in 0..15 {
            let mut up = theta.clone();
            let mut down = theta.clone();
            up[i] += h;
            down[i] -= h;
            let fd = (naive_loss(&unflatten(&up), &inputs, &targets, class_weights, l2)
                - naive_loss(&unflatten(&down), &inputs, &targets, class_weights, l2))
                / (2.0 * h);
            let scale = analytic[i].abs().max(fd.abs()).max(1e-3);
            assert!(
                (analytic[i] - fd).abs() / scale < 1e-5,
                "component {i}: analytic {} vs fd {fd}",
                analytic[i]
            );
        }
    }
}

#[test]
fn default_profile_optimum_by_hand() {
    // Staying Positive forever is worth 1.8 / (1 - 0.9). From Negative or
    // Neutral the best move is one step to Positive (reward 1.5) and stay.
    let q = value_iteration(&RewardModel::default(), 0.9, 1e-12).unwrap();
    let v_p = 1.8 / (1.0 - 0.9);
    let v_other = 1.5 + 0.9 * v_p;
    let expect = [
        [1.3 + 0.9 * v_other, 1.0 + 0.9 * v_other, 1.5 + 0.9 * v_p],
        [1.0 + 0.9 * v_other, 1.3 + 0.9 * v_other, 1.5 + 0.9 * v_p],
        [1.0 + 0.9 * v_other, 1.0 + 0.9 * v_other, 1.8 + 0.9 * v_p],
    ];
    for s in 0..3 {
        for a in 0..3 {
            assert!((q[s][a] - expect[s][a]).abs() < 1e-9, "{s},{a}");
        }
    }
    let frozen = [[17.23, 16.93, 17.7], [16.93, 17.23, 17.7], [16.93, 16.93, 18.0]];
    assert!(QTable::from_values(q).max_abs_diff(&frozen) < 1e-9);
}

#[test]
fn uniform_exploration_frequencies() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let table = QTable::from_values([[0.0, 0.0, 5.0]; 3]);
    let mut counts = [0usize; 3];
    let draws = 30_000;
    for _ in 0..draws {
        counts[select_action(&table, SentimentLabel::Neutral, 1.0, &mut rng).index()] += 1;
    }
    for c in counts {
        assert!((c as f64 / draws as f64 - 1.0 / 3.0).abs() < 0.01, "{counts:?}");
    }
    assert_eq!(
        select_action(&table, SentimentLabel::Neutral, 0.0, &mut rng),
        Action::RecommendPositive
    );
}

/// Reads a two-column TSV straight from the bundled source text.
fn raw_entries(text: &str) -> HashMap<&str, &str> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .filter_map(|l| l.split_once('\t'))
        .collect()
}

#[test]
fn lexicon_lookups_match_source_files() {
    let afinn = raw_entries(LexiconSources::BUNDLED.afinn);
    let good: i64 = afinn["good"].parse().unwrap();
    let bad: i64 = afinn["bad"].parse().unwrap();
    assert_eq!(good, -bad);

    let doc = |words: &[&str]| {
        let tokens: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        ProcessedArticle {
            id: 0,
            raw_text: tokens.join(" "),
            clean_text: tokens.join(" "),
            tokens: tokens.clone(),
            all_tokens: tokens,
        }
    };
    let b = LexiconBundle::bundled();
    assert_eq!(b.score_afinn(&doc(&["good"])), (good, good as f64));
    assert_eq!(b.score_afinn(&doc(&["good", "bad"])).0, 0);

    let polarity = raw_entries(LexiconSources::BUNDLED.polarity);
    let happy: f64 = polarity["happy"].parse().unwrap();
    assert_eq!(happy, 0.8);
    assert_eq!(b.score_textblob(&doc(&["happy"])), happy);
    assert!((b.score_textblob(&doc(&["not", "happy"])) - (-0.5 * happy)).abs() < 1e-15);

    let swn = LexiconSources::BUNDLED
        .swn
        .lines()
        .find_map(|l| l.strip_prefix("altruism\t"))
        .unwrap();
    assert_eq!(swn, "0.75\t0.0");
    assert_eq!(b.score_swn(&doc(&["altruism"])), 0.75);

    let plain = b.score_vader(&doc(&["good"]));
    let mut loud = doc(&["good"]);
    loud.raw_text = "good!!!".into();
    assert!(b.score_vader(&loud) > plain);
}

fn metrics_with(accuracy: f64, macro_f1: f64) -> MetricsReport {
    let per_class = SentimentLabel::ALL
        .into_iter()
        .map(|l| {
            (
                l,
                ClassMetrics {
                    precision: macro_f1,
                    recall: macro_f1,
                    f1: macro_f1,
                },
            )
        })
        .collect();
    MetricsReport {
        per_class,
        accuracy,
        macro_f1,
        support: SentimentLabel::ALL.into_iter().map(|l| (l, 100)).collect(),
        zero_division: Vec::new(),
    }
}

#[test]
fn comparison_table_layout_with_reference_figures() {
    let figures = [
        ("Hybrid", 0.896, 0.898),
        ("AFINN", 0.913, 0.913),
        ("VADER", 0.873, 0.874),
        ("TextBlob", 0.663, 0.653),
        ("SentiWordNet", 0.564, 0.516),
    ];
    let report = ComparisonReport {
        models: figures
            .iter()
            .map(|&(name, acc, f1)| ModelReport {
                name: name.into(),
                metrics: metrics_with(acc, f1),
                confusion: ConfusionMatrix::default(),
            })
            .collect(),
        dataset: DatasetSummary {
            rows: 300,
            tie_excluded: 0,
        },
    };
    let table = report.render_table();
    for (name, acc, f1) in figures {
        let line = table
            .lines()
            .find(|l| l.starts_with(name))
            .unwrap_or_else(|| panic!("no row for {name}"));
        let cols: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(cols[1], format!("{acc:.3}"));
        assert_eq!(cols[2], format!("{f1:.3}"));
    }
    let json: serde_json::Value = serde_json::from_str(&report.to_json().unwrap()).unwrap();
    let first = &json["models"][0];
    assert_eq!(first["name"], "Hybrid");
    assert_eq!(first["accuracy"], 0.896);
    assert_eq!(first["macro_f1"], 0.898);
    assert!(first["per_class"].is_object());
    assert_eq!(first["support"]["Neutral"], 100);
    assert_eq!(json["dataset"]["tie_excluded"], 0);
}
