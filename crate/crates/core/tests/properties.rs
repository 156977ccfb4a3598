#![allow(clippy::needless_range_loop)]

use newsrec_core::agent::{
    greedy_policy, q_update, train_agent, value_iteration, Action, AgentConfig, ArticlePool,
    PoolArticle, QTable, RewardModel,
};
use newsrec_core::corpus::{default_stopwords, preprocess, tokenize, Article};
use newsrec_core::eda::{fit_tfidf, tfidf_weights};
use newsrec_core::evaluation::{confusion, metrics};
use newsrec_core::hybrid::{
    consensus_label, softmax, stratified_split, test_count, Consensus, FeatureRow,
    SoftmaxClassifier, StandardizationParams,
};
use newsrec_core::lexicons::{categorize, LabelThresholds};
use newsrec_core::{LexiconBundle, ProcessedArticle, SentimentDistribution, SentimentLabel};
use proptest::prelude::*;

fn label() -> impl Strategy<Value = SentimentLabel> {
    (0usize..3).prop_map(|i| SentimentLabel::ALL[i])
}

fn action() -> impl Strategy<Value = Action> {
    (0usize..3).prop_map(|i| Action::ALL[i])
}

fn article(description: String) -> Article {
    Article {
        id: 1,
        title: String::new(),
        pub_date: String::new(),
        guid: String::new(),
        link: String::new(),
        description,
    }
}

const WORDS: &[&str] = &[
    "good", "bad", "not", "very", "happy", "war", "peace", "GREAT", "terrible", "the", "and",
    "crisis", "wins", "never", "extremely", "love", "hate", "market", "!", "slightly", "isn't",
];

fn sentence() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(WORDS), 0..25).prop_map(|w| w.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn tokens_are_lowercase_and_retokenize(text in "[A-Za-z0-9 ,.!'’-]{0,80}") {
        let p = preprocess(&article(text), default_stopwords());
        prop_assert!(p.tokens.iter().all(|t| !t.is_empty() && t.to_lowercase() == *t));
        prop_assert!(p.tokens.iter().all(|t| !default_stopwords().contains(t)));
        prop_assert_eq!(tokenize(&p.clean_text), p.tokens.clone());
    }

    #[test]
    fn scores_stay_in_range(text in sentence()) {
        let b = LexiconBundle::bundled();
        let s = b.score_all(&preprocess(&article(text), default_stopwords()));
        prop_assert!((-1.0..=1.0).contains(&s.vader_compound));
        prop_assert!((-1.0..=1.0).contains(&s.textblob_polarity));
        prop_assert!((-1.0..=1.0).contains(&s.swn_score));
        prop_assert!((-5.0..=5.0).contains(&s.afinn_norm));
    }

    #[test]
    fn afinn_rises_with_positive_word(text in sentence()) {
        let b = LexiconBundle::bundled();
        let before = b.score_afinn(&preprocess(&article(text.clone()), default_stopwords())).0;
        let after = b.score_afinn(&preprocess(&article(format!("{text} good")), default_stopwords())).0;
        prop_assert!(after > before);
    }

    #[test]
    fn categorize_respects_band(score in -1.0f64..1.0, t in 0.0f64..0.5) {
        let l = categorize(score, -t, t).unwrap();
        let expect = if score > t {
            SentimentLabel::Positive
        } else if score < -t {
            SentimentLabel::Negative
        } else {
            SentimentLabel::Neutral
        };
        prop_assert_eq!(l, expect);
    }

    #[test]
    fn consensus_is_unique_plurality(labels in prop::array::uniform4(label())) {
        let mut counts = [0; 3];
        for l in labels {
            counts[l.index()] += 1;
        }
        let max = *counts.iter().max().unwrap();
        let winners: Vec<usize> = (0..3).filter(|&i| counts[i] == max).collect();
        match consensus_label(&labels) {
            Consensus::Label(l) => prop_assert_eq!(winners, vec![l.index()]),
            Consensus::Tie => prop_assert!(winners.len() > 1),
        }
    }

    #[test]
    fn metrics_invariants(pairs in prop::collection::vec((label(), label()), 1..120), seed in any::<u64>()) {
        let truth: Vec<_> = pairs.iter().map(|p| p.0).collect();
        let pred: Vec<_> = pairs.iter().map(|p| p.1).collect();
        let base = metrics(&confusion(&truth, &pred).unwrap()).unwrap();

        let weighted: f64 = SentimentLabel::ALL
            .iter()
            .map(|l| base.per_class[l].recall * base.support[l] as f64)
            .sum::<f64>() / truth.len() as f64;
        prop_assert!((weighted - base.accuracy).abs() < 1e-12);

        let mut order: Vec<usize> = (0..pairs.len()).collect();
        let mut state = seed;
        for i in (1..order.len()).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (state >> 33) as usize % (i + 1));
        }
        let t2: Vec<_> = order.iter().map(|&i| truth[i]).collect();
        let p2: Vec<_> = order.iter().map(|&i| pred[i]).collect();
        prop_assert_eq!(&metrics(&confusion(&t2, &p2).unwrap()).unwrap(), &base);

        let doubled = metrics(&confusion(&[truth.clone(), truth].concat(), &[pred.clone(), pred].concat()).unwrap()).unwrap();
        prop_assert_eq!(doubled.per_class, base.per_class);
        prop_assert_eq!(doubled.accuracy, base.accuracy);
        prop_assert_eq!(doubled.macro_f1, base.macro_f1);
    }

    #[test]
    fn split_is_stratified(sizes in prop::array::uniform3(1usize..60), seed in any::<u64>()) {
        let mut rows = Vec::new();
        for (k, &n) in sizes.iter().enumerate() {
            let l = SentimentLabel::ALL[k];
            for _ in 0..n {
                rows.push(FeatureRow::new(rows.len() as u64, [0.0; 4], [l; 4]));
            }
        }
        let (train, test) = stratified_split(&rows, 0.2, seed).unwrap();
        prop_assert_eq!(train.len() + test.len(), rows.len());
        for (k, &n) in sizes.iter().enumerate() {
            let l = Consensus::Label(SentimentLabel::ALL[k]);
            let in_test = test.iter().filter(|r| r.consensus == l).count();
            prop_assert_eq!(in_test, test_count(n, 0.2));
            prop_assert!(n - in_test >= 1);
        }
        let mut ids: Vec<u64> = train.iter().chain(&test).map(|r| r.article_id).collect();
        ids.sort_unstable();
        prop_assert_eq!(ids, (0..rows.len() as u64).collect::<Vec<_>>());
    }

    #[test]
    fn softmax_is_a_distribution(logits in prop::array::uniform3(-700.0f64..700.0)) {
        let p = softmax(&logits);
        prop_assert!(p.iter().all(|v| (0.0..=1.0).contains(v)));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn standardization_inverts(xs in prop::collection::vec(prop::array::uniform4(-5.0f64..5.0), 2..30)) {
        let s = StandardizationParams::fit(&xs).unwrap();
        for x in &xs {
            let back = s.inverse(&s.transform(x));
            for j in 0..4 {
                prop_assert!((back[j] - x[j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn q_update_touches_one_cell(
        q in prop::array::uniform3(prop::array::uniform3(-20.0f64..20.0)),
        s in label(), a in action(), r in -2.0f64..2.0, next in label(),
        alpha in 0.0f64..=1.0, gamma in 0.0f64..0.99,
    ) {
        let mut t = QTable::from_values(q);
        q_update(&mut t, s, a, r, next, alpha, gamma).unwrap();
        for si in 0..3 {
            for ai in 0..3 {
                if (si, ai) != (s.index(), a.index()) {
                    prop_assert_eq!(t.q[si][ai].to_bits(), q[si][ai].to_bits());
                    prop_assert_eq!(t.visits[si][ai], 0);
                }
            }
        }
        prop_assert_eq!(t.visits[s.index()][a.index()], 1);
    }

    #[test]
    fn greedy_policy_ignores_row_shifts(
        q in prop::array::uniform3(prop::array::uniform3(-8i32..8)),
        shifts in prop::array::uniform3(-50i32..50),
    ) {
        // Integer-valued entries keep the shifted comparisons exact.
        let base: [[f64; 3]; 3] = q.map(|row| row.map(f64::from));
        let shifted: [[f64; 3]; 3] = std::array::from_fn(|s| base[s].map(|v| v + f64::from(shifts[s])));
        prop_assert_eq!(greedy_policy(&QTable::from_values(base)), greedy_policy(&QTable::from_values(shifted)));
    }

    #[test]
    fn tfidf_weights_positive_and_length_invariant(
        docs in prop::collection::vec(prop::collection::vec(prop::sample::select(WORDS), 1..12), 1..8),
    ) {
        let corpus: Vec<ProcessedArticle> = docs.iter().enumerate().map(|(i, w)| {
            let tokens: Vec<String> = w.iter().map(|s| s.to_lowercase()).collect();
            ProcessedArticle { id: i as u64, raw_text: String::new(), clean_text: tokens.join(" "), all_tokens: tokens.clone(), tokens }
        }).collect();
        let model = fit_tfidf(&corpus, 50).unwrap();
        for d in &model.vocabulary {
            let df = model.document_frequencies[d];
            prop_assert!(df >= 1 && df <= model.n_documents);
        }
        for doc in &corpus {
            let w = tfidf_weights(&model, doc);
            prop_assert!(w.values().all(|v| *v > 0.0));
            let mut twice = doc.clone();
            twice.tokens.extend(doc.tokens.clone());
            let w2 = tfidf_weights(&model, &twice);
            prop_assert_eq!(w.len(), w2.len());
            for (k, v) in &w {
                prop_assert!((w2[k] - v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn model_json_preserves_predictions(
        w in prop::array::uniform3(prop::array::uniform4(-3.0f64..3.0)),
        x in prop::array::uniform4(-1.0f64..1.0),
    ) {
        let mut m = SoftmaxClassifier::untrained();
        m.weights = w;
        let back = SoftmaxClassifier::from_json(&m.to_json().unwrap()).unwrap();
        prop_assert_eq!(back.predict_proba(&x).unwrap(), m.predict_proba(&x).unwrap());
    }

    #[test]
    fn afinn_label_ignores_other_scores(v in -1.0f64..1.0) {
        let t = LabelThresholds::default();
        let scores = newsrec_core::LexiconScores {
            vader_compound: v,
            textblob_polarity: v,
            afinn_raw: 0,
            afinn_norm: 0.0,
            swn_score: v,
        };
        let l = t.labels(&scores).unwrap();
        prop_assert_eq!(l[2], SentimentLabel::Neutral);
    }
}

fn one_hot_pool() -> ArticlePool {
    ArticlePool::new(
        SentimentLabel::ALL
            .iter()
            .enumerate()
            .map(|(i, &l)| PoolArticle::new(i as u64, SentimentDistribution::one_hot(l)))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn trained_q_stays_within_reward_bounds(
        p in 0.0f64..=1.0, c in 0.0f64..=1.0, g in prop::sample::select(vec![0.0, 0.5, 0.9]),
        steps in 1u64..60_000, seed in any::<u64>(),
    ) {
        let rm = RewardModel { base: 1.0, positivity_bonus: p, congruence_bonus: c };
        let cfg = AgentConfig { gamma: g, seed, ..AgentConfig::with_steps(steps) };
        let (t, _) = train_agent(&one_hot_pool(), &cfg, &rm).unwrap();
        let hi = rm.max_reward() / (1.0 - g);
        prop_assert!(t.q.iter().flatten().all(|v| *v >= 0.0 && *v <= hi + 1e-9));
        let star = value_iteration(&rm, g, 1e-12).unwrap();
        prop_assert!(star.iter().flatten().all(|v| *v <= hi + 1e-9));
    }
}
