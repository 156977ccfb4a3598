//! Glue between the stages: scored-corpus CSV, feature rows, the hybrid
//! train/evaluate experiment and the recommendation pool.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::agent::{ArticlePool, PoolArticle};
use crate::corpus::{default_stopwords, preprocess, Article};
use crate::error::{Error, Result};
use crate::evaluation::{compare_tools, ComparisonReport};
use crate::hybrid::{stratified_split, train, Consensus, FeatureRow, SoftmaxClassifier, TrainConfig};
use crate::lexicons::{LabelThresholds, LexiconBundle, LexiconScores, SentimentLabel};

pub const SCORED_COLUMNS: [&str; 16] = [
    "id",
    "title",
    "pubDate",
    "guid",
    "link",
    "description",
    "vader_compound",
    "textblob_polarity",
    "afinn_raw",
    "afinn_norm",
    "swn_score",
    "vader_label",
    "textblob_label",
    "afinn_label",
    "swn_label",
    "consensus",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ScoredArticle {
    pub article: Article,
    pub scores: LexiconScores,
    /// VADER, TextBlob, AFINN, SentiWordNet.
    pub labels: [SentimentLabel; 4],
    pub consensus: Consensus,
}

impl ScoredArticle {
    pub fn feature_row(&self) -> FeatureRow {
        FeatureRow {
            article_id: self.article.id,
            features: self.scores.features(),
            tool_labels: self.labels,
            consensus: self.consensus,
        }
    }
}

pub fn score_articles(
    articles: &[Article],
    bundle: &LexiconBundle,
    thresholds: &LabelThresholds,
) -> Result<Vec<ScoredArticle>> {
    thresholds.validate()?;
    let stopwords = default_stopwords();
    articles
        .iter()
        .map(|a| {
            let scores = bundle.score_all(&preprocess(a, stopwords));
            let labels = thresholds.labels(&scores)?;
            let consensus = FeatureRow::new(a.id, scores.features(), labels).consensus;
            Ok(ScoredArticle {
                article: a.clone(),
                scores,
                labels,
                consensus,
            })
        })
        .collect()
}

pub fn feature_rows(scored: &[ScoredArticle]) -> Vec<FeatureRow> {
    scored.iter().map(ScoredArticle::feature_row).collect()
}

pub fn write_scored<W: Write>(out: W, scored: &[ScoredArticle]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SCORED_COLUMNS)?;
    for s in scored {
        let a = &s.article;
        let sc = &s.scores;
        w.write_record([
            a.id.to_string().as_str(),
            &a.title,
            &a.pub_date,
            &a.guid,
            &a.link,
            &a.description,
            &sc.vader_compound.to_string(),
            &sc.textblob_polarity.to_string(),
            &sc.afinn_raw.to_string(),
            &sc.afinn_norm.to_string(),
            &sc.swn_score.to_string(),
            s.labels[0].as_str(),
            s.labels[1].as_str(),
            s.labels[2].as_str(),
            s.labels[3].as_str(),
            s.consensus.as_str(),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn read_scored<R: Read>(input: R) -> Result<Vec<ScoredArticle>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    let mut idx = [0usize; SCORED_COLUMNS.len()];
    for (slot, name) in idx.iter_mut().zip(SCORED_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.into()))?;
    }
    let mut out = Vec::new();
    for record in r.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(idx[i]).unwrap_or_default();
        let bad = |message: String| Error::MalformedCsv { line, message };
        let num = |i: usize| -> Result<f64> {
            field(i)
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| bad(format!("{}: not a finite number", SCORED_COLUMNS[i])))
        };
        let label = |i: usize| -> Result<SentimentLabel> {
            field(i)
                .parse()
                .map_err(|_| bad(format!("{}: unknown label `{}`", SCORED_COLUMNS[i], field(i))))
        };
        let article = Article {
            id: field(0).parse().map_err(|_| bad("id: not an integer".into()))?,
            title: field(1).to_owned(),
            pub_date: field(2).to_owned(),
            guid: field(3).to_owned(),
            link: field(4).to_owned(),
            description: field(5).to_owned(),
        };
        let scores = LexiconScores {
            vader_compound: num(6)?,
            textblob_polarity: num(7)?,
            afinn_raw: field(8).parse().map_err(|_| bad("afinn_raw: not an integer".into()))?,
            afinn_norm: num(9)?,
            swn_score: num(10)?,
        };
        let labels = [label(11)?, label(12)?, label(13)?, label(14)?];
        let consensus = Consensus::parse(field(15)).map_err(|e| bad(e.to_string()))?;
        out.push(ScoredArticle {
            article,
            scores,
            labels,
            consensus,
        });
    }
    Ok(out)
}

pub fn read_scored_file(path: impl AsRef<Path>) -> Result<Vec<ScoredArticle>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    read_scored(file)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub test_fraction: f64,
    pub split_seed: u64,
    pub train: TrainConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            test_fraction: 0.2,
            split_seed: 42,
            train: TrainConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub model: SoftmaxClassifier,
    pub report: ComparisonReport,
    pub train: Vec<FeatureRow>,
    pub test: Vec<FeatureRow>,
    pub tie_excluded: usize,
}

/// Drops tied rows, splits by consensus class, fits the hybrid on the
/// training part and compares it with the four tools on the held-out part.
pub fn run_experiment(rows: &[FeatureRow], config: &ExperimentConfig) -> Result<Experiment> {
    let labelled: Vec<FeatureRow> = rows
        .iter()
        .filter(|r| r.consensus.label().is_some())
        .cloned()
        .collect();
    let tie_excluded = rows.len() - labelled.len();
    let (train_rows, test_rows) =
        stratified_split(&labelled, config.test_fraction, config.split_seed)?;
    let model = train(&train_rows, &config.train)?;
    let mut report = compare_tools(&test_rows, &model)?;
    report.dataset.tie_excluded = tie_excluded;
    Ok(Experiment {
        model,
        report,
        train: train_rows,
        test: test_rows,
        tie_excluded,
    })
}

/// Every row's hybrid distribution, in input order.
pub fn build_pool(model: &SoftmaxClassifier, rows: &[FeatureRow]) -> Result<ArticlePool> {
    let articles = rows
        .iter()
        .map(|r| Ok(PoolArticle::new(r.article_id, model.predict_proba(&r.features)?)))
        .collect::<Result<Vec<_>>>()?;
    ArticlePool::new(articles)
}
