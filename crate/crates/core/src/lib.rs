//! Sentiment-aware news recommendation.
//!
//! Articles are scored by four lexicon scorers, fused by a class-weighted
//! softmax classifier into a three-way sentiment distribution, and the
//! argmax of that distribution is the state of a tabular Q-learning agent
//! that chooses which sentiment of article to recommend next.

// `!(a <= b)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod agent;
pub mod corpus;
pub mod eda;
pub mod error;
pub mod evaluation;
pub mod hybrid;
pub mod lexicons;
pub mod pipeline;
pub mod service;

pub use agent::{Action, AgentConfig, ArticlePool, QTable, RewardModel, SentimentState};
pub use corpus::{Article, ProcessedArticle};
pub use error::{Error, Result};
pub use evaluation::{ComparisonReport, ConfusionMatrix, MetricsReport};
pub use hybrid::{Consensus, FeatureRow, SentimentDistribution, SoftmaxClassifier};
pub use lexicons::{LexiconBundle, LexiconScores, SentimentLabel};
