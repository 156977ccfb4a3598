//! The four lexicon scorers and their categorical labels.
//!
//! Each scorer reads the same [`ProcessedArticle`]. AFINN, the pattern-style
//! polarity scorer and the SentiWordNet-style scorer work on `all_tokens`, so
//! the stopword list never changes a lexicon score. The VADER-style scorer
//! re-splits `raw_text` because it needs capitalization and `!`.

mod bundle;
mod stem;
mod vader;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::ProcessedArticle;
use crate::error::{Error, Result};

pub use bundle::{LexiconBundle, LexiconSources};
pub use stem::{stem, stem_candidates};
pub use vader::{compound_from_sum, VADER_NORMALIZATION};

/// Three-way sentiment class. The derived ordering is only used for
/// deterministic tie-breaks.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum SentimentLabel {
    Negative,
    Neutral,
    Positive,
}

impl SentimentLabel {
    pub const ALL: [SentimentLabel; 3] = [Self::Negative, Self::Neutral, Self::Positive];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Negative => "Negative",
            Self::Neutral => "Neutral",
            Self::Positive => "Positive",
        }
    }
}

impl fmt::Display for SentimentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentimentLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Negative" => Ok(Self::Negative),
            "Neutral" => Ok(Self::Neutral),
            "Positive" => Ok(Self::Positive),
            other => Err(Error::Config(format!("unknown sentiment label `{other}`"))),
        }
    }
}

/// Per-article lexicon outputs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LexiconScores {
    pub vader_compound: f64,
    pub afinn_raw: i64,
    pub afinn_norm: f64,
    pub textblob_polarity: f64,
    pub swn_score: f64,
}

impl LexiconScores {
    /// Classifier input in its fixed order:
    /// `(vader_compound, textblob_polarity, afinn_norm, swn_score)`.
    pub fn features(&self) -> [f64; 4] {
        [
            self.vader_compound,
            self.textblob_polarity,
            self.afinn_norm,
            self.swn_score,
        ]
    }
}

/// Tool order shared by features and per-tool labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Tool {
    Vader,
    TextBlob,
    Afinn,
    SentiWordNet,
}

impl Tool {
    pub const ALL: [Tool; 4] = [Self::Vader, Self::TextBlob, Self::Afinn, Self::SentiWordNet];

    pub fn name(self) -> &'static str {
        match self {
            Self::Vader => "VADER",
            Self::TextBlob => "TextBlob",
            Self::Afinn => "AFINN",
            Self::SentiWordNet => "SentiWordNet",
        }
    }
}

/// Positive if `score >= positive_threshold`, Negative if
/// `score <= negative_threshold`, Neutral otherwise.
pub fn categorize(
    score: f64,
    negative_threshold: f64,
    positive_threshold: f64,
) -> Result<SentimentLabel> {
    if !(negative_threshold <= positive_threshold) {
        return Err(Error::Config(format!(
            "negative threshold {negative_threshold} exceeds positive threshold {positive_threshold}"
        )));
    }
    Ok(if score >= positive_threshold {
        SentimentLabel::Positive
    } else if score <= negative_threshold {
        SentimentLabel::Negative
    } else {
        SentimentLabel::Neutral
    })
}

/// Symmetric band around zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub negative: f64,
    pub positive: f64,
}

impl Band {
    pub const fn symmetric(t: f64) -> Self {
        Band {
            negative: -t,
            positive: t,
        }
    }
}

/// Thresholds for the rule-based per-tool labels. AFINN is labelled from the
/// sign of `afinn_raw`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabelThresholds {
    pub vader: Band,
    pub textblob: Band,
    pub swn: Band,
}

impl Default for LabelThresholds {
    fn default() -> Self {
        LabelThresholds {
            vader: Band::symmetric(0.05),
            textblob: Band::symmetric(0.05),
            swn: Band::symmetric(0.01),
        }
    }
}

impl LabelThresholds {
    pub fn validate(&self) -> Result<()> {
        for band in [self.vader, self.textblob, self.swn] {
            categorize(0.0, band.negative, band.positive)?;
        }
        Ok(())
    }

    /// Labels in [`Tool::ALL`] order.
    pub fn labels(&self, scores: &LexiconScores) -> Result<[SentimentLabel; 4]> {
        let afinn = match scores.afinn_raw.signum() {
            1 => SentimentLabel::Positive,
            -1 => SentimentLabel::Negative,
            _ => SentimentLabel::Neutral,
        };
        Ok([
            categorize(scores.vader_compound, self.vader.negative, self.vader.positive)?,
            categorize(
                scores.textblob_polarity,
                self.textblob.negative,
                self.textblob.positive,
            )?,
            afinn,
            categorize(scores.swn_score, self.swn.negative, self.swn.positive)?,
        ])
    }
}

const TEXTBLOB_NEGATION: f64 = -0.5;
const TEXTBLOB_NEGATION_WINDOW: usize = 3;

impl LexiconBundle {
    /// Sum of AFINN valences over `all_tokens` and that sum divided by the
    /// token count (at least one).
    pub fn score_afinn(&self, processed: &ProcessedArticle) -> (i64, f64) {
        let raw: i64 = processed
            .all_tokens
            .iter()
            .filter_map(|t| self.lookup(&self.afinn, t))
            .map(|&v| i64::from(v))
            .sum();
        let norm = raw as f64 / processed.all_tokens.len().max(1) as f64;
        (raw, norm)
    }

    /// Mean pattern-lexicon polarity over matched tokens. A negator within
    /// the three preceding tokens scales the token's polarity by −0.5.
    pub fn score_textblob(&self, processed: &ProcessedArticle) -> f64 {
        let tokens = &processed.all_tokens;
        let mut sum = 0.0;
        let mut matched = 0usize;
        for (i, token) in tokens.iter().enumerate() {
            let Some(&polarity) = self.lookup(&self.polarity, token) else {
                continue;
            };
            let negated = tokens[i.saturating_sub(TEXTBLOB_NEGATION_WINDOW)..i]
                .iter()
                .any(|t| self.is_negator(t));
            sum += if negated {
                polarity * TEXTBLOB_NEGATION
            } else {
                polarity
            };
            matched += 1;
        }
        if matched == 0 {
            return 0.0;
        }
        (sum / matched as f64).clamp(-1.0, 1.0)
    }

    /// Mean of `pos − neg` over tokens found in the sense-averaged table.
    pub fn score_swn(&self, processed: &ProcessedArticle) -> f64 {
        let (sum, matched) = processed
            .all_tokens
            .iter()
            .filter_map(|t| self.lookup(&self.swn, t))
            .fold((0.0, 0usize), |(s, n), &(pos, neg)| (s + (pos - neg), n + 1));
        if matched == 0 {
            return 0.0;
        }
        (sum / matched as f64).clamp(-1.0, 1.0)
    }

    pub fn score_vader(&self, processed: &ProcessedArticle) -> f64 {
        vader::compound(self, &processed.raw_text)
    }

    /// Adjusted valence sum before normalization.
    pub fn vader_sum(&self, processed: &ProcessedArticle) -> f64 {
        vader::valence_sum(self, &processed.raw_text)
    }

    pub fn score_all(&self, processed: &ProcessedArticle) -> LexiconScores {
        let (afinn_raw, afinn_norm) = self.score_afinn(processed);
        LexiconScores {
            vader_compound: self.score_vader(processed),
            afinn_raw,
            afinn_norm,
            textblob_polarity: self.score_textblob(processed),
            swn_score: self.score_swn(processed),
        }
    }

    pub(crate) fn is_negator(&self, lower: &str) -> bool {
        self.vader_negators.contains(lower) || lower.ends_with("n't")
    }

    /// Exact lookup, then the stemmer's candidates in order.
    pub(crate) fn lookup<'m, V>(
        &self,
        map: &'m std::collections::HashMap<String, V>,
        word: &str,
    ) -> Option<&'m V> {
        map.get(word)
            .or_else(|| stem_candidates(word).iter().find_map(|c| map.get(c.as_str())))
    }
}
