//! Confusion matrices, per-class precision/recall/F1 and the comparative
//! report across the four lexicon tools and the hybrid classifier.
//!
//! Zero denominators yield 0 rather than NaN; each such case is listed in
//! the report's `zero_division` flags.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid::{FeatureRow, SoftmaxClassifier};
use crate::lexicons::{SentimentLabel, Tool};

pub const HYBRID: &str = "Hybrid";

/// Rows are true labels, columns predictions, both in label order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 3]; 3],
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> u64 {
        (0..3).map(|i| self.counts[i][i]).sum()
    }
}

pub fn confusion(truth: &[SentimentLabel], predicted: &[SentimentLabel]) -> Result<ConfusionMatrix> {
    if truth.len() != predicted.len() {
        return Err(Error::LengthMismatch {
            left: truth.len(),
            right: predicted.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::Empty("evaluation labels"));
    }
    let mut m = ConfusionMatrix::default();
    for (t, p) in truth.iter().zip(predicted) {
        m.counts[t.index()][p.index()] += 1;
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub per_class: BTreeMap<SentimentLabel, ClassMetrics>,
    pub accuracy: f64,
    pub macro_f1: f64,
    pub support: BTreeMap<SentimentLabel, u64>,
    /// Metrics that hit a zero denominator, e.g. `precision:Neutral`.
    pub zero_division: Vec<String>,
}

fn ratio(num: u64, den: u64, what: &str, label: SentimentLabel, flags: &mut Vec<String>) -> f64 {
    if den == 0 {
        flags.push(format!("{what}:{label}"));
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn metrics(matrix: &ConfusionMatrix) -> Result<MetricsReport> {
    let total = matrix.total();
    if total == 0 {
        return Err(Error::Empty("confusion matrix"));
    }
    let c = &matrix.counts;
    let mut per_class = BTreeMap::new();
    let mut support = BTreeMap::new();
    let mut zero_division = Vec::new();
    for label in SentimentLabel::ALL {
        let k = label.index();
        let tp = c[k][k];
        let predicted: u64 = (0..3).map(|t| c[t][k]).sum();
        let actual: u64 = c[k].iter().sum();
        let precision = ratio(tp, predicted, "precision", label, &mut zero_division);
        let recall = ratio(tp, actual, "recall", label, &mut zero_division);
        let f1 = if precision + recall == 0.0 {
            zero_division.push(format!("f1:{label}"));
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        per_class.insert(label, ClassMetrics { precision, recall, f1 });
        support.insert(label, actual);
    }
    let macro_f1 = per_class.values().map(|m| m.f1).sum::<f64>() / 3.0;
    Ok(MetricsReport {
        per_class,
        accuracy: matrix.trace() as f64 / total as f64,
        macro_f1,
        support,
        zero_division,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub name: String,
    #[serde(flatten)]
    pub metrics: MetricsReport,
    pub confusion: ConfusionMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    /// Evaluated (non-tie) rows.
    pub rows: usize,
    pub tie_excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub models: Vec<ModelReport>,
    pub dataset: DatasetSummary,
}

impl ComparisonReport {
    pub fn model(&self, name: &str) -> Option<&MetricsReport> {
        self.models.iter().find(|m| m.name == name).map(|m| &m.metrics)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Aligned plain-text table, one row per model.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<14} {:>9} {:>9}   {:>7} {:>7} {:>7}",
            "Model / Tool", "Accuracy", "Macro-F1", "F1(Neg)", "F1(Neu)", "F1(Pos)"
        );
        let _ = writeln!(out, "{}", "-".repeat(62));
        for m in &self.models {
            let f1 = |l| m.metrics.per_class[&l].f1;
            let _ = writeln!(
                out,
                "{:<14} {:>9.3} {:>9.3}   {:>7.3} {:>7.3} {:>7.3}",
                m.name,
                m.metrics.accuracy,
                m.metrics.macro_f1,
                f1(SentimentLabel::Negative),
                f1(SentimentLabel::Neutral),
                f1(SentimentLabel::Positive),
            );
        }
        let _ = writeln!(
            out,
            "evaluated rows: {}  (ties excluded: {})",
            self.dataset.rows, self.dataset.tie_excluded
        );
        out
    }
}

/// Scores each tool's rule-based label and the hybrid prediction against the
/// consensus label on `test`. Tied rows in `test` are skipped and counted.
pub fn compare_tools(test: &[FeatureRow], model: &SoftmaxClassifier) -> Result<ComparisonReport> {
    let rows: Vec<&FeatureRow> = test.iter().filter(|r| r.consensus.label().is_some()).collect();
    if rows.is_empty() {
        return Err(Error::Empty("test set"));
    }
    let truth: Vec<SentimentLabel> = rows.iter().filter_map(|r| r.consensus.label()).collect();

    let mut models = Vec::with_capacity(5);
    let hybrid: Vec<SentimentLabel> = rows
        .iter()
        .map(|r| model.predict(&r.features))
        .collect::<Result<_>>()?;
    models.push(report(HYBRID, &truth, &hybrid)?);
    // Hybrid first, then the tools from strongest to weakest.
    for tool in [Tool::Afinn, Tool::Vader, Tool::TextBlob, Tool::SentiWordNet] {
        let slot = Tool::ALL.iter().position(|t| *t == tool).expect("known tool");
        let predicted: Vec<SentimentLabel> = rows.iter().map(|r| r.tool_labels[slot]).collect();
        models.push(report(tool.name(), &truth, &predicted)?);
    }
    Ok(ComparisonReport {
        models,
        dataset: DatasetSummary {
            rows: rows.len(),
            tie_excluded: test.len() - rows.len(),
        },
    })
}

fn report(name: &str, truth: &[SentimentLabel], predicted: &[SentimentLabel]) -> Result<ModelReport> {
    let confusion = confusion(truth, predicted)?;
    Ok(ModelReport {
        name: name.to_owned(),
        metrics: metrics(&confusion)?,
        confusion,
    })
}
