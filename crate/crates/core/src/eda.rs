//! TF-IDF term weighting for exploratory heatmaps.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::corpus::ProcessedArticle;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TfidfModel {
    pub vocabulary: Vec<String>,
    pub document_frequencies: BTreeMap<String, u64>,
    pub n_documents: u64,
}

/// Keeps the `max_vocab` terms with the highest document frequency over
/// post-stopword tokens, ties broken alphabetically.
pub fn fit_tfidf(corpus: &[ProcessedArticle], max_vocab: usize) -> Result<TfidfModel> {
    if corpus.is_empty() {
        return Err(Error::Empty("corpus"));
    }
    let mut df: HashMap<&str, u64> = HashMap::new();
    for doc in corpus {
        let distinct: HashSet<&str> = doc.tokens.iter().map(String::as_str).collect();
        for t in distinct {
            *df.entry(t).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&str, u64)> = df.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(max_vocab);
    Ok(TfidfModel {
        vocabulary: ranked.iter().map(|(t, _)| (*t).to_owned()).collect(),
        document_frequencies: ranked.iter().map(|(t, d)| ((*t).to_owned(), *d)).collect(),
        n_documents: corpus.len() as u64,
    })
}

impl TfidfModel {
    pub fn idf(&self, term: &str) -> Option<f64> {
        let df = *self.document_frequencies.get(term)?;
        Some((self.n_documents as f64 / (1.0 + df as f64)).ln() + 1.0)
    }
}

/// Frequency-normalised tf times smoothed idf for every vocabulary term that
/// occurs in `doc`.
pub fn tfidf_weights(model: &TfidfModel, doc: &ProcessedArticle) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    if doc.tokens.is_empty() {
        return out;
    }
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for t in &doc.tokens {
        *counts.entry(t.as_str()).or_default() += 1;
    }
    let len = doc.tokens.len() as f64;
    for (term, count) in counts {
        if let Some(idf) = model.idf(term) {
            out.insert(term.to_owned(), count as f64 / len * idf);
        }
    }
    out
}

/// The `k` heaviest terms, descending, ties alphabetical.
pub fn top_terms(model: &TfidfModel, doc: &ProcessedArticle, k: usize) -> Vec<(String, f64)> {
    let mut terms: Vec<(String, f64)> = tfidf_weights(model, doc).into_iter().collect();
    terms.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    terms.truncate(k);
    terms
}

/// Terms that make up the heatmap columns: the union of each document's
/// top `k`, ordered by first appearance.
pub fn heatmap_terms(model: &TfidfModel, docs: &[&ProcessedArticle], k: usize) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut terms = Vec::new();
    for doc in docs {
        for (t, _) in top_terms(model, doc, k) {
            if seen.insert(t.clone()) {
                terms.push(t);
            }
        }
    }
    terms
}

/// Writes a documents × terms CSV with an `id` column; absent terms are 0.
pub fn write_matrix<W: Write>(
    writer: W,
    model: &TfidfModel,
    docs: &[&ProcessedArticle],
    terms: &[String],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["id".to_owned()];
    header.extend(terms.iter().cloned());
    w.write_record(&header)?;
    for doc in docs {
        let weights = tfidf_weights(model, doc);
        let mut row = vec![doc.id.to_string()];
        row.extend(
            terms
                .iter()
                .map(|t| format!("{:.6}", weights.get(t).copied().unwrap_or(0.0))),
        );
        w.write_record(&row)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: "<tfidf matrix>".into(),
        source,
    })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: u64, tokens: &[&str]) -> ProcessedArticle {
        let tokens: Vec<String> = tokens.iter().map(|s| s.to_string()).collect();
        ProcessedArticle {
            id,
            raw_text: tokens.join(" "),
            clean_text: tokens.join(" "),
            all_tokens: tokens.clone(),
            tokens,
        }
    }

    fn toy() -> Vec<ProcessedArticle> {
        vec![
            doc(1, &["market", "rally", "market"]),
            doc(2, &["market", "storm"]),
            doc(3, &["storm", "flood", "rally", "market"]),
        ]
    }

    #[test]
    fn toy_vocabulary_matches_hand_count() {
        let m = fit_tfidf(&toy(), 10).unwrap();
        assert_eq!(m.vocabulary, ["market", "rally", "storm", "flood"]);
        let df: Vec<u64> = m.vocabulary.iter().map(|t| m.document_frequencies[t]).collect();
        assert_eq!(df, [3, 2, 2, 1]);
        let m = fit_tfidf(&toy(), 2).unwrap();
        assert_eq!(m.vocabulary, ["market", "rally"]);
    }

    #[test]
    fn toy_weights_match_hand_arithmetic() {
        let m = fit_tfidf(&toy(), 10).unwrap();
        let w = tfidf_weights(&m, &toy()[0]);
        let market = 2.0 / 3.0 * ((3.0f64 / 4.0).ln() + 1.0);
        let rally = 1.0 / 3.0 * ((3.0f64 / 3.0).ln() + 1.0);
        assert!((w["market"] - market).abs() < 1e-12);
        assert!((w["rally"] - rally).abs() < 1e-12);
        assert!(!w.contains_key("storm"));
    }

    #[test]
    fn single_doc_corpus() {
        let corpus = [doc(1, &["alpha", "beta", "alpha"])];
        let m = fit_tfidf(&corpus, 10).unwrap();
        assert!(m.document_frequencies.values().all(|&d| d == 1));
        let single = doc(2, &["alpha"]);
        let w = tfidf_weights(&m, &single);
        assert!((w["alpha"] - ((1.0f64 / 2.0).ln() + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn top_terms_order_and_truncation() {
        let m = fit_tfidf(&toy(), 10).unwrap();
        let d = &toy()[2];
        let all = top_terms(&m, d, 100);
        assert_eq!(all.len(), 4);
        assert_eq!(all[0].0, "flood");
        let mut brute: Vec<_> = tfidf_weights(&m, d).into_iter().collect();
        brute.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        assert_eq!(top_terms(&m, d, 3), brute[..3].to_vec());
        assert_eq!(top_terms(&m, d, 1)[0].0, "flood");
    }

    #[test]
    fn empty_inputs() {
        assert!(matches!(fit_tfidf(&[], 5), Err(Error::Empty(_))));
        let m = fit_tfidf(&toy(), 10).unwrap();
        assert!(tfidf_weights(&m, &doc(9, &[])).is_empty());
    }

    #[test]
    fn matrix_csv_layout() {
        let corpus = toy();
        let m = fit_tfidf(&corpus, 10).unwrap();
        let docs: Vec<&ProcessedArticle> = corpus.iter().collect();
        let terms = heatmap_terms(&m, &docs[..2], 1);
        assert_eq!(terms, ["market", "storm"]);
        let mut out = Vec::new();
        write_matrix(&mut out, &m, &docs, &terms).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "id,market,storm");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].ends_with(",0.000000"));
    }
}
