//! News corpus ingestion and text preprocessing.
//!
//! The input is a BBC-style RSS export with (at least) the columns `title`,
//! `pubDate`, `guid`, `link` and `description`, in any order. Only the
//! description is sentiment-scored downstream.

use std::collections::HashSet;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const REQUIRED_COLUMNS: [&str; 5] = ["title", "pubDate", "guid", "link", "description"];

const STOPWORDS_EN: &str = include_str!("../data/stopwords-en.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: u64,
    pub title: String,
    pub pub_date: String,
    pub guid: String,
    pub link: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProcessedArticle {
    pub id: u64,
    /// Original description, untouched. The VADER-style scorer reads case
    /// and punctuation from it.
    pub raw_text: String,
    pub clean_text: String,
    /// Lowercased tokens with stopwords removed.
    pub tokens: Vec<String>,
    /// Lowercased tokens before stopword removal.
    pub all_tokens: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadOptions {
    /// Stop after this many kept rows.
    pub limit: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedCorpus {
    pub articles: Vec<Article>,
    pub skipped: usize,
}

/// The bundled English stopword list.
pub fn default_stopwords() -> &'static HashSet<String> {
    static STOPWORDS: OnceLock<HashSet<String>> = OnceLock::new();
    STOPWORDS.get_or_init(|| parse_word_list(STOPWORDS_EN))
}

pub(crate) fn parse_word_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect()
}

pub fn load_corpus(path: impl AsRef<Path>, options: &LoadOptions) -> Result<LoadedCorpus> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| Error::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_corpus(&bytes, options)
}

/// Parses corpus CSV bytes; see [`load_corpus`].
pub fn parse_corpus(bytes: &[u8], options: &LoadOptions) -> Result<LoadedCorpus> {
    check_quotes(bytes)?;

    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(bytes);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let mut index = [0usize; 5];
    for (slot, name) in index.iter_mut().zip(REQUIRED_COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))?;
    }

    let mut articles = Vec::new();
    let mut skipped = 0;
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let field = |i: usize| record.get(index[i]).unwrap_or_default().to_owned();
        let description = field(4);
        if description.trim().is_empty() {
            skipped += 1;
            continue;
        }
        articles.push(Article {
            id: articles.len() as u64,
            title: field(0),
            pub_date: field(1),
            guid: field(2),
            link: field(3),
            description,
        });
        if options.limit.is_some_and(|n| articles.len() >= n) {
            break;
        }
    }
    Ok(LoadedCorpus { articles, skipped })
}

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    match err.kind() {
        csv::ErrorKind::UnequalLengths { .. } | csv::ErrorKind::Utf8 { .. } => {
            Error::MalformedCsv {
                line,
                message: err.to_string(),
            }
        }
        _ => Error::Csv(err),
    }
}

/// Rejects quoting the csv reader would silently absorb: a quoted field that
/// never closes, or a closing quote followed by something other than a
/// delimiter or line end.
fn check_quotes(bytes: &[u8]) -> Result<()> {
    let mut line = 1u64;
    let mut in_quotes = false;
    let mut field_start = true;
    let mut opened_at = 0u64;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if in_quotes {
            if b == b'"' {
                if bytes.get(i + 1) == Some(&b'"') {
                    i += 1;
                } else {
                    in_quotes = false;
                    match bytes.get(i + 1) {
                        None | Some(b',') | Some(b'\n') | Some(b'\r') => {}
                        Some(_) => {
                            return Err(Error::MalformedCsv {
                                line,
                                message: "unexpected character after closing quote".into(),
                            })
                        }
                    }
                }
            } else if b == b'\n' {
                line += 1;
            }
        } else {
            match b {
                b'"' if field_start => {
                    in_quotes = true;
                    opened_at = line;
                }
                b',' => {
                    field_start = true;
                    i += 1;
                    continue;
                }
                b'\n' => {
                    line += 1;
                    field_start = true;
                    i += 1;
                    continue;
                }
                _ => {}
            }
            field_start = false;
        }
        i += 1;
    }
    if in_quotes {
        return Err(Error::MalformedCsv {
            line: opened_at,
            message: "unbalanced quote".into(),
        });
    }
    Ok(())
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits text into maximal runs of letters, digits and internal
/// apostrophes, keeping the original case. Curly apostrophes are normalized
/// to `'`.
pub fn split_words(text: &str) -> Vec<String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if c.is_alphanumeric() {
            current.push(c);
        } else if is_apostrophe(c)
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric())
        {
            current.push('\'');
        } else if !current.is_empty() {
            out.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        out.push(current);
    }
    out
}

/// Lowercased word tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    split_words(&text.to_lowercase())
}

pub fn preprocess(article: &Article, stopwords: &HashSet<String>) -> ProcessedArticle {
    let all_tokens = tokenize(&article.description);
    let tokens: Vec<String> = all_tokens
        .iter()
        .filter(|t| !stopwords.contains(t.as_str()))
        .cloned()
        .collect();
    ProcessedArticle {
        id: article.id,
        raw_text: article.description.clone(),
        clean_text: tokens.join(" "),
        tokens,
        all_tokens,
    }
}

pub fn preprocess_all(articles: &[Article], stopwords: &HashSet<String>) -> Vec<ProcessedArticle> {
    articles.iter().map(|a| preprocess(a, stopwords)).collect()
}

/// Writes the processed corpus: the original columns plus `id`,
/// `clean_text` and space-joined `tokens`.
pub fn write_processed<W: Write>(
    out: W,
    articles: &[Article],
    processed: &[ProcessedArticle],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "id",
        "title",
        "pubDate",
        "guid",
        "link",
        "description",
        "clean_text",
        "tokens",
    ])?;
    for (a, p) in articles.iter().zip(processed) {
        w.write_record([
            a.id.to_string().as_str(),
            &a.title,
            &a.pub_date,
            &a.guid,
            &a.link,
            &a.description,
            &p.clean_text,
            &p.tokens.join(" "),
        ])?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}
