use std::collections::{HashMap, HashSet};
use std::fs;
use std::path::Path;
use std::sync::OnceLock;

use sha2::{Digest, Sha256};

use crate::corpus::parse_word_list;
use crate::error::{Error, Result};

pub const AFINN_FILE: &str = "afinn-111.tsv";
pub const VADER_VALENCE_FILE: &str = "vader-valence.tsv";
pub const VADER_BOOSTER_FILE: &str = "vader-boosters.tsv";
pub const VADER_NEGATOR_FILE: &str = "vader-negators.tsv";
pub const POLARITY_FILE: &str = "pattern-polarity.tsv";
pub const SWN_FILE: &str = "swn-averaged.tsv";
pub const CHECKSUM_FILE: &str = "SHA256SUMS";

macro_rules! bundled {
    ($name:literal) => {
        include_str!(concat!("../../data/lexicons/", $name))
    };
}

/// Raw text of the six lexicon files.
#[derive(Debug, Clone, Copy)]
pub struct LexiconSources<'a> {
    pub afinn: &'a str,
    pub vader_valences: &'a str,
    pub vader_boosters: &'a str,
    pub vader_negators: &'a str,
    pub polarity: &'a str,
    pub swn: &'a str,
}

impl LexiconSources<'static> {
    pub const BUNDLED: Self = LexiconSources {
        afinn: bundled!("afinn-111.tsv"),
        vader_valences: bundled!("vader-valence.tsv"),
        vader_boosters: bundled!("vader-boosters.tsv"),
        vader_negators: bundled!("vader-negators.tsv"),
        polarity: bundled!("pattern-polarity.tsv"),
        swn: bundled!("swn-averaged.tsv"),
    };
}

impl<'a> LexiconSources<'a> {
    fn named(&self) -> [(&'static str, &'a str); 6] {
        [
            (AFINN_FILE, self.afinn),
            (VADER_VALENCE_FILE, self.vader_valences),
            (VADER_BOOSTER_FILE, self.vader_boosters),
            (VADER_NEGATOR_FILE, self.vader_negators),
            (POLARITY_FILE, self.polarity),
            (SWN_FILE, self.swn),
        ]
    }

    /// Checks every file against a `sha256sum`-format manifest.
    pub fn verify(&self, manifest: &str) -> Result<()> {
        let expected: HashMap<&str, &str> = manifest
            .lines()
            .filter_map(|l| {
                let (hash, name) = l.split_once("  ")?;
                Some((name.trim(), hash.trim()))
            })
            .collect();
        for (name, text) in self.named() {
            let want = expected.get(name).ok_or_else(|| Error::Checksum {
                name: name.into(),
                expected: "<missing from manifest>".into(),
                actual: sha256_hex(text),
            })?;
            let actual = sha256_hex(text);
            if *want != actual {
                return Err(Error::Checksum {
                    name: name.into(),
                    expected: (*want).into(),
                    actual,
                });
            }
        }
        Ok(())
    }
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Immutable word lists behind the four scorers.
#[derive(Debug, Clone)]
pub struct LexiconBundle {
    pub afinn: HashMap<String, i32>,
    pub vader_valences: HashMap<String, f64>,
    pub vader_boosters: HashMap<String, f64>,
    pub vader_negators: HashSet<String>,
    pub polarity: HashMap<String, f64>,
    /// Sense-averaged `(pos, neg)`.
    pub swn: HashMap<String, (f64, f64)>,
}

impl LexiconBundle {
    /// The bundled lexicons, verified and parsed once per process.
    pub fn bundled() -> &'static LexiconBundle {
        static BUNDLE: OnceLock<LexiconBundle> = OnceLock::new();
        BUNDLE.get_or_init(|| {
            Self::load_bundled().expect("bundled lexicon data is checksummed at build time")
        })
    }

    pub fn load_bundled() -> Result<Self> {
        let sources = LexiconSources::BUNDLED;
        sources.verify(bundled!("SHA256SUMS"))?;
        Self::parse(&sources)
    }

    /// Loads the six files from a directory, verifying them against its
    /// `SHA256SUMS` when one is present.
    pub fn from_dir(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref();
        let read = |name: &str| {
            let path = dir.join(name);
            fs::read_to_string(&path).map_err(|source| Error::Io { path, source })
        };
        let files = [
            read(AFINN_FILE)?,
            read(VADER_VALENCE_FILE)?,
            read(VADER_BOOSTER_FILE)?,
            read(VADER_NEGATOR_FILE)?,
            read(POLARITY_FILE)?,
            read(SWN_FILE)?,
        ];
        let sources = LexiconSources {
            afinn: &files[0],
            vader_valences: &files[1],
            vader_boosters: &files[2],
            vader_negators: &files[3],
            polarity: &files[4],
            swn: &files[5],
        };
        if dir.join(CHECKSUM_FILE).exists() {
            sources.verify(&read(CHECKSUM_FILE)?)?;
        }
        Self::parse(&sources)
    }

    pub fn parse(sources: &LexiconSources<'_>) -> Result<Self> {
        let afinn = parse_map(AFINN_FILE, sources.afinn, |v| {
            let n: i32 = v.parse().ok()?;
            (-5..=5).contains(&n).then_some(n)
        })?;
        let vader_valences = parse_map(VADER_VALENCE_FILE, sources.vader_valences, |v| {
            real_in(v, -4.0, 4.0)
        })?;
        let vader_boosters = parse_map(VADER_BOOSTER_FILE, sources.vader_boosters, |v| {
            v.parse::<f64>().ok().filter(|x| x.is_finite())
        })?;
        let polarity = parse_map(POLARITY_FILE, sources.polarity, |v| real_in(v, -1.0, 1.0))?;
        let swn = parse_map(SWN_FILE, sources.swn, |v| {
            let (pos, neg) = v.split_once('\t')?;
            Some((real_in(pos, 0.0, 1.0)?, real_in(neg, 0.0, 1.0)?))
        })?;
        let vader_negators = parse_word_list(sources.vader_negators);
        if vader_negators.is_empty() {
            return Err(empty(VADER_NEGATOR_FILE));
        }
        Ok(LexiconBundle {
            afinn,
            vader_valences,
            vader_boosters,
            vader_negators,
            polarity,
            swn,
        })
    }
}

fn real_in(v: &str, lo: f64, hi: f64) -> Option<f64> {
    v.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| (lo..=hi).contains(x))
}

fn empty(name: &str) -> Error {
    Error::Lexicon {
        name: name.into(),
        line: 0,
        message: "no entries".into(),
    }
}

fn parse_map<V>(
    name: &str,
    text: &str,
    parse_value: impl Fn(&str) -> Option<V>,
) -> Result<HashMap<String, V>> {
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: &str| Error::Lexicon {
            name: name.into(),
            line: i + 1,
            message: message.into(),
        };
        let (word, value) = line.split_once('\t').ok_or_else(|| bad("expected a tab"))?;
        let value = parse_value(value).ok_or_else(|| bad("value missing or out of range"))?;
        map.insert(word.to_owned(), value);
    }
    if map.is_empty() {
        return Err(empty(name));
    }
    Ok(map)
}
