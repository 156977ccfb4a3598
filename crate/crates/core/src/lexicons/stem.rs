//! Light suffix stripping used as a lexicon-lookup fallback. Stored tokens
//! are never rewritten.

const SUFFIXES: [(&str, &str); 6] = [
    ("ies", "y"),
    ("es", ""),
    ("s", ""),
    ("ed", ""),
    ("ing", ""),
    ("ly", ""),
];

const MIN_STEM_CHARS: usize = 3;

fn strip_possessive(word: &str) -> &str {
    match word.strip_suffix("'s") {
        Some(base) if !base.is_empty() => base,
        _ => word,
    }
}

fn rewrites(base: &str) -> impl Iterator<Item = String> + '_ {
    SUFFIXES.iter().filter_map(move |(suffix, replacement)| {
        let stripped = base.strip_suffix(suffix)?;
        let candidate = format!("{stripped}{replacement}");
        (candidate.chars().count() >= MIN_STEM_CHARS).then_some(candidate)
    })
}

/// Strips a possessive `'s`, then applies the first suffix rule that leaves
/// a stem of at least three characters.
pub fn stem(word: &str) -> String {
    let base = strip_possessive(word);
    rewrites(base).next().unwrap_or_else(|| base.to_owned())
}

/// Every lookup fallback in order: the possessive-stripped word (when it
/// differs), then each applicable suffix rewrite. [`stem`] is the first
/// rewrite.
pub fn stem_candidates(word: &str) -> Vec<String> {
    let base = strip_possessive(word);
    let mut out = Vec::new();
    if base.len() != word.len() {
        out.push(base.to_owned());
    }
    for candidate in rewrites(base) {
        if !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}
