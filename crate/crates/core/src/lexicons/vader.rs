//! VADER-style compound scoring: lexicon valences adjusted by negation,
//! booster words, ALL-CAPS emphasis and trailing exclamation marks.

use crate::corpus::split_words;

use super::LexiconBundle;

pub const VADER_NORMALIZATION: f64 = 15.0;

const NEGATION_SCALAR: f64 = -0.74;
const CAPS_INCREMENT: f64 = 0.733;
const EXCLAMATION_INCREMENT: f64 = 0.292;
const MAX_EXCLAMATIONS: usize = 3;
const LOOKBACK: usize = 3;
/// Booster damping at distance 1, 2, 3.
const BOOSTER_DAMPING: [f64; LOOKBACK] = [1.0, 0.95, 0.90];

pub fn compound_from_sum(sum: f64) -> f64 {
    if sum == 0.0 {
        return 0.0;
    }
    (sum / (sum * sum + VADER_NORMALIZATION).sqrt()).clamp(-1.0, 1.0)
}

pub(super) fn compound(bundle: &LexiconBundle, text: &str) -> f64 {
    compound_from_sum(valence_sum(bundle, text))
}

fn is_all_caps(word: &str) -> bool {
    word.chars().any(char::is_alphabetic)
        && word
            .chars()
            .filter(|c| c.is_alphabetic())
            .all(char::is_uppercase)
}

pub(super) fn valence_sum(bundle: &LexiconBundle, text: &str) -> f64 {
    let words = split_words(text);
    let lower: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();

    let caps = words.iter().filter(|w| is_all_caps(w)).count();
    let caps_differential = caps > 0 && caps < words.len();

    let mut sum = 0.0;
    for (i, word) in lower.iter().enumerate() {
        if bundle.vader_boosters.contains_key(word) {
            continue;
        }
        let Some(&base) = bundle.lookup(&bundle.vader_valences, word) else {
            continue;
        };
        let mut valence = base;
        if caps_differential && is_all_caps(&words[i]) {
            valence += CAPS_INCREMENT.copysign(base);
        }
        for (distance, damping) in (1..=LOOKBACK).zip(BOOSTER_DAMPING) {
            let Some(prev) = i.checked_sub(distance).map(|j| &lower[j]) else {
                break;
            };
            if let Some(&increment) = bundle.vader_boosters.get(prev) {
                let toward = if base < 0.0 { -increment } else { increment };
                valence += toward * damping;
            }
        }
        if lower[i.saturating_sub(LOOKBACK)..i]
            .iter()
            .any(|w| bundle.is_negator(w))
        {
            valence *= NEGATION_SCALAR;
        }
        sum += valence;
    }

    let bangs = text.chars().filter(|&c| c == '!').count().min(MAX_EXCLAMATIONS);
    let emphasis = bangs as f64 * EXCLAMATION_INCREMENT;
    if sum > 0.0 {
        sum += emphasis;
    } else if sum < 0.0 {
        sum -= emphasis;
    }
    sum
}
