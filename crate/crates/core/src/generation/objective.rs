use serde::{Deserialize, Serialize};

use crate::corpus::Dictionary;

/// Length constraint: 1 inside the bound, `1 - ln(|w| - tl + 1)` past it.
pub fn constraint_score(word_len: usize, target_length: usize) -> f64 {
    if word_len <= target_length {
        1.0
    } else {
        1.0 - ((word_len - target_length + 1) as f64).ln()
    }
}

/// Counts behind a fitness value.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FitnessBreakdown {
    /// Every embedded dictionary word, lexicographic.
    pub words: Vec<String>,
    pub long_count: usize,
    pub short_count: usize,
    /// Long words appearing contiguously in the challenge word.
    pub v: usize,
    /// Short words appearing contiguously in the challenge word.
    pub e: usize,
}

impl FitnessBreakdown {
    pub fn classify(challenge: &str, words: Vec<String>, max_seq: usize) -> Self {
        let mut b = FitnessBreakdown::default();
        for w in &words {
            let visible = challenge.contains(w.as_str());
            if w.len() > max_seq {
                b.long_count += 1;
                b.v += visible as usize;
            } else {
                b.short_count += 1;
                b.e += visible as usize;
            }
        }
        b.words = words;
        b
    }

    /// `(1.1 - e/|Short|) * (1.1 - v/|Long|) / 1.21`, an empty set
    /// contributing a ratio of 0. Clamped to 1 since `1.1 * 1.1 / 1.21`
    /// rounds just above it.
    pub fn fitness(&self) -> f64 {
        let ratio = |hits: usize, total: usize| {
            if total == 0 {
                0.0
            } else {
                hits as f64 / total as f64
            }
        };
        ((1.1 - ratio(self.e, self.short_count)) * (1.1 - ratio(self.v, self.long_count)) / 1.21)
            .min(1.0)
    }
}

/// Scores a challenge word against the dictionary. Words longer than the
/// embedding cap score 0 with an empty breakdown.
pub fn fitness_score(
    challenge: &str,
    max_seq: usize,
    dict: &Dictionary,
) -> (f64, FitnessBreakdown) {
    match dict.embedded_words(challenge) {
        Ok(words) => {
            let b = FitnessBreakdown::classify(challenge, words, max_seq);
            (b.fitness(), b)
        }
        Err(_) => (0.0, FitnessBreakdown::default()),
    }
}
