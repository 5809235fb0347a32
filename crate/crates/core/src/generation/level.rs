use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fi2pop::{evolve_challenge, EaConfig};
use super::{GenerationError, GenerationParams};
use crate::corpus::{is_subsequence, Dictionary};

pub const CHALLENGES_PER_LEVEL: usize = 10;

/// A source word and the challenge-word indices its letters occupy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceEmbedding {
    pub word: String,
    pub positions: Vec<usize>,
}

impl SourceEmbedding {
    /// Leftmost embedding of `word` in `challenge`. Positions are empty when
    /// `word` is not a subsequence.
    pub fn leftmost(word: &str, challenge: &str) -> Self {
        let ch = challenge.as_bytes();
        let mut positions = Vec::with_capacity(word.len());
        let mut from = 0;
        for b in word.bytes() {
            match ch[from..].iter().position(|&c| c == b) {
                Some(off) => {
                    positions.push(from + off);
                    from += off + 1;
                }
                None => {
                    positions.clear();
                    break;
                }
            }
        }
        SourceEmbedding {
            word: word.to_string(),
            positions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratedChallenge {
    pub challenge_word: String,
    pub source_words: Vec<SourceEmbedding>,
    pub bonus_position: Option<usize>,
    pub fitness: f64,
    pub constraint: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratedLevel {
    pub index: usize,
    pub seed: u64,
    pub params: GenerationParams,
    pub challenges: Vec<GeneratedChallenge>,
}

impl GeneratedLevel {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("level serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, GenerationError> {
        serde_json::from_str(text).map_err(|e| GenerationError::Format(e.to_string()))
    }

    pub fn bonus_count(&self) -> usize {
        self.challenges
            .iter()
            .filter(|c| c.bonus_position.is_some())
            .count()
    }
}

/// SplitMix64 finalizer, used to derive independent sub-seeds.
pub fn mix_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn challenge_seed(seed: u64, level: usize, challenge: usize) -> u64 {
    mix_seed(mix_seed(seed, level as u64), 1 + challenge as u64)
}

fn bonus_seed(seed: u64, level: usize) -> u64 {
    mix_seed(mix_seed(seed, level as u64), 0xB0_u64)
}

/// Least frequent letter of `word` by corpus letter counts, ties going to
/// the alphabetically first letter. Returns its first index in `word`.
pub fn rarest_letter(word: &str, dict: &Dictionary) -> Option<(char, usize)> {
    let counts = dict.letter_frequency();
    let letter = word.chars().min_by_key(|&c| (counts.get(c), c))?;
    Some((letter, word.find(letter)?))
}

/// Marks `num2X` distinct challenges, chosen uniformly, with a bonus letter.
/// For each, every source word nominates its rarest letter and one
/// nomination is drawn uniformly; the bonus sits on that letter's position
/// in the source word's leftmost embedding.
pub fn assign_bonus(level: &mut GeneratedLevel, dict: &Dictionary, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for c in &mut level.challenges {
        c.bonus_position = None;
    }
    let n = level.challenges.len();
    let k = level.params.num_2x.min(n);
    let mut picked = sample(&mut rng, n, k).into_vec();
    picked.sort_unstable();
    for idx in picked {
        let challenge = &mut level.challenges[idx];
        let nominations: Vec<usize> = challenge
            .source_words
            .iter()
            .filter_map(|s| {
                let (_, at) = rarest_letter(&s.word, dict)?;
                s.positions.get(at).copied()
            })
            .collect();
        if nominations.is_empty() {
            continue;
        }
        challenge.bonus_position = Some(nominations[rng.random_range(0..nominations.len())]);
    }
}

/// Generates level `index` (1-based) of `schedule`: ten independent runs
/// followed by bonus assignment.
pub fn generate_level(
    index: usize,
    schedule: &[GenerationParams],
    dict: &Dictionary,
    seed: u64,
    config: &EaConfig,
) -> Result<GeneratedLevel, GenerationError> {
    let params = schedule
        .get(index.wrapping_sub(1))
        .ok_or_else(|| {
            GenerationError::InvalidParams(format!("no schedule entry for level {index}"))
        })?
        .clone();
    let challenges = (0..CHALLENGES_PER_LEVEL)
        .into_par_iter()
        .map(|i| {
            evolve_challenge(&params, dict, challenge_seed(seed, index, i), config).map_err(|e| {
                GenerationError::Challenge {
                    level: index,
                    challenge: i + 1,
                    source: Box::new(e),
                }
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut level = GeneratedLevel {
        index,
        seed,
        params,
        challenges,
    };
    assign_bonus(&mut level, dict, bonus_seed(seed, index));
    Ok(level)
}

pub fn generate_levels(
    schedule: &[GenerationParams],
    dict: &Dictionary,
    seed: u64,
    config: &EaConfig,
) -> Result<Vec<GeneratedLevel>, GenerationError> {
    (1..=schedule.len())
        .into_par_iter()
        .map(|i| generate_level(i, schedule, dict, seed, config))
        .collect()
}

/// Checks a level against the challenge rules, returning one message per
/// violation.
pub fn validate_level(level: &GeneratedLevel, dict: &Dictionary) -> Vec<String> {
    let mut problems = Vec::new();
    if level.challenges.len() != CHALLENGES_PER_LEVEL {
        problems.push(format!(
            "level {}: {} challenges",
            level.index,
            level.challenges.len()
        ));
    }
    if level.bonus_count() != level.params.num_2x {
        problems.push(format!(
            "level {}: {} bonuses, expected {}",
            level.index,
            level.bonus_count(),
            level.params.num_2x
        ));
    }
    for (i, c) in level.challenges.iter().enumerate() {
        let tag = format!("level {} challenge {}", level.index, i + 1);
        let w = &c.challenge_word;
        if w.len() > level.params.target_length {
            problems.push(format!(
                "{tag}: {w} longer than {}",
                level.params.target_length
            ));
        }
        if dict.contains(w) {
            problems.push(format!("{tag}: {w} is itself a word"));
        }
        match dict.embedded_words(w) {
            Ok(words) if words.len() >= 2 => {}
            Ok(words) => problems.push(format!("{tag}: only {} embedded word(s)", words.len())),
            Err(e) => problems.push(format!("{tag}: {e}")),
        }
        for s in &c.source_words {
            if !is_subsequence(&s.word, w) {
                problems.push(format!("{tag}: source {} not a subsequence of {w}", s.word));
            }
            let ordered = s.positions.windows(2).all(|p| p[0] < p[1]);
            let letters = s.positions.len() == s.word.len()
                && s.positions
                    .iter()
                    .zip(s.word.bytes())
                    .all(|(&p, b)| w.as_bytes().get(p) == Some(&b));
            if !ordered || !letters {
                problems.push(format!("{tag}: bad embedding for {}", s.word));
            }
        }
        if let Some(p) = c.bonus_position {
            if p >= w.len() {
                problems.push(format!("{tag}: bonus position {p} out of range"));
            }
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::RankWindow;

    fn challenge(word: &str, sources: &[&str]) -> GeneratedChallenge {
        GeneratedChallenge {
            challenge_word: word.into(),
            source_words: sources
                .iter()
                .map(|s| SourceEmbedding::leftmost(s, word))
                .collect(),
            bonus_position: None,
            fitness: 1.0,
            constraint: 1.0,
            seed: 0,
        }
    }

    fn level(num_2x: usize) -> GeneratedLevel {
        GeneratedLevel {
            index: 1,
            seed: 0,
            params: GenerationParams {
                corpus_freq: RankWindow {
                    min_rank: 1,
                    max_rank: 2,
                },
                source_words: vec![3, 3],
                target_length: 6,
                max_seq: 3,
                num_2x,
            },
            challenges: (0..10)
                .map(|_| challenge("CDATOG", &["CAT", "DOG"]))
                .collect(),
        }
    }

    #[test]
    fn leftmost_embedding() {
        let e = SourceEmbedding::leftmost("DOG", "CDATOG");
        assert_eq!(e.positions, [1, 4, 5]);
        assert!(SourceEmbedding::leftmost("DOG", "CDATGO")
            .positions
            .is_empty());
    }

    #[test]
    fn bonus_counts() {
        let (d, _) = Dictionary::from_words(["CAT", "DOG"], 3);
        let mut l = level(0);
        assign_bonus(&mut l, &d, 1);
        assert_eq!(l.bonus_count(), 0);
        let mut l = level(10);
        assign_bonus(&mut l, &d, 1);
        assert_eq!(l.bonus_count(), 10);
        let mut l = level(4);
        assign_bonus(&mut l, &d, 1);
        assert_eq!(l.bonus_count(), 4);
    }

    #[test]
    fn bonus_letter_is_a_rarest_source_letter() {
        // T and G are the rarest letters of CAT and DOG in this corpus
        let (d, _) = Dictionary::from_words(["CAT", "DOG", "CACA", "DODO", "ACORN", "CODA"], 3);
        let counts = d.letter_frequency();
        assert!(counts.get('T') < counts.get('C') && counts.get('T') < counts.get('A'));
        assert!(counts.get('G') < counts.get('D') && counts.get('G') < counts.get('O'));
        for seed in 0..20 {
            let mut l = level(10);
            assign_bonus(&mut l, &d, seed);
            for c in &l.challenges {
                let p = c.bonus_position.unwrap();
                let letter = c.challenge_word.as_bytes()[p];
                assert!(letter == b'T' || letter == b'G');
            }
        }
    }

    #[test]
    fn rarest_letter_ties_go_alphabetical() {
        let (d, _) = Dictionary::from_words(["CAT", "DOG"], 3);
        assert_eq!(rarest_letter("CAT", &d), Some(('A', 1)));
        assert_eq!(rarest_letter("DOG", &d), Some(('D', 0)));
    }

    #[test]
    fn validator_flags_problems() {
        let (d, _) = Dictionary::from_words(["CAT", "DOG", "CDATOG"], 3);
        let mut l = level(1);
        assert!(!validate_level(&l, &d).is_empty());
        l.params.num_2x = 0;
        let problems = validate_level(&l, &d);
        assert_eq!(problems.len(), 10);
        assert!(problems[0].contains("itself a word"));
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let mut l = level(3);
        l.challenges[0].fitness = 0.1 + 0.2;
        let text = l.to_json();
        let back = GeneratedLevel::from_json(&text).unwrap();
        assert_eq!(back, l);
        assert_eq!(back.to_json(), text);
    }
}
