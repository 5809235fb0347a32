//! Ranked word list, frequency-window slices and subsequence queries.
//!
//! Words are stored uppercase in a flat 26-ary trie. A word's rank is its
//! line number in the frequency-ordered source file, 1 being the most
//! frequent.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub const DEFAULT_MIN_WORD_LENGTH: usize = 3;
/// Longest challenge word `embedded_words` will enumerate.
pub const DEFAULT_EMBED_CAP: usize = 16;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no usable words in {0}")]
    Empty(String),
    #[error("word of length {len} exceeds the enumeration cap of {cap}")]
    TooLong { len: usize, cap: usize },
    #[error("invalid rank window [{min}, {max}] for a corpus of {len} words")]
    BadWindow { min: u32, max: u32, len: usize },
}

/// Counts of what happened while loading a word list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub accepted: usize,
    pub too_short: usize,
    pub non_letter: usize,
    pub duplicate: usize,
}

impl LoadReport {
    pub fn skipped(&self) -> usize {
        self.too_short + self.non_letter + self.duplicate
    }
}

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct Trie {
    children: Vec<[u32; 26]>,
    // rank of the word ending at the node, 0 when none ends there
    rank: Vec<u32>,
}

impl Trie {
    fn new() -> Self {
        Trie {
            children: vec![[NONE; 26]],
            rank: vec![0],
        }
    }

    fn insert(&mut self, word: &[u8], rank: u32) -> bool {
        let mut node = 0usize;
        for &b in word {
            let c = (b - b'A') as usize;
            let next = self.children[node][c];
            node = if next == NONE {
                let id = self.children.len() as u32;
                self.children.push([NONE; 26]);
                self.rank.push(0);
                self.children[node][c] = id;
                id as usize
            } else {
                next as usize
            };
        }
        if self.rank[node] != 0 {
            return false;
        }
        self.rank[node] = rank;
        true
    }

    fn rank_of(&self, word: &[u8]) -> Option<u32> {
        let mut node = 0usize;
        for &b in word {
            if !b.is_ascii_uppercase() {
                return None;
            }
            let next = self.children[node][(b - b'A') as usize];
            if next == NONE {
                return None;
            }
            node = next as usize;
        }
        match self.rank[node] {
            0 => None,
            r => Some(r),
        }
    }
}

/// Per-letter occurrence counts, indexed `A..=Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LetterCounts(pub [u64; 26]);

impl LetterCounts {
    pub fn get(&self, letter: char) -> u64 {
        if letter.is_ascii_uppercase() {
            self.0[(letter as u8 - b'A') as usize]
        } else {
            0
        }
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct Dictionary {
    words: Vec<String>,
    trie: Trie,
    profanity: HashSet<String>,
    letters: LetterCounts,
    min_word_length: usize,
}

fn normalize(raw: &str) -> Option<String> {
    let word = raw.trim();
    if word.is_empty() || !word.bytes().all(|b| b.is_ascii_alphabetic()) {
        return None;
    }
    Some(word.to_ascii_uppercase())
}

impl Dictionary {
    /// Builds a dictionary from frequency-ordered words. Ranks follow the
    /// order of accepted words.
    pub fn from_words<I, S>(words: I, min_word_length: usize) -> (Self, LoadReport)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut report = LoadReport::default();
        let mut trie = Trie::new();
        let mut list = Vec::new();
        let mut letters = [0u64; 26];
        for raw in words {
            let Some(word) = normalize(raw.as_ref()) else {
                report.non_letter += 1;
                continue;
            };
            if word.len() < min_word_length {
                report.too_short += 1;
                continue;
            }
            if !trie.insert(word.as_bytes(), list.len() as u32 + 1) {
                report.duplicate += 1;
                continue;
            }
            for b in word.bytes() {
                letters[(b - b'A') as usize] += 1;
            }
            list.push(word);
        }
        report.accepted = list.len();
        let dict = Dictionary {
            words: list,
            trie,
            profanity: HashSet::new(),
            letters: LetterCounts(letters),
            min_word_length,
        };
        (dict, report)
    }

    pub fn with_profanity<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.profanity = words
            .into_iter()
            .filter_map(|w| normalize(w.as_ref()))
            .collect();
        self
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn min_word_length(&self) -> usize {
        self.min_word_length
    }

    /// Words in rank order.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word_at_rank(&self, rank: u32) -> Option<&str> {
        let idx = (rank as usize).checked_sub(1)?;
        self.words.get(idx).map(String::as_str)
    }

    pub fn rank(&self, word: &str) -> Option<u32> {
        if word.bytes().any(|b| b.is_ascii_lowercase()) {
            self.trie.rank_of(word.to_ascii_uppercase().as_bytes())
        } else {
            self.trie.rank_of(word.as_bytes())
        }
    }

    pub fn contains(&self, word: &str) -> bool {
        self.rank(word).is_some()
    }

    /// True when `word` would auto-solve a challenge: a member that meets
    /// the minimum length.
    pub fn is_solution(&self, word: &str) -> bool {
        word.len() >= self.min_word_length && self.contains(word)
    }

    pub fn is_profane(&self, word: &str) -> bool {
        self.profanity.contains(&word.to_ascii_uppercase())
    }

    pub fn letter_frequency(&self) -> &LetterCounts {
        &self.letters
    }

    pub fn slice(&self, min_rank: u32, max_rank: u32) -> Result<CorpusSlice<'_>, CorpusError> {
        if min_rank < 1 || min_rank > max_rank || max_rank as usize > self.len() {
            return Err(CorpusError::BadWindow {
                min: min_rank,
                max: max_rank,
                len: self.len(),
            });
        }
        Ok(CorpusSlice {
            source: self,
            min_rank,
            max_rank,
        })
    }

    /// All dictionary words that are subsequences of `challenge`, in
    /// lexicographic order. Refuses challenges longer than
    /// [`DEFAULT_EMBED_CAP`].
    pub fn embedded_words(&self, challenge: &str) -> Result<Vec<String>, CorpusError> {
        self.embedded_words_capped(challenge, DEFAULT_EMBED_CAP)
    }

    pub fn embedded_words_capped(
        &self,
        challenge: &str,
        cap: usize,
    ) -> Result<Vec<String>, CorpusError> {
        let bytes = challenge.as_bytes();
        if bytes.len() > cap {
            return Err(CorpusError::TooLong {
                len: bytes.len(),
                cap,
            });
        }
        // next[p][c]: first index >= p holding letter c, or n
        let n = bytes.len();
        let mut next = vec![[n as u8; 26]; n + 1];
        for p in (0..n).rev() {
            next[p] = next[p + 1];
            let b = bytes[p].to_ascii_uppercase();
            if b.is_ascii_uppercase() {
                next[p][(b - b'A') as usize] = p as u8;
            }
        }
        let mut out = Vec::new();
        let mut prefix = Vec::with_capacity(n);
        self.walk(0, 0, &next, n, &mut prefix, &mut out);
        Ok(out)
    }

    // Leftmost matching is enough to decide subsequence membership, so each
    // trie node is visited at most once.
    fn walk(
        &self,
        node: usize,
        pos: usize,
        next: &[[u8; 26]],
        n: usize,
        prefix: &mut Vec<u8>,
        out: &mut Vec<String>,
    ) {
        if self.trie.rank[node] != 0 {
            out.push(String::from_utf8(prefix.clone()).expect("ascii"));
        }
        if pos >= n {
            return;
        }
        for c in 0..26 {
            let child = self.trie.children[node][c];
            if child == NONE {
                continue;
            }
            let p = next[pos][c] as usize;
            if p < n {
                prefix.push(b'A' + c as u8);
                self.walk(child as usize, p + 1, next, n, prefix, out);
                prefix.pop();
            }
        }
    }
}

/// A rank window over a dictionary.
#[derive(Debug, Clone, Copy)]
pub struct CorpusSlice<'a> {
    source: &'a Dictionary,
    min_rank: u32,
    max_rank: u32,
}

impl<'a> CorpusSlice<'a> {
    pub fn dictionary(&self) -> &'a Dictionary {
        self.source
    }

    pub fn min_rank(&self) -> u32 {
        self.min_rank
    }

    pub fn max_rank(&self) -> u32 {
        self.max_rank
    }

    pub fn contains(&self, word: &str) -> bool {
        matches!(self.source.rank(word), Some(r) if r >= self.min_rank && r <= self.max_rank)
    }

    pub fn words(&self) -> impl Iterator<Item = &'a str> {
        let lo = self.min_rank as usize - 1;
        let hi = self.max_rank as usize;
        self.source.words[lo..hi].iter().map(String::as_str)
    }

    /// Words of exactly `len` letters, in rank order.
    pub fn candidates(&self, len: usize) -> Vec<&'a str> {
        self.words().filter(|w| w.len() == len).collect()
    }
}

pub fn is_subsequence(needle: &str, haystack: &str) -> bool {
    let mut hay = haystack.bytes();
    needle.bytes().all(|b| hay.any(|h| h == b))
}

fn read_lines(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads a frequency-ordered word list: one word per line, optionally
/// followed by a tab and a rank column which is ignored.
pub fn load_dictionary(
    path: impl AsRef<Path>,
    min_word_length: usize,
) -> Result<(Dictionary, LoadReport), CorpusError> {
    let path = path.as_ref();
    let text = read_lines(path)?;
    let lines = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split('\t').next().unwrap_or(""));
    let (dict, report) = Dictionary::from_words(lines, min_word_length);
    if dict.is_empty() {
        return Err(CorpusError::Empty(path.display().to_string()));
    }
    Ok((dict, report))
}

pub fn load_profanity(path: impl AsRef<Path>) -> Result<Vec<String>, CorpusError> {
    let text = read_lines(path.as_ref())?;
    Ok(text.lines().filter_map(normalize).collect())
}
