//! Brute-force reference implementations and fixtures shared by the
//! integration tests. Everything here is deliberately naive.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;

use elimination_core::corpus::{load_dictionary, load_profanity};
use elimination_core::Dictionary;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn real_dictionary() -> Dictionary {
    let (d, _) = load_dictionary(data_path("words.txt"), 3).expect("bundled word list");
    d.with_profanity(load_profanity(data_path("profanity.txt")).expect("bundled profanity list"))
}

/// Every letter subset of `challenge`, kept when it spells a word.
pub fn brute_embedded(
    challenge: &str,
    words: &HashSet<String>,
    min_len: usize,
) -> BTreeSet<String> {
    let b = challenge.as_bytes();
    let mut out = BTreeSet::new();
    for mask in 1u32..(1 << b.len()) {
        let s: String = (0..b.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| b[i] as char)
            .collect();
        if s.len() >= min_len && words.contains(&s) {
            out.insert(s);
        }
    }
    out
}

fn substring_count(haystack: &str, needle: &str) -> usize {
    let (h, n) = (haystack.as_bytes(), needle.as_bytes());
    (0..h.len())
        .filter(|&i| i + n.len() <= h.len() && &h[i..i + n.len()] == n)
        .count()
}

/// Fitness straight from the formula, with words found by subset
/// enumeration and visibility by substring search.
pub fn brute_fitness(
    challenge: &str,
    words: &HashSet<String>,
    min_len: usize,
    max_seq: usize,
) -> f64 {
    let found = brute_embedded(challenge, words, min_len);
    let (mut short, mut long, mut e, mut v) = (0.0, 0.0, 0.0, 0.0);
    for w in &found {
        let seen = substring_count(challenge, w) > 0;
        if w.len() <= max_seq {
            short += 1.0;
            if seen {
                e += 1.0;
            }
        } else {
            long += 1.0;
            if seen {
                v += 1.0;
            }
        }
    }
    let es = if short == 0.0 { 0.0 } else { e / short };
    let vl = if long == 0.0 { 0.0 } else { v / long };
    (1.1 - es) * (1.1 - vl) / 1.21
}

/// Words a player can end on, by depth-first search over remaining
/// strings. The starting string never counts as solved.
pub fn brute_reachable(
    challenge: &str,
    words: &HashSet<String>,
    min_len: usize,
) -> BTreeSet<String> {
    fn go(
        s: &str,
        words: &HashSet<String>,
        min_len: usize,
        seen: &mut HashSet<String>,
        out: &mut BTreeSet<String>,
    ) {
        for i in 0..s.len() {
            let mut t = s.to_string();
            t.remove(i);
            if !seen.insert(t.clone()) {
                continue;
            }
            if t.len() >= min_len && words.contains(&t) {
                out.insert(t);
            } else if t.len() > min_len {
                go(&t, words, min_len, seen, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    go(challenge, words, min_len, &mut HashSet::new(), &mut out);
    out
}

/// Interleaves two words at random, then pads with random letters up to
/// `max_len` at most.
pub fn random_challenge<R: Rng>(words: &[String], max_len: usize, rng: &mut R) -> String {
    let a = words.choose(rng).unwrap().as_bytes();
    let b = words.choose(rng).unwrap().as_bytes();
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && rng.random_bool(0.5)) {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    while out.len() < max_len && rng.random_bool(0.3) {
        let at = rng.random_range(0..=out.len());
        out.insert(at, b'A' + rng.random_range(0..26u8));
    }
    out.truncate(max_len);
    String::from_utf8(out).unwrap()
}

/// A random slice of the real dictionary, kept to short words.
pub fn mini_dictionary<R: Rng>(
    full: &Dictionary,
    size: usize,
    max_word: usize,
    rng: &mut R,
) -> Vec<String> {
    let pool: Vec<&String> = full
        .words()
        .iter()
        .filter(|w| w.len() <= max_word)
        .collect();
    let mut picked: BTreeSet<String> = BTreeSet::new();
    while picked.len() < size.min(pool.len()) {
        picked.insert(pool.choose(rng).unwrap().to_string());
    }
    picked.into_iter().collect()
}

pub struct Fixture {
    pub dict: Dictionary,
    pub levels: Vec<elimination_core::GeneratedLevel>,
}

/// The bundled dictionary and all 30 default levels at seed 42, built once
/// per test binary.
pub fn fixture() -> &'static Fixture {
    use elimination_core::generation::{generate_levels, level_schedule, EaConfig};
    static CELL: std::sync::OnceLock<Fixture> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let dict = real_dictionary();
        let levels = generate_levels(&level_schedule(), &dict, 42, &EaConfig::default())
            .expect("default schedule generates");
        Fixture { dict, levels }
    })
}
