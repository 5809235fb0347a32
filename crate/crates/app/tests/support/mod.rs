#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use elimination_app::store::write_levels;
use elimination_app::AppConfig;
use elimination_core::generation::{EaConfig, GeneratedChallenge, RankWindow};
use elimination_core::{GeneratedLevel, GenerationParams};

pub const WORDS: &[&str] = &[
    "THE", "HATE", "HAT", "ATE", "EAT", "TEA", "LATE", "DOG", "CAT", "TOE",
];

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

/// A level whose ten challenges are all HATDEL; challenge 1 has its 2X on
/// the H.
pub fn hatdel_level(index: usize) -> GeneratedLevel {
    GeneratedLevel {
        index,
        seed: 0,
        params: GenerationParams {
            corpus_freq: RankWindow {
                min_rank: 1,
                max_rank: 10,
            },
            source_words: vec![4, 3],
            target_length: 6,
            max_seq: 3,
            num_2x: 1,
        },
        challenges: (0..10)
            .map(|i| GeneratedChallenge {
                challenge_word: "HATDEL".into(),
                source_words: vec![],
                bonus_position: (i == 0).then_some(0),
                fitness: 1.0,
                constraint: 1.0,
                seed: 0,
            })
            .collect(),
    }
}

/// Config rooted in `dir` with a tiny dictionary and two HATDEL levels.
pub fn hatdel_config(dir: &Path) -> AppConfig {
    let dict = dir.join("words.txt");
    fs::write(&dict, WORDS.join("\n")).unwrap();
    let levels_dir = dir.join("levels");
    write_levels(
        &levels_dir,
        &[hatdel_level(1), hatdel_level(2)],
        0,
        &EaConfig::default(),
    )
    .unwrap();
    AppConfig {
        dictionary_path: dict,
        profanity_path: None,
        schedule_path: None,
        levels_dir,
        traces_path: dir.join("traces").join("traces.jsonl"),
        port: 0,
        seed: 0,
    }
}

/// Config using the bundled word lists and a three-level schedule.
pub fn small_schedule_config(dir: &Path) -> AppConfig {
    let schedule = dir.join("schedule.csv");
    fs::write(
        &schedule,
        "level,minRank,maxRank,sourceWords,targetLength,maxSeq,num2X\n\
         1,1,4000,3-3,5,3,6\n\
         2,1,4000,3-4,6,3,5\n\
         3,1001,7000,4-4,7,3,4\n",
    )
    .unwrap();
    AppConfig {
        dictionary_path: data_path("words.txt"),
        profanity_path: Some(data_path("profanity.txt")),
        schedule_path: Some(schedule),
        levels_dir: dir.join("levels"),
        traces_path: dir.join("traces.jsonl"),
        port: 0,
        seed: 7,
    }
}
