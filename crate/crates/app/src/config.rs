use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use elimination_core::corpus::{load_dictionary, load_profanity, DEFAULT_MIN_WORD_LENGTH};
use elimination_core::generation::{level_schedule, load_schedule};
use elimination_core::{Dictionary, GenerationParams};

#[derive(Debug, Clone, PartialEq)]
pub struct AppConfig {
    pub dictionary_path: PathBuf,
    pub profanity_path: Option<PathBuf>,
    pub schedule_path: Option<PathBuf>,
    pub levels_dir: PathBuf,
    pub traces_path: PathBuf,
    pub port: u16,
    pub seed: u64,
}

impl Default for AppConfig {
    fn default() -> Self {
        AppConfig {
            dictionary_path: "data/words.txt".into(),
            profanity_path: Some("data/profanity.txt".into()),
            schedule_path: None,
            levels_dir: "levels".into(),
            traces_path: "traces/traces.jsonl".into(),
            port: 8080,
            seed: 42,
        }
    }
}

impl AppConfig {
    pub fn dictionary(&self) -> Result<Dictionary> {
        let (dict, report) = load_dictionary(&self.dictionary_path, DEFAULT_MIN_WORD_LENGTH)
            .with_context(|| format!("loading dictionary {}", self.dictionary_path.display()))?;
        if report.skipped() > 0 {
            eprintln!(
                "dictionary: {} words, {} lines skipped",
                report.accepted,
                report.skipped()
            );
        }
        Ok(match &self.profanity_path {
            Some(p) => dict.with_profanity(
                load_profanity(p)
                    .with_context(|| format!("loading profanity list {}", p.display()))?,
            ),
            None => dict,
        })
    }

    pub fn schedule(&self) -> Result<Vec<GenerationParams>> {
        match &self.schedule_path {
            Some(p) => {
                load_schedule(p).with_context(|| format!("loading schedule {}", p.display()))
            }
            None => Ok(level_schedule()),
        }
    }
}

pub(crate) fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}
