use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::GenerationError;

pub const LEVEL_COUNT: usize = 30;
pub const BLOCK_SIZE: usize = 5;
/// Ranks per unit of the depth term in [`difficulty_proxy`].
pub const RANK_DEPTH_STEP: u32 = 1000;
pub const MAX_NUM_2X: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankWindow {
    pub min_rank: u32,
    pub max_rank: u32,
}

/// The five knobs that control one level's difficulty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GenerationParams {
    pub corpus_freq: RankWindow,
    pub source_words: Vec<usize>,
    pub target_length: usize,
    pub max_seq: usize,
    #[serde(rename = "num2X")]
    pub num_2x: usize,
}

impl GenerationParams {
    pub fn validate(&self, min_word_length: usize) -> Result<(), GenerationError> {
        let bad = |reason: String| Err(GenerationError::InvalidParams(reason));
        if !(2..=3).contains(&self.source_words.len()) {
            return bad(format!(
                "expected 2 or 3 source words, got {}",
                self.source_words.len()
            ));
        }
        if let Some(&len) = self.source_words.iter().find(|&&l| l < min_word_length) {
            return bad(format!(
                "source word length {len} is below {min_word_length}"
            ));
        }
        let longest = self.source_words.iter().copied().max().unwrap_or(0);
        if self.target_length < longest {
            return bad(format!(
                "target length {} is shorter than a {longest}-letter source word",
                self.target_length
            ));
        }
        if self.num_2x > MAX_NUM_2X {
            return bad(format!("num2X {} exceeds {MAX_NUM_2X}", self.num_2x));
        }
        if self.max_seq == 0 {
            return bad("maxSeq must be positive".into());
        }
        let w = self.corpus_freq;
        if w.min_rank < 1 || w.min_rank > w.max_rank {
            return bad(format!("bad rank window [{}, {}]", w.min_rank, w.max_rank));
        }
        Ok(())
    }

    pub fn genome_len(&self) -> usize {
        self.source_words.len() + self.source_words.iter().sum::<usize>()
    }

    pub fn min_source_length(&self) -> usize {
        self.source_words.iter().copied().min().unwrap_or(0)
    }
}

/// Scalar difficulty used to shape the schedule:
/// `targetLength - maxSeq + rank depth - num2X`, with rank depth counted in
/// steps of [`RANK_DEPTH_STEP`] from the top of the corpus.
pub fn difficulty_proxy(p: &GenerationParams) -> i64 {
    let depth = ((p.corpus_freq.min_rank - 1) / RANK_DEPTH_STEP) as i64;
    p.target_length as i64 - p.max_seq as i64 + depth - p.num_2x as i64
}

/// Default 30-level saw-tooth schedule.
///
/// Inside a block of five the source words grow and the target length
/// loosens in step; each new block restarts from two 3-letter words but
/// draws from rarer words with fewer 2X letters.
pub fn level_schedule() -> Vec<GenerationParams> {
    const SOURCES: [&[usize]; BLOCK_SIZE] = [&[3, 3], &[3, 4], &[4, 4], &[3, 3, 4], &[4, 4, 4]];
    const TARGET: [usize; BLOCK_SIZE] = [5, 6, 7, 8, 10];
    (0..LEVEL_COUNT)
        .map(|i| {
            let block = i / BLOCK_SIZE;
            let step = i % BLOCK_SIZE;
            GenerationParams {
                corpus_freq: RankWindow {
                    min_rank: 1 + RANK_DEPTH_STEP * block as u32,
                    max_rank: 4000 + 3000 * block as u32,
                },
                source_words: SOURCES[step].to_vec(),
                target_length: TARGET[step],
                max_seq: if block < 3 { 3 } else { 4 },
                num_2x: 6usize.saturating_sub(block + step),
            }
        })
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ScheduleRow {
    level: usize,
    min_rank: u32,
    max_rank: u32,
    source_words: String,
    target_length: usize,
    max_seq: usize,
    #[serde(rename = "num2X")]
    num_2x: usize,
}

/// Reads a schedule table: a CSV with header
/// `level,minRank,maxRank,sourceWords,targetLength,maxSeq,num2X` where
/// `sourceWords` is a dash-separated list such as `3-4`. Levels must be
/// numbered from 1 without gaps, at most 30 of them.
pub fn read_schedule<R: Read>(reader: R) -> Result<Vec<GenerationParams>, GenerationError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<ScheduleRow> = Vec::new();
    for row in rdr.deserialize() {
        rows.push(row.map_err(|e| GenerationError::Schedule(e.to_string()))?);
    }
    if rows.is_empty() || rows.len() > LEVEL_COUNT {
        return Err(GenerationError::Schedule(format!(
            "expected 1 to {LEVEL_COUNT} rows, found {}",
            rows.len()
        )));
    }
    rows.sort_by_key(|r| r.level);
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.into_iter().enumerate() {
        if row.level != i + 1 {
            return Err(GenerationError::Schedule(format!(
                "levels must be numbered from 1 without gaps; missing level {}",
                i + 1
            )));
        }
        let source_words = row
            .source_words
            .split('-')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| {
                GenerationError::Schedule(format!("level {}: bad sourceWords: {e}", row.level))
            })?;
        out.push(GenerationParams {
            corpus_freq: RankWindow {
                min_rank: row.min_rank,
                max_rank: row.max_rank,
            },
            source_words,
            target_length: row.target_length,
            max_seq: row.max_seq,
            num_2x: row.num_2x,
        });
    }
    Ok(out)
}

pub fn write_schedule<W: Write>(
    schedule: &[GenerationParams],
    writer: W,
) -> Result<(), GenerationError> {
    let mut wtr = csv::Writer::from_writer(writer);
    for (i, p) in schedule.iter().enumerate() {
        let sources: Vec<String> = p.source_words.iter().map(|l| l.to_string()).collect();
        wtr.serialize(ScheduleRow {
            level: i + 1,
            min_rank: p.corpus_freq.min_rank,
            max_rank: p.corpus_freq.max_rank,
            source_words: sources.join("-"),
            target_length: p.target_length,
            max_seq: p.max_seq,
            num_2x: p.num_2x,
        })
        .map_err(|e| GenerationError::Schedule(e.to_string()))?;
    }
    wtr.flush()
        .map_err(|e| GenerationError::Schedule(e.to_string()))
}

pub fn load_schedule(path: impl AsRef<Path>) -> Result<Vec<GenerationParams>, GenerationError> {
    let path = path.as_ref();
    let file = File::open(path)
        .map_err(|e| GenerationError::Schedule(format!("{}: {e}", path.display())))?;
    read_schedule(file)
}
