//! Challenge and level generation.

mod chromosome;
mod fi2pop;
mod level;
mod objective;
mod params;

use thiserror::Error;

pub use chromosome::{
    decode_sources, greedy_reduce, mix_sources, Chromosome, SourcePool, GENE_RANGE,
};
pub use fi2pop::{
    evolve, evolve_challenge, EaConfig, EvalResult, Evaluator, EvolveOutcome, GenerationStats,
};
pub use level::{
    assign_bonus, generate_level, generate_levels, mix_seed, rarest_letter, validate_level,
    GeneratedChallenge, GeneratedLevel, SourceEmbedding, CHALLENGES_PER_LEVEL,
};
pub use objective::{constraint_score, fitness_score, FitnessBreakdown};
pub use params::{
    difficulty_proxy, level_schedule, load_schedule, read_schedule, write_schedule,
    GenerationParams, RankWindow, BLOCK_SIZE, LEVEL_COUNT, MAX_NUM_2X, RANK_DEPTH_STEP,
};

#[derive(Debug, Error)]
pub enum GenerationError {
    #[error("invalid generation parameters: {0}")]
    InvalidParams(String),
    #[error("cannot decode source words: {0}")]
    Decode(String),
    #[error("no feasible challenge found; best infeasible was {} (constraint {:.4})", best_infeasible.challenge_word, best_infeasible.constraint)]
    NoFeasible { best_infeasible: Box<EvalResult> },
    #[error("level {level}, challenge {challenge}: {source}")]
    Challenge {
        level: usize,
        challenge: usize,
        #[source]
        source: Box<GenerationError>,
    },
    #[error("schedule: {0}")]
    Schedule(String),
    #[error("level file: {0}")]
    Format(String),
}
