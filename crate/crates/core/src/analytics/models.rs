use super::curve::{difficulty_curve, LevelOutcome};
use super::features::WordSelectionRecord;
use super::ols::{fit_ols, RegressionModel};
use super::AnalyticsError;
use crate::generation::GenerationParams;

pub const LEVEL_FEATURES: [&str; 5] = [
    "minCorpusFreq",
    "maxSeq",
    "targetLength",
    "num2X",
    "minSourceWord",
];

pub const WORD_FEATURES: [&str; 6] = [
    "wordLength",
    "maxSequence",
    "has2X",
    "splitDistance",
    "firstOccurrence",
    "dirtyWord",
];

pub const MIN_LEVELS_FOR_MODEL: usize = 7;
pub const MIN_RECORDS_FOR_MODEL: usize = 50;

pub fn level_feature_row(p: &GenerationParams) -> Vec<f64> {
    vec![
        p.corpus_freq.min_rank as f64,
        p.max_seq as f64,
        p.target_length as f64,
        p.num_2x as f64,
        p.min_source_length() as f64,
    ]
}

/// Mean normalized score per level regressed on that level's generation
/// parameters. `schedule[i]` describes level `i + 1`.
pub fn level_score_model(
    outcomes: &[LevelOutcome],
    schedule: &[GenerationParams],
) -> Result<RegressionModel, AnalyticsError> {
    let curve = difficulty_curve(outcomes, std::iter::empty());
    let mut rows = Vec::new();
    let mut response = Vec::new();
    for point in &curve.points {
        let params = schedule
            .get(point.level_index.wrapping_sub(1))
            .ok_or_else(|| {
                AnalyticsError::Integrity(format!("no parameters for level {}", point.level_index))
            })?;
        rows.push(level_feature_row(params));
        response.push(point.mean_normalized_score);
    }
    if rows.len() < MIN_LEVELS_FOR_MODEL {
        return Err(AnalyticsError::Regression(format!(
            "need outcomes for at least {MIN_LEVELS_FOR_MODEL} levels, have {}",
            rows.len()
        )));
    }
    fit_ols(&LEVEL_FEATURES, &rows, &response)
}

pub fn word_choice_model(
    records: &[WordSelectionRecord],
) -> Result<RegressionModel, AnalyticsError> {
    if records.len() < MIN_RECORDS_FOR_MODEL {
        return Err(AnalyticsError::Regression(format!(
            "need at least {MIN_RECORDS_FOR_MODEL} word records, have {}",
            records.len()
        )));
    }
    let rows: Vec<Vec<f64>> = records
        .iter()
        .map(WordSelectionRecord::feature_row)
        .collect();
    let response: Vec<f64> = records.iter().map(|r| r.selection_rate).collect();
    fit_ols(&WORD_FEATURES, &rows, &response)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generation::level_schedule;

    fn outcome(level: usize, score: f64) -> LevelOutcome {
        LevelOutcome {
            level_index: level,
            player_id: "p".into(),
            session_id: format!("s{level}"),
            normalized_score: score,
        }
    }

    #[test]
    fn constant_schedule_is_collinear() {
        let schedule = vec![level_schedule()[0].clone(); 10];
        let outcomes: Vec<_> = (1..=10).map(|l| outcome(l, l as f64 / 20.0)).collect();
        assert!(matches!(
            level_score_model(&outcomes, &schedule),
            Err(AnalyticsError::Collinear { .. })
        ));
    }

    #[test]
    fn too_few_levels() {
        let outcomes: Vec<_> = (1..=6).map(|l| outcome(l, 0.5)).collect();
        assert!(level_score_model(&outcomes, &level_schedule()).is_err());
    }

    #[test]
    fn default_schedule_has_full_rank() {
        let schedule = level_schedule();
        let outcomes: Vec<_> = (1..=30).map(|l| outcome(l, (l % 7) as f64 / 7.0)).collect();
        let m = level_score_model(&outcomes, &schedule).unwrap();
        assert_eq!(m.coefficients.len(), 6);
        assert!(m.r_squared.is_finite());
    }
}
