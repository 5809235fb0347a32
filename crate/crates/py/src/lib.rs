//! Python bindings. Structured results (levels, reports, models) cross the
//! boundary as JSON strings or plain dicts.

use elimination_core::analytics::{self, fit_ols as core_fit_ols, write_traces};
use elimination_core::corpus::{self, load_dictionary, load_profanity};
use elimination_core::game;
use elimination_core::generation::{self, EaConfig};
use elimination_core::simulation::{simulate_corpus, BotKind, BotPolicy};
use elimination_core::GeneratedLevel;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(module = "elimination", frozen)]
struct Dictionary {
    inner: corpus::Dictionary,
}

#[pymethods]
impl Dictionary {
    #[new]
    #[pyo3(signature = (words, min_length = 3, profanity = None))]
    fn new(words: Vec<String>, min_length: usize, profanity: Option<Vec<String>>) -> Self {
        let (d, _) = corpus::Dictionary::from_words(words, min_length);
        Dictionary {
            inner: d.with_profanity(profanity.unwrap_or_default()),
        }
    }

    /// Loads a frequency-ordered word list and an optional profanity list.
    #[staticmethod]
    #[pyo3(signature = (path, min_length = 3, profanity_path = None))]
    fn load(path: &str, min_length: usize, profanity_path: Option<&str>) -> PyResult<Self> {
        let (d, _) = load_dictionary(path, min_length).map_err(value_err)?;
        let bad = match profanity_path {
            Some(p) => load_profanity(p).map_err(value_err)?,
            None => Vec::new(),
        };
        Ok(Dictionary {
            inner: d.with_profanity(bad),
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __contains__(&self, word: &str) -> bool {
        self.inner.contains(word)
    }

    fn rank(&self, word: &str) -> Option<u32> {
        self.inner.rank(word)
    }

    fn is_profane(&self, word: &str) -> bool {
        self.inner.is_profane(word)
    }

    fn embedded_words(&self, challenge: &str) -> PyResult<Vec<String>> {
        self.inner.embedded_words(challenge).map_err(value_err)
    }

    /// `(reachable, unreachable_embedded)` for a challenge word.
    fn reachable_words(&self, challenge: &str) -> PyResult<(Vec<String>, Vec<String>)> {
        let r = game::reachable_words(challenge, &self.inner).map_err(value_err)?;
        Ok((r.reachable, r.unreachable_embedded))
    }
}

#[pyfunction]
fn challenge_time(n: usize) -> PyResult<f64> {
    game::challenge_time(n).map_err(value_err)
}

#[pyfunction]
#[pyo3(signature = (word, covers_bonus = false))]
fn word_score(word: &str, covers_bonus: bool) -> u32 {
    game::word_score(word, covers_bonus)
}

#[pyfunction]
fn constraint_score(word_length: usize, target_length: usize) -> f64 {
    generation::constraint_score(word_length, target_length)
}

/// `(fitness, breakdown)` where breakdown holds the embedded words and the
/// long/short/visible counts.
#[pyfunction]
fn fitness_score<'py>(
    py: Python<'py>,
    challenge: &str,
    max_seq: usize,
    dictionary: &Dictionary,
) -> PyResult<(f64, Bound<'py, PyDict>)> {
    let (f, b) = generation::fitness_score(challenge, max_seq, &dictionary.inner);
    let d = PyDict::new(py);
    d.set_item("words", b.words)?;
    d.set_item("long_count", b.long_count)?;
    d.set_item("short_count", b.short_count)?;
    d.set_item("v", b.v)?;
    d.set_item("e", b.e)?;
    Ok((f, d))
}

#[pyfunction]
fn is_subsequence(needle: &str, haystack: &str) -> bool {
    corpus::is_subsequence(needle, haystack)
}

/// Generates one level of the default schedule and returns its JSON.
#[pyfunction]
#[pyo3(signature = (index, dictionary, seed = 42))]
fn generate_level(
    py: Python<'_>,
    index: usize,
    dictionary: &Dictionary,
    seed: u64,
) -> PyResult<String> {
    let schedule = generation::level_schedule();
    py.detach(|| {
        generation::generate_level(
            index,
            &schedule,
            &dictionary.inner,
            seed,
            &EaConfig::default(),
        )
    })
    .map(|l| l.to_json())
    .map_err(value_err)
}

fn parse_levels(levels: &[String]) -> PyResult<Vec<GeneratedLevel>> {
    levels
        .iter()
        .map(|j| GeneratedLevel::from_json(j).map_err(value_err))
        .collect()
}

/// Runs bots over the given level JSONs; returns newline-delimited trace
/// records.
#[pyfunction]
#[pyo3(signature = (levels, dictionary, bots, runs, seed = 0, delay_ms = 800))]
fn simulate(
    levels: Vec<String>,
    dictionary: &Dictionary,
    bots: Vec<String>,
    runs: usize,
    seed: u64,
    delay_ms: u64,
) -> PyResult<String> {
    let levels = parse_levels(&levels)?;
    let policies = bots
        .iter()
        .enumerate()
        .map(|(i, b)| {
            Ok(BotPolicy::new(
                b.parse::<BotKind>().map_err(value_err)?,
                delay_ms,
                i as u64,
            ))
        })
        .collect::<PyResult<Vec<_>>>()?;
    let events =
        simulate_corpus(&policies, &levels, runs, seed, &dictionary.inner).map_err(value_err)?;
    let mut buf = Vec::new();
    write_traces(&events, &mut buf).map_err(value_err)?;
    String::from_utf8(buf).map_err(value_err)
}

/// Full analysis report, as JSON, for a newline-delimited trace log.
#[pyfunction]
fn analyze(traces: &str, levels: Vec<String>, dictionary: &Dictionary) -> PyResult<String> {
    let levels = parse_levels(&levels)?;
    let log = analytics::parse_traces(traces.as_bytes()).map_err(value_err)?;
    analytics::analyze(&log, &levels, &dictionary.inner)
        .map(|r| r.to_json())
        .map_err(value_err)
}

/// Ordinary least squares with an intercept. Returns a dict with
/// `coefficients` (intercept first), `standard_errors`, `r_squared`.
#[pyfunction]
fn fit_ols<'py>(
    py: Python<'py>,
    feature_names: Vec<String>,
    rows: Vec<Vec<f64>>,
    response: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let m = core_fit_ols(&feature_names, &rows, &response).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("feature_names", m.feature_names)?;
    d.set_item("coefficients", m.coefficients)?;
    d.set_item("standard_errors", m.standard_errors)?;
    d.set_item("r_squared", m.r_squared)?;
    d.set_item("observations", m.observations)?;
    Ok(d)
}

#[pymodule]
fn elimination(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Dictionary>()?;
    m.add_function(wrap_pyfunction!(challenge_time, m)?)?;
    m.add_function(wrap_pyfunction!(word_score, m)?)?;
    m.add_function(wrap_pyfunction!(constraint_score, m)?)?;
    m.add_function(wrap_pyfunction!(fitness_score, m)?)?;
    m.add_function(wrap_pyfunction!(is_subsequence, m)?)?;
    m.add_function(wrap_pyfunction!(generate_level, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(fit_ols, m)?)?;
    Ok(())
}
