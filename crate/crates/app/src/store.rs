//! Level files on disk: `level_NN.json` per level plus `manifest.json`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use elimination_core::generation::{EaConfig, GeneratedLevel};
use elimination_core::GenerationParams;
use serde::{Deserialize, Serialize};

pub const MANIFEST: &str = "manifest.json";
pub const GENERATOR_VERSION: &str = concat!("elimination-core ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ManifestEntry {
    pub index: usize,
    pub file: String,
    pub params: GenerationParams,
    pub bonus_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Manifest {
    pub seed: u64,
    pub generator_version: String,
    pub ea_config: EaConfig,
    pub levels: Vec<ManifestEntry>,
}

pub fn level_file_name(index: usize) -> String {
    format!("level_{index:02}.json")
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Writes every level and the manifest. Files are staged in a scratch
/// directory first; on any failure nothing new is left in `dir`.
pub fn write_levels(
    dir: &Path,
    levels: &[GeneratedLevel],
    seed: u64,
    config: &EaConfig,
) -> Result<Manifest> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let staging = dir.join(format!(".staging-{}", std::process::id()));
    let result = stage_and_commit(dir, &staging, levels, seed, config);
    let _ = fs::remove_dir_all(&staging);
    if result.is_err() {
        for l in levels {
            let _ = fs::remove_file(dir.join(level_file_name(l.index)));
        }
        let _ = fs::remove_file(dir.join(MANIFEST));
    }
    result
}

fn stage_and_commit(
    dir: &Path,
    staging: &Path,
    levels: &[GeneratedLevel],
    seed: u64,
    config: &EaConfig,
) -> Result<Manifest> {
    fs::create_dir_all(staging)?;
    let manifest = Manifest {
        seed,
        generator_version: GENERATOR_VERSION.into(),
        ea_config: config.clone(),
        levels: levels
            .iter()
            .map(|l| ManifestEntry {
                index: l.index,
                file: level_file_name(l.index),
                params: l.params.clone(),
                bonus_count: l.bonus_count(),
            })
            .collect(),
    };
    let mut names: Vec<String> = Vec::new();
    for l in levels {
        let name = level_file_name(l.index);
        fs::write(staging.join(&name), l.to_json())?;
        names.push(name);
    }
    fs::write(staging.join(MANIFEST), pretty(&manifest))?;
    names.push(MANIFEST.into());
    for name in names {
        fs::rename(staging.join(&name), dir.join(&name))
            .with_context(|| format!("moving {name} into {}", dir.display()))?;
    }
    Ok(manifest)
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST);
    let text = fs::read_to_string(&path).with_context(|| {
        format!(
            "reading {} (run `elimination generate` first)",
            path.display()
        )
    })?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Loads every level listed in the manifest, in level order.
pub fn load_levels(dir: &Path) -> Result<Vec<GeneratedLevel>> {
    let manifest = read_manifest(dir)?;
    let mut levels = Vec::with_capacity(manifest.levels.len());
    for entry in &manifest.levels {
        let path: PathBuf = dir.join(&entry.file);
        let text =
            fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let level = GeneratedLevel::from_json(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        if level.index != entry.index {
            bail!(
                "{} holds level {}, manifest says {}",
                path.display(),
                level.index,
                entry.index
            );
        }
        levels.push(level);
    }
    levels.sort_by_key(|l| l.index);
    Ok(levels)
}
