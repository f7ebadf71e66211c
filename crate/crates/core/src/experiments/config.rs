//! Experiment configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::desk;
use super::random::{random_genus_one_map, RandomDef};
use crate::analysis::GRID_SIZES;
use crate::combinatorics::Pair;
use crate::error::{Error, Result};
use crate::maps::{Giem, MapDef};
use crate::scalar::Precision;

pub const MAX_DEPTH: usize = 40;

/// A map given inline, by file, by a seeded generator or by a named preset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSource {
    File { file: PathBuf },
    Random { random: RandomDef },
    Preset { preset: String },
    Inline(Box<MapDef>),
}

impl MapSource {
    /// Builds the map; relative file paths are resolved against `base`.
    pub fn build(&self, base: &Path, seed: u64) -> Result<Giem> {
        match self {
            MapSource::Inline(def) => def.build(),
            MapSource::File { file } => {
                let path = if file.is_absolute() { file.clone() } else { base.join(file) };
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let def: MapDef = serde_json::from_str(&text)?;
                def.build()
            }
            MapSource::Random { random } => random_genus_one_map(random.d, random.seed.unwrap_or(seed)),
            MapSource::Preset { preset } => desk::preset(preset),
        }
    }
}

/// What `converge` compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compare {
    /// `Z Rⁿf` against `F_n`.
    #[default]
    Moebius,
    /// `Rⁿf` against `Rⁿf_A` for the constructed affine model.
    AffineModel,
    /// `Rⁿf` against `Rⁿg` for the second map `other`.
    Pair,
}

fn default_depth() -> usize {
    15
}

fn default_grid() -> usize {
    crate::analysis::DEFAULT_GRID
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub experiment: Option<String>,
    #[serde(default)]
    pub map: Option<MapSource>,
    #[serde(default)]
    pub other: Option<MapSource>,
    #[serde(default)]
    pub compare: Compare,
    /// Explicit combinatorics for `cocycle` when no map is given.
    #[serde(default)]
    pub pair: Option<Pair>,
    /// Move pattern over `{0, 1}` (or `"golden"`), repeated to `depth`.
    #[serde(default)]
    pub moves: Option<String>,
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_grid")]
    pub grid: usize,
    #[serde(default)]
    pub precision: Precision,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    /// Directory that relative map files are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: None,
            map: None,
            other: None,
            compare: Compare::default(),
            pair: None,
            moves: None,
            depth: default_depth(),
            grid: default_grid(),
            precision: Precision::Std,
            out: None,
            seed: 0,
            base_dir: PathBuf::from("."),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth > MAX_DEPTH {
            return Err(Error::InvalidArgument(format!("depth {} exceeds {MAX_DEPTH}", self.depth)));
        }
        if !GRID_SIZES.contains(&self.grid) {
            return Err(Error::InvalidArgument(format!("grid {} is not one of {GRID_SIZES:?}", self.grid)));
        }
        Ok(())
    }

    pub fn map(&self) -> Result<Giem> {
        self.map
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("the config has no `map`".into()))?
            .build(&self.base_dir, self.seed)
    }

    pub fn other_map(&self) -> Result<Giem> {
        self.other
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("comparison `pair` needs an `other` map".into()))?
            .build(&self.base_dir, self.seed)
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}
