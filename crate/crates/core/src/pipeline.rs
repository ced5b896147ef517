//! Declarative multi-stage pipelines stored as TOML.
//!
//! ```toml
//! input = "builtin:step128"   # or a path to a PGM/PPM file
//! output = "restored.pgm"
//! seed = 7                    # default seed for noise stages (optional)
//! ascii = false               # write P2/P3 instead of P5/P6 (optional)
//!
//! [[stages]]
//! op = "salt-pepper"
//! params = { density = 0.2 }
//!
//! [[stages]]
//! op = "switching-median"
//! params = { w = 1, t = 40, p = 3 }
//! ```
//!
//! Relative paths resolve against the directory holding the config file.
//! Every stage is validated before the input is read.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use toml::Table;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::ops::Operation;
use crate::synth::{self, BUILTIN_PREFIX};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageConfig {
    pub op: String,
    #[serde(default)]
    pub params: Table,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: String,
    pub output: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub ascii: bool,
    #[serde(default)]
    pub stages: Vec<StageConfig>,
}

/// A config whose stages have all been validated.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub input: String,
    pub output: PathBuf,
    pub ascii: bool,
    pub stages: Vec<Operation>,
}

impl PipelineConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))
    }

    /// Validates every stage, failing on the first bad one with its index.
    pub fn validate(&self, base_dir: &Path) -> Result<Pipeline> {
        let stages = self
            .stages
            .iter()
            .enumerate()
            .map(|(index, stage)| {
                Operation::from_params(&stage.op, &stage.params, self.seed).map_err(|e| Error::Stage {
                    index,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let input = if self.input.starts_with(BUILTIN_PREFIX) {
            self.input.clone()
        } else {
            base_dir.join(&self.input).display().to_string()
        };
        Ok(Pipeline {
            input,
            output: base_dir.join(&self.output),
            ascii: self.ascii,
            stages,
        })
    }
}

impl Pipeline {
    /// Reads a config file and validates it.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        PipelineConfig::parse(&text)?.validate(base)
    }

    /// Threads an image through every stage in order.
    pub fn run_on(&self, mut image: Image) -> Result<Image> {
        for (index, op) in self.stages.iter().enumerate() {
            image = op
                .apply(&image)
                .map_err(|e| Error::Stage {
                    index,
                    source: Box::new(e),
                })?
                .image;
        }
        Ok(image)
    }

    pub fn run(&self) -> Result<Image> {
        self.run_on(synth::open_input(&self.input)?)
    }
}
