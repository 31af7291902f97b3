//! Budget resolution: defaults, then the config file, then environment
//! variables and flags (clap merges those two, flags first).

use std::path::{Path, PathBuf};

use qgauss::Budget;
use serde::Deserialize;

use crate::Failure;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub max_steps: Option<u64>,
    pub max_degree: Option<usize>,
    pub max_words: Option<usize>,
    pub format: Option<crate::Format>,
    pub sequential: Option<bool>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let path: PathBuf = match path {
            Some(p) => p.to_path_buf(),
            None => {
                let p = PathBuf::from("qgauss.toml");
                if !p.exists() {
                    return Ok(Self::default());
                }
                p
            }
        };
        let text = std::fs::read_to_string(&path).map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e)))?;
        toml::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {}", path.display(), e)))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub max_steps: Option<u64>,
    pub max_degree: Option<usize>,
    pub max_words: Option<usize>,
}

pub fn budget(file: &ConfigFile, o: Overrides) -> Budget {
    let d = Budget::default();
    Budget {
        max_steps: o.max_steps.or(file.max_steps).unwrap_or(d.max_steps),
        max_degree: o.max_degree.or(file.max_degree).unwrap_or(d.max_degree),
        max_words: o.max_words.or(file.max_words).unwrap_or(d.max_words),
    }
}
