use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Table,
}

/// Everything that determines the output of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub r: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: u32,
    pub window: [i64; 2],
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_dir: Option<PathBuf>,
    pub suites: Vec<String>,
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            r: 1,
            n: 2,
            p: 32003,
            window: [-2, 2],
            format: Format::Json,
            cache_dir: None,
            suites: Vec::new(),
            seed: 0,
            samples: 100,
        }
    }
}

/// The TOML file: every key optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub r: Option<usize>,
    #[serde(rename = "N")]
    pub n: Option<usize>,
    pub prime: Option<u32>,
    pub window: Option<[i64; 2]>,
    pub format: Option<Format>,
    pub cache_dir: Option<PathBuf>,
    pub suites: Option<Vec<String>>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Values given on the command line; they override the file.
#[derive(Debug, Default)]
pub struct Overrides {
    pub r: Option<usize>,
    pub n: Option<usize>,
    pub prime: Option<u32>,
    pub window: Option<[i64; 2]>,
    pub format: Option<Format>,
    pub cache_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: Overrides) -> Result<Self> {
        let d = RunConfig::default();
        let cfg = RunConfig {
            r: flags.r.or(file.r).unwrap_or(d.r),
            n: flags.n.or(file.n).unwrap_or(d.n),
            p: flags.prime.or(file.prime).unwrap_or(d.p),
            window: flags.window.or(file.window).unwrap_or(d.window),
            format: flags.format.or(file.format).unwrap_or(d.format),
            cache_dir: flags.cache_dir.or(file.cache_dir),
            suites: file.suites.unwrap_or_default(),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            samples: flags.samples.or(file.samples).unwrap_or(d.samples),
        };
        if cfg.window[0] > cfg.window[1] {
            bail!("window [{}, {}] is empty", cfg.window[0], cfg.window[1]);
        }
        Ok(cfg)
    }

    pub fn lo(&self) -> i64 {
        self.window[0]
    }

    pub fn hi(&self) -> i64 {
        self.window[1]
    }
}
