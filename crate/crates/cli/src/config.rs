//! `key=value` run configuration; command-line flags take precedence.

use std::path::{Path, PathBuf};

use angulata::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub genus_cap: usize,
    pub x_order: Option<i64>,
    pub oracle_cap: usize,
    pub workers: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            genus_cap: 4,
            x_order: None,
            oracle_cap: angulata::oracle::DEFAULT_ORACLE_CAP,
            workers: None,
            format: Format::Json,
            output: None,
        }
    }
}

fn positive(key: &str, v: &str) -> Result<usize> {
    match v.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Error::InvalidInput(format!(
            "{key} must be a positive integer, got {v:?}"
        ))),
    }
}

impl RunConfig {
    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::InvalidInput(format!(
                    "config line {}: expected key=value",
                    n + 1
                )));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "genus_cap" => cfg.genus_cap = positive(key, value)?,
                "x_order" => cfg.x_order = Some(positive(key, value)? as i64),
                "oracle_cap" => cfg.oracle_cap = positive(key, value)?,
                "workers" | "worker_count" => cfg.workers = Some(positive(key, value)?),
                "format" => {
                    cfg.format = <Format as clap::ValueEnum>::from_str(value, true)
                        .map_err(|_| Error::InvalidInput(format!("unknown format {value:?}")))?
                }
                "output" => cfg.output = Some(PathBuf::from(value)),
                _ => return Err(Error::InvalidInput(format!("unknown config key {key:?}"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let cfg =
            RunConfig::parse("# run\ngenus_cap = 3\nformat=csv\nworkers=2\n\noutput = out.csv")
                .unwrap();
        assert_eq!(cfg.genus_cap, 3);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.workers, Some(2));
        assert_eq!(cfg.output, Some(PathBuf::from("out.csv")));
        assert!(RunConfig::parse("genus_cap=0").is_err());
        assert!(RunConfig::parse("colour=red").is_err());
        assert!(RunConfig::parse("genus_cap").is_err());
    }
}
