//! Run configuration: command-line flags merged over an optional TOML file.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use gdirac_core::suites::{Suite, SuiteParams};
use serde::Deserialize;

use crate::error::CliError;

/// Output encoding of a report.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    /// Pretty-printed JSON with a schema tag.
    #[default]
    Json,
    /// Comma-separated rows with a header line.
    Csv,
}

/// Flags accepted by every command. Unset flags fall back to the config file, then to defaults.
#[derive(Clone, Debug, Default, Args)]
pub struct CommonArgs {
    /// Index bound of exhaustive windows and of the dump-op basis.
    #[arg(long, global = true, value_name = "N")]
    pub max_index: Option<i64>,
    /// Truncation of the invariant sector.
    #[arg(long, global = true, value_name = "N")]
    pub trunc: Option<i64>,
    /// Largest pair count M and mode count k of the invariant blocks.
    #[arg(long, global = true, value_name = "D")]
    pub degree: Option<usize>,
    /// Seed of all sampled vectors.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// TOML file with default values for the flags above.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

/// Keys allowed in a config file; anything else is rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    /// Suites run by `verify` when none are named on the command line.
    pub suite: Option<Vec<String>>,
    /// See [`CommonArgs::max_index`].
    pub max_index: Option<i64>,
    /// See [`CommonArgs::trunc`].
    pub trunc: Option<i64>,
    /// See [`CommonArgs::degree`].
    pub degree: Option<usize>,
    /// See [`CommonArgs::seed`].
    pub seed: Option<u64>,
    /// See [`CommonArgs::format`].
    pub format: Option<Format>,
    /// See [`CommonArgs::out`].
    pub out: Option<PathBuf>,
}

impl FileConfig {
    /// Reads and parses a config file.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_path_buf(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Fully resolved settings of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    /// Suites selected for `verify`; empty means every suite.
    pub suites: Vec<Suite>,
    /// Window sizes and seed.
    pub params: SuiteParams,
    /// Output format.
    pub format: Format,
    /// Output file, or standard output.
    pub out: Option<PathBuf>,
}

impl RunConfig {
    /// Merges flags over the config file over defaults and validates the result.
    pub fn resolve(args: &CommonArgs, suite_names: &[String]) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let defaults = SuiteParams::default();
        let params = SuiteParams {
            max_index: args.max_index.or(file.max_index).unwrap_or(defaults.max_index),
            trunc: args.trunc.or(file.trunc).unwrap_or(defaults.trunc),
            degree: args.degree.or(file.degree).unwrap_or(defaults.degree),
            seed: args.seed.or(file.seed).unwrap_or(defaults.seed),
        };
        if params.max_index < 1 || params.trunc < 1 || params.degree < 1 {
            return Err(CliError::Usage(
                "--max-index, --trunc and --degree must be at least 1".into(),
            ));
        }
        let names = if suite_names.is_empty() {
            file.suite.unwrap_or_default()
        } else {
            suite_names.to_vec()
        };
        let suites = names
            .iter()
            .map(|n| {
                n.parse::<Suite>()
                    .map_err(|_| CliError::Usage(format!("unknown suite '{n}'")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RunConfig {
            suites,
            params,
            format: args.format.or(file.format).unwrap_or_default(),
            out: args.out.clone().or(file.out),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn flags_win_over_file() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(
            f,
            "max-index = 2\ntrunc = 3\nseed = 11\nformat = \"csv\"\nsuite = [\"car\"]"
        )
        .unwrap();
        let args = CommonArgs {
            max_index: Some(1),
            config: Some(f.path().to_path_buf()),
            ..CommonArgs::default()
        };
        let cfg = RunConfig::resolve(&args, &[]).unwrap();
        assert_eq!(
            cfg.params,
            SuiteParams {
                max_index: 1,
                trunc: 3,
                degree: 2,
                seed: 11
            }
        );
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.suites, vec![Suite::Car]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "max-index = 2\ncolour = \"red\"").unwrap();
        let args = CommonArgs {
            config: Some(f.path().to_path_buf()),
            ..CommonArgs::default()
        };
        assert!(matches!(
            RunConfig::resolve(&args, &[]),
            Err(CliError::ConfigParse { .. })
        ));
    }

    #[test]
    fn bounds_and_suites_are_validated() {
        let args = CommonArgs {
            trunc: Some(0),
            ..CommonArgs::default()
        };
        assert!(matches!(RunConfig::resolve(&args, &[]), Err(CliError::Usage(_))));
        let names = vec!["car".to_string(), "bogus".to_string()];
        assert!(matches!(
            RunConfig::resolve(&CommonArgs::default(), &names),
            Err(CliError::Usage(_))
        ));
    }
}
