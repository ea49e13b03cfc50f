//! Run configuration: TOML file values, overridden by command-line flags,
//! falling back to defaults.

use crate::CliError;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    #[serde(default)]
    pub legendre: LegendreFile,
    #[serde(default)]
    pub tdelta: TdeltaFile,
    #[serde(default)]
    pub weyl: WeylFile,
    #[serde(default)]
    pub cayley: CayleyFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegendreFile {
    pub delta_grid: Option<String>,
    pub n_cut: Option<usize>,
    pub bernstein_n: Option<usize>,
    pub bernstein_points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TdeltaFile {
    pub dim: Option<u32>,
    pub delta_grid: Option<String>,
    pub p_list: Option<Vec<f64>>,
    pub n_cut: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeylFile {
    pub grid: Option<usize>,
    pub seeds: Option<u64>,
    pub alpha: Option<f64>,
    pub pair: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CayleyFile {
    pub moduli: Option<Vec<u32>>,
    pub max_vertices: Option<usize>,
    pub tolerance: Option<f64>,
    pub export_mtx: Option<PathBuf>,
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))
}

/// Settings shared by every subcommand, after precedence is applied.
#[derive(Debug, Clone, Serialize)]
pub struct Common {
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub threads: Option<usize>,
}

/// Parses `start:stop:step` (inclusive of `stop`) or a comma-separated list.
pub fn parse_grid(input: &str) -> Result<Vec<f64>, CliError> {
    let bad = |why: &str| CliError::Config(format!("grid '{input}': {why}"));
    let number = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    if input.contains(':') {
        let parts: Vec<&str> = input.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err(bad("expected start:stop:step"));
        };
        let (start, stop, step) = (number(start)?, number(stop)?, number(step)?);
        if !(start.is_finite() && stop.is_finite() && step > 0.0) || stop < start {
            return Err(bad("need finite start <= stop and step > 0"));
        }
        let intervals = ((stop - start) / step).round();
        if (intervals * step - (stop - start)).abs() > 1e-9 * (stop - start).abs().max(1.0) {
            return Err(bad("step does not divide the range"));
        }
        if intervals > 1e7 {
            return Err(bad("too many points"));
        }
        Ok(sl3lab::orthopoly::linspace(start, stop, intervals as usize + 1))
    } else {
        let values = input.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(bad("empty or non-finite"));
        }
        Ok(values)
    }
}

pub fn parse_list<T: std::str::FromStr>(input: &str, what: &str) -> Result<Vec<T>, CliError> {
    input.split(',')
        .map(|s| s.trim().parse::<T>().map_err(|_| CliError::Config(format!("bad {what} list '{input}'"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_forms() {
        let g = parse_grid("0:1:0.01").unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!((g[0], g[100]), (0.0, 1.0));
        assert_eq!(parse_grid("-1:1:0.02").unwrap().len(), 101);
        assert_eq!(parse_grid("0.3").unwrap(), vec![0.3]);
        assert_eq!(parse_grid("0.1, -0.2").unwrap(), vec![0.1, -0.2]);
        assert_eq!(parse_grid("0.5:0.5:0.1").unwrap(), vec![0.5]);
        for bad in ["0:1", "1:0:0.1", "0:1:0", "0:1:0.3", "a:1:0.1", "", "0:1:nan"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(toml::from_str::<FileConfig>("[legendre]\nncut = 3\n").is_err());
        let c: FileConfig = toml::from_str("format = \"json\"\n[cayley]\nmoduli = [2, 3]\n").unwrap();
        assert_eq!(c.format, Some(Format::Json));
        assert_eq!(c.cayley.moduli, Some(vec![2, 3]));
    }
}
