//! Run configuration: command-line flags layered over an optional key-value
//! file.
//!
//! File schema, one `key = value` per line, `#` starts a comment:
//!
//! ```text
//! coords  = 1,6,0.5          # s,t,theta
//! grid    = 0:3:4,0:3:4,0.5  # min:max:n per axis, or a single value
//! max-len = 8
//! samples = 20000
//! seed    = 0
//! jobs    = 4
//! out     = scan.csv
//! format  = csv              # csv | json
//! tol     = 1e-9
//! filter  = symspace
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const DEFAULT_MAX_LEN: usize = 8;
pub const DEFAULT_SAMPLES: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Verify,
    TraceTable,
    Surface,
    AnosovScan,
    RepInfo,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::TraceTable => "trace-table",
            Command::Surface => "surface",
            Command::AnosovScan => "anosov-scan",
            Command::RepInfo => "rep-info",
        }
    }

    /// Number of grid axes the command reads.
    fn grid_axes(self) -> Option<usize> {
        match self {
            Command::TraceTable | Command::AnosovScan => Some(3),
            Command::Surface => Some(2),
            Command::Verify | Command::RepInfo => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!(
                "unknown format {s:?}; expected csv or json"
            ))),
        }
    }
}

/// `n` evenly spaced values from `min` to `max` inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.min + step * i as f64).collect()
    }
}

impl FromStr for Axis {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            CliError::Config(format!(
                "bad grid axis {s:?}; expected min:max:n or a value"
            ))
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(bad)
        };
        match parts.as_slice() {
            [v] => {
                let v = num(v)?;
                Ok(Axis {
                    min: v,
                    max: v,
                    n: 1,
                })
            }
            [a, b, n] => {
                let n: usize = n.trim().parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(CliError::Config(format!("grid axis {s:?} has no points")));
                }
                Ok(Axis {
                    min: num(a)?,
                    max: num(b)?,
                    n,
                })
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.n)
    }
}

pub fn parse_grid(s: &str) -> Result<Vec<Axis>> {
    s.split(',').map(str::parse).collect()
}

pub fn parse_coords(s: &str) -> Result<[f64; 3]> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Config(format!("bad coordinates {s:?}; expected s,t,theta")))?;
    <[f64; 3]>::try_from(v)
        .map_err(|_| CliError::Config(format!("expected three coordinates, got {s:?}")))
}

/// Every setting optional; the file layer and the flag layer both have this
/// shape.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub coords: Option<[f64; 3]>,
    pub grid: Option<Vec<Axis>>,
    pub max_len: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tol: Option<f64>,
    pub filter: Option<String>,
    pub gaps_out: Option<PathBuf>,
}

impl Settings {
    /// `self` with unset fields taken from `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            coords: self.coords.or(base.coords),
            grid: self.grid.or(base.grid),
            max_len: self.max_len.or(base.max_len),
            samples: self.samples.or(base.samples),
            seed: self.seed.or(base.seed),
            jobs: self.jobs.or(base.jobs),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            tol: self.tol.or(base.tol),
            filter: self.filter.or(base.filter),
            gaps_out: self.gaps_out.or(base.gaps_out),
        }
    }

    pub fn from_file(path: &Path) -> Result<Settings> {
        let text = fs::read_to_string(path)?;
        Settings::parse_file(&text, &path.display().to_string())
    }

    pub fn parse_file(text: &str, origin: &str) -> Result<Settings> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::ConfigFile {
                path: origin.to_string(),
                line: i + 1,
                msg,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err("expected key = value".into()))?;
            let value = value.trim();
            let wrap = |e: CliError| err(e.to_string());
            let int = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| err(format!("not an integer: {v:?}")))
            };
            match key.trim() {
                "coords" => s.coords = Some(parse_coords(value).map_err(wrap)?),
                "grid" => s.grid = Some(parse_grid(value).map_err(wrap)?),
                "max-len" => s.max_len = Some(int(value)?),
                "samples" => s.samples = Some(int(value)?),
                "seed" => {
                    s.seed = Some(
                        value
                            .parse()
                            .map_err(|_| err(format!("not a seed: {value:?}")))?,
                    )
                }
                "jobs" => s.jobs = Some(int(value)?),
                "out" => s.out = Some(PathBuf::from(value)),
                "format" => s.format = Some(value.parse().map_err(wrap)?),
                "tol" => {
                    s.tol = Some(
                        value
                            .parse()
                            .map_err(|_| err(format!("not a number: {value:?}")))?,
                    )
                }
                "filter" => s.filter = Some(value.to_string()),
                "gaps-out" => s.gaps_out = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(s)
    }
}

/// A validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub coords: Option<[f64; 3]>,
    pub grid: Option<Vec<Axis>>,
    pub max_len: usize,
    pub samples: usize,
    pub seed: u64,
    /// Worker threads; 0 picks the number of cores.
    pub jobs: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tol: Option<f64>,
    pub filter: Option<String>,
    pub gaps_out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(command: Command, s: Settings) -> Result<RunConfig> {
        let cfg = RunConfig {
            command,
            coords: s.coords,
            grid: s.grid,
            max_len: s.max_len.unwrap_or(DEFAULT_MAX_LEN),
            samples: s.samples.unwrap_or(match command {
                Command::Verify => 50,
                _ => DEFAULT_SAMPLES,
            }),
            seed: s.seed.unwrap_or(0),
            jobs: s.jobs.unwrap_or(0),
            out: s.out,
            format: s.format.unwrap_or(match command {
                Command::RepInfo => Format::Json,
                _ => Format::Csv,
            }),
            tol: s.tol,
            filter: s.filter,
            gaps_out: s.gaps_out,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(CliError::Config(m));
        if self.max_len < 1 || self.samples < 1 {
            return fail("max-len and samples must be at least 1".into());
        }
        if let Some(tol) = self.tol {
            if !tol.is_finite() || tol <= 0.0 {
                return fail(format!("tol must be positive, got {tol}"));
            }
        }
        if self.command == Command::RepInfo && self.format == Format::Csv {
            return fail("rep-info writes JSON only".into());
        }
        if let Some(c) = self.coords {
            if c.iter().any(|v| !v.is_finite()) {
                return fail("coordinates must be finite".into());
            }
        }
        match self.command.grid_axes() {
            Some(k) => match (&self.grid, &self.coords) {
                (Some(g), _) if g.len() != k => fail(format!(
                    "{} needs a grid with {k} axes, got {}",
                    self.command.name(),
                    g.len()
                )),
                (None, None) => fail(format!("{} needs --grid or --coords", self.command.name())),
                _ => Ok(()),
            },
            None if self.command == Command::RepInfo && self.coords.is_none() => {
                fail("rep-info needs --coords".into())
            }
            None => Ok(()),
        }
    }

    /// The grid points in row order: the last axis varies fastest. Falls back
    /// to the single coordinate triple.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let axes: Vec<Vec<f64>> = match (&self.grid, &self.coords) {
            (Some(g), _) => g.iter().map(Axis::values).collect(),
            (None, Some(c)) => {
                let k = self.command.grid_axes().unwrap_or(3);
                // surface reads (s, θ) from a coordinate triple
                let vals: Vec<f64> = if k == 2 { vec![c[0], c[2]] } else { c.to_vec() };
                vals.into_iter().map(|v| vec![v]).collect()
            }
            (None, None) => return Vec::new(),
        };
        axes.iter().fold(vec![Vec::new()], |acc, axis| {
            acc.iter()
                .flat_map(|prefix| {
                    axis.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect()
        })
    }

    /// Settings that determine the output, as sorted `key=value` pairs;
    /// `out`, `jobs` and `gaps-out` are left out.
    pub fn canonical(&self) -> BTreeMap<&'static str, String> {
        let mut m = BTreeMap::new();
        m.insert("command", self.command.name().to_string());
        if let Some(c) = self.coords {
            m.insert("coords", format!("{:?},{:?},{:?}", c[0], c[1], c[2]));
        }
        if let Some(g) = &self.grid {
            let axes: Vec<String> = g
                .iter()
                .map(|a| format!("{:?}:{:?}:{}", a.min, a.max, a.n))
                .collect();
            m.insert("grid", axes.join(","));
        }
        m.insert("max-len", self.max_len.to_string());
        m.insert("samples", self.samples.to_string());
        m.insert("seed", self.seed.to_string());
        m.insert(
            "format",
            match self.format {
                Format::Csv => "csv",
                Format::Json => "json",
            }
            .to_string(),
        );
        if let Some(t) = self.tol {
            m.insert("tol", format!("{t:?}"));
        }
        if let Some(f) = &self.filter {
            m.insert("filter", f.clone());
        }
        m
    }

    /// SHA-256 of the canonical settings, hex encoded.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.canonical() {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        assert_eq!(
            "0:3:4".parse::<Axis>().unwrap().values(),
            vec![0.0, 1.0, 2.0, 3.0]
        );
        assert_eq!("2.5".parse::<Axis>().unwrap().values(), vec![2.5]);
        assert!("0:1:0".parse::<Axis>().is_err());
        assert!("a:b:c".parse::<Axis>().is_err());
        assert!("1:2".parse::<Axis>().is_err());
    }

    #[test]
    fn file_layer_is_overridden_by_flags() {
        let file = Settings::parse_file("seed = 7\nmax-len = 5 # short\n\nformat = json\n", "cfg")
            .unwrap();
        let flags = Settings {
            seed: Some(3),
            ..Settings::default()
        };
        let s = flags.over(file);
        assert_eq!(
            (s.seed, s.max_len, s.format),
            (Some(3), Some(5), Some(Format::Json))
        );
        assert!(Settings::parse_file("colour = red", "cfg").is_err());
        assert!(Settings::parse_file("seed 3", "cfg").is_err());
    }

    #[test]
    fn validation() {
        let grid = |g: &str| Settings {
            grid: Some(parse_grid(g).unwrap()),
            ..Settings::default()
        };
        assert!(RunConfig::resolve(Command::TraceTable, grid("0:1:2,0:1:2,0")).is_ok());
        assert!(RunConfig::resolve(Command::TraceTable, grid("0:1:2,0")).is_err());
        assert!(RunConfig::resolve(Command::Surface, grid("0:1:2,0")).is_ok());
        assert!(RunConfig::resolve(Command::RepInfo, Settings::default()).is_err());
        let bad_tol = Settings {
            tol: Some(-1.0),
            ..Settings::default()
        };
        assert!(RunConfig::resolve(Command::Verify, bad_tol).is_err());
    }

    #[test]
    fn points_in_row_order() {
        let s = Settings {
            grid: Some(parse_grid("0:1:2,5,0:2:3").unwrap()),
            ..Settings::default()
        };
        let cfg = RunConfig::resolve(Command::AnosovScan, s).unwrap();
        let pts = cfg.points();
        assert_eq!(pts.len(), 6);
        assert_eq!(pts[0], vec![0.0, 5.0, 0.0]);
        assert_eq!(pts[1], vec![0.0, 5.0, 1.0]);
        assert_eq!(pts[5], vec![1.0, 5.0, 2.0]);
    }

    #[test]
    fn hash_ignores_output_path_and_jobs() {
        let base = Settings {
            coords: Some([1.0, 6.0, 0.5]),
            ..Settings::default()
        };
        let a = RunConfig::resolve(Command::RepInfo, base.clone()).unwrap();
        let b = RunConfig::resolve(
            Command::RepInfo,
            Settings {
                out: Some("x.json".into()),
                jobs: Some(3),
                ..base.clone()
            },
        )
        .unwrap();
        let c = RunConfig::resolve(
            Command::RepInfo,
            Settings {
                seed: Some(1),
                ..base
            },
        )
        .unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }
}
