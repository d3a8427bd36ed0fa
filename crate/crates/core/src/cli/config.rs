//! Flat `key = value` experiment files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{ModelParams, TemporalKind};
use crate::quad::{QuadratureSpec, TailPolicy};

pub const OUT_DIR_ENV: &str = "ROUGHWAVE_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Validate,
    Moments,
    Lower,
    Holder,
    Threshold,
    Lemmas,
    Identity,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Validate,
        Command::Moments,
        Command::Lower,
        Command::Holder,
        Command::Threshold,
        Command::Lemmas,
        Command::Identity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Moments => "moments",
            Command::Lower => "lower",
            Command::Holder => "holder",
            Command::Threshold => "threshold",
            Command::Lemmas => "lemmas",
            Command::Identity => "identity",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Input(format!("unknown command '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Input(format!("unknown format '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub params: ModelParams,
    pub horizons: Vec<f64>,
    pub offsets: Vec<f64>,
    /// κ values swept by `threshold`.
    pub kappas: Vec<f64>,
    /// Chaos orders reported by `moments`.
    pub orders: Vec<usize>,
    /// `(r, s)` pairs for `identity`.
    pub pairs: Vec<(f64, f64)>,
    pub quadrature: QuadratureSpec,
    pub seed: u64,
    pub samples: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

const KEYS: &[&str] = &[
    "command",
    "kappa",
    "hurst_space",
    "hurst_time",
    "horizons",
    "offsets",
    "kappas",
    "orders",
    "pairs",
    "tolerance",
    "max_subdivisions",
    "frequency_cutoff",
    "tail_policy",
    "seed",
    "samples",
    "output",
    "format",
];

/// Parses `key = value` lines; `#` starts a comment. Later keys override earlier ones.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("line {}: expected key = value", i + 1)))?;
        insert_pair(&mut map, k.trim(), v.trim())?;
    }
    Ok(map)
}

pub fn insert_pair(map: &mut BTreeMap<String, String>, key: &str, value: &str) -> Result<()> {
    if !KEYS.contains(&key) {
        return Err(Error::Input(format!("unknown key '{key}'")));
    }
    map.insert(key.to_string(), value.to_string());
    Ok(())
}

fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Input(format!("{key}: cannot parse '{v}'")))
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| num(key, s))
        .collect()
}

fn parse_seed(v: &str) -> Result<u64> {
    match v.strip_prefix("0x") {
        Some(hex) => u64::from_str_radix(hex, 16).map_err(|_| Error::Input(format!("seed: cannot parse '{v}'"))),
        None => num("seed", v),
    }
}

fn increasing_positive(key: &str, xs: &[f64]) -> Result<()> {
    if xs.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
        return Err(Error::Input(format!("{key} must be positive")));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Input(format!("{key} must be increasing")));
    }
    Ok(())
}

fn default_horizons(c: Command) -> Vec<f64> {
    match c {
        Command::Moments => vec![0.5, 1.0, 2.0],
        Command::Lower => vec![2.0, 4.0, 8.0, 16.0],
        _ => vec![1.0],
    }
}

impl ExperimentConfig {
    pub fn from_pairs(map: &BTreeMap<String, String>) -> Result<Self> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let command: Command = get("command")
            .ok_or_else(|| Error::Input("missing key 'command'".into()))?
            .parse()?;
        let kappa = get("kappa").map(|v| num("kappa", v)).transpose()?.unwrap_or(2.0);
        let h = get("hurst_space").map(|v| num("hurst_space", v)).transpose()?.unwrap_or(0.3);
        let h0 = get("hurst_time").map(|v| num("hurst_time", v)).transpose()?.unwrap_or(0.5);
        let params = ModelParams {
            kappa,
            hurst_space: h,
            hurst_time: h0,
            temporal_kind: if h0 == 0.5 {
                TemporalKind::White
            } else {
                TemporalKind::Colored
            },
        };
        let horizons = match get("horizons") {
            Some(v) => list("horizons", v)?,
            None => default_horizons(command),
        };
        increasing_positive("horizons", &horizons)?;
        let offsets = match get("offsets") {
            Some(v) => list("offsets", v)?,
            None => crate::regularity::dyadic_offsets(4, 9).into_iter().rev().collect(),
        };
        increasing_positive("offsets", &offsets)?;
        let kappas = match get("kappas") {
            Some(v) => list("kappas", v)?,
            None => vec![1.6, 1.8, 2.0],
        };
        increasing_positive("kappas", &kappas)?;
        let orders = match get("orders") {
            Some(v) => list("orders", v)?,
            None => vec![1, 2, 3],
        };
        let pairs = match get("pairs") {
            Some(v) => {
                let xs: Vec<f64> = list("pairs", v)?;
                if !xs.len().is_multiple_of(2) {
                    return Err(Error::Input("pairs needs an even number of values".into()));
                }
                xs.chunks(2).map(|c| (c[0], c[1])).collect()
            }
            None => {
                let g = [0.25, 0.5, 1.0, 2.0];
                g.iter().flat_map(|&r| g.iter().map(move |&s| (r, s))).collect()
            }
        };
        let mut quadrature = QuadratureSpec::default();
        if let Some(v) = get("tolerance") {
            quadrature.tolerance = num("tolerance", v)?;
        }
        if let Some(v) = get("max_subdivisions") {
            quadrature.max_subdivisions = num("max_subdivisions", v)?;
        }
        if let Some(v) = get("frequency_cutoff") {
            quadrature.frequency_cutoff = num("frequency_cutoff", v)?;
        }
        if let Some(v) = get("tail_policy") {
            quadrature.tail_policy = v.parse()?;
        }
        quadrature.validate()?;
        let seed = get("seed").map(parse_seed).transpose()?.unwrap_or(0x5eed);
        let samples = get("samples").map(|v| num("samples", v)).transpose()?.unwrap_or(1 << 20);
        if samples == 0 {
            return Err(Error::Input("samples must be positive".into()));
        }
        let format = get("format").map(str::parse).transpose()?.unwrap_or(Format::Csv);
        Ok(ExperimentConfig {
            command,
            params,
            horizons,
            offsets,
            kappas,
            orders,
            pairs,
            quadrature,
            seed,
            samples,
            output_path: get("output").map(PathBuf::from),
            format,
        })
    }

    /// Report path: the explicit output, else `$ROUGHWAVE_OUT_DIR/<command>.<ext>`.
    pub fn resolved_output(&self) -> PathBuf {
        if let Some(p) = &self.output_path {
            return p.clone();
        }
        let dir = std::env::var_os(OUT_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from("."));
        dir.join(format!("{}.{}", self.command, self.format.extension()))
    }

    /// Canonical echo of every setting, used in report metadata.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let join = |xs: &[f64]| xs.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(",");
        let mut m = BTreeMap::new();
        m.insert("command".into(), self.command.to_string());
        m.insert("kappa".into(), format!("{}", self.params.kappa));
        m.insert("hurst_space".into(), format!("{}", self.params.hurst_space));
        m.insert("hurst_time".into(), format!("{}", self.params.hurst_time));
        m.insert("horizons".into(), join(&self.horizons));
        m.insert("offsets".into(), join(&self.offsets));
        m.insert("kappas".into(), join(&self.kappas));
        m.insert(
            "orders".into(),
            self.orders.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","),
        );
        m.insert(
            "pairs".into(),
            self.pairs.iter().map(|(r, s)| format!("{r},{s}")).collect::<Vec<_>>().join(","),
        );
        m.insert("tolerance".into(), format!("{}", self.quadrature.tolerance));
        m.insert("max_subdivisions".into(), self.quadrature.max_subdivisions.to_string());
        m.insert("frequency_cutoff".into(), format!("{}", self.quadrature.frequency_cutoff));
        m.insert(
            "tail_policy".into(),
            match self.quadrature.tail_policy {
                TailPolicy::Envelope => "envelope",
                TailPolicy::PowerExtrapolate => "power_extrapolate",
            }
            .into(),
        );
        m.insert("seed".into(), self.seed.to_string());
        m.insert("samples".into(), self.samples.to_string());
        m.insert("format".into(), self.format.extension().into());
        m
    }
}
