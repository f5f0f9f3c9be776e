use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::blackbox::SyntheticCostModel;
use crate::types::TargetSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Type1,
    Type2,
    Phase,
    RallFuller,
    MonkeyDemo,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Type1,
        Algorithm::Type2,
        Algorithm::Phase,
        Algorithm::RallFuller,
        Algorithm::MonkeyDemo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Type1 => "type1",
            Algorithm::Type2 => "type2",
            Algorithm::Phase => "phase",
            Algorithm::RallFuller => "rallfuller",
            Algorithm::MonkeyDemo => "monkey-demo",
        }
    }

    /// Default `(r, s)`: the bias/variance split for the mean-of-runs
    /// estimators, the symmetric split for the failure-probability ones.
    pub fn default_rs(self) -> (f64, f64) {
        match self {
            Algorithm::Type1 | Algorithm::MonkeyDemo => (0.05, 100.0 / 225.0),
            Algorithm::Type2 | Algorithm::Phase | Algorithm::RallFuller => (0.25, 0.25),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| HarnessError::Config(format!("unknown algorithm `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

impl FromStr for Format {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            _ => Err(HarnessError::Config(format!("unknown format `{s}`"))),
        }
    }
}

/// Everything a run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    /// Amplitude in `[0, 1]`, or an angle in `[0, 2 pi)` for `phase`.
    pub truth: f64,
    pub target: TargetSpec,
    pub r: f64,
    pub s: f64,
    pub cap_c: f64,
    /// Bias of the synthetic samplers as a fraction of their bias bound.
    pub bias_fraction: f64,
    pub cost: SyntheticCostModel,
    pub trials: u64,
    pub master_seed: u64,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub parallel: bool,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, truth: f64, target: TargetSpec) -> Self {
        let (r, s) = algorithm.default_rs();
        Self {
            algorithm,
            truth,
            target,
            r,
            s,
            cap_c: 1.0,
            bias_fraction: 1.0,
            cost: SyntheticCostModel::default(),
            trials: 100,
            master_seed: 0,
            output_path: None,
            format: Format::Json,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: String| Err(HarnessError::Config(m));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        self.target
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        let domain = match self.algorithm {
            Algorithm::Phase => (0.0..std::f64::consts::TAU).contains(&self.truth),
            _ => (0.0..=1.0).contains(&self.truth),
        };
        if !domain {
            return bad(format!("truth {} outside the domain of {}", self.truth, self.algorithm));
        }
        if !(-1.0..=1.0).contains(&self.bias_fraction) {
            return bad(format!("bias_fraction {} outside [-1, 1]", self.bias_fraction));
        }
        if !(self.cost.depth_factor > 0.0 && self.cost.query_factor > 0.0) {
            return bad("cost factors must be positive".into());
        }
        Ok(())
    }

    /// Builds a config from `key = value` pairs; unset keys keep their
    /// defaults. Recognised keys are listed in [`KEYS`].
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, HarnessError> {
        for key in pairs.keys() {
            if !KEYS.contains(&key.as_str()) {
                return Err(HarnessError::Config(format!("unknown key `{key}`")));
            }
        }
        let get = |k: &str| pairs.get(k).map(String::as_str);
        let algorithm: Algorithm = get("algorithm").unwrap_or("type1").parse()?;
        let num =
            |k: &str, default: f64| -> Result<f64, HarnessError> { get(k).map_or(Ok(default), |v| parse_value(k, v)) };
        let int =
            |k: &str, default: u64| -> Result<u64, HarnessError> { get(k).map_or(Ok(default), |v| parse_value(k, v)) };
        let target = TargetSpec {
            epsilon: num("epsilon", 0.05)?,
            delta: num("delta", 0.1)?,
            beta: num("beta", 0.5)?,
        };
        let mut c = Self::new(algorithm, num("truth", 0.3)?, target);
        c.r = num("r", c.r)?;
        c.s = num("s", c.s)?;
        c.cap_c = num("cap_C", c.cap_c)?;
        c.bias_fraction = num("bias_fraction", c.bias_fraction)?;
        c.cost.depth_factor = num("depth_factor", c.cost.depth_factor)?;
        c.cost.query_factor = num("query_factor", c.cost.query_factor)?;
        c.trials = int("trials", c.trials)?;
        c.master_seed = int("seed", c.master_seed)?;
        c.output_path = get("out").map(PathBuf::from);
        if let Some(f) = get("format") {
            c.format = f.parse()?;
        }
        if let Some(p) = get("parallel") {
            c.parallel = parse_value("parallel", p)?;
        }
        c.validate()?;
        Ok(c)
    }

    /// Every setting a report depends on, rendered for provenance.
    pub fn provenance(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("algorithm", self.algorithm.to_string());
        put("truth", self.truth.to_string());
        put("epsilon", self.target.epsilon.to_string());
        put("delta", self.target.delta.to_string());
        put("beta", self.target.beta.to_string());
        put("r", self.r.to_string());
        put("s", self.s.to_string());
        put("cap_C", self.cap_c.to_string());
        put("bias_fraction", self.bias_fraction.to_string());
        put("depth_factor", self.cost.depth_factor.to_string());
        put("query_factor", self.cost.query_factor.to_string());
        put("trials", self.trials.to_string());
        put("seed", self.master_seed.to_string());
        put("grid_per_unit", crate::poly::GRID_PER_UNIT.to_string());
        put("certificate_tolerance", crate::poly::CERT_TOL.to_string());
        put("arc_tolerance", crate::circphase::ARC_TOL.to_string());
        m
    }
}

/// Keys accepted in config files.
pub const KEYS: [&str; 16] = [
    "algorithm",
    "truth",
    "epsilon",
    "delta",
    "beta",
    "r",
    "s",
    "cap_C",
    "bias_fraction",
    "depth_factor",
    "query_factor",
    "trials",
    "seed",
    "out",
    "format",
    "parallel",
];

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, HarnessError> {
    value
        .parse()
        .map_err(|_| HarnessError::Config(format!("cannot parse `{value}` for `{key}`")))
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are
/// ignored; a repeated key is an error.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, HarnessError> {
    let mut pairs = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("line {}: expected `key = value`", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if pairs.insert(k.to_string(), v.to_string()).is_some() {
            return Err(HarnessError::Config(format!("line {}: duplicate key `{k}`", n + 1)));
        }
    }
    Ok(pairs)
}
