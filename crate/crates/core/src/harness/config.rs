use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::{FilterMode, FilterParams};
use crate::graph::er_probability;
use crate::voting::Strategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Rc,
    Bsr,
    Fbsr,
}

impl Algorithm {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rc" | "rank_centrality" => Ok(Algorithm::Rc),
            "bsr" => Ok(Algorithm::Bsr),
            "fbsr" => Ok(Algorithm::Fbsr),
            other => Err(Error::param(format!("unknown algorithm '{other}'"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Rc => "RC",
            Algorithm::Bsr => "BSR",
            Algorithm::Fbsr => "FBSR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightGenerator {
    /// i.i.d. Uniform(weight_lo, weight_hi), normalized.
    Uniform,
    /// Half low, half high with ratio `skew`.
    Skewed,
}

/// What a dataset run compares each estimate against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetReference {
    /// Each algorithm's own output on the uncorrupted rankings.
    Own,
    /// Rank-Centrality on the uncorrupted rankings, for every algorithm.
    Rc,
}

/// Parameters of one experiment. Every key of the config file maps to a field here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Object count.
    pub n: usize,
    /// Object counts for the scaling sweep (k = n there).
    pub n_grid: Vec<usize>,
    /// Voters per query unit. Dataset runs read 0 as "every voter".
    pub k: usize,
    /// Population size K.
    pub voters: usize,
    /// Byzantine fractions F/K to sweep.
    pub byzantine_fraction: Vec<f64>,
    /// Edge probability; when absent, `p_coefficient · ln n / n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub p_coefficient: f64,
    pub weights: WeightGenerator,
    pub weight_lo: f64,
    pub weight_hi: f64,
    pub skew: f64,
    pub strategy: Vec<String>,
    /// Transpositions applied by opposite_random_flips.
    pub num_swaps: usize,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub seed: u64,
    pub filter_mode: FilterMode,
    /// Empirical mode: `max_out = k/20`. Off means the theoretical formula.
    pub max_out_override: bool,
    /// FBSR constant C; defaults to `p_coefficient`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub q: f64,
    /// FBSR bucket size; defaults to `ceil(log2 n)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_size: Option<usize>,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iters: Option<usize>,
    pub max_graph_attempts: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Ranking file for the dataset experiment.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    /// Leading tokens dropped from every dataset line (2 for Sushi `.order` files).
    pub skip_tokens: usize,
    /// Reference scores for dataset runs.
    pub reference: DatasetReference,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::synthetic()
    }
}

impl ExperimentConfig {
    /// n = 200, k = 100, p = 20 ln n / n, Uniform(1, 100) weights, 10 trials.
    pub fn synthetic() -> Self {
        Self {
            n: 200,
            n_grid: vec![50, 90, 130, 170, 210, 250],
            k: 100,
            voters: 1000,
            byzantine_fraction: vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3],
            p: None,
            p_coefficient: 20.0,
            weights: WeightGenerator::Uniform,
            weight_lo: 1.0,
            weight_hi: 100.0,
            skew: 10.0,
            strategy: ["fov", "ov", "ovp", "rs"].map(String::from).to_vec(),
            num_swaps: 5,
            algorithms: vec![Algorithm::Rc, Algorithm::Fbsr],
            trials: 10,
            seed: 2023,
            filter_mode: FilterMode::Empirical,
            max_out_override: true,
            c: None,
            q: 1.0,
            max_size: None,
            tol: 1e-10,
            max_iters: None,
            max_graph_attempts: 50,
            output: None,
            dataset: None,
            skip_tokens: 0,
            reference: DatasetReference::Own,
        }
    }

    /// Fixed Order Vote over the n grid with k = n, BF ∈ {0.1, 0.2}.
    pub fn scaling() -> Self {
        Self { byzantine_fraction: vec![0.1, 0.2], strategy: vec!["fov".into()], ..Self::synthetic() }
    }

    /// Complete rankings: RC against BSR with radius `1 + sqrt(d)` and the theoretical `max_out`.
    pub fn dataset() -> Self {
        Self {
            k: 0,
            byzantine_fraction: vec![0.0, 0.05, 0.1, 0.15, 0.2],
            strategy: ["fov", "ov", "orf"].map(String::from).to_vec(),
            algorithms: vec![Algorithm::Rc, Algorithm::Bsr],
            max_out_override: false,
            ..Self::synthetic()
        }
    }

    /// Skewed weights (b = 10) under the opposite strategy, RC only.
    pub fn failure_demo() -> Self {
        Self {
            weights: WeightGenerator::Skewed,
            strategy: vec!["ov".into()],
            algorithms: vec![Algorithm::Rc],
            ..Self::synthetic()
        }
    }

    /// Loads a TOML file over `base`: keys present in the file replace the base values.
    pub fn load(path: &Path, base: Self) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text, base)
    }

    pub fn from_toml_str(text: &str, base: Self) -> Result<Self> {
        let overrides: toml::Table = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let mut merged = toml::Table::try_from(&base).map_err(|e| Error::Config(e.to_string()))?;
        merged.extend(overrides);
        let cfg: Self = merged.try_into().map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if self.n < 2 || self.n_grid.iter().any(|&n| n < 2) {
            return Err(Error::param("object counts must be at least 2"));
        }
        if let Some(bf) = self.byzantine_fraction.iter().find(|bf| !(0.0..=1.0).contains(*bf)) {
            return Err(Error::param(format!("byzantine fraction {bf} outside [0, 1]")));
        }
        if self.byzantine_fraction.is_empty() || self.strategy.is_empty() || self.algorithms.is_empty() {
            return Err(Error::param("byzantine_fraction, strategy and algorithms must be non-empty"));
        }
        if let Some(p) = self.p {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::param(format!("p = {p} outside [0, 1]")));
            }
        }
        self.strategies()?;
        self.filter_params().validate()?;
        if !(self.tol > 0.0) {
            return Err(Error::param("tol must be positive"));
        }
        Ok(())
    }

    pub fn strategies(&self) -> Result<Vec<Strategy>> {
        self.strategy.iter().map(|s| Strategy::parse(s, self.num_swaps)).collect()
    }

    pub fn edge_probability(&self, n: usize) -> f64 {
        self.p.unwrap_or_else(|| er_probability(n, self.p_coefficient))
    }

    pub fn fbsr_c(&self) -> f64 {
        self.c.unwrap_or(self.p_coefficient)
    }

    pub fn filter_params(&self) -> FilterParams {
        let mut params = match self.filter_mode {
            FilterMode::Theoretical => FilterParams::theoretical(self.q),
            FilterMode::Empirical => FilterParams { q: self.q, ..FilterParams::empirical() },
        };
        params.empirical_max_out = self.filter_mode == FilterMode::Empirical && self.max_out_override;
        params
    }

    /// `F = round(bf · K)`.
    pub fn byzantine_count(&self, bf: f64, voters: usize) -> usize {
        ((bf * voters as f64).round() as usize).min(voters)
    }
}
