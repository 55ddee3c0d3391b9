// Copyright 2026 The drift-density Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! JSON experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::quadrature::DEFAULT_POINTS_PER_UNIT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    DiscreteRate,
    SmoothRate,
    OnlineAverage,
    IidBaseline,
    HardnessCheck,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentKind::DiscreteRate => "discrete_rate",
            ExperimentKind::SmoothRate => "smooth_rate",
            ExperimentKind::OnlineAverage => "online_average",
            ExperimentKind::IidBaseline => "iid_baseline",
            ExperimentKind::HardnessCheck => "hardness_check",
        }
    }
}

/// How hypercube words are chosen for hard instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WordChoice {
    #[default]
    Random,
    Zeros,
    Ones,
}

/// Region on which squared L2 risk is integrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "default_points_per_unit")]
    pub points_per_unit: usize,
}

fn default_points_per_unit() -> usize {
    DEFAULT_POINTS_PER_UNIT
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { lo: 0.1, hi: 0.9, points_per_unit: DEFAULT_POINTS_PER_UNIT }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HardnessSpec {
    pub ks: Vec<usize>,
    /// Random word pairs per support size.
    pub pairs: usize,
    pub betas: Vec<u32>,
    /// Random words per smoothness order.
    pub smooth_instances: usize,
    pub discrete_n: usize,
    pub discrete_delta: f64,
    pub smooth_n: usize,
    pub smooth_delta: f64,
    /// Appends one process that violates its declared drift.
    pub inject_fault: bool,
}

impl Default for HardnessSpec {
    fn default() -> Self {
        Self {
            ks: vec![2, 4, 8],
            pairs: 100,
            betas: vec![1, 2],
            smooth_instances: 10,
            discrete_n: 1000,
            discrete_delta: 0.001,
            smooth_n: 4000,
            smooth_delta: 0.001,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_id")]
    pub experiment_id: String,
    pub kind: ExperimentKind,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub beta: Option<u32>,
    /// Drift rates for rate and online experiments.
    #[serde(default)]
    pub deltas: Vec<f64>,
    /// Sample sizes for the i.i.d. baseline.
    #[serde(default)]
    pub ns: Vec<usize>,
    /// Horizon for rate experiments; derived from each `Δ` when absent.
    #[serde(default)]
    pub n: Option<usize>,
    /// Multiplier on the natural window scale when `n` is derived.
    #[serde(default = "default_n_factor")]
    pub n_factor: f64,
    #[serde(default = "default_blocks")]
    pub blocks: usize,
    #[serde(default)]
    pub words: WordChoice,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub hardness: HardnessSpec,
}

fn default_id() -> String {
    "experiment".into()
}

fn default_n_factor() -> f64 {
    4.0
}

fn default_blocks() -> usize {
    20
}

fn default_trials() -> u64 {
    100
}

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

impl ExperimentConfig {
    /// A config of `kind` with every optional field at its default.
    pub fn new(kind: ExperimentKind) -> Self {
        Self {
            experiment_id: default_id(),
            kind,
            k: None,
            beta: None,
            deltas: Vec::new(),
            ns: Vec::new(),
            n: None,
            n_factor: default_n_factor(),
            blocks: default_blocks(),
            words: WordChoice::default(),
            trials: default_trials(),
            seed: 0,
            output: None,
            quadrature: QuadratureSpec::default(),
            hardness: HardnessSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return config_err("trials must be at least 1");
        }
        if !(self.n_factor > 0.0 && self.n_factor.is_finite()) {
            return config_err("n_factor must be positive");
        }
        if self.deltas.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
            return config_err("deltas must be positive");
        }
        let q = &self.quadrature;
        if !(q.lo < q.hi && q.lo.is_finite() && q.hi.is_finite()) || q.points_per_unit == 0 {
            return config_err("quadrature needs lo < hi and positive points_per_unit");
        }
        let need_k = || self.k.filter(|&k| k > 0).map(|_| ()).ok_or_else(|| Error::Config("k is required".into()));
        let need_beta =
            || self.beta.filter(|&b| b > 0).map(|_| ()).ok_or_else(|| Error::Config("beta is required".into()));
        match self.kind {
            ExperimentKind::DiscreteRate => {
                need_k()?;
                if self.deltas.is_empty() {
                    return config_err("deltas must be non-empty");
                }
            }
            ExperimentKind::SmoothRate => {
                need_beta()?;
                if self.deltas.is_empty() {
                    return config_err("deltas must be non-empty");
                }
            }
            ExperimentKind::OnlineAverage => {
                need_k()?;
                if self.deltas.is_empty() {
                    return config_err("deltas must be non-empty");
                }
                if self.blocks == 0 {
                    return config_err("blocks must be positive");
                }
            }
            ExperimentKind::IidBaseline => {
                if self.k.is_none() == self.beta.is_none() {
                    return config_err("iid_baseline needs exactly one of k or beta");
                }
                if self.ns.is_empty() || self.ns.contains(&0) {
                    return config_err("ns must be non-empty and positive");
                }
            }
            ExperimentKind::HardnessCheck => {
                let h = &self.hardness;
                if h.ks.is_empty() && h.betas.is_empty() {
                    return config_err("hardness sweep is empty");
                }
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}
