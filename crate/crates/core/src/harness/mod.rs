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

//! Monte-Carlo experiments, rate fits, configuration and CSV output.
//!
//! Every trial draws from counter-based substreams keyed by the master seed,
//! the trial index and the step index, so parallel and sequential runs give
//! bit-identical results and the same config always yields the same CSV.

pub mod config;
pub mod csv;
pub mod experiment;
pub mod fit;
pub mod risk;

use std::path::Path;

pub use config::{ExperimentConfig, ExperimentKind, HardnessSpec, QuadratureSpec, WordChoice};
pub use experiment::{
    online_risk, run_hardness_check, run_online_experiment, run_rate_experiment, HardnessReport, HardnessRow,
    RateOutcome, RiskReport, RiskRow,
};
pub use fit::{rate_fit, RateFit};
pub use risk::{mc_risk, sample_process, EstimatorSpec, RiskPoint};

use crate::error::Result;
use crate::parallel::Execution;

/// Result of [`run`], whichever experiment the config asked for.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Rate(RateOutcome),
    Online(RiskReport),
    Hardness(HardnessReport),
}

impl Outcome {
    pub fn to_csv(&self) -> String {
        match self {
            Outcome::Rate(r) => r.report.to_csv(),
            Outcome::Online(r) => r.to_csv(),
            Outcome::Hardness(r) => r.to_csv(),
        }
    }
}

pub fn run(cfg: &ExperimentConfig, exec: Execution) -> Result<Outcome> {
    Ok(match cfg.kind {
        ExperimentKind::DiscreteRate | ExperimentKind::SmoothRate | ExperimentKind::IidBaseline => {
            Outcome::Rate(run_rate_experiment(cfg, exec)?)
        }
        ExperimentKind::OnlineAverage => Outcome::Online(run_online_experiment(cfg, exec)?),
        ExperimentKind::HardnessCheck => Outcome::Hardness(run_hardness_check(cfg)?),
    })
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_output(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, contents)?;
    Ok(())
}
