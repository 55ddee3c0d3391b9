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

//! Sampling processes and Monte-Carlo estimates of the estimation risk.

use crate::discrete::{tv_distance, Pmf};
use crate::error::{invalid, Result};
use crate::hard::{DriftingProcess, Samples, StepDistribution};
use crate::kernel::Kernel;
use crate::parallel::{map_trials, Execution};
use crate::quadrature::GridSpec;
use crate::rng::Substreams;
use crate::smooth::{kde, l2_squared_on};

/// `X_1, …, X_n` for trial 0 of `seed`.
pub fn sample_process(process: &DriftingProcess, seed: u64) -> Samples {
    process.sample_range(&Substreams::new(seed, 0), 0..process.n())
}

/// Which windowed estimator to score.
#[derive(Debug, Clone)]
pub enum EstimatorSpec {
    /// Empirical pmf of the last `window` observations, scored in TV.
    Discrete { window: usize },
    /// KDE of the last `window` observations, scored in squared L2 over `eval`.
    Smooth { window: usize, bandwidth: f64, kernel: Kernel, eval: GridSpec },
}

impl EstimatorSpec {
    pub fn window(&self) -> usize {
        match self {
            EstimatorSpec::Discrete { window } | EstimatorSpec::Smooth { window, .. } => *window,
        }
    }
}

/// Mean and standard error of a per-trial loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskPoint {
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
}

impl RiskPoint {
    /// Summarises `losses` in order; `stderr` is the sample deviation over
    /// `√trials`.
    pub fn from_losses(losses: &[f64]) -> Self {
        let t = losses.len() as f64;
        let mean = losses.iter().sum::<f64>() / t;
        let stderr = if losses.len() > 1 {
            let var = losses.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (t - 1.0);
            (var / t).sqrt()
        } else {
            0.0
        };
        Self { mean, stderr, trials: losses.len() as u64 }
    }
}

/// Estimates `E d(θ_n(S), P̂)` over `trials` independent runs; trial `t` draws
/// from the substreams of `(seed, t)` and only the window steps are sampled.
pub fn mc_risk(
    process: &DriftingProcess,
    spec: &EstimatorSpec,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<RiskPoint> {
    let n = process.n();
    let r = spec.window();
    if r == 0 || r > n {
        return invalid(format!("window {r} outside 1..={n}"));
    }
    if trials == 0 {
        return invalid("trials must be positive");
    }
    let steps = n - r..n;
    let losses: Vec<f64> = match (spec, process.final_dist()) {
        (EstimatorSpec::Discrete { .. }, StepDistribution::Discrete(target)) => {
            let k = target.k();
            map_trials(trials, exec, |t| {
                let Samples::Discrete(xs) = process.sample_range(&Substreams::new(seed, t), steps.clone()) else {
                    unreachable!("discrete process")
                };
                let mut counts = vec![0u64; k];
                for x in xs {
                    counts[x] += 1;
                }
                let est = Pmf::from_counts(&counts).expect("non-empty window");
                tv_distance(target, &est).expect("shared support")
            })
        }
        (EstimatorSpec::Smooth { bandwidth, kernel, eval, .. }, StepDistribution::Smooth(target)) => {
            if !(*bandwidth > 0.0 && bandwidth.is_finite()) {
                return invalid(format!("bandwidth must be positive, got {bandwidth}"));
            }
            map_trials(trials, exec, |t| {
                let Samples::Continuous(xs) = process.sample_range(&Substreams::new(seed, t), steps.clone()) else {
                    unreachable!("smooth process")
                };
                let est = kde(&xs, r, *bandwidth, kernel).expect("valid window");
                l2_squared_on(&*target, &est, eval)
            })
        }
        _ => return invalid("estimator does not match the process kind"),
    };
    Ok(RiskPoint::from_losses(&losses))
}
