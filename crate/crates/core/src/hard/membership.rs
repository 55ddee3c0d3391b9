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

//! Checks that a process belongs to the drift class it declares, in the
//! per-step form `d(P_i, P_{i+1}) ≤ Δ_i - Δ_{i+1}`.

use crate::discrete::tv_distance;
use crate::drift::validate;
use crate::quadrature::{simpson_weights_sum, GridSpec};
use crate::smooth::{total_mass, Density};

use super::process::{DriftingProcess, StepLaws};

const DISTANCE_TOLERANCE: f64 = 1e-9;
const MASS_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum MembershipViolation {
    /// The declared drift sequence is not regular.
    IrregularDrift { step: usize },
    /// `d(P_step, P_{step+1})` exceeds the slack; `step` is 1-based.
    StepDistance { step: usize, distance: f64, allowed: f64 },
    NegativeDensity { step: usize, at: f64, value: f64 },
    Mass { step: usize, mass: f64 },
    RoughDensity { step: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub steps: usize,
    /// Largest `d(P_i, P_{i+1}) / (Δ_i - Δ_{i+1})` over steps with positive slack.
    pub max_ratio: f64,
    /// `max_i ∫ (P_i^{(β)})²` when the process exposes derivatives.
    pub smoothness_norm: Option<f64>,
    pub violations: Vec<MembershipViolation>,
}

impl MembershipReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn membership_check(process: &DriftingProcess) -> MembershipReport {
    let declared = process.declared_drift();
    let mut report = MembershipReport { steps: process.n(), max_ratio: 0.0, smoothness_norm: None, violations: Vec::new() };
    for v in validate(declared).violations {
        report.violations.push(MembershipViolation::IrregularDrift { step: v.step });
    }
    let distances = match process.laws() {
        StepLaws::Discrete(pmfs) => pmfs
            .windows(2)
            .map(|w| tv_distance(&w[0], &w[1]).expect("shared support"))
            .collect(),
        StepLaws::Bumps { profile, amplitudes } => {
            let grid = GridSpec::covering(0.0, 1.0).expect("unit grid");
            let shape: Vec<f64> = grid.nodes().map(|x| profile.eval(x)).collect();
            let h = grid.spacing();
            let order = profile.beta() as usize;
            let rough = profile.derivative_norm_sq(order);
            let mut worst: f64 = 0.0;
            for (i, &a) in amplitudes.iter().enumerate() {
                let values: Vec<f64> = shape.iter().map(|&s| 1.0 + a * s).collect();
                if let Some((at, value)) = grid.nodes().zip(&values).find(|(_, v)| **v < 0.0) {
                    report.violations.push(MembershipViolation::NegativeDensity { step: i + 1, at, value: *value });
                }
                let mass = simpson_weights_sum(&values, h);
                if (mass - 1.0).abs() > MASS_TOLERANCE {
                    report.violations.push(MembershipViolation::Mass { step: i + 1, mass });
                }
                let r = a * a * rough;
                if !r.is_finite() {
                    report.violations.push(MembershipViolation::RoughDensity { step: i + 1 });
                }
                worst = worst.max(r);
            }
            report.smoothness_norm = Some(worst);
            amplitudes
                .windows(2)
                .map(|w| {
                    let diff: Vec<f64> = shape.iter().map(|&s| ((w[0] - w[1]) * s).powi(2)).collect();
                    simpson_weights_sum(&diff, h).max(0.0).sqrt()
                })
                .collect()
        }
        StepLaws::SmoothIid { density, .. } => {
            let mass = total_mass(&**density);
            if (mass - 1.0).abs() > MASS_TOLERANCE {
                report.violations.push(MembershipViolation::Mass { step: 1, mass });
            }
            let (lo, hi) = density.support();
            if let Ok(grid) = GridSpec::covering(lo, hi) {
                if let Some(at) = grid.nodes().find(|&x| density.pdf(x) < 0.0) {
                    report.violations.push(MembershipViolation::NegativeDensity { step: 1, at, value: density.pdf(at) });
                }
            }
            vec![0.0; process.n().saturating_sub(1)]
        }
    };
    for (i, &d) in distances.iter().enumerate() {
        let allowed = declared.step_slack(i);
        if allowed > 0.0 {
            report.max_ratio = report.max_ratio.max(d / allowed);
        }
        if d > allowed + DISTANCE_TOLERANCE * (1.0 + allowed) {
            report.violations.push(MembershipViolation::StepDistance { step: i + 1, distance: d, allowed });
        }
    }
    report
}
