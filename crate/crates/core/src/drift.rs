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

//! Regular drift sequences and optimal window selection.
//!
//! A [`DriftSequence`] stores `Δ_1, …, Δ_n`, where `Δ_i` bounds the distance
//! between the distribution at step `i` and the final distribution at step `n`.
//! Values are stored 0-based: `values()[i]` holds `Δ_{i+1}`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Distance in which a drift sequence is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    TotalVariation,
    L2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriftSequence {
    values: Vec<f64>,
    metric: Metric,
}

impl DriftSequence {
    /// Wraps raw values. Only finiteness, non-negativity and non-emptiness are
    /// enforced here; structural regularity is reported by [`validate`].
    pub fn new(values: Vec<f64>, metric: Metric) -> Result<Self> {
        if values.is_empty() {
            return invalid("drift sequence must have at least one step");
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return invalid(format!("drift value at step {} is {v}", i + 1));
        }
        Ok(Self { values, metric })
    }

    /// The degenerate i.i.d. sequence: every bound is zero.
    pub fn zero(n: usize, metric: Metric) -> Result<Self> {
        if n == 0 {
            return invalid("n must be positive");
        }
        Ok(Self {
            values: vec![0.0; n],
            metric,
        })
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_all_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// `Δ_{n-r+1}`: the drift bound at the oldest step of a window of size `r`.
    ///
    /// Panics if `r` is zero or larger than `n`.
    pub fn window_bound(&self, r: usize) -> f64 {
        assert!(r >= 1 && r <= self.len(), "window {r} outside 1..={}", self.len());
        self.values[self.len() - r]
    }

    /// `Δ_{i+1} - Δ_{i+2}` for the 0-based step `i`, the per-step allowance of
    /// the stronger telescoping form of the drift constraint.
    pub fn step_slack(&self, i: usize) -> f64 {
        self.values[i] - self.values[i + 1]
    }
}

/// `(Δ·(n-1), …, Δ, 0)`: bounded drift of at most `delta` per step.
pub fn make_bounded(n: usize, delta: f64) -> Result<DriftSequence> {
    if n == 0 {
        return invalid("n must be positive");
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return invalid(format!("delta must be positive, got {delta}"));
    }
    let values = (1..=n).map(|i| delta * (n - i) as f64).collect();
    DriftSequence::new(values, Metric::TotalVariation)
}

/// `(Δ·(n-1)^α, …, Δ, 0)`: polynomial drift with exponent `alpha ∈ (0, 1]`.
pub fn make_polynomial(n: usize, delta: f64, alpha: f64) -> Result<DriftSequence> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return invalid(format!("alpha must lie in (0, 1], got {alpha}"));
    }
    if n == 0 {
        return invalid("n must be positive");
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return invalid(format!("delta must be positive, got {delta}"));
    }
    let values = (1..=n)
        .map(|i| delta * ((n - i) as f64).powf(alpha))
        .collect();
    DriftSequence::new(values, Metric::TotalVariation)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    NotFinite,
    Negative,
    Increase,
    NonZeroTerminal,
    ZeroBeforeEnd,
}

/// One failed regularity condition. `step` is 1-based, matching `Δ_step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub step: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    /// Largest consecutive ratio `Δ_{i-1}/Δ_i` over `i = 2..n-1`.
    pub c: f64,
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Checks that `seq` is a regular drift sequence and computes its ratio
/// constant. The all-zero sequence is accepted as the i.i.d. case with `c = 1`.
pub fn validate(seq: &DriftSequence) -> RegularityReport {
    let v = seq.values();
    let n = v.len();
    let mut violations = Vec::new();

    for (i, &x) in v.iter().enumerate() {
        if !x.is_finite() {
            violations.push(Violation { step: i + 1, kind: ViolationKind::NotFinite });
        } else if x < 0.0 {
            violations.push(Violation { step: i + 1, kind: ViolationKind::Negative });
        }
    }
    if !violations.is_empty() {
        return RegularityReport { c: f64::NAN, valid: false, violations };
    }

    if seq.is_all_zero() {
        return RegularityReport { c: 1.0, valid: true, violations };
    }

    for i in 1..n {
        if v[i] > v[i - 1] {
            violations.push(Violation { step: i + 1, kind: ViolationKind::Increase });
        }
    }
    if v[n - 1] != 0.0 {
        violations.push(Violation { step: n, kind: ViolationKind::NonZeroTerminal });
    }
    for (i, &x) in v[..n - 1].iter().enumerate() {
        if x == 0.0 {
            violations.push(Violation { step: i + 1, kind: ViolationKind::ZeroBeforeEnd });
        }
    }

    let c = if n <= 2 {
        1.0
    } else {
        // ratios Δ_{i-1}/Δ_i for i = 2..=n-1 (1-based)
        v[..n - 1]
            .windows(2)
            .map(|w| if w[1] > 0.0 { w[0] / w[1] } else { f64::INFINITY })
            .fold(1.0, f64::max)
    };

    let valid = violations.is_empty();
    RegularityReport { c, valid, violations }
}

fn require_valid(seq: &DriftSequence, metric: Metric) -> Result<()> {
    if seq.metric() != metric {
        return invalid(format!("expected a {metric:?} drift sequence, got {:?}", seq.metric()));
    }
    let report = validate(seq);
    if !report.valid {
        return invalid(format!("drift sequence is not regular: {:?}", report.violations));
    }
    Ok(())
}

/// Largest `r` whose oldest drift bound satisfies `holds(Δ_{n-r+1}, r)`.
///
/// The predicate need not be monotone in `r`, so every candidate is inspected
/// from `n` downwards; `r = 1` always qualifies because `Δ_n = 0`.
fn largest_window(seq: &DriftSequence, holds: impl Fn(f64, f64) -> bool) -> usize {
    let n = seq.len();
    (1..=n)
        .rev()
        .find(|&r| holds(seq.window_bound(r), r as f64))
        .unwrap_or(1)
}

/// `r* = max{ r ∈ [n] : Δ_{n-r+1} ≤ √(k/r) }` for a total-variation sequence.
pub fn window_discrete(seq: &DriftSequence, k: usize) -> Result<usize> {
    if k == 0 {
        return invalid("support size k must be positive");
    }
    require_valid(seq, Metric::TotalVariation)?;
    let k = k as f64;
    Ok(largest_window(seq, |d, r| d <= (k / r).sqrt()))
}

/// `r* = max{ r ∈ [n] : Δ_{n-r+1} ≤ r^{-β/(2β+1)} }` for an L2 sequence.
pub fn window_smooth(seq: &DriftSequence, beta: u32) -> Result<usize> {
    if beta == 0 {
        return invalid("smoothness beta must be positive");
    }
    require_valid(seq, Metric::L2)?;
    let b = f64::from(beta);
    let exponent = b / (2.0 * b + 1.0);
    Ok(largest_window(seq, |d, r| d <= (1.0 / r).powf(exponent)))
}
