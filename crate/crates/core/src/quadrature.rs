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

//! Composite Simpson quadrature on uniform grids.

use crate::error::{invalid, Result};

/// Grid density used when a caller does not specify one.
pub const DEFAULT_POINTS_PER_UNIT: usize = 4096;

/// A uniform grid of `points` nodes spanning `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    lo: f64,
    hi: f64,
    points: usize,
}

impl GridSpec {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return invalid(format!("grid bounds [{lo}, {hi}] are not an interval"));
        }
        if points < 2 {
            return invalid("grid needs at least two points");
        }
        Ok(Self { lo, hi, points })
    }

    /// `[lo, hi]` at `points_per_unit` intervals per unit length, rounded up to
    /// an odd node count so plain Simpson applies.
    pub fn with_density(lo: f64, hi: f64, points_per_unit: usize) -> Result<Self> {
        let intervals = ((hi - lo) * points_per_unit as f64).ceil().max(2.0) as usize;
        let intervals = intervals + intervals % 2;
        Self::new(lo, hi, intervals + 1)
    }

    /// [`GridSpec::with_density`] at [`DEFAULT_POINTS_PER_UNIT`].
    pub fn covering(lo: f64, hi: f64) -> Result<Self> {
        Self::with_density(lo, hi, DEFAULT_POINTS_PER_UNIT)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.hi
        } else {
            self.lo + i as f64 * self.spacing()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|i| self.node(i))
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        self.lo <= lo && hi <= self.hi
    }

    /// Composite Simpson rule over the grid. An even node count finishes with
    /// Simpson's 3/8 rule on the last three intervals; two nodes fall back to
    /// the trapezoid rule.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let values: Vec<f64> = self.nodes().map(&f).collect();
        simpson_weights_sum(&values, self.spacing())
    }
}

/// Simpson integral of equally spaced samples `values` with step `h`.
pub fn simpson_weights_sum(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let (simpson_end, tail) = if n % 2 == 1 { (n, 0.0) } else {
                let m = n - 4;
                let t = 3.0 * h / 8.0 * (values[m] + 3.0 * values[m + 1] + 3.0 * values[m + 2] + values[m + 3]);
                (m + 1, t)
            };
            if simpson_end < 3 {
                return tail;
            }
            let v = &values[..simpson_end];
            let last = v.len() - 1;
            let mut s = v[0] + v[last];
            for (i, x) in v.iter().enumerate().take(last).skip(1) {
                s += if i % 2 == 1 { 4.0 * x } else { 2.0 * x };
            }
            h / 3.0 * s + tail
        }
    }
}

/// Integrates `f` over `[lo, hi]`, splitting at `breaks` so that each piece is
/// smooth, with at least `min_points` Simpson nodes per piece.
pub fn integrate_piecewise(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    breaks: &[f64],
    points_per_unit: usize,
    min_points: usize,
) -> f64 {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|&b| b > lo && b < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let intervals = (((w[1] - w[0]) * points_per_unit as f64).ceil() as usize).max(min_points.max(3) - 1);
            let intervals = intervals + intervals % 2;
            let h = (w[1] - w[0]) / intervals as f64;
            // endpoints are taken as one-sided limits from inside the piece
            let nudge = (w[1] - w[0]) * 1e-9;
            let values: Vec<f64> = (0..=intervals)
                .map(|i| match i {
                    0 => f(w[0] + nudge),
                    _ if i == intervals => f(w[1] - nudge),
                    _ => f(w[0] + i as f64 * h),
                })
                .collect();
            simpson_weights_sum(&values, h)
        })
        .sum()
}
