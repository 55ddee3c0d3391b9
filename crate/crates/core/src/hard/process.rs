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

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use rand::Rng;

use crate::discrete::Pmf;
use crate::drift::{DriftSequence, Metric};
use crate::error::{invalid, Result};
use crate::rng::Substreams;
use crate::smooth::Density;

use super::smooth_family::{BumpDensity, BumpProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessKind {
    Discrete { k: usize },
    Smooth { beta: u32 },
}

#[derive(Clone)]
pub(crate) enum StepLaws {
    Discrete(Vec<Pmf>),
    /// `1 + amplitude_i · φ(x)` on `[0, 1]` with a shared bump profile `φ`.
    Bumps { profile: Arc<BumpProfile>, amplitudes: Vec<f64> },
    /// One density at every step, sampled by rejection under `envelope`.
    SmoothIid { density: Arc<dyn Density>, n: usize, envelope: f64 },
}

/// The distribution at one step of a process.
pub enum StepDistribution<'a> {
    Discrete(&'a Pmf),
    Smooth(Arc<dyn Density + 'a>),
}

/// One observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Draw {
    Discrete(usize),
    Continuous(f64),
}

/// Observations `X_1, …, X_n` (or a contiguous range of them).
#[derive(Debug, Clone, PartialEq)]
pub enum Samples {
    Discrete(Vec<usize>),
    Continuous(Vec<f64>),
}

impl Samples {
    pub fn len(&self) -> usize {
        match self {
            Samples::Discrete(v) => v.len(),
            Samples::Continuous(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// A sequence of independent per-step distributions `P_1 × … × P_n` with the
/// drift sequence it claims to satisfy.
#[derive(Clone)]
pub struct DriftingProcess {
    kind: ProcessKind,
    laws: StepLaws,
    declared_drift: DriftSequence,
}

impl fmt::Debug for DriftingProcess {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DriftingProcess")
            .field("kind", &self.kind)
            .field("n", &self.n())
            .finish_non_exhaustive()
    }
}

impl DriftingProcess {
    /// A process given step by step; `declared` must be a total-variation
    /// sequence of the same length.
    pub fn discrete(pmfs: Vec<Pmf>, declared: DriftSequence) -> Result<Self> {
        let Some(first) = pmfs.first() else {
            return invalid("process needs at least one step");
        };
        let k = first.k();
        if pmfs.iter().any(|p| p.k() != k) {
            return invalid("all steps must share the support size");
        }
        if declared.len() != pmfs.len() || declared.metric() != Metric::TotalVariation {
            return invalid("declared drift must be a total-variation sequence of matching length");
        }
        Ok(Self { kind: ProcessKind::Discrete { k }, laws: StepLaws::Discrete(pmfs), declared_drift: declared })
    }

    /// `n` i.i.d. draws from `density`, which must be bounded by `envelope`
    /// on its support.
    pub fn smooth_iid(density: Arc<dyn Density>, n: usize, beta: u32, envelope: f64) -> Result<Self> {
        if n == 0 {
            return invalid("process needs at least one step");
        }
        if !(envelope > 0.0 && envelope.is_finite()) {
            return invalid(format!("envelope must be positive, got {envelope}"));
        }
        Ok(Self {
            kind: ProcessKind::Smooth { beta },
            laws: StepLaws::SmoothIid { density, n, envelope },
            declared_drift: DriftSequence::zero(n, Metric::L2)?,
        })
    }

    pub(crate) fn bumps(
        profile: Arc<BumpProfile>,
        amplitudes: Vec<f64>,
        declared: DriftSequence,
    ) -> Self {
        let beta = profile.beta();
        Self { kind: ProcessKind::Smooth { beta }, laws: StepLaws::Bumps { profile, amplitudes }, declared_drift: declared }
    }

    pub fn kind(&self) -> ProcessKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        match &self.laws {
            StepLaws::Discrete(p) => p.len(),
            StepLaws::Bumps { amplitudes, .. } => amplitudes.len(),
            StepLaws::SmoothIid { n, .. } => *n,
        }
    }

    pub fn declared_drift(&self) -> &DriftSequence {
        &self.declared_drift
    }

    pub(crate) fn laws(&self) -> &StepLaws {
        &self.laws
    }

    /// Per-step pmfs of a discrete process.
    pub fn pmfs(&self) -> Option<&[Pmf]> {
        match &self.laws {
            StepLaws::Discrete(p) => Some(p),
            _ => None,
        }
    }

    /// Distribution at the 0-based step `i`.
    pub fn dist_at(&self, i: usize) -> StepDistribution<'_> {
        match &self.laws {
            StepLaws::Discrete(p) => StepDistribution::Discrete(&p[i]),
            StepLaws::Bumps { profile, amplitudes } => {
                StepDistribution::Smooth(Arc::new(BumpDensity::new(amplitudes[i], Arc::clone(profile))))
            }
            StepLaws::SmoothIid { density, n, .. } => {
                assert!(i < *n, "step {i} outside 0..{n}");
                StepDistribution::Smooth(Arc::clone(density) as Arc<dyn Density>)
            }
        }
    }

    /// `θ_n(S) = P_n`.
    pub fn final_dist(&self) -> StepDistribution<'_> {
        self.dist_at(self.n() - 1)
    }

    /// One draw from step `i` using `rng`.
    pub fn sample_step<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> Draw {
        match &self.laws {
            StepLaws::Discrete(p) => Draw::Discrete(p[i].sample_with(rng.random::<f64>())),
            StepLaws::Bumps { profile, amplitudes } => {
                let a = amplitudes[i];
                let envelope = 1.0 + a.abs() * profile.sup_norm();
                let x = rejection(rng, envelope, |x| 1.0 + a * profile.eval(x));
                Draw::Continuous(x)
            }
            StepLaws::SmoothIid { density, envelope, .. } => {
                let (lo, hi) = density.support();
                let x = rejection(rng, *envelope, |u| density.pdf(lo + (hi - lo) * u) * (hi - lo));
                Draw::Continuous(lo + (hi - lo) * x)
            }
        }
    }

    /// Draws for the 0-based steps in `steps`, each from its own substream.
    pub fn sample_range(&self, streams: &Substreams, steps: Range<usize>) -> Samples {
        match self.kind {
            ProcessKind::Discrete { .. } => Samples::Discrete(
                steps
                    .map(|i| match self.sample_step(i, &mut streams.step(i as u64)) {
                        Draw::Discrete(x) => x,
                        Draw::Continuous(_) => unreachable!("discrete process"),
                    })
                    .collect(),
            ),
            ProcessKind::Smooth { .. } => Samples::Continuous(
                steps
                    .map(|i| match self.sample_step(i, &mut streams.step(i as u64)) {
                        Draw::Continuous(x) => x,
                        Draw::Discrete(_) => unreachable!("smooth process"),
                    })
                    .collect(),
            ),
        }
    }
}

/// Rejection sampling on `[0, 1)` for a density bounded by `envelope`.
fn rejection<R: Rng + ?Sized>(rng: &mut R, envelope: f64, pdf: impl Fn(f64) -> f64) -> f64 {
    loop {
        let x: f64 = rng.random();
        let u: f64 = rng.random::<f64>() * envelope;
        if u < pdf(x) {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drift::make_bounded;
    use crate::smooth::Uniform;

    #[test]
    fn discrete_constructor_checks_shapes() {
        let seq = make_bounded(2, 0.1).unwrap();
        let p = Pmf::uniform(3);
        assert!(DriftingProcess::discrete(vec![p.clone(), p.clone()], seq.clone()).is_ok());
        assert!(DriftingProcess::discrete(vec![p.clone()], seq.clone()).is_err());
        assert!(DriftingProcess::discrete(vec![p.clone(), Pmf::uniform(2)], seq.clone()).is_err());
        assert!(DriftingProcess::discrete(vec![p.clone(), p], seq.with_metric(Metric::L2)).is_err());
    }

    #[test]
    fn smooth_iid_sampling_stays_on_support() {
        let u = Arc::new(Uniform::new(2.0, 5.0).unwrap());
        let proc_ = DriftingProcess::smooth_iid(u, 500, 1, 1.0 / 3.0).unwrap();
        let Samples::Continuous(xs) = proc_.sample_range(&Substreams::new(1, 0), 0..500) else { panic!() };
        assert!(xs.iter().all(|x| (2.0..5.0).contains(x)));
    }
}
