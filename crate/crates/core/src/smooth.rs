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

//! Univariate densities, the windowed Parzen–Rosenblatt estimator, and the L2
//! error diagnostics.

use std::fmt;
use std::sync::Arc;

use crate::drift::DriftSequence;
use crate::error::{invalid, Result};
use crate::kernel::Kernel;
use crate::quadrature::{integrate_piecewise, GridSpec, DEFAULT_POINTS_PER_UNIT};

/// An evaluable univariate density with a declared support interval.
///
/// Estimates built from higher-order kernels may take negative values; they
/// still integrate to one.
pub trait Density: Send + Sync {
    fn pdf(&self, x: f64) -> f64;

    /// `[a, b]` outside of which `pdf` is zero.
    fn support(&self) -> (f64, f64);

    /// Declared smoothness order, if known.
    fn smoothness(&self) -> Option<u32> {
        None
    }

    /// Points where `pdf` may be non-smooth, for piecewise quadrature.
    fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.support();
        vec![a, b]
    }
}

impl<D: Density + ?Sized> Density for Arc<D> {
    fn pdf(&self, x: f64) -> f64 {
        (**self).pdf(x)
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn smoothness(&self) -> Option<u32> {
        (**self).smoothness()
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

impl<D: Density + ?Sized> Density for &D {
    fn pdf(&self, x: f64) -> f64 {
        (**self).pdf(x)
    }
    fn support(&self) -> (f64, f64) {
        (**self).support()
    }
    fn smoothness(&self) -> Option<u32> {
        (**self).smoothness()
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

/// Uniform density on `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uniform {
    a: f64,
    b: f64,
}

impl Uniform {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return invalid(format!("[{a}, {b}] is not an interval"));
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: 0.0, b: 1.0 }
    }
}

impl Density for Uniform {
    fn pdf(&self, x: f64) -> f64 {
        if (self.a..=self.b).contains(&x) {
            1.0 / (self.b - self.a)
        } else {
            0.0
        }
    }

    fn support(&self) -> (f64, f64) {
        (self.a, self.b)
    }
}

/// A density given by a closure.
#[derive(Clone)]
pub struct DensityFn {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    support: (f64, f64),
    smoothness: Option<u32>,
}

impl DensityFn {
    pub fn new(
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support: (f64, f64),
        smoothness: Option<u32>,
    ) -> Result<Self> {
        if !(support.0 < support.1) {
            return invalid(format!("support {support:?} is not an interval"));
        }
        Ok(Self { eval: Arc::new(eval), support, smoothness })
    }
}

impl fmt::Debug for DensityFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityFn")
            .field("support", &self.support)
            .field("smoothness", &self.smoothness)
            .finish_non_exhaustive()
    }
}

impl Density for DensityFn {
    fn pdf(&self, x: f64) -> f64 {
        if (self.support.0..=self.support.1).contains(&x) {
            (self.eval)(x)
        } else {
            0.0
        }
    }

    fn support(&self) -> (f64, f64) {
        self.support
    }

    fn smoothness(&self) -> Option<u32> {
        self.smoothness
    }
}

/// `1 + amplitude·cos(2πx)` on `[0, 1]`, a smooth non-uniform test target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaisedCosine {
    amplitude: f64,
}

impl RaisedCosine {
    pub fn new(amplitude: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&amplitude) {
            return invalid(format!("amplitude {amplitude} outside [0, 1]"));
        }
        Ok(Self { amplitude })
    }

    pub fn sup(&self) -> f64 {
        1.0 + self.amplitude
    }
}

impl Density for RaisedCosine {
    fn pdf(&self, x: f64) -> f64 {
        if (0.0..=1.0).contains(&x) {
            1.0 + self.amplitude * (std::f64::consts::TAU * x).cos()
        } else {
            0.0
        }
    }

    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn smoothness(&self) -> Option<u32> {
        Some(u32::MAX)
    }
}

/// `h = r^{-1/(2β+1)}`, the bandwidth that balances `1/(rh)` against `h^{2β}`.
pub fn bandwidth(r: usize, beta: u32) -> f64 {
    (r as f64).powf(-1.0 / (2.0 * f64::from(beta) + 1.0))
}

/// `P̂(x) = (1/(rh)) Σ_{i in window} K((X_i − x)/h)`.
#[derive(Debug, Clone)]
pub struct Kde {
    /// window samples in ascending order
    sorted: Vec<f64>,
    h: f64,
    kernel: Kernel,
    clamp: Option<f64>,
}

impl Kde {
    pub fn bandwidth(&self) -> f64 {
        self.h
    }

    pub fn window(&self) -> usize {
        self.sorted.len()
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    fn raw(&self, x: f64) -> f64 {
        let reach = self.h * self.kernel.support_radius();
        let lo = self.sorted.partition_point(|&s| s < x - reach);
        let hi = self.sorted.partition_point(|&s| s <= x + reach);
        if lo >= hi {
            return 0.0;
        }
        let scale = 1.0 / (self.sorted.len() as f64 * self.h);
        if self.kernel.is_flat() {
            // boundary points lie exactly at distance `reach`, where the box
            // kernel still takes its interior value
            return scale * self.kernel.evaluate(0.0) * (hi - lo) as f64;
        }
        scale * self.sorted[lo..hi].iter().map(|&s| self.kernel.evaluate((s - x) / self.h)).sum::<f64>()
    }

    /// The positive part of the estimate, rescaled to unit mass.
    pub fn clamped(&self) -> Kde {
        let mut positive = self.clone();
        positive.clamp = None;
        let (a, b) = positive.support();
        let mass = integrate_piecewise(
            |x| positive.raw(x).max(0.0),
            a,
            b,
            &positive.breakpoints(),
            DEFAULT_POINTS_PER_UNIT,
            9,
        );
        positive.clamp = Some(1.0 / mass);
        positive
    }
}

impl Density for Kde {
    fn pdf(&self, x: f64) -> f64 {
        match self.clamp {
            None => self.raw(x),
            Some(scale) => scale * self.raw(x).max(0.0),
        }
    }

    fn support(&self) -> (f64, f64) {
        let reach = self.h * self.kernel.support_radius();
        (self.sorted[0] - reach, self.sorted[self.sorted.len() - 1] + reach)
    }

    fn smoothness(&self) -> Option<u32> {
        None
    }

    fn breakpoints(&self) -> Vec<f64> {
        let reach = self.h * self.kernel.support_radius();
        let mut b: Vec<f64> = self.sorted.iter().flat_map(|&s| [s - reach, s + reach]).collect();
        if !self.kernel.is_flat() {
            b.extend(self.sorted.iter().copied());
        }
        b
    }
}

/// Kernel density estimate over the last `r` samples with bandwidth `h`.
pub fn kde(samples: &[f64], r: usize, h: f64, kernel: &Kernel) -> Result<Kde> {
    if r == 0 || r > samples.len() {
        return invalid(format!("window {r} outside 1..={}", samples.len()));
    }
    if !(h > 0.0 && h.is_finite()) {
        return invalid(format!("bandwidth must be positive, got {h}"));
    }
    let mut sorted = samples[samples.len() - r..].to_vec();
    if let Some(bad) = sorted.iter().find(|x| !x.is_finite()) {
        return invalid(format!("sample {bad} is not finite"));
    }
    sorted.sort_by(f64::total_cmp);
    Ok(Kde { sorted, h, kernel: kernel.clone(), clamp: None })
}

/// `∫ f` over its support, split at its breakpoints.
pub fn total_mass(f: &dyn Density) -> f64 {
    let (a, b) = f.support();
    integrate_piecewise(|x| f.pdf(x), a, b, &f.breakpoints(), DEFAULT_POINTS_PER_UNIT, 9)
}

/// `√∫ (f − g)²` by Simpson quadrature on `quad`, which must cover both
/// supports.
pub fn l2_distance(f: &dyn Density, g: &dyn Density, quad: &GridSpec) -> Result<f64> {
    let (fa, fb) = f.support();
    let (ga, gb) = g.support();
    if !quad.covers(fa.min(ga), fb.max(gb)) {
        return invalid(format!(
            "grid [{}, {}] does not cover supports [{fa}, {fb}] and [{ga}, {gb}]",
            quad.lo(),
            quad.hi()
        ));
    }
    Ok(l2_squared_on(f, g, quad).max(0.0).sqrt())
}

/// `∫ (f − g)²` over the grid's span only, without the coverage check. Used
/// for interior-restricted risk.
pub fn l2_squared_on(f: &dyn Density, g: &dyn Density, quad: &GridSpec) -> f64 {
    quad.integrate(|x| {
        let d = f.pdf(x) - g.pdf(x);
        d * d
    })
}

/// Diagnostic risk bound `2·(Δ²_{n-r+1} + m_K/(r·h) + C_b·h^{2β})`.
///
/// The bias constant `C_b` has no closed form; the default is one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothRiskBound {
    pub drift: f64,
    pub variance: f64,
    pub bias: f64,
}

impl SmoothRiskBound {
    pub fn total(&self) -> f64 {
        2.0 * (self.drift + self.variance + self.bias)
    }
}

pub fn smooth_risk_bound(
    seq: &DriftSequence,
    r: usize,
    h: f64,
    beta: u32,
    m_k: f64,
    bias_constant: f64,
) -> Result<SmoothRiskBound> {
    if r == 0 || r > seq.len() {
        return invalid(format!("window {r} outside 1..={}", seq.len()));
    }
    if !(h > 0.0) {
        return invalid(format!("bandwidth must be positive, got {h}"));
    }
    let d = seq.window_bound(r);
    Ok(SmoothRiskBound {
        drift: d * d,
        variance: m_k / (r as f64 * h),
        bias: bias_constant * h.powi(2 * beta as i32),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drift::{make_bounded, window_smooth, Metric};
    use crate::kernel::legendre_kernel;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn bandwidth_examples() {
        assert_eq!(bandwidth(1, 3), 1.0);
        assert_abs_diff_eq!(bandwidth(1024, 1), 0.099_212_565_748_012_6, epsilon = 1e-12);
        assert_abs_diff_eq!(bandwidth(1024, 2), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn bandwidth_balances_bias_and_variance() {
        for beta in 1..=8 {
            for r in [1usize, 7, 100, 12_345, 1 << 20] {
                let h = bandwidth(r, beta);
                let bias = h.powi(2 * beta as i32);
                let var = 1.0 / (r as f64 * h);
                assert!((bias - var).abs() <= 1e-9 * var, "beta={beta} r={r}");
            }
        }
    }

    #[test]
    fn single_sample_box() {
        let k1 = legendre_kernel(1).unwrap();
        let f = kde(&[0.0], 1, 1.0, &k1).unwrap();
        assert_eq!(f.pdf(0.5), 0.5);
        assert_eq!(f.pdf(-1.0), 0.5);
        assert_eq!(f.pdf(1.5), 0.0);
        assert_eq!(f.support(), (-1.0, 1.0));
    }

    #[test]
    fn two_sample_overlap() {
        let k1 = legendre_kernel(1).unwrap();
        let f = kde(&[-1.0, 1.0], 2, 1.0, &k1).unwrap();
        assert_eq!(f.pdf(0.0), 0.5);
        assert_eq!(f.pdf(-1.5), 0.25);
        assert_eq!(f.pdf(1.2), 0.25);
        assert_eq!(f.pdf(2.5), 0.0);
        assert_abs_diff_eq!(total_mass(&f), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn kde_window_and_errors() {
        let k2 = legendre_kernel(2).unwrap();
        let f = kde(&[5.0, 0.0, 0.1], 2, 0.5, &k2).unwrap();
        assert_eq!(f.window(), 2);
        assert_eq!(f.pdf(5.0), 0.0);
        assert!(kde(&[0.0], 2, 0.5, &k2).is_err());
        assert!(kde(&[0.0], 1, 0.0, &k2).is_err());
    }

    #[test]
    fn l2_examples() {
        let u = Uniform::unit();
        let g = GridSpec::covering(0.0, 1.0).unwrap();
        assert_eq!(l2_distance(&u, &u, &g).unwrap(), 0.0);

        let tri = DensityFn::new(|x| 2.0 * x, (0.0, 1.0), None).unwrap();
        assert_abs_diff_eq!(l2_distance(&tri, &u, &g).unwrap(), (1.0f64 / 3.0).sqrt(), epsilon = 1e-10);

        let narrow = GridSpec::covering(0.1, 1.0).unwrap();
        assert!(l2_distance(&tri, &u, &narrow).is_err());
    }

    #[test]
    fn l2_bump_scaling() {
        use crate::hard::bump::{bump_k, bump_k_norm};
        let u = Uniform::unit();
        let g = DensityFn::new(|x| 1.0 + 0.2 * bump_k(4.0 * (x - 0.5)), (0.0, 1.0), None).unwrap();
        let grid = GridSpec::covering(0.0, 1.0).unwrap();
        // ∫K²(mx)dx = ‖K‖²/m with m = 4
        assert_abs_diff_eq!(l2_distance(&u, &g, &grid).unwrap(), 0.2 * bump_k_norm() / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(0.2 * bump_k_norm() / 2.0, 0.025_795_941_623_150_17, epsilon = 1e-12);
    }

    #[test]
    fn risk_bound_examples() {
        let zero = DriftSequence::zero(1000, Metric::L2).unwrap();
        let b = smooth_risk_bound(&zero, 1000, 0.1, 1, 0.5, 1.0).unwrap();
        assert_abs_diff_eq!(b.total(), 0.03, epsilon = 1e-15);
        let h = bandwidth(1000, 1);
        assert_abs_diff_eq!(h, 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(smooth_risk_bound(&zero, 1000, h, 1, 0.5, 1.0).unwrap().total(), 0.03, epsilon = 1e-12);
        assert!(smooth_risk_bound(&zero, 1001, h, 1, 0.5, 1.0).is_err());
    }

    #[test]
    fn risk_bound_minimised_near_optimal_window() {
        let seq = make_bounded(10_000, 0.001).unwrap().with_metric(Metric::L2);
        let r_star = window_smooth(&seq, 1).unwrap();
        let m_k = legendre_kernel(1).unwrap().m_k();
        let at = |r: usize| smooth_risk_bound(&seq, r, bandwidth(r, 1), 1, m_k, 1.0).unwrap().total();
        let best = (1..=seq.len()).map(at).fold(f64::INFINITY, f64::min);
        let value = at(r_star);
        assert!(value.is_finite() && value > 0.0);
        assert!(value <= 2.0 * best, "bound at r*={r_star} is {value}, scan minimum {best}");
    }

    #[test]
    fn clamp_removes_negative_part() {
        let k4 = legendre_kernel(4).unwrap();
        let f = kde(&[0.0, 0.05, 0.9, 1.0], 4, 0.4, &k4).unwrap();
        let (a, b) = f.support();
        let grid = GridSpec::covering(a, b).unwrap();
        assert!(grid.nodes().any(|x| f.pdf(x) < 0.0));
        let c = f.clamped();
        assert!(grid.nodes().all(|x| c.pdf(x) >= 0.0));
        assert_abs_diff_eq!(total_mass(&c), 1.0, epsilon = 1e-9);
    }

    proptest! {
        #[test]
        fn kde_has_unit_mass(samples in prop::collection::vec(-3.0f64..3.0, 1..40), h in 0.05f64..2.0, beta in 1u32..=8) {
            let k = legendre_kernel(beta).unwrap();
            let f = kde(&samples, samples.len(), h, &k).unwrap();
            prop_assert!((total_mass(&f) - 1.0).abs() <= 1e-6);
        }

        #[test]
        fn kde_is_linear_in_windows(
            a in prop::collection::vec(-2.0f64..2.0, 1..30),
            b in prop::collection::vec(-2.0f64..2.0, 1..30),
            xs in prop::collection::vec(-3.0f64..3.0, 10),
            beta in 1u32..=4,
        ) {
            let k = legendre_kernel(beta).unwrap();
            let h = 0.3;
            let joined: Vec<f64> = a.iter().chain(&b).copied().collect();
            let fa = kde(&a, a.len(), h, &k).unwrap();
            let fb = kde(&b, b.len(), h, &k).unwrap();
            let fj = kde(&joined, joined.len(), h, &k).unwrap();
            let (na, nb) = (a.len() as f64, b.len() as f64);
            for x in xs {
                let mix = (na * fa.pdf(x) + nb * fb.pdf(x)) / (na + nb);
                prop_assert!((fj.pdf(x) - mix).abs() <= 1e-9);
            }
        }

        #[test]
        fn l2_is_a_metric(c in prop::collection::vec(0.0f64..1.0, 3)) {
            let mk = |a: f64| DensityFn::new(move |x| 1.0 + a * (std::f64::consts::TAU * x).cos(), (0.0, 1.0), None).unwrap();
            let (f, g, q) = (mk(c[0]), mk(c[1]), mk(c[2]));
            let grid = GridSpec::covering(0.0, 1.0).unwrap();
            let fg = l2_distance(&f, &g, &grid).unwrap();
            prop_assert!((fg - l2_distance(&g, &f, &grid).unwrap()).abs() <= 1e-12);
            prop_assert!(fg <= l2_distance(&f, &q, &grid).unwrap() + l2_distance(&q, &g, &grid).unwrap() + 1e-9);
        }
    }
}
