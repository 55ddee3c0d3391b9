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

//! Distributions on a finite support `{0, …, k-1}` and the windowed empirical
//! estimator.
//!
//! Outcomes are 0-based throughout the library; text I/O in the CLI uses
//! 1-based labels.

use crate::drift::DriftSequence;
use crate::error::{invalid, Error, Result};

/// Largest support size accepted by [`agnostic_gap_bruteforce`].
pub const MAX_ENUMERATION_K: usize = 20;

const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A probability mass function on `{0, …, k-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Builds a pmf, dividing by the computed sum when it is within `1e-9` of
    /// one and rejecting anything further off.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return invalid("pmf needs at least one outcome");
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0 && **p <= 1.0 + NORMALIZATION_TOLERANCE)) {
            return invalid(format!("probability {p} outside [0, 1]"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return invalid(format!("probabilities sum to {total}"));
        }
        let probs = probs.into_iter().map(|p| (p / total).min(1.0)).collect();
        Ok(Self { probs })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "uniform pmf needs k > 0");
        Self { probs: vec![1.0 / k as f64; k] }
    }

    pub fn point_mass(k: usize, outcome: usize) -> Self {
        assert!(outcome < k, "outcome {outcome} outside 0..{k}");
        let mut probs = vec![0.0; k];
        probs[outcome] = 1.0;
        Self { probs }
    }

    /// Empirical pmf of `counts`, whose total must be positive.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return invalid("counts are all zero");
        }
        let t = total as f64;
        Ok(Self { probs: counts.iter().map(|&c| c as f64 / t).collect() })
    }

    /// Trusts the caller that `probs` is already a distribution.
    pub(crate) fn from_exact(probs: Vec<f64>) -> Self {
        debug_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        Self { probs }
    }

    pub fn k(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, outcome: usize) -> f64 {
        self.probs[outcome]
    }

    /// Inverse-CDF draw from a uniform variate `u ∈ [0, 1)`.
    pub fn sample_with(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (j, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return j;
            }
        }
        // rounding left u above the accumulated mass; fall back to the last
        // outcome that carries probability
        self.probs.iter().rposition(|&p| p > 0.0).unwrap_or(self.k() - 1)
    }
}

fn same_k(p: &Pmf, q: &Pmf) -> Result<()> {
    if p.k() != q.k() {
        return invalid(format!("support sizes differ: {} vs {}", p.k(), q.k()));
    }
    Ok(())
}

/// `TV(P, Q) = ½ Σ_j |P(j) − Q(j)|`.
pub fn tv_distance(p: &Pmf, q: &Pmf) -> Result<f64> {
    same_k(p, q)?;
    Ok(0.5 * p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `KL(P ‖ Q) = Σ_j P(j) log(P(j)/Q(j))`, with `0·log(0/q) = 0` and `+∞` when
/// `P` puts mass where `Q` has none.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    same_k(p, q)?;
    let mut total = 0.0;
    for (&a, &b) in p.probs.iter().zip(&q.probs) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Ok(f64::INFINITY);
        }
        total += a * (a / b).ln();
    }
    Ok(total.max(0.0))
}

/// Empirical pmf over the latest `r` samples together with the two terms of
/// its error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedPmfEstimate {
    pub pmf: Pmf,
    pub r: usize,
    /// `½√(k/r)`
    pub stat_bound: f64,
    /// `Δ_{n-r+1}`, or zero when no drift sequence was supplied.
    pub drift_bound: f64,
}

impl WindowedPmfEstimate {
    pub fn risk_bound(&self) -> f64 {
        self.stat_bound + self.drift_bound
    }
}

/// Counts of each outcome among the last `r` samples.
pub fn window_counts(samples: &[usize], r: usize, k: usize) -> Result<Vec<u64>> {
    if k == 0 {
        return invalid("support size k must be positive");
    }
    if r == 0 || r > samples.len() {
        return invalid(format!("window {r} outside 1..={}", samples.len()));
    }
    let mut counts = vec![0u64; k];
    for &x in &samples[samples.len() - r..] {
        match counts.get_mut(x) {
            Some(c) => *c += 1,
            None => return invalid(format!("sample {x} outside 0..{k}")),
        }
    }
    Ok(counts)
}

/// `P̂^r(j) = (1/r)·#{i ∈ last r : X_i = j}`.
pub fn empirical_window(samples: &[usize], r: usize, k: usize) -> Result<WindowedPmfEstimate> {
    let counts = window_counts(samples, r, k)?;
    Ok(WindowedPmfEstimate {
        pmf: Pmf::from_counts(&counts)?,
        r,
        stat_bound: 0.5 * (k as f64 / r as f64).sqrt(),
        drift_bound: 0.0,
    })
}

/// [`empirical_window`] with the drift term filled from `seq`.
pub fn empirical_window_with_drift(
    samples: &[usize],
    r: usize,
    k: usize,
    seq: &DriftSequence,
) -> Result<WindowedPmfEstimate> {
    if r > seq.len() {
        return invalid(format!("window {r} exceeds drift sequence length {}", seq.len()));
    }
    let mut est = empirical_window(samples, r, k)?;
    est.drift_bound = seq.window_bound(r);
    Ok(est)
}

/// `P^r = (1/r) Σ_{i=n-r+1}^{n} P_i`, the mean of the last `r` distributions.
pub fn average_pmf(dists: &[Pmf], r: usize) -> Result<Pmf> {
    if r == 0 || r > dists.len() {
        return invalid(format!("window {r} outside 1..={}", dists.len()));
    }
    let window = &dists[dists.len() - r..];
    let k = window[0].k();
    let mut acc = vec![0.0; k];
    for d in window {
        if d.k() != k {
            return invalid(format!("support sizes differ: {} vs {k}", d.k()));
        }
        for (a, p) in acc.iter_mut().zip(d.probs()) {
            *a += p;
        }
    }
    Pmf::new(acc.into_iter().map(|a| a / r as f64).collect())
}

/// `½√(k/r) + Δ_{n-r+1}`.
pub fn risk_upper_bound(seq: &DriftSequence, k: usize, r: usize) -> Result<f64> {
    if r == 0 || r > seq.len() {
        return invalid(format!("window {r} outside 1..={}", seq.len()));
    }
    Ok(0.5 * (k as f64 / r as f64).sqrt() + seq.window_bound(r))
}

/// `max_{A ⊆ [k]} |P(A) − P̂(A)|` by enumerating every subset.
pub fn agnostic_gap_bruteforce(p: &Pmf, p_hat: &Pmf) -> Result<f64> {
    same_k(p, p_hat)?;
    let k = p.k();
    if k > MAX_ENUMERATION_K {
        return Err(Error::UnsupportedSize { k, max: MAX_ENUMERATION_K });
    }
    let mut best = 0.0f64;
    for mask in 0u32..(1u32 << k) {
        let gap: f64 = (0..k)
            .filter(|j| mask & (1 << j) != 0)
            .map(|j| p.prob(j) - p_hat.prob(j))
            .sum();
        best = best.max(gap.abs());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drift::{make_bounded, Metric};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pmf(p: &[f64]) -> Pmf {
        Pmf::new(p.to_vec()).unwrap()
    }

    #[test]
    fn construction_normalizes_and_rejects() {
        let p = pmf(&[0.5, 0.5 + 5e-10]);
        assert_abs_diff_eq!(p.probs().iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert!(Pmf::new(vec![0.5, 0.6]).is_err());
        assert!(Pmf::new(vec![-0.1, 1.1]).is_err());
        assert!(Pmf::new(vec![]).is_err());
    }

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&pmf(&[1.0, 0.0]), &pmf(&[0.0, 1.0])).unwrap(), 1.0);
        assert_eq!(tv_distance(&pmf(&[0.3, 0.7]), &pmf(&[0.3, 0.7])).unwrap(), 0.0);
        assert_abs_diff_eq!(tv_distance(&pmf(&[0.5, 0.5]), &pmf(&[0.7, 0.3])).unwrap(), 0.2, epsilon = 1e-15);
        assert!(tv_distance(&pmf(&[1.0]), &pmf(&[0.5, 0.5])).is_err());
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_divergence(&pmf(&[0.5, 0.5]), &pmf(&[0.5, 0.5])).unwrap(), 0.0);
        assert_abs_diff_eq!(
            kl_divergence(&pmf(&[1.0, 0.0]), &pmf(&[0.5, 0.5])).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
        // 0.6·ln 1.2 + 0.4·ln 0.8 at 30 digits
        assert_abs_diff_eq!(
            kl_divergence(&pmf(&[0.6, 0.4]), &pmf(&[0.5, 0.5])).unwrap(),
            0.020_135_513_550_688_864,
            epsilon = 1e-15
        );
        assert_eq!(kl_divergence(&pmf(&[0.5, 0.5]), &pmf(&[1.0, 0.0])).unwrap(), f64::INFINITY);
    }

    #[test]
    fn empirical_window_examples() {
        // spec labels (1,2,1,1) are 0-based (0,1,0,0) here
        let s = [0, 1, 0, 0];
        assert_eq!(empirical_window(&s, 4, 2).unwrap().pmf.probs(), &[0.75, 0.25]);
        assert_eq!(empirical_window(&s, 2, 2).unwrap().pmf.probs(), &[1.0, 0.0]);
        let s = [0, 1, 1, 0];
        assert_eq!(empirical_window(&s, 2, 2).unwrap().pmf.probs(), &[0.5, 0.5]);
        assert!(empirical_window(&s, 5, 2).is_err());
        assert!(empirical_window(&[0, 2], 2, 2).is_err());

        let seq = make_bounded(4, 0.1).unwrap();
        let est = empirical_window_with_drift(&s, 3, 2, &seq).unwrap();
        assert_abs_diff_eq!(est.drift_bound, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(est.stat_bound, 0.5 * (2.0f64 / 3.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn average_examples() {
        let p = pmf(&[0.2, 0.8]);
        let same = average_pmf(&[p.clone(), p.clone(), p.clone()], 3).unwrap();
        assert!(same.probs().iter().zip(p.probs()).all(|(a, b)| (a - b).abs() <= 1e-15));
        assert_eq!(average_pmf(&[pmf(&[1.0, 0.0]), pmf(&[0.0, 1.0])], 2).unwrap().probs(), &[0.5, 0.5]);
        let d = [pmf(&[0.2, 0.8]), pmf(&[0.4, 0.6]), pmf(&[0.6, 0.4])];
        let a = average_pmf(&d, 2).unwrap();
        assert_abs_diff_eq!(a.prob(0), 0.5, epsilon = 1e-15);
        assert!(average_pmf(&[pmf(&[1.0]), pmf(&[0.5, 0.5])], 2).is_err());
    }

    #[test]
    fn risk_bound_examples() {
        let zero = DriftSequence::zero(1000, Metric::TotalVariation).unwrap();
        assert_abs_diff_eq!(risk_upper_bound(&zero, 10, 1000).unwrap(), 0.05, epsilon = 1e-15);
        let s = make_bounded(1000, 0.001).unwrap();
        assert_abs_diff_eq!(risk_upper_bound(&s, 10, 216).unwrap(), 0.322_582_870_727_983_8, epsilon = 1e-12);
        let s = make_bounded(100, 0.01).unwrap();
        assert_abs_diff_eq!(risk_upper_bound(&s, 4, 100).unwrap(), 1.09, epsilon = 1e-12);
        assert!(risk_upper_bound(&s, 4, 101).is_err());
    }

    #[test]
    fn agnostic_examples() {
        let p = pmf(&[0.5, 0.5]);
        assert_abs_diff_eq!(agnostic_gap_bruteforce(&p, &pmf(&[0.7, 0.3])).unwrap(), 0.2, epsilon = 1e-15);
        assert_eq!(agnostic_gap_bruteforce(&p, &p).unwrap(), 0.0);
        let big = Pmf::uniform(21);
        assert!(matches!(agnostic_gap_bruteforce(&big, &big), Err(Error::UnsupportedSize { .. })));
    }

    #[test]
    fn two_x_squared_inequality_on_grid() {
        for i in 1..20_000 {
            let x = -1.0 + i as f64 / 10_000.0;
            let lhs = (1.0 + x) * x.ln_1p() + (1.0 - x) * (-x).ln_1p();
            assert!(lhs <= 2.0 * x * x + 1e-15, "x={x}: {lhs} > {}", 2.0 * x * x);
        }
    }

    #[test]
    fn sampling_point_mass() {
        let p = Pmf::point_mass(3, 1);
        for u in [0.0, 0.3, 0.999_999] {
            assert_eq!(p.sample_with(u), 1);
        }
        assert_eq!(pmf(&[0.5, 0.5, 0.0]).sample_with(1.0), 1);
    }

    fn random_pmf(k: usize) -> impl Strategy<Value = Pmf> {
        prop::collection::vec(0.0f64..1.0, k).prop_filter_map("zero mass", |w| {
            let s: f64 = w.iter().sum();
            (s > 1e-6).then(|| Pmf::new(w.iter().map(|x| x / s).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn tv_is_a_metric((p, q, r) in (1usize..12).prop_flat_map(|k| (random_pmf(k), random_pmf(k), random_pmf(k)))) {
            let pq = tv_distance(&p, &q).unwrap();
            prop_assert!((0.0..=1.0).contains(&pq));
            prop_assert_eq!(pq, tv_distance(&q, &p).unwrap());
            prop_assert_eq!(tv_distance(&p, &p).unwrap(), 0.0);
            let pr = tv_distance(&p, &r).unwrap();
            let rq = tv_distance(&r, &q).unwrap();
            prop_assert!(pq <= pr + rq + 1e-12);
        }

        #[test]
        fn kl_non_negative((p, q) in (1usize..10).prop_flat_map(|k| (random_pmf(k), random_pmf(k)))) {
            let d = kl_divergence(&p, &q).unwrap();
            prop_assert!(d >= 0.0);
            prop_assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
            if tv_distance(&p, &q).unwrap() > 1e-6 {
                prop_assert!(d > 0.0);
            }
        }

        #[test]
        fn agnostic_gap_equals_tv((p, q) in (1usize..=12).prop_flat_map(|k| (random_pmf(k), random_pmf(k)))) {
            let gap = agnostic_gap_bruteforce(&p, &q).unwrap();
            prop_assert!((gap - tv_distance(&p, &q).unwrap()).abs() <= 1e-12);
        }

        #[test]
        fn empirical_window_is_lattice_pmf(samples in prop::collection::vec(0usize..6, 1..200), frac in 0.0f64..1.0) {
            let r = 1 + ((samples.len() - 1) as f64 * frac) as usize;
            let est = empirical_window(&samples, r, 6).unwrap();
            let total: f64 = est.pmf.probs().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            for &p in est.pmf.probs() {
                let scaled = p * r as f64;
                prop_assert!(p >= 0.0 && (scaled - scaled.round()).abs() < 1e-9);
            }
        }
    }

    // Joint KL over the product space, enumerated outcome by outcome, against
    // the per-factor sum.
    #[test]
    fn kl_factorizes_over_products() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut draw = |k: usize| {
            let w: Vec<f64> = (0..k).map(|_| rng.random::<f64>() + 0.05).collect();
            let s: f64 = w.iter().sum();
            Pmf::new(w.iter().map(|x| x / s).collect()).unwrap()
        };
        for k in 1..=4usize {
            for n in 1..=4usize {
                let ps: Vec<Pmf> = (0..n).map(|_| draw(k)).collect();
                let qs: Vec<Pmf> = (0..n).map(|_| draw(k)).collect();
                let factor_sum: f64 = ps.iter().zip(&qs).map(|(p, q)| kl_divergence(p, q).unwrap()).sum();
                let mut joint = 0.0;
                for idx in 0..k.pow(n as u32) {
                    let (mut pp, mut qq, mut rest) = (1.0, 1.0, idx);
                    for i in 0..n {
                        pp *= ps[i].prob(rest % k);
                        qq *= qs[i].prob(rest % k);
                        rest /= k;
                    }
                    joint += pp * (pp / qq).ln();
                }
                assert_abs_diff_eq!(joint, factor_sum, epsilon = 1e-12);
            }
        }
    }
}
