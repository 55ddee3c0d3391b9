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

//! The smooth hypercube family on `[0, 1]`: `m` disjoint bumps centred at
//! `x_j = (2j-1)/(2m)`, switched on by the word and scaled by
//! `(Δ_{n-r*+1} - Δ_i)/m^β` inside the last `r*` steps.

use std::sync::Arc;

use crate::drift::{window_smooth, DriftSequence};
use crate::error::{invalid, Error, Result};
use crate::quadrature::GridSpec;
use crate::smooth::Density;

use super::bump::{bump_k, bump_k0_norm_sq, bump_k_derivative, bump_k_derivative_norm_sq, bump_k_norm, bump_k_sup};
use super::hypercube::{hamming, single_raised_bit, HypercubeWord};
use super::process::DriftingProcess;

const KL_POINTS: usize = 4097;

/// Largest `m ≥ 1` with `m^{2β+1} ≤ r`.
pub fn bump_count(r: usize, beta: u32) -> usize {
    let e = 2 * beta + 1;
    let fits = |m: usize| (m as u128).checked_pow(e).is_some_and(|p| p <= r as u128);
    let mut m = ((r as f64).powf(1.0 / e as f64).floor() as usize).max(1);
    while m > 1 && !fits(m) {
        m -= 1;
    }
    while fits(m + 1) {
        m += 1;
    }
    m
}

/// `φ_w(x) = Σ_j w_j K(m(x - x_j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpProfile {
    beta: u32,
    word: HypercubeWord,
}

impl BumpProfile {
    pub fn new(beta: u32, word: HypercubeWord) -> Result<Self> {
        if beta == 0 {
            return invalid("beta must be positive");
        }
        if word.is_empty() {
            return invalid("word must have at least one bit");
        }
        Ok(Self { beta, word })
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn m(&self) -> usize {
        self.word.len()
    }

    pub fn word(&self) -> &HypercubeWord {
        &self.word
    }

    /// Centre of the 0-based cell `j`.
    pub fn centre(&self, j: usize) -> f64 {
        (2 * j + 1) as f64 / (2 * self.m()) as f64
    }

    fn cell(&self, x: f64) -> Option<usize> {
        if !(0.0..=1.0).contains(&x) {
            return None;
        }
        Some(((x * self.m() as f64).floor() as usize).min(self.m() - 1))
    }

    /// `φ_w(x)`, looking only at the cell containing `x`.
    pub fn eval(&self, x: f64) -> f64 {
        match self.cell(x) {
            Some(j) if self.word.bit(j) => bump_k(self.m() as f64 * (x - self.centre(j))),
            _ => 0.0,
        }
    }

    /// `φ_w(x)` summed over every bump.
    pub fn eval_all(&self, x: f64) -> f64 {
        let m = self.m() as f64;
        (0..self.m()).filter(|&j| self.word.bit(j)).map(|j| bump_k(m * (x - self.centre(j)))).sum()
    }

    /// `φ_w^{(order)}(x)`.
    pub fn derivative(&self, order: usize, x: f64) -> f64 {
        let m = self.m() as f64;
        match self.cell(x) {
            Some(j) if self.word.bit(j) => m.powi(order as i32) * bump_k_derivative(order, m * (x - self.centre(j))),
            _ => 0.0,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        if self.word.weight() == 0 {
            0.0
        } else {
            bump_k_sup()
        }
    }

    /// `‖φ_w‖₂ = ‖K‖ √(|w|/m)`.
    pub fn norm(&self) -> f64 {
        bump_k_norm() * (self.word.weight() as f64 / self.m() as f64).sqrt()
    }

    /// `∫ (φ_w^{(order)})² = |w| m^{2·order-1} ∫ (K^{(order)})²`.
    pub fn derivative_norm_sq(&self, order: usize) -> f64 {
        let m = self.m() as f64;
        self.word.weight() as f64 * m.powi(2 * order as i32 - 1) * bump_k_derivative_norm_sq(order)
    }

    /// Cell edges and centres.
    pub fn breakpoints(&self) -> Vec<f64> {
        let half = 2 * self.m();
        (0..=half).map(|i| i as f64 / half as f64).collect()
    }
}

/// `1 + a·φ_w(x)` on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct BumpDensity {
    amplitude: f64,
    profile: Arc<BumpProfile>,
}

impl BumpDensity {
    pub fn new(amplitude: f64, profile: Arc<BumpProfile>) -> Self {
        Self { amplitude, profile }
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn profile(&self) -> &BumpProfile {
        &self.profile
    }

    /// Derivative of the given order of the density.
    pub fn derivative(&self, order: usize, x: f64) -> f64 {
        if order == 0 {
            return self.pdf(x);
        }
        self.amplitude * self.profile.derivative(order, x)
    }
}

impl Density for BumpDensity {
    fn pdf(&self, x: f64) -> f64 {
        if !(0.0..=1.0).contains(&x) {
            return 0.0;
        }
        1.0 + self.amplitude * self.profile.eval(x)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, 1.0)
    }

    fn smoothness(&self) -> Option<u32> {
        Some(self.profile.beta())
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.profile.breakpoints()
    }
}

#[derive(Debug, Clone)]
pub struct SmoothFamily {
    seq: DriftSequence,
    beta: u32,
    r_star: usize,
    m: usize,
    top: f64,
}

impl SmoothFamily {
    pub fn new(seq: &DriftSequence, beta: u32) -> Result<Self> {
        let r_star = window_smooth(seq, beta)?;
        let m = bump_count(r_star, beta);
        let top = seq.window_bound(r_star);
        if top * bump_k_sup() / (m as f64).powi(beta as i32) > 1.0 {
            return Err(Error::InfeasibleFamily(format!("bump amplitude {top} would make the density negative")));
        }
        Ok(Self { seq: seq.clone(), beta, r_star, m, top })
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn r_star(&self) -> usize {
        self.r_star
    }

    /// Number of bumps, which is also the word length.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `Δ_{n-r*+1}`.
    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn sequence(&self) -> &DriftSequence {
        &self.seq
    }

    /// Bump amplitude at the 0-based step `i`.
    pub fn amplitude(&self, i: usize) -> f64 {
        if i + self.r_star < self.seq.len() {
            0.0
        } else {
            (self.top - self.seq.values()[i]) / (self.m as f64).powi(self.beta as i32)
        }
    }

    fn profile(&self, w: &HypercubeWord) -> Result<BumpProfile> {
        if w.len() != self.m {
            return invalid(format!("word length {} does not match m = {}", w.len(), self.m));
        }
        BumpProfile::new(self.beta, w.clone())
    }

    pub fn process(&self, w: &HypercubeWord) -> Result<DriftingProcess> {
        let profile = Arc::new(self.profile(w)?);
        let amplitudes = (0..self.seq.len()).map(|i| self.amplitude(i)).collect();
        Ok(DriftingProcess::bumps(profile, amplitudes, self.seq.clone()))
    }

    pub fn final_density(&self, w: &HypercubeWord) -> Result<BumpDensity> {
        let profile = Arc::new(self.profile(w)?);
        Ok(BumpDensity::new(self.amplitude(self.seq.len() - 1), profile))
    }

    /// `√h(w,w') ‖K‖ Δ_{n-r*+1} / m^{β+1/2}`.
    pub fn l2(&self, w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<f64> {
        self.profile(w)?;
        self.profile(w_prime)?;
        let h = hamming(w, w_prime)? as f64;
        Ok(h.sqrt() * bump_k_norm() * self.top / (self.m as f64).powf(self.beta as f64 + 0.5))
    }

    /// `KL(S_w ‖ S_{w'})` for words differing in one bit that is set in `w`,
    /// summed over steps with each factor integrated over the differing cell.
    pub fn kl(&self, w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<f64> {
        self.profile(w)?;
        self.profile(w_prime)?;
        single_raised_bit(w, w_prime)?;
        let grid = GridSpec::new(-0.5, 0.5, KL_POINTS)?;
        let ks: Vec<f64> = grid.nodes().map(bump_k).collect();
        let h = grid.spacing();
        let n = self.seq.len();
        let mut total = 0.0;
        let mut buf = vec![0.0; ks.len()];
        for i in n - self.r_star..n {
            let a = self.amplitude(i);
            if a == 0.0 {
                continue;
            }
            for (b, &k) in buf.iter_mut().zip(&ks) {
                let p = 1.0 + a * k;
                *b = p * p.ln();
            }
            total += crate::quadrature::simpson_weights_sum(&buf, h);
        }
        Ok(total / self.m as f64)
    }

    /// `2 r* Δ²_{n-r*+1} ‖K₀‖² / m^{2β+1}`.
    pub fn kl_bound(&self) -> f64 {
        2.0 * self.r_star as f64 * self.top * self.top * bump_k0_norm_sq()
            / (self.m as f64).powi(2 * self.beta as i32 + 1)
    }
}

pub fn smooth_assouad(seq: &DriftSequence, beta: u32, w: &HypercubeWord) -> Result<DriftingProcess> {
    SmoothFamily::new(seq, beta)?.process(w)
}

pub fn smooth_assouad_l2(seq: &DriftSequence, beta: u32, w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<f64> {
    SmoothFamily::new(seq, beta)?.l2(w, w_prime)
}

pub fn smooth_assouad_kl(seq: &DriftSequence, beta: u32, w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<f64> {
    SmoothFamily::new(seq, beta)?.kl(w, w_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drift::{make_bounded, Metric};
    use crate::smooth::{l2_distance, total_mass};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn l2_seq(n: usize, delta: f64) -> DriftSequence {
        make_bounded(n, delta).unwrap().with_metric(Metric::L2)
    }

    #[test]
    fn bump_count_is_integer_floor() {
        assert_eq!(bump_count(32, 1), 3);
        assert_eq!(bump_count(27, 1), 3);
        assert_eq!(bump_count(26, 1), 2);
        assert_eq!(bump_count(1, 3), 1);
        assert_eq!(bump_count(243, 2), 3);
        assert_eq!(bump_count(242, 2), 2);
        assert_eq!(bump_count(1_000_000, 1), 100);
    }

    #[test]
    fn centres_for_three_bumps() {
        let p = BumpProfile::new(1, HypercubeWord::ones(3)).unwrap();
        let c: Vec<f64> = (0..3).map(|j| p.centre(j)).collect();
        assert_relative_eq!(c[0], 1.0 / 6.0);
        assert_relative_eq!(c[1], 0.5);
        assert_relative_eq!(c[2], 5.0 / 6.0);
        assert_eq!(p.eval(0.5), 0.0);
    }

    #[test]
    fn bumps_are_disjoint() {
        let p = BumpProfile::new(2, HypercubeWord::ones(7)).unwrap();
        let m = p.m() as f64;
        let grid = GridSpec::new(0.0, 1.0, 20001).unwrap();
        for x in grid.nodes() {
            let active = (0..p.m()).filter(|&j| bump_k(m * (x - p.centre(j))) != 0.0).count();
            assert!(active <= 1, "x = {x}");
            assert_eq!(p.eval(x), p.eval_all(x));
        }
    }

    #[test]
    fn zero_word_is_uniform() {
        let fam = SmoothFamily::new(&l2_seq(2000, 0.001), 1).unwrap();
        let proc_ = fam.process(&HypercubeWord::zeros(fam.m())).unwrap();
        for i in [0, 1500, 1999] {
            let crate::hard::StepDistribution::Smooth(d) = proc_.dist_at(i) else { panic!() };
            assert!([0.0, 0.3, 0.77, 1.0].iter().all(|&x| d.pdf(x) == 1.0));
        }
    }

    #[test]
    fn l2_example_and_quadrature() {
        // 0.3 ≤ 37^{-1/3} but 0.3·37/36 > 38^{-1/3}
        let seq = l2_seq(100, 0.3 / 36.0);
        let fam = SmoothFamily::new(&seq, 1).unwrap();
        assert_eq!(fam.r_star(), 37);
        assert_eq!(fam.m(), 3);
        let w = HypercubeWord::new(&[1, 0, 1]).unwrap();
        let v = w.flipped(1);
        let closed = fam.l2(&w, &v).unwrap();
        assert_relative_eq!(closed, 0.0148932938401256, max_relative = 1e-10);
        let quad = GridSpec::covering(0.0, 1.0).unwrap();
        let direct = l2_distance(&fam.final_density(&w).unwrap(), &fam.final_density(&v).unwrap(), &quad).unwrap();
        assert!((closed - direct).abs() < 1e-6, "{closed} vs {direct}");
        assert_eq!(fam.l2(&w, &w).unwrap(), 0.0);
    }

    #[test]
    fn final_density_has_unit_mass() {
        let fam = SmoothFamily::new(&l2_seq(10_000, 0.001), 2).unwrap();
        let d = fam.final_density(&HypercubeWord::ones(fam.m())).unwrap();
        assert!((total_mass(&d) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn kl_below_bound() {
        let seq = l2_seq(10_000, 0.001);
        let fam = SmoothFamily::new(&seq, 1).unwrap();
        assert_eq!(fam.r_star(), 178);
        assert_eq!(fam.m(), 5);
        let w = HypercubeWord::new(&[0, 1, 1, 0, 1]).unwrap();
        let kl = fam.kl(&w, &w.flipped(2)).unwrap();
        assert!(kl.is_finite() && kl > 0.0);
        assert!(kl <= fam.kl_bound());
        assert!(fam.kl(&w.flipped(2), &w).is_err());
    }

    #[test]
    fn kl_zero_without_drift() {
        let fam = SmoothFamily::new(&DriftSequence::zero(300, Metric::L2).unwrap(), 1).unwrap();
        let w = HypercubeWord::ones(fam.m());
        assert_eq!(fam.kl(&w, &w.flipped(0)).unwrap(), 0.0);
    }

    #[test]
    fn word_length_checked() {
        let fam = SmoothFamily::new(&l2_seq(2000, 0.001), 1).unwrap();
        assert!(fam.process(&HypercubeWord::zeros(fam.m() + 1)).is_err());
    }

    #[test]
    fn rejection_sampler_matches_cdf() {
        let seq = l2_seq(100, 0.3 / 36.0);
        let fam = SmoothFamily::new(&seq, 1).unwrap();
        let w = HypercubeWord::new(&[1, 0, 1]).unwrap();
        let proc_ = fam.process(&w).unwrap();
        let d = fam.final_density(&w).unwrap();

        let grid = GridSpec::new(0.0, 1.0, 1 << 16 | 1).unwrap();
        let h = grid.spacing();
        let mut cdf = vec![0.0; grid.points()];
        for i in 1..grid.points() {
            cdf[i] = cdf[i - 1] + 0.5 * h * (d.pdf(grid.node(i - 1)) + d.pdf(grid.node(i)));
        }
        let cdf_at = |x: f64| {
            let pos = x / h;
            let i = (pos.floor() as usize).min(grid.points() - 2);
            let t = pos - i as f64;
            cdf[i] * (1.0 - t) + cdf[i + 1] * t
        };

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws = 100_000;
        let mut xs: Vec<f64> = (0..draws)
            .map(|_| match proc_.sample_step(99, &mut rng) {
                crate::hard::Draw::Continuous(x) => x,
                crate::hard::Draw::Discrete(_) => unreachable!(),
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        let ks = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf_at(x);
                (f - i as f64 / draws as f64).abs().max((f - (i + 1) as f64 / draws as f64).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.01, "KS statistic {ks}");
    }
}
