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

//! The discrete hypercube family: inside the last `r*` steps, each pair of
//! outcomes `(2j-1, 2j)` is tilted apart by `(Δ_{n-r*+1} - Δ_i)/k` when bit
//! `j` of the word is set.

use crate::discrete::Pmf;
use crate::drift::{window_discrete, DriftSequence};
use crate::error::{invalid, Error, Result};

use super::hypercube::{hamming, single_raised_bit, HypercubeWord};
use super::process::DriftingProcess;

#[derive(Debug, Clone)]
pub struct AssouadFamily {
    seq: DriftSequence,
    k: usize,
    r_star: usize,
    top: f64,
}

impl AssouadFamily {
    pub fn new(seq: &DriftSequence, k: usize) -> Result<Self> {
        if k == 0 || !k.is_multiple_of(2) {
            return invalid(format!("support size must be even and positive, got {k}"));
        }
        let r_star = window_discrete(seq, k)?;
        if r_star <= k {
            return Err(Error::InfeasibleFamily(format!("window r* = {r_star} does not exceed k = {k}")));
        }
        let top = seq.window_bound(r_star);
        Ok(Self { seq: seq.clone(), k, r_star, top })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r_star(&self) -> usize {
        self.r_star
    }

    /// `Δ_{n-r*+1}`.
    pub fn top(&self) -> f64 {
        self.top
    }

    pub fn word_len(&self) -> usize {
        self.k / 2
    }

    pub fn sequence(&self) -> &DriftSequence {
        &self.seq
    }

    fn check_word(&self, w: &HypercubeWord) -> Result<()> {
        if w.len() != self.word_len() {
            return invalid(format!("word length {} does not match k/2 = {}", w.len(), self.word_len()));
        }
        Ok(())
    }

    /// Tilt `Δ_{n-r*+1} - Δ_i` at the 0-based step `i`; zero before the window.
    pub fn tilt(&self, i: usize) -> f64 {
        let n = self.seq.len();
        if i + self.r_star < n {
            0.0
        } else {
            self.top - self.seq.values()[i]
        }
    }

    fn pmf_with_tilt(&self, w: &HypercubeWord, t: f64) -> Pmf {
        let k = self.k as f64;
        let probs = (0..self.k)
            .map(|j| {
                if t == 0.0 || !w.bit(j / 2) {
                    1.0 / k
                } else if j % 2 == 0 {
                    (1.0 - t) / k
                } else {
                    (1.0 + t) / k
                }
            })
            .collect();
        Pmf::from_exact(probs)
    }

    pub fn pmf_at(&self, w: &HypercubeWord, i: usize) -> Result<Pmf> {
        self.check_word(w)?;
        Ok(self.pmf_with_tilt(w, self.tilt(i)))
    }

    pub fn final_pmf(&self, w: &HypercubeWord) -> Result<Pmf> {
        self.pmf_at(w, self.seq.len() - 1)
    }

    pub fn process(&self, w: &HypercubeWord) -> Result<DriftingProcess> {
        self.check_word(w)?;
        let pmfs = (0..self.seq.len()).map(|i| self.pmf_with_tilt(w, self.tilt(i))).collect();
        DriftingProcess::discrete(pmfs, self.seq.clone())
    }

    /// `(Δ_{n-r*+1}/k) · h(w, w')`.
    pub fn tv(&self, w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<f64> {
        self.check_word(w)?;
        self.check_word(w_prime)?;
        Ok(self.top / self.k as f64 * hamming(w, w_prime)? as f64)
    }

    /// `KL(S_w ‖ S_{w'})` for words differing in one bit that is set in `w`.
    pub fn kl(&self, w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<f64> {
        self.check_word(w)?;
        self.check_word(w_prime)?;
        single_raised_bit(w, w_prime)?;
        let n = self.seq.len();
        let sum: f64 = (n - self.r_star..n)
            .map(|i| {
                let t = self.tilt(i);
                (1.0 + t) * (1.0 + t).ln() + xlogx(1.0 - t)
            })
            .sum();
        Ok(sum / self.k as f64)
    }

    /// `2 r* Δ²_{n-r*+1} / k`, which the window rule keeps at or below 2.
    pub fn kl_bound(&self) -> f64 {
        2.0 * self.r_star as f64 * self.top * self.top / self.k as f64
    }
}

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

pub fn discrete_assouad(seq: &DriftSequence, k: usize, w: &HypercubeWord) -> Result<DriftingProcess> {
    AssouadFamily::new(seq, k)?.process(w)
}

pub fn assouad_tv(seq: &DriftSequence, k: usize, w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<f64> {
    AssouadFamily::new(seq, k)?.tv(w, w_prime)
}

pub fn assouad_kl(seq: &DriftSequence, k: usize, w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<f64> {
    AssouadFamily::new(seq, k)?.kl(w, w_prime)
}
