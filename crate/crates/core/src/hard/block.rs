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

//! Length-`ν` drifting blocks with uniform endpoints, used for the online
//! (average-risk) setting.

use crate::discrete::Pmf;
use crate::drift::make_bounded;
use crate::error::{invalid, Result};

use super::hypercube::HypercubeWord;
use super::process::DriftingProcess;

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    k: usize,
    delta: f64,
    nu: usize,
    word: HypercubeWord,
}

/// `2(k/Δ²)^{1/3}` rounded down to an even integer, at least 2.
pub fn block_length(k: usize, delta: f64) -> usize {
    let raw = 2.0 * (k as f64 / (delta * delta)).cbrt();
    let nu = (raw.floor() as usize) & !1;
    nu.max(2)
}

impl Block {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn word(&self) -> &HypercubeWord {
        &self.word
    }

    /// Tilt at the 0-based step `i`: `Δ·i` on the rising half, mirrored after.
    fn tilt(&self, i: usize) -> f64 {
        let half = self.nu / 2;
        let idx = if i < half { i } else { self.nu - 1 - i };
        self.delta * idx as f64
    }

    /// Distribution at the 0-based step `i < ν`.
    pub fn dist_at(&self, i: usize) -> Pmf {
        assert!(i < self.nu, "step {i} outside 0..{}", self.nu);
        let t = self.tilt(i);
        let k = self.k as f64;
        let probs = (0..self.k)
            .map(|j| {
                if t == 0.0 || !self.word.bit(j / 2) {
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

    pub fn pmfs(&self) -> Vec<Pmf> {
        (0..self.nu).map(|i| self.dist_at(i)).collect()
    }
}

pub fn make_block(k: usize, delta: f64, w: &HypercubeWord) -> Result<Block> {
    if k == 0 || !k.is_multiple_of(2) {
        return invalid(format!("support size must be even and positive, got {k}"));
    }
    if !(delta > 0.0 && delta < 1.0 / k as f64) {
        return invalid(format!("delta must lie in (0, 1/k), got {delta}"));
    }
    if w.len() != k / 2 {
        return invalid(format!("word length {} does not match k/2 = {}", w.len(), k / 2));
    }
    Ok(Block { k, delta, nu: block_length(k, delta), word: w.clone() })
}

/// `B₁ × … × B_m`, declared against bounded drift `Δ` over `m·ν` steps.
pub fn concat_blocks(blocks: &[Block]) -> Result<DriftingProcess> {
    let Some(first) = blocks.first() else {
        return invalid("need at least one block");
    };
    if blocks.iter().any(|b| b.k != first.k || b.delta != first.delta || b.nu != first.nu) {
        return invalid("blocks must share k, delta and nu");
    }
    let pmfs: Vec<Pmf> = blocks.iter().flat_map(Block::pmfs).collect();
    let declared = make_bounded(pmfs.len(), first.delta)?;
    DriftingProcess::discrete(pmfs, declared)
}
