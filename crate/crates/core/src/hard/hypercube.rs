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

use rand::Rng;

use crate::error::{invalid, Result};

/// A vertex of the hypercube `{0, 1}^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypercubeWord {
    bits: Vec<bool>,
}

impl HypercubeWord {
    /// Builds a word from `0`/`1` entries.
    pub fn new(bits: &[u8]) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return invalid(format!("hypercube entries must be 0 or 1, got {b}"));
        }
        Ok(Self { bits: bits.iter().map(|&b| b == 1).collect() })
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn zeros(m: usize) -> Self {
        Self { bits: vec![false; m] }
    }

    pub fn ones(m: usize) -> Self {
        Self { bits: vec![true; m] }
    }

    /// Uniformly random word of length `m`.
    pub fn random<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        Self { bits: (0..m).map(|_| rng.random::<bool>()).collect() }
    }

    /// The word whose bits are the binary digits of `index` (bit 0 first).
    pub fn from_index(m: usize, index: u64) -> Self {
        Self { bits: (0..m).map(|j| index >> j & 1 == 1).collect() }
    }

    /// Every word of length `m` (`m ≤ 20`).
    pub fn all(m: usize) -> impl Iterator<Item = Self> {
        assert!(m <= 20, "refusing to enumerate 2^{m} words");
        (0..1u64 << m).map(move |i| Self::from_index(m, i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    /// `‖w‖₁`, the number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn flipped(&self, j: usize) -> Self {
        let mut bits = self.bits.clone();
        bits[j] = !bits[j];
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

/// Number of positions where the words differ.
pub fn hamming(w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<usize> {
    if w.len() != w_prime.len() {
        return invalid(format!("word lengths differ: {} vs {}", w.len(), w_prime.len()));
    }
    Ok(w.bits.iter().zip(&w_prime.bits).filter(|(a, b)| a != b).count())
}

/// The single position where `w` has a one and `w_prime` a zero, when the
/// words are Hamming neighbours in that orientation.
pub(crate) fn single_raised_bit(w: &HypercubeWord, w_prime: &HypercubeWord) -> Result<usize> {
    if hamming(w, w_prime)? != 1 {
        return invalid("words must differ in exactly one bit");
    }
    let q = (0..w.len()).find(|&j| w.bit(j) != w_prime.bit(j)).expect("one differing bit");
    if !w.bit(q) {
        return invalid("the differing bit must be set in the left word");
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hamming_examples() {
        let a = HypercubeWord::new(&[1, 0, 1]).unwrap();
        let b = HypercubeWord::new(&[0, 0, 1]).unwrap();
        assert_eq!(hamming(&a, &b).unwrap(), 1);
        assert_eq!(hamming(&a, &a).unwrap(), 0);
        assert_eq!(hamming(&HypercubeWord::ones(6), &HypercubeWord::zeros(6)).unwrap(), 6);
        assert!(hamming(&a, &HypercubeWord::zeros(2)).is_err());
        assert!(HypercubeWord::new(&[0, 2]).is_err());
    }

    #[test]
    fn enumeration_and_orientation() {
        assert_eq!(HypercubeWord::all(3).count(), 8);
        assert_eq!(HypercubeWord::from_index(3, 0b101).bits(), &[true, false, true]);
        let a = HypercubeWord::new(&[1, 0, 1]).unwrap();
        let b = HypercubeWord::new(&[0, 0, 1]).unwrap();
        assert_eq!(single_raised_bit(&a, &b).unwrap(), 0);
        assert!(single_raised_bit(&b, &a).is_err());
        assert!(single_raised_bit(&a, &a).is_err());
        assert_eq!(a.weight(), 2);
        assert_eq!(a.flipped(1).weight(), 3);
    }
}
