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

//! Higher-order kernels built by Legendre projection.
//!
//! The order-β kernel is the reproducing kernel of polynomials of degree ≤ β
//! on `[-1, 1]`, evaluated at the origin:
//! `K(u) = Σ_{j=0}^{β} φ_j(0) φ_j(u)` with `φ_j = √((2j+1)/2)·P_j`.
//! Every polynomial `p` of degree ≤ β then satisfies `∫ p(u) K(u) du = p(0)`,
//! which gives `∫K = 1` and vanishing moments `1..=β`.

use crate::error::{invalid, Error, Result};
use crate::quadrature::GridSpec;

pub const MAX_ORDER: u32 = 8;

/// Legendre polynomial `P_j(u)` by the three-term recurrence.
pub fn legendre(j: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, u);
    match j {
        0 => 1.0,
        _ => {
            for m in 1..j {
                let next = ((2 * m + 1) as f64 * u * cur - m as f64 * prev) / (m + 1) as f64;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    order: u32,
    /// `c_j` in `K(u) = Σ c_j P_j(u)` on `[-1, 1]`.
    coefficients: Vec<f64>,
    /// `∫ K²(u) du`
    m_k: f64,
}

impl Kernel {
    pub fn order(&self) -> u32 {
        self.order
    }

    /// The kernel vanishes outside `[-support_radius, support_radius]`.
    pub fn support_radius(&self) -> f64 {
        1.0
    }

    /// `m_K = ∫ K²(u) du`.
    pub fn m_k(&self) -> f64 {
        self.m_k
    }

    /// Whether the kernel is constant on its support (true for orders 0 and 1).
    pub fn is_flat(&self) -> bool {
        self.coefficients.iter().skip(1).all(|&c| c == 0.0)
    }

    pub fn evaluate(&self, u: f64) -> f64 {
        if !(-1.0..=1.0).contains(&u) {
            return 0.0;
        }
        // P_j advanced by the three-term recurrence
        let (mut prev, mut cur) = (1.0, u);
        let mut sum = self.coefficients[0];
        for (j, &c) in self.coefficients.iter().enumerate().skip(1) {
            if j > 1 {
                let m = (j - 1) as f64;
                let next = ((2.0 * m + 1.0) * u * cur - m * prev) / (m + 1.0);
                prev = cur;
                cur = next;
            }
            sum += c * cur;
        }
        sum
    }
}

/// Order-β kernel supported on `[-1, 1]`, for `1 ≤ β ≤ 8`.
pub fn legendre_kernel(beta: u32) -> Result<Kernel> {
    if !(1..=MAX_ORDER).contains(&beta) {
        return Err(Error::UnsupportedOrder(beta));
    }
    let degree = beta as usize;
    // φ_j(0) φ_j(u) = (2j+1)/2 · P_j(0) · P_j(u)
    let coefficients: Vec<f64> = (0..=degree)
        .map(|j| (2 * j + 1) as f64 / 2.0 * legendre(j, 0.0))
        .collect();
    // orthonormality: ∫K² = Σ φ_j(0)² = Σ (2j+1)/2 · P_j(0)²
    let m_k = (0..=degree)
        .map(|j| (2 * j + 1) as f64 / 2.0 * legendre(j, 0.0).powi(2))
        .sum();
    Ok(Kernel { order: beta, coefficients, m_k })
}

/// `∫ u^j K(u) du` by Simpson quadrature on `quad`, which must cover the
/// kernel's support.
pub fn kernel_moment(kernel: &Kernel, j: u32, quad: &GridSpec) -> Result<f64> {
    let r = kernel.support_radius();
    if !quad.covers(-r, r) {
        return invalid(format!(
            "grid [{}, {}] does not cover the kernel support [-{r}, {r}]",
            quad.lo(),
            quad.hi()
        ));
    }
    Ok(quad.integrate(|u| u.powi(j as i32) * kernel.evaluate(u)))
}
