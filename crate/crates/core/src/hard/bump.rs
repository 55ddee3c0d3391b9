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

//! The compactly supported `C^∞` bump `K₀(x) = exp(-1/(1-x²))` on `(-1, 1)`
//! and the odd, mean-zero profile `K(x) = K₀(4x+1) - K₀(4x-1)`.

use std::sync::OnceLock;

use crate::quadrature::GridSpec;

/// Highest derivative order available from [`bump_k0_derivative`].
pub const MAX_DERIVATIVE: usize = 12;

pub fn bump_k0(x: f64) -> f64 {
    bump_k0_derivative(0, x)
}

pub fn bump_k(x: f64) -> f64 {
    bump_k0(4.0 * x + 1.0) - bump_k0(4.0 * x - 1.0)
}

/// `sup |K| = K₀(0) = e^{-1}`.
pub fn bump_k_sup() -> f64 {
    (-1.0f64).exp()
}

/// Coefficients (lowest degree first) of `P_n` in
/// `K₀^{(n)}(x) = P_n(x) (1-x²)^{-2n} K₀(x)`.
fn derivative_polynomials() -> &'static [Vec<f64>] {
    static POLYS: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    POLYS.get_or_init(|| {
        // P_{n+1} = (P_n' s + 4n x P_n) s - 2x P_n with s = 1 - x².
        let mut out = vec![vec![1.0]];
        for n in 0..MAX_DERIVATIVE {
            let p = &out[n];
            let deriv: Vec<f64> = p.iter().enumerate().skip(1).map(|(d, c)| d as f64 * c).collect();
            let mut inner = poly_mul(&deriv, &[1.0, 0.0, -1.0]);
            poly_add_assign(&mut inner, &poly_mul(p, &[0.0, 4.0 * n as f64]));
            let mut next = poly_mul(&inner, &[1.0, 0.0, -1.0]);
            poly_add_assign(&mut next, &poly_mul(p, &[0.0, -2.0]));
            out.push(next);
        }
        out
    })
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_assign(a: &mut Vec<f64>, b: &[f64]) {
    if a.len() < b.len() {
        a.resize(b.len(), 0.0);
    }
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `K₀^{(n)}(x)`. Panics if `n > MAX_DERIVATIVE`.
pub fn bump_k0_derivative(n: usize, x: f64) -> f64 {
    assert!(n <= MAX_DERIVATIVE, "derivative order {n} exceeds {MAX_DERIVATIVE}");
    let s = 1.0 - x * x;
    if s <= 0.0 {
        return 0.0;
    }
    let p = &derivative_polynomials()[n];
    poly_eval(p, x) * (-1.0 / s - 2.0 * n as f64 * s.ln()).exp()
}

/// `K^{(n)}(x)`.
pub fn bump_k_derivative(n: usize, x: f64) -> f64 {
    4f64.powi(n as i32) * (bump_k0_derivative(n, 4.0 * x + 1.0) - bump_k0_derivative(n, 4.0 * x - 1.0))
}

const NORM_POINTS: usize = (1 << 16) + 1;

/// `∫ K₀²`.
pub fn bump_k0_norm_sq() -> f64 {
    static V: OnceLock<f64> = OnceLock::new();
    *V.get_or_init(|| {
        let grid = GridSpec::new(-1.0, 1.0, NORM_POINTS).expect("static grid");
        grid.integrate(|x| bump_k0(x).powi(2))
    })
}

/// `‖K‖₂`; the two halves of `K` have disjoint supports, so `‖K‖² = ‖K₀‖²/2`.
pub fn bump_k_norm() -> f64 {
    (bump_k0_norm_sq() / 2.0).sqrt()
}

/// `∫ (K^{(n)})²`.
pub fn bump_k_derivative_norm_sq(n: usize) -> f64 {
    let grid = GridSpec::new(-0.5, 0.5, NORM_POINTS).expect("static grid");
    grid.integrate(|x| bump_k_derivative(n, x).powi(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn examples() {
        assert_relative_eq!(bump_k0(0.0), 0.36787944117144233, max_relative = 1e-15);
        assert_relative_eq!(bump_k(-0.25), (-1.0f64).exp(), max_relative = 1e-15);
        assert_eq!(bump_k(0.0), 0.0);
        assert_eq!(bump_k0(1.0), 0.0);
        assert_eq!(bump_k0(-3.0), 0.0);
        assert_eq!(bump_k(0.5), 0.0);
    }

    #[test]
    fn k_is_odd_with_zero_mean() {
        for i in 0..200 {
            let x = i as f64 / 400.0;
            assert_eq!(bump_k(-x), -bump_k(x));
        }
        let grid = GridSpec::new(-0.5, 0.5, 4097).unwrap();
        assert!(grid.integrate(bump_k).abs() < 1e-15);
    }

    #[test]
    fn norms_match_frozen_values() {
        assert_relative_eq!(bump_k0_norm_sq(), 0.1330861208449943, max_relative = 1e-12);
        assert_relative_eq!(bump_k_norm(), 0.2579594162315017, max_relative = 1e-12);
        let grid = GridSpec::new(-0.5, 0.5, 1 << 15 | 1).unwrap();
        assert_relative_eq!(grid.integrate(|x| bump_k(x).powi(2)), 0.0665430604224971, max_relative = 1e-10);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for n in 0..6 {
            for &x in &[-0.7, -0.3, 0.0, 0.2, 0.55, 0.8] {
                let fd = (bump_k0_derivative(n, x + h) - bump_k0_derivative(n, x - h)) / (2.0 * h);
                let exact = bump_k0_derivative(n + 1, x);
                let scale = exact.abs().max(1.0);
                assert!((fd - exact).abs() / scale < 1e-4, "n={n} x={x}: {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn derivatives_vanish_at_support_edge() {
        for n in 0..=MAX_DERIVATIVE {
            assert_eq!(bump_k0_derivative(n, 1.0), 0.0);
            assert!(bump_k0_derivative(n, 0.999).abs() < 1e-100);
        }
    }

    #[test]
    fn derivative_norms_are_finite() {
        for n in 1..=4 {
            let v = bump_k_derivative_norm_sq(n);
            assert!(v.is_finite() && v > 0.0);
        }
    }
}
