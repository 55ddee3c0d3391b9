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

//! Nonparametric density estimation when the sampling distribution drifts.
//!
//! The crate is organised around the window-size trade-off: an estimator built
//! from the latest `r` observations pays a statistical error that shrinks with
//! `r` and a drift error that grows with it. The modules provide
//!
//! * [`drift`]: regular drift sequences and the optimal window `r*` for
//!   discrete (total variation) and smooth (L2) estimation,
//! * [`discrete`]: probability mass functions, TV/KL, and the windowed
//!   empirical estimator,
//! * [`kernel`], [`smooth`], [`quadrature`]: order-β kernels, the windowed
//!   Parzen–Rosenblatt estimator, and Simpson quadrature,
//! * [`hard`]: the hypercube-indexed hard-instance families used in lower
//!   bounds, with their closed-form distances,
//! * [`harness`]: Monte-Carlo risk estimation, rate fits, experiment configs
//!   and CSV output.
//!
//! Monte-Carlo trials run on rayon when the `parallel` feature is enabled (the
//! default); see [`parallel::Execution`].

pub mod discrete;
pub mod drift;
pub mod error;
pub mod hard;
pub mod harness;
pub mod kernel;
pub mod parallel;
pub mod quadrature;
pub mod rng;
pub mod smooth;

pub use error::{Error, Result};
