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

//! Hypercube-indexed hard-instance families.
//!
//! Each family is a set of drifting product distributions indexed by binary
//! words: their final distributions separate in proportion to the Hamming
//! distance between words while the KL divergence between neighbouring
//! members stays bounded. Closed forms for those distances are provided next
//! to the constructions so they can be checked against brute force.

pub mod assouad;
pub mod block;
pub mod bump;
pub mod hypercube;
pub mod membership;
pub mod process;
pub mod smooth_family;

pub use assouad::{assouad_kl, assouad_tv, discrete_assouad, AssouadFamily};
pub use block::{concat_blocks, make_block, Block};
pub use bump::{bump_k, bump_k0};
pub use hypercube::{hamming, HypercubeWord};
pub use membership::{membership_check, MembershipReport, MembershipViolation};
pub use process::{Draw, DriftingProcess, ProcessKind, Samples, StepDistribution};
pub use smooth_family::{smooth_assouad, smooth_assouad_kl, smooth_assouad_l2, BumpDensity, BumpProfile, SmoothFamily};
