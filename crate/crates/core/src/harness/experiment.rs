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

//! Rate, online and hardness experiments driven by an [`ExperimentConfig`].

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::discrete::{kl_divergence, tv_distance, Pmf};
use crate::drift::{make_bounded, window_discrete, DriftSequence, Metric};
use crate::error::{invalid, Error, Result};
use crate::hard::block::block_length;
use crate::hard::{
    concat_blocks, make_block, membership_check, AssouadFamily, DriftingProcess, HypercubeWord, Samples,
    SmoothFamily,
};
use crate::kernel::legendre_kernel;
use crate::parallel::{map_trials, Execution};
use crate::quadrature::GridSpec;
use crate::rng::{derive_seed, Substreams};
use crate::smooth::{bandwidth, l2_distance, RaisedCosine};

use super::config::{ExperimentConfig, ExperimentKind, WordChoice};
use super::csv::{real, render};
use super::fit::{rate_fit, RateFit};
use super::risk::{mc_risk, EstimatorSpec, RiskPoint};

const WORD_LABEL: u64 = 0x776f_7264;
/// Amplitude of the raised-cosine target used by the smooth i.i.d. baseline.
pub const BASELINE_AMPLITUDE: f64 = 0.5;

pub const RISK_HEADER: [&str; 10] =
    ["experiment_id", "kind", "k_or_beta", "delta", "n", "r_star", "trials", "risk_mean", "risk_stderr", "seed"];

#[derive(Debug, Clone, PartialEq)]
pub struct RiskRow {
    pub experiment_id: String,
    pub kind: String,
    pub k_or_beta: u64,
    pub delta: f64,
    pub n: usize,
    pub r_star: usize,
    pub trials: u64,
    pub risk_mean: f64,
    pub risk_stderr: f64,
    pub seed: u64,
}

impl RiskRow {
    fn fields(&self) -> Vec<String> {
        vec![
            self.experiment_id.clone(),
            self.kind.clone(),
            self.k_or_beta.to_string(),
            real(self.delta),
            self.n.to_string(),
            self.r_star.to_string(),
            self.trials.to_string(),
            real(self.risk_mean),
            real(self.risk_stderr),
            self.seed.to_string(),
        ]
    }
}

/// A grid point that could not be run.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedPoint {
    pub param: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RiskReport {
    pub rows: Vec<RiskRow>,
    pub skipped: Vec<SkippedPoint>,
    pub seed: u64,
    pub config_hash: String,
}

impl RiskReport {
    pub fn to_csv(&self) -> String {
        render(&RISK_HEADER, &self.rows.iter().map(RiskRow::fields).collect::<Vec<_>>())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateOutcome {
    pub report: RiskReport,
    /// Fit of risk against `Δ` (or `n` for the baseline); absent with fewer
    /// than three usable points.
    pub fit: Option<RateFit>,
}

fn choose_word(choice: WordChoice, m: usize, seed: u64) -> HypercubeWord {
    match choice {
        WordChoice::Random => HypercubeWord::random(m, &mut ChaCha8Rng::seed_from_u64(derive_seed(seed, WORD_LABEL))),
        WordChoice::Zeros => HypercubeWord::zeros(m),
        WordChoice::Ones => HypercubeWord::ones(m),
    }
}

/// `n_factor · ⌈(k/Δ²)^{1/3}⌉`, rounded up.
pub fn discrete_horizon(k: usize, delta: f64, n_factor: f64) -> usize {
    (n_factor * (k as f64 / (delta * delta)).cbrt().ceil()).ceil() as usize
}

/// `n_factor · ⌈Δ^{-(2β+1)/(3β+1)}⌉`, rounded up.
pub fn smooth_horizon(beta: u32, delta: f64, n_factor: f64) -> usize {
    let b = beta as f64;
    (n_factor * delta.powf(-(2.0 * b + 1.0) / (3.0 * b + 1.0)).ceil()).ceil() as usize
}

struct PointResult {
    param: f64,
    n: usize,
    r_star: usize,
    risk: RiskPoint,
}

/// Runs a discrete-rate, smooth-rate or i.i.d.-baseline sweep.
pub fn run_rate_experiment(cfg: &ExperimentConfig, exec: Execution) -> Result<RateOutcome> {
    cfg.validate()?;
    let kind = cfg.kind;
    let grid: Vec<f64> = match kind {
        ExperimentKind::DiscreteRate | ExperimentKind::SmoothRate => cfg.deltas.clone(),
        ExperimentKind::IidBaseline => cfg.ns.iter().map(|&n| n as f64).collect(),
        other => return Err(Error::Config(format!("{} is not a rate experiment", other.as_str()))),
    };
    let (k_or_beta, quad_grid) = match (cfg.k, cfg.beta) {
        (Some(k), _) if kind != ExperimentKind::SmoothRate => (k as u64, None),
        (_, Some(b)) => {
            let q = &cfg.quadrature;
            (b as u64, Some(GridSpec::with_density(q.lo, q.hi, q.points_per_unit)?))
        }
        _ => return Err(Error::Config("missing k or beta".into())),
    };
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    let mut points = Vec::new();
    for (idx, &param) in grid.iter().enumerate() {
        let point_seed = derive_seed(cfg.seed, idx as u64);
        let result = match kind {
            ExperimentKind::DiscreteRate => discrete_rate_point(cfg, k_or_beta as usize, param, point_seed, exec),
            ExperimentKind::SmoothRate => {
                smooth_rate_point(cfg, k_or_beta as u32, param, quad_grid.expect("smooth grid"), point_seed, exec)
            }
            _ => baseline_point(cfg, param as usize, quad_grid, point_seed, exec),
        };
        match result {
            Ok(p) => {
                rows.push(RiskRow {
                    experiment_id: cfg.experiment_id.clone(),
                    kind: kind.as_str().into(),
                    k_or_beta,
                    delta: if kind == ExperimentKind::IidBaseline { 0.0 } else { p.param },
                    n: p.n,
                    r_star: p.r_star,
                    trials: p.risk.trials,
                    risk_mean: p.risk.mean,
                    risk_stderr: p.risk.stderr,
                    seed: point_seed,
                });
                points.push((p.param, p.risk.mean));
            }
            Err(Error::InfeasibleFamily(reason)) => skipped.push(SkippedPoint { param, reason }),
            Err(e) => return Err(e),
        }
    }
    let usable: Vec<(f64, f64)> = points.into_iter().filter(|p| p.1 > 0.0).collect();
    let fit = if usable.len() >= 3 { Some(rate_fit(&usable)?) } else { None };
    Ok(RateOutcome { report: RiskReport { rows, skipped, seed: cfg.seed, config_hash: cfg.hash() }, fit })
}

fn discrete_rate_point(cfg: &ExperimentConfig, k: usize, delta: f64, seed: u64, exec: Execution) -> Result<PointResult> {
    let n = cfg.n.unwrap_or_else(|| discrete_horizon(k, delta, cfg.n_factor));
    let seq = make_bounded(n, delta)?;
    let family = AssouadFamily::new(&seq, k)?;
    let process = family.process(&choose_word(cfg.words, family.word_len(), seed))?;
    let r_star = family.r_star();
    let risk = mc_risk(&process, &EstimatorSpec::Discrete { window: r_star }, cfg.trials, seed, exec)?;
    Ok(PointResult { param: delta, n, r_star, risk })
}

fn smooth_rate_point(
    cfg: &ExperimentConfig,
    beta: u32,
    delta: f64,
    eval: GridSpec,
    seed: u64,
    exec: Execution,
) -> Result<PointResult> {
    let n = cfg.n.unwrap_or_else(|| smooth_horizon(beta, delta, cfg.n_factor));
    let seq = make_bounded(n, delta)?.with_metric(Metric::L2);
    let family = SmoothFamily::new(&seq, beta)?;
    let process = family.process(&choose_word(cfg.words, family.m(), seed))?;
    let r_star = family.r_star();
    let spec =
        EstimatorSpec::Smooth { window: r_star, bandwidth: bandwidth(r_star, beta), kernel: legendre_kernel(beta)?, eval };
    let risk = mc_risk(&process, &spec, cfg.trials, seed, exec)?;
    Ok(PointResult { param: delta, n, r_star, risk })
}

fn baseline_point(
    cfg: &ExperimentConfig,
    n: usize,
    eval: Option<GridSpec>,
    seed: u64,
    exec: Execution,
) -> Result<PointResult> {
    let (process, spec) = match (cfg.k, cfg.beta, eval) {
        (Some(k), _, _) => (
            DriftingProcess::discrete(vec![Pmf::uniform(k); n], DriftSequence::zero(n, Metric::TotalVariation)?)?,
            EstimatorSpec::Discrete { window: n },
        ),
        (None, Some(beta), Some(eval)) => {
            let target = RaisedCosine::new(BASELINE_AMPLITUDE)?;
            let envelope = target.sup();
            let spec =
                EstimatorSpec::Smooth { window: n, bandwidth: bandwidth(n, beta), kernel: legendre_kernel(beta)?, eval };
            (DriftingProcess::smooth_iid(Arc::new(target), n, beta, envelope)?, spec)
        }
        _ => return Err(Error::Config("iid_baseline needs k or beta".into())),
    };
    let risk = mc_risk(&process, &spec, cfg.trials, seed, exec)?;
    Ok(PointResult { param: n as f64, n, r_star: n, risk })
}

/// Average TV risk over all steps of a discrete process for the sliding
/// window `r = min(t, window)` and for the full history `r = t`.
pub fn online_risk(
    process: &DriftingProcess,
    window: usize,
    trials: u64,
    seed: u64,
    exec: Execution,
) -> Result<(RiskPoint, RiskPoint)> {
    let Some(pmfs) = process.pmfs() else {
        return invalid("online risk needs a discrete process");
    };
    if window == 0 {
        return invalid("window must be positive");
    }
    if trials == 0 {
        return invalid("trials must be positive");
    }
    let k = pmfs[0].k();
    let n = pmfs.len();
    let pairs = map_trials(trials, exec, |t| {
        let Samples::Discrete(xs) = process.sample_range(&Substreams::new(seed, t), 0..n) else {
            unreachable!("discrete process")
        };
        let mut win = vec![0u64; k];
        let mut all = vec![0u64; k];
        let (mut win_sum, mut all_sum) = (0.0, 0.0);
        for (t, &x) in xs.iter().enumerate() {
            win[x] += 1;
            all[x] += 1;
            if t >= window {
                win[xs[t - window]] -= 1;
            }
            let r = (t + 1).min(window) as f64;
            let full = (t + 1) as f64;
            let target = pmfs[t].probs();
            win_sum += 0.5 * target.iter().zip(&win).map(|(p, &c)| (p - c as f64 / r).abs()).sum::<f64>();
            all_sum += 0.5 * target.iter().zip(&all).map(|(p, &c)| (p - c as f64 / full).abs()).sum::<f64>();
        }
        (win_sum / n as f64, all_sum / n as f64)
    });
    let windowed: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let full: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    Ok((RiskPoint::from_losses(&windowed), RiskPoint::from_losses(&full)))
}

/// Concatenated random blocks for each `Δ`, scored by [`online_risk`].
pub fn run_online_experiment(cfg: &ExperimentConfig, exec: Execution) -> Result<RiskReport> {
    cfg.validate()?;
    if cfg.kind != ExperimentKind::OnlineAverage {
        return Err(Error::Config(format!("{} is not an online experiment", cfg.kind.as_str())));
    }
    let k = cfg.k.expect("validated");
    let mut rows = Vec::new();
    for (idx, &delta) in cfg.deltas.iter().enumerate() {
        let seed = derive_seed(cfg.seed, idx as u64);
        let mut word_rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, WORD_LABEL));
        let blocks = (0..cfg.blocks)
            .map(|_| {
                let w = match cfg.words {
                    WordChoice::Random => HypercubeWord::random(k / 2, &mut word_rng),
                    WordChoice::Zeros => HypercubeWord::zeros(k / 2),
                    WordChoice::Ones => HypercubeWord::ones(k / 2),
                };
                make_block(k, delta, &w)
            })
            .collect::<Result<Vec<_>>>()?;
        let process = concat_blocks(&blocks)?;
        let n = process.n();
        debug_assert_eq!(n, cfg.blocks * block_length(k, delta));
        let r_star = window_discrete(process.declared_drift(), k)?;
        let (windowed, full) = online_risk(&process, r_star, cfg.trials, seed, exec)?;
        for (kind, risk) in [("online_windowed", windowed), ("online_full", full)] {
            rows.push(RiskRow {
                experiment_id: cfg.experiment_id.clone(),
                kind: kind.into(),
                k_or_beta: k as u64,
                delta,
                n,
                r_star,
                trials: risk.trials,
                risk_mean: risk.mean,
                risk_stderr: risk.stderr,
                seed,
            });
        }
    }
    Ok(RiskReport { rows, skipped: Vec::new(), seed: cfg.seed, config_hash: cfg.hash() })
}

pub const HARDNESS_HEADER: [&str; 10] =
    ["experiment_id", "check", "family", "param", "instance", "passed", "observed", "reference", "tolerance", "seed"];

#[derive(Debug, Clone, PartialEq)]
pub struct HardnessRow {
    pub check: String,
    pub family: String,
    pub param: u64,
    pub instance: usize,
    pub passed: bool,
    pub observed: f64,
    pub reference: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HardnessReport {
    pub experiment_id: String,
    pub rows: Vec<HardnessRow>,
    pub seed: u64,
    pub config_hash: String,
}

impl HardnessReport {
    pub fn failures(&self) -> impl Iterator<Item = &HardnessRow> {
        self.rows.iter().filter(|r| !r.passed)
    }

    pub fn to_csv(&self) -> String {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    self.experiment_id.clone(),
                    r.check.clone(),
                    r.family.clone(),
                    r.param.to_string(),
                    r.instance.to_string(),
                    r.passed.to_string(),
                    real(r.observed),
                    real(r.reference),
                    real(r.tolerance),
                    self.seed.to_string(),
                ]
            })
            .collect();
        render(&HARDNESS_HEADER, &rows)
    }
}

struct Rows<'a> {
    rows: &'a mut Vec<HardnessRow>,
    family: &'static str,
    param: u64,
    instance: usize,
}

impl Rows<'_> {
    fn close(&mut self, check: &str, observed: f64, reference: f64, tolerance: f64) {
        let passed = (observed - reference).abs() <= tolerance;
        self.push(check, passed, observed, reference, tolerance);
    }

    fn below(&mut self, check: &str, observed: f64, bound: f64, tolerance: f64) {
        let passed = observed.is_finite() && observed >= -tolerance && observed <= bound + tolerance;
        self.push(check, passed, observed, bound, tolerance);
    }

    fn push(&mut self, check: &str, passed: bool, observed: f64, reference: f64, tolerance: f64) {
        self.rows.push(HardnessRow {
            check: check.into(),
            family: self.family.into(),
            param: self.param,
            instance: self.instance,
            passed,
            observed,
            reference,
            tolerance,
        });
    }
}

/// A word with bit `j` raised, and the same word with it cleared.
fn raised_pair(w: &HypercubeWord, j: usize) -> (HypercubeWord, HypercubeWord) {
    let hi = if w.bit(j) { w.clone() } else { w.flipped(j) };
    let lo = hi.flipped(j);
    (hi, lo)
}

/// Sweeps random words over the discrete and smooth families and records
/// every closed-form and membership comparison.
pub fn run_hardness_check(cfg: &ExperimentConfig) -> Result<HardnessReport> {
    cfg.validate()?;
    let hc = &cfg.hardness;
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, WORD_LABEL));

    let dseq = make_bounded(hc.discrete_n, hc.discrete_delta)?;
    for &k in &hc.ks {
        let family = match AssouadFamily::new(&dseq, k) {
            Ok(f) => f,
            Err(e @ (Error::InfeasibleFamily(_) | Error::InvalidArgument(_))) => {
                let mut out = Rows { rows: &mut rows, family: "discrete", param: k as u64, instance: 0 };
                out.push(&format!("construction: {e}"), false, f64::NAN, f64::NAN, 0.0);
                continue;
            }
            Err(e) => return Err(e),
        };
        for instance in 0..hc.pairs {
            let mut out = Rows { rows: &mut rows, family: "discrete", param: k as u64, instance };
            let w = HypercubeWord::random(k / 2, &mut rng);
            let v = HypercubeWord::random(k / 2, &mut rng);
            let direct = tv_distance(&family.final_pmf(&w)?, &family.final_pmf(&v)?)?;
            out.close("tv_closed_form", family.tv(&w, &v)?, direct, 1e-12);

            let j = (instance * 7 + 3) % (k / 2);
            let (hi, lo) = raised_pair(&w, j);
            let kl = family.kl(&hi, &lo)?;
            let (ph, pl) = (family.process(&hi)?, family.process(&lo)?);
            let per_factor = ph
                .pmfs()
                .expect("discrete")
                .iter()
                .zip(pl.pmfs().expect("discrete"))
                .map(|(a, b)| kl_divergence(a, b))
                .sum::<Result<f64>>()?;
            out.close("kl_factorization", kl, per_factor, 1e-10);
            out.below("kl_bound", kl, family.kl_bound().min(2.0), 1e-12);

            let report = membership_check(&family.process(&w)?);
            out.push("membership", report.passed(), report.max_ratio, 1.0, 0.0);
        }
    }

    for &beta in &hc.betas {
        let sseq = make_bounded(hc.smooth_n, hc.smooth_delta)?.with_metric(Metric::L2);
        let family = SmoothFamily::new(&sseq, beta)?;
        let quad = GridSpec::covering(0.0, 1.0)?;
        for instance in 0..hc.smooth_instances {
            let mut out = Rows { rows: &mut rows, family: "smooth", param: beta as u64, instance };
            let w = HypercubeWord::random(family.m(), &mut rng);
            let v = HypercubeWord::random(family.m(), &mut rng);
            let direct = l2_distance(&family.final_density(&w)?, &family.final_density(&v)?, &quad)?;
            out.close("l2_closed_form", family.l2(&w, &v)?, direct, 1e-6);

            let (hi, lo) = raised_pair(&w, instance % family.m());
            out.below("kl_bound", family.kl(&hi, &lo)?, family.kl_bound(), 1e-9);

            let report = membership_check(&family.process(&w)?);
            out.push("membership", report.passed(), report.max_ratio, 1.0, 0.0);
        }
    }

    if hc.inject_fault {
        let mut out = Rows { rows: &mut rows, family: "injected", param: 2, instance: 0 };
        let report = membership_check(&faulty_process()?);
        out.push("membership", report.passed(), report.max_ratio, 1.0, 0.0);
    }

    Ok(HardnessReport { experiment_id: cfg.experiment_id.clone(), rows, seed: cfg.seed, config_hash: cfg.hash() })
}

/// Bounded drift `0.1` on `k = 2`, with the second step moving twice as far
/// as allowed.
fn faulty_process() -> Result<DriftingProcess> {
    let pmfs = [0.5, 0.6, 0.8, 0.9].iter().map(|&p| Pmf::new(vec![p, 1.0 - p])).collect::<Result<Vec<_>>>()?;
    DriftingProcess::discrete(pmfs, make_bounded(4, 0.1)?)
}

/// The `r*` a report row should carry for its instance.
pub fn expected_r_star(row: &RiskRow) -> Result<usize> {
    match row.kind.as_str() {
        "discrete_rate" | "online_windowed" | "online_full" => {
            window_discrete(&make_bounded(row.n, row.delta)?, row.k_or_beta as usize)
        }
        "smooth_rate" => crate::drift::window_smooth(
            &make_bounded(row.n, row.delta)?.with_metric(Metric::L2),
            row.k_or_beta as u32,
        ),
        "iid_baseline" => Ok(row.n),
        other => invalid(format!("unknown row kind {other}")),
    }
}
