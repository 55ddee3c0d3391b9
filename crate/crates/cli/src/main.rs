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

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use drift_density::discrete::empirical_window;
use drift_density::drift::{make_bounded, make_polynomial, validate, window_discrete, window_smooth, DriftSequence, Metric};
use drift_density::harness::csv::real;
use drift_density::harness::{
    rate_fit, run_hardness_check, run_online_experiment, run_rate_experiment, write_output, ExperimentConfig,
    ExperimentKind,
};
use drift_density::kernel::legendre_kernel;
use drift_density::parallel::Execution;
use drift_density::quadrature::GridSpec;
use drift_density::smooth::{bandwidth, kde, Density};

#[derive(Parser, Debug)]
#[command(name = "drift-density", version, about = "Density estimation under distribution drift")]
struct Cli {
    /// JSON experiment config
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed (overrides the config)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Monte-Carlo trials (overrides the config)
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Run trials on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the optimal window r* for a drift sequence
    Window(WindowArgs),
    /// Estimate the current distribution from a sample file
    Estimate(EstimateArgs),
    /// Check hard-instance constructions against brute force
    HardnessCheck(HardnessArgs),
    /// Fit a power law, from a points file or by running a rate experiment
    RateFit(RateFitArgs),
    /// Average risk of the sliding-window estimator on drifting blocks
    Online(OnlineArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SequenceKind {
    Bounded,
    Polynomial,
    Zero,
}

#[derive(Args, Debug)]
struct WindowArgs {
    #[arg(long, value_enum, default_value = "bounded")]
    sequence: SequenceKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Read Δ_1..Δ_n from a file, one value per line
    #[arg(long, conflicts_with_all = ["n", "delta"])]
    file: Option<PathBuf>,
    /// Support size (discrete window)
    #[arg(long, conflicts_with = "beta")]
    k: Option<usize>,
    /// Smoothness order (smooth window)
    #[arg(long)]
    beta: Option<u32>,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// One sample per line: labels 1..=k, or reals with --beta
    #[arg(long)]
    samples: PathBuf,
    #[arg(long, conflicts_with = "beta")]
    k: Option<usize>,
    #[arg(long)]
    beta: Option<u32>,
    /// Window size; all samples when absent
    #[arg(long)]
    window: Option<usize>,
    /// KDE bandwidth; r^{-1/(2β+1)} when absent
    #[arg(long)]
    bandwidth: Option<f64>,
    /// Evaluation grid for the KDE as lo,hi,points
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    grid: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct HardnessArgs {
    /// Append a process that violates its declared drift
    #[arg(long)]
    inject_fault: bool,
}

#[derive(Args, Debug)]
struct RateFitArgs {
    /// CSV file of x,y pairs (header optional)
    #[arg(long, conflicts_with = "config")]
    points: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OnlineArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    blocks: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match &cli.command {
        Command::Window(args) => window(cli, args),
        Command::Estimate(args) => estimate(cli, args),
        Command::HardnessCheck(args) => {
            let mut cfg = load_config(cli, ExperimentKind::HardnessCheck)?;
            cfg.hardness.inject_fault |= args.inject_fault;
            let report = run_hardness_check(&cfg)?;
            emit(cli, &cfg, &report.to_csv())?;
            let failures = report.failures().count();
            eprintln!("{} checks, {failures} failed", report.rows.len());
            Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::RateFit(args) => match &args.points {
            Some(path) => {
                let fit = rate_fit(&read_points(path)?)?;
                let text = format!(
                    "slope,intercept,residual_rms,points\n{},{},{},{}\n",
                    real(fit.slope),
                    real(fit.intercept),
                    real(fit.residual_rms),
                    fit.points
                );
                finish(cli.out.as_deref(), &text)?;
                Ok(ExitCode::SUCCESS)
            }
            None => {
                let cfg = load_config(cli, ExperimentKind::DiscreteRate)?;
                let outcome = run_rate_experiment(&cfg, exec)?;
                emit(cli, &cfg, &outcome.report.to_csv())?;
                for s in &outcome.report.skipped {
                    eprintln!("skipped {}: {}", s.param, s.reason);
                }
                match outcome.fit {
                    Some(fit) => eprintln!("slope {} intercept {} ({} points)", real(fit.slope), real(fit.intercept), fit.points),
                    None => eprintln!("fewer than three usable points; no fit"),
                }
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Online(args) => {
            let mut cfg = load_config(cli, ExperimentKind::OnlineAverage)?;
            if let Some(k) = args.k {
                cfg.k = Some(k);
            }
            if let Some(d) = args.delta {
                cfg.deltas = vec![d];
            }
            if let Some(b) = args.blocks {
                cfg.blocks = b;
            }
            cfg.validate()?;
            let report = run_online_experiment(&cfg, exec)?;
            emit(cli, &cfg, &report.to_csv())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// The config from `--config`, or defaults of `kind`, with flag overrides.
fn load_config(cli: &Cli, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => ExperimentConfig::new(kind),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = cli.trials {
        cfg.trials = trials;
    }
    Ok(cfg)
}

fn emit(cli: &Cli, cfg: &ExperimentConfig, csv: &str) -> Result<()> {
    finish(cli.out.as_deref().or(cfg.output.as_deref()), csv)
}

fn finish(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_output(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn window(cli: &Cli, args: &WindowArgs) -> Result<ExitCode> {
    let metric = if args.beta.is_some() { Metric::L2 } else { Metric::TotalVariation };
    let seq = match &args.file {
        Some(path) => {
            let values = read_lines(path)?
                .iter()
                .map(|l| l.parse::<f64>().with_context(|| format!("bad drift value {l:?}")))
                .collect::<Result<Vec<_>>>()?;
            DriftSequence::new(values, metric)?
        }
        None => {
            let n = args.n.context("--n is required without --file")?;
            match args.sequence {
                SequenceKind::Zero => DriftSequence::zero(n, metric)?,
                SequenceKind::Bounded => make_bounded(n, args.delta.context("--delta is required")?)?.with_metric(metric),
                SequenceKind::Polynomial => {
                    make_polynomial(n, args.delta.context("--delta is required")?, args.alpha)?.with_metric(metric)
                }
            }
        }
    };
    let report = validate(&seq);
    if !report.valid {
        for v in &report.violations {
            eprintln!("step {}: {:?}", v.step, v.kind);
        }
        bail!("drift sequence is not regular");
    }
    let r_star = match (args.k, args.beta) {
        (Some(k), None) => window_discrete(&seq, k)?,
        (None, Some(beta)) => window_smooth(&seq, beta)?,
        _ => bail!("give exactly one of --k or --beta"),
    };
    let text = format!("n,c,r_star,drift_at_window\n{},{},{},{}\n", seq.len(), real(report.c), r_star, real(seq.window_bound(r_star)));
    finish(cli.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn estimate(cli: &Cli, args: &EstimateArgs) -> Result<ExitCode> {
    let lines = read_lines(&args.samples)?;
    if lines.is_empty() {
        bail!("sample file is empty");
    }
    let r = args.window.unwrap_or(lines.len());
    let text = match (args.k, args.beta) {
        (Some(k), None) => {
            let samples = lines
                .iter()
                .map(|l| {
                    let label: usize = l.parse().with_context(|| format!("bad sample {l:?}"))?;
                    if label == 0 || label > k {
                        bail!("sample {label} outside 1..={k}");
                    }
                    Ok(label - 1)
                })
                .collect::<Result<Vec<_>>>()?;
            let est = empirical_window(&samples, r, k)?;
            let mut text = String::from("outcome,probability\n");
            for (j, p) in est.pmf.probs().iter().enumerate() {
                text.push_str(&format!("{},{}\n", j + 1, real(*p)));
            }
            text
        }
        (None, Some(beta)) => {
            let samples = lines
                .iter()
                .map(|l| l.parse::<f64>().with_context(|| format!("bad sample {l:?}")))
                .collect::<Result<Vec<_>>>()?;
            let h = args.bandwidth.unwrap_or_else(|| bandwidth(r, beta));
            let est = kde(&samples, r, h, &legendre_kernel(beta)?)?;
            let grid = match args.grid.as_deref() {
                Some(&[lo, hi, points]) => GridSpec::new(lo, hi, points as usize)?,
                Some(_) => bail!("--grid takes lo,hi,points"),
                None => {
                    let (a, b) = est.support();
                    GridSpec::new(a, b, 101)?
                }
            };
            let mut text = String::from("x,density\n");
            for x in grid.nodes() {
                text.push_str(&format!("{},{}\n", real(x), real(est.pdf(x))));
            }
            text
        }
        _ => bail!("give exactly one of --k or --beta"),
    };
    finish(cli.out.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from).collect())
}

fn read_points(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut points = Vec::new();
    for (i, line) in read_lines(path)?.iter().enumerate() {
        let mut fields = line.split(',').map(str::trim);
        let (Some(x), Some(y)) = (fields.next(), fields.next()) else {
            bail!("line {} needs two fields", i + 1);
        };
        match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(x), Ok(y)) => points.push((x, y)),
            _ if i == 0 => continue,
            _ => bail!("line {} is not numeric", i + 1),
        }
    }
    Ok(points)
}
