//! Monte Carlo simulation of the physical throw: samples poses, counts
//! intersections exactly, and accumulates the joint and total-count
//! histograms with confidence intervals.
//!
//! Reproducibility contract: every trial owns its own counter-derived
//! RNG stream (`stream = trial index` on a ChaCha cipher seeded once from
//! the user seed), so results are bit-identical for a fixed seed no
//! matter how many workers execute the chunks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::distributions::StepDistribution;
use crate::error::{Error, Result};
use crate::exact::{JointMatrix, ProbabilityVector};
use crate::geometry::{count_intersections, max_intersections, sample_pose, StarSpec, ThrowConfig};
use crate::stats::clopper_pearson;

/// 99% two-sided normal quantile.
const Z_99: f64 = 2.576;

/// How per-entry confidence half-widths are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CiMethod {
    /// `z * sqrt(p(1-p)/N)` with z = 2.576.
    #[default]
    Normal,
    /// Exact binomial (Clopper-Pearson) interval; half the interval width.
    /// Useful when `N * p` is small.
    ClopperPearson,
}

/// A full simulation request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub throw_config: ThrowConfig,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub ci_method: CiMethod,
}

impl SimConfig {
    pub fn new(throw_config: ThrowConfig, trials: u64, seed: u64, workers: usize) -> Self {
        Self {
            throw_config,
            trials,
            seed,
            workers,
            ci_method: CiMethod::default(),
        }
    }
}

/// Simulation output: the joint histogram over `(k, m)`, the empirical
/// total-count law, and per-entry 99% confidence half-widths.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Row-major `(M+1) x (M+1)` histogram of per-family counts.
    pub counts: Vec<u64>,
    /// Empirical probabilities of `i = k + m` total intersections.
    pub p_hat: ProbabilityVector,
    /// 99% confidence half-width per `p_hat` entry.
    pub ci_half_width: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

impl SimResult {
    pub fn dim(&self) -> usize {
        (self.counts.len() as f64).sqrt() as usize
    }

    pub fn joint_count(&self, k: u32, m: u32) -> u64 {
        self.counts[k as usize * self.dim() + m as usize]
    }
}

/// Runs the experiment; bit-identical output for a fixed seed regardless
/// of the worker count.
pub fn simulate(sim: &SimConfig) -> Result<SimResult> {
    sim.throw_config.validate()?;
    if sim.trials == 0 {
        return Err(Error::NoTrials);
    }
    if sim.workers == 0 {
        return Err(Error::NoWorkers);
    }
    let config = sim.throw_config;
    let m_max = max_intersections(config.star) as usize;
    let dim = m_max + 1;
    let base = ChaCha8Rng::seed_from_u64(sim.seed);

    let run_range = |lo: u64, hi: u64| -> Vec<u64> {
        let mut hist = vec![0u64; dim * dim];
        for trial in lo..hi {
            let mut rng = base.clone();
            rng.set_stream(trial);
            let pose = sample_pose(&config, &mut rng);
            let c = count_intersections(&config, &pose);
            assert!(
                (c.k as usize) < dim && (c.m as usize) < dim,
                "count {c:?} exceeds the admissibility bound M = {m_max}"
            );
            hist[c.k as usize * dim + c.m as usize] += 1;
        }
        hist
    };

    let chunk = sim.trials.div_ceil(sim.workers as u64);
    let counts = if sim.workers == 1 {
        run_range(0, sim.trials)
    } else {
        let partials: Vec<Vec<u64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..sim.workers as u64)
                .map(|w| {
                    let lo = (w * chunk).min(sim.trials);
                    let hi = ((w + 1) * chunk).min(sim.trials);
                    scope.spawn(move || run_range(lo, hi))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect()
        });
        let mut total = vec![0u64; dim * dim];
        for part in partials {
            for (t, p) in total.iter_mut().zip(part) {
                *t += p;
            }
        }
        total
    };

    let mut totals = vec![0u64; 2 * m_max + 1];
    for k in 0..dim {
        for m in 0..dim {
            totals[k + m] += counts[k * dim + m];
        }
    }
    let n_f = sim.trials as f64;
    let p_hat: Vec<f64> = totals.iter().map(|&c| c as f64 / n_f).collect();
    let ci_half_width = totals
        .iter()
        .zip(&p_hat)
        .map(|(&c, &p)| match sim.ci_method {
            CiMethod::Normal => Z_99 * (p * (1.0 - p) / n_f).sqrt(),
            CiMethod::ClopperPearson => {
                let (lo, hi) = clopper_pearson(c, sim.trials, 0.01);
                0.5 * (hi - lo)
            }
        })
        .collect();

    Ok(SimResult {
        counts,
        p_hat: ProbabilityVector::new(p_hat),
        ci_half_width,
        trials: sim.trials,
        seed: sim.seed,
    })
}

/// Empirical joint matrix: normalized `(k, m)` frequencies. The matrix
/// carries the raw lattice angle (no folding is meaningful for data).
pub fn simulate_joint(sim: &SimConfig) -> Result<JointMatrix> {
    let result = simulate(sim)?;
    Ok(joint_from_result(&result, &sim.throw_config))
}

/// Converts an existing simulation result into the empirical joint law.
pub fn joint_from_result(result: &SimResult, config: &ThrowConfig) -> JointMatrix {
    let dim = result.dim();
    let entries = result
        .counts
        .iter()
        .map(|&c| c as f64 / result.trials as f64)
        .collect();
    JointMatrix::from_entries(entries, dim, *config, config.lattice.alpha)
}

/// Step CDF of the empirical relative count `(k + m) / n`.
pub fn empirical_cdf(result: &SimResult, star: StarSpec) -> StepDistribution {
    StepDistribution::from_probabilities(star.n, &result.p_hat)
}
