//! The four data-producing commands: exact tables, angle sweeps,
//! simulations and limit-law reports. Each returns a table plus its run
//! manifest; the binary decides where the bytes go.

use std::f64::consts::PI;

use super::{Angle, Cell, RunManifest, Table};
use crate::distributions::{
    finite_cdf, independent_convolution, limit_cdf, sup_distance, LimitParams, StepDistribution,
};
use crate::error::{Error, Result};
use crate::exact::{
    expected_intersections, fold_angle, intersection_probabilities, probabilities_from_params,
    N3MiddleFormula, ProbabilityVector,
};
use crate::geometry::{LatticeSpec, StarSpec, ThrowConfig};
use crate::montecarlo::{joint_from_result, simulate, CiMethod, SimConfig};

/// A finished command: the data table, the manifest describing the run,
/// human-readable notes for stderr, and whether self-checks passed.
#[derive(Debug)]
pub struct CommandOutput {
    pub table: Table,
    pub manifest: RunManifest,
    pub notes: Vec<String>,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct ExactArgs {
    pub n: u32,
    pub ell: f64,
    pub a: f64,
    pub b: f64,
    pub alpha: Angle,
}

fn build_config(n: u32, ell: f64, a: f64, b: f64) -> Result<ThrowConfig> {
    ThrowConfig::new(StarSpec::new(n, ell)?, LatticeSpec::new(a, b, PI / 2.0)?)
}

fn common_params(m: &mut RunManifest, n: u32, ell: f64, a: f64, b: f64) {
    m.param("n", n)
        .param("ell", ell)
        .param("a", a)
        .param("b", b)
        .param("lambda", ell / a)
        .param("mu", ell / b);
}

/// `exact`: one row per count `i` with `p(i, alpha)` and the cumulative
/// step CDF value at `i/n`. Odd `n` only.
pub fn cmd_exact(args: &ExactArgs) -> Result<CommandOutput> {
    let config = build_config(args.n, args.ell, args.a, args.b)?;
    let p = intersection_probabilities(&config, args.alpha.radians)?;
    let cdf = finite_cdf(&config, args.alpha.radians)?;

    let mut table = Table::new(&["i", "p", "cumulative"]);
    for i in 0..p.len() {
        table.push(vec![
            Cell::Int(i as i64),
            Cell::Float(p.get(i)),
            Cell::Float(cdf.cumulative()[i]),
        ]);
    }

    let mut manifest = RunManifest::new("exact", None);
    common_params(&mut manifest, args.n, args.ell, args.a, args.b);
    manifest
        .param("alpha", &args.alpha.raw)
        .param("alpha_radians", args.alpha.radians);

    let sum = p.sum();
    let ok = (sum - 1.0).abs() <= 1e-12;
    let notes = vec![format!(
        "sum(p) = {sum:.17} (|sum - 1| = {:.3e}, tolerance 1e-12: {})",
        (sum - 1.0).abs(),
        if ok { "ok" } else { "FAILED" }
    )];
    Ok(CommandOutput {
        table,
        manifest,
        notes,
        ok,
    })
}

#[derive(Debug, Clone)]
pub struct SweepArgs {
    pub n: u32,
    pub ell: f64,
    pub a: f64,
    pub b: f64,
    /// Number of grid points over `[0, pi/n]`.
    pub alpha_points: usize,
    /// Restrict output to these counts; `None` emits every `i`.
    pub select: Option<Vec<usize>>,
}

/// `sweep`: long-format rows `(alpha, i, p(i, alpha), p*(i))` over an
/// angle grid, where `p*` is the independence reference (convolution of
/// the two marginals, angle-free).
pub fn cmd_sweep(args: &SweepArgs) -> Result<CommandOutput> {
    let config = build_config(args.n, args.ell, args.a, args.b)?;
    if args.alpha_points < 2 {
        return Err(Error::GridTooSmall {
            given: args.alpha_points,
            minimum: 2,
        });
    }
    let reference = independent_convolution(&config, 0.0)?;
    let period = PI / args.n as f64;

    let mut table = Table::new(&["alpha", "i", "p", "p_star"]);
    for j in 0..args.alpha_points {
        let alpha = period * j as f64 / (args.alpha_points - 1) as f64;
        let p = intersection_probabilities(&config, alpha)?;
        for i in 0..p.len() {
            if let Some(sel) = &args.select {
                if !sel.contains(&i) {
                    continue;
                }
            }
            table.push(vec![
                Cell::Float(alpha),
                Cell::Int(i as i64),
                Cell::Float(p.get(i)),
                Cell::Float(reference.get(i)),
            ]);
        }
    }

    let mut manifest = RunManifest::new("sweep", None);
    common_params(&mut manifest, args.n, args.ell, args.a, args.b);
    manifest.param("alpha_points", args.alpha_points);
    if let Some(sel) = &args.select {
        let list: Vec<String> = sel.iter().map(|i| i.to_string()).collect();
        manifest.param("select", list.join(","));
    }
    Ok(CommandOutput {
        table,
        manifest,
        notes: Vec::new(),
        ok: true,
    })
}

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub n: u32,
    pub ell: f64,
    pub a: f64,
    pub b: f64,
    pub alpha: Angle,
    pub trials: u64,
    pub seed: u64,
    pub workers: usize,
    pub ci_method: CiMethod,
}

/// `simulate`: empirical law with confidence intervals and the joint
/// histogram; for odd `n` the exact values and z-scores ride along.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<CommandOutput> {
    let lattice = LatticeSpec::new(args.a, args.b, args.alpha.radians)?;
    let config = ThrowConfig::new(StarSpec::new(args.n, args.ell)?, lattice)?;
    let sim = SimConfig {
        throw_config: config,
        trials: args.trials,
        seed: args.seed,
        workers: args.workers,
        ci_method: args.ci_method,
    };
    let result = simulate(&sim)?;
    let exact = if args.n % 2 == 1 {
        Some(intersection_probabilities(&config, args.alpha.radians)?)
    } else {
        None
    };

    let mut table = Table::new(&["record", "i", "k", "m", "value", "ci99", "exact", "z"]);
    let trials_f = args.trials as f64;
    let mut worst_z: f64 = 0.0;
    for i in 0..result.p_hat.len() {
        let p_hat = result.p_hat.get(i);
        let (exact_cell, z_cell) = match &exact {
            Some(p) => {
                let sigma = (p.get(i) * (1.0 - p.get(i)) / trials_f).sqrt();
                let z = if sigma > 0.0 {
                    (p_hat - p.get(i)) / sigma
                } else {
                    0.0
                };
                worst_z = worst_z.max(z.abs());
                (Cell::Float(p.get(i)), Cell::Float(z))
            }
            None => (Cell::Empty, Cell::Empty),
        };
        table.push(vec![
            Cell::from("p"),
            Cell::Int(i as i64),
            Cell::Empty,
            Cell::Empty,
            Cell::Float(p_hat),
            Cell::Float(result.ci_half_width[i]),
            exact_cell,
            z_cell,
        ]);
    }

    // expectation check works for every n
    let mean = result.p_hat.mean_index();
    let expect = expected_intersections(&config);
    let variance: f64 = (0..result.p_hat.len())
        .map(|i| result.p_hat.get(i) * (i as f64 - mean).powi(2))
        .sum();
    let se = (variance / trials_f).sqrt();
    let mean_z = if se > 0.0 { (mean - expect) / se } else { 0.0 };
    table.push(vec![
        Cell::from("mean"),
        Cell::Empty,
        Cell::Empty,
        Cell::Empty,
        Cell::Float(mean),
        Cell::Float(Z_MEAN_CI * se),
        Cell::Float(expect),
        Cell::Float(mean_z),
    ]);

    let joint = joint_from_result(&result, &config);
    for k in 0..=joint.m_max() {
        for m in 0..=joint.m_max() {
            table.push(vec![
                Cell::from("joint"),
                Cell::Empty,
                Cell::Int(k as i64),
                Cell::Int(m as i64),
                Cell::Float(joint.get(k, m)),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]);
        }
    }

    let mut manifest = RunManifest::new("simulate", Some(args.seed));
    common_params(&mut manifest, args.n, args.ell, args.a, args.b);
    manifest
        .param("alpha", &args.alpha.raw)
        .param("alpha_radians", args.alpha.radians)
        .param("trials", args.trials)
        .param("workers", args.workers)
        .param(
            "ci_method",
            match args.ci_method {
                CiMethod::Normal => "normal",
                CiMethod::ClopperPearson => "clopper-pearson",
            },
        );

    let mut notes = vec![format!(
        "expectation check: empirical mean = {mean:.6}, exact = {expect:.6}, z = {mean_z:>+.3}"
    )];
    if exact.is_some() {
        notes.push(format!("max |z| against the exact law: {worst_z:.3}"));
    }
    Ok(CommandOutput {
        table,
        manifest,
        notes,
        ok: true,
    })
}

const Z_MEAN_CI: f64 = 2.576;

#[derive(Debug, Clone)]
pub struct LimitArgs {
    pub lambda: f64,
    pub mu: f64,
    pub n_list: Vec<u32>,
    pub alphas: Vec<Angle>,
    pub grid: usize,
}

/// How many CDF sample rows each `(n, alpha)` pair contributes.
const CDF_SAMPLES: usize = 241;

/// `limit`: sampled finite and limit CDFs for every `(n, alpha)` pair
/// plus sup-distance rows; the limit column is angle-free by
/// construction.
pub fn cmd_limit(args: &LimitArgs) -> Result<CommandOutput> {
    let params = LimitParams::new(args.lambda, args.mu)?;
    if args.grid < 1_000 {
        return Err(Error::GridTooSmall {
            given: args.grid,
            minimum: 1_000,
        });
    }
    let mut table = Table::new(&[
        "record",
        "n",
        "alpha",
        "xi",
        "f_n",
        "f_limit",
        "sup_distance",
    ]);
    for &n in &args.n_list {
        let star = StarSpec::new(n, 1.0)?;
        for angle in &args.alphas {
            let fold = fold_angle(star, angle.radians)?;
            let p = ProbabilityVector::new(probabilities_from_params(
                n,
                args.lambda,
                args.mu,
                fold.effective,
                N3MiddleFormula::default(),
            ));
            let cdf = StepDistribution::from_probabilities(n, &p);
            for s in 0..CDF_SAMPLES {
                let xi = -0.1 + 1.2 * s as f64 / (CDF_SAMPLES - 1) as f64;
                table.push(vec![
                    Cell::from("cdf"),
                    Cell::Int(n as i64),
                    Cell::Float(angle.radians),
                    Cell::Float(xi),
                    Cell::Float(cdf.eval(xi)),
                    Cell::Float(limit_cdf(params, xi)),
                    Cell::Empty,
                ]);
            }
            let distance = sup_distance(&cdf, params, args.grid);
            table.push(vec![
                Cell::from("distance"),
                Cell::Int(n as i64),
                Cell::Float(angle.radians),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
                Cell::Float(distance),
            ]);
        }
    }

    let mut manifest = RunManifest::new("limit", None);
    let n_list: Vec<String> = args.n_list.iter().map(|n| n.to_string()).collect();
    let alphas: Vec<String> = args.alphas.iter().map(|a| a.raw.clone()).collect();
    manifest
        .param("lambda", args.lambda)
        .param("mu", args.mu)
        .param("n_list", n_list.join(","))
        .param("alpha_list", alphas.join(","))
        .param("grid", args.grid)
        .param("cdf_samples", CDF_SAMPLES);
    Ok(CommandOutput {
        table,
        manifest,
        notes: Vec::new(),
        ok: true,
    })
}
