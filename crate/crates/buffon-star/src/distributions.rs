//! Distribution functions of the relative intersection count: the finite
//! step law, the per-family marginals and their independent convolution,
//! the closed-form limit law, and sup-distance diagnostics.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exact::{
    fold_angle, intersection_probabilities, probabilities_from_params, N3MiddleFormula,
    ProbabilityVector,
};
use crate::geometry::ThrowConfig;
use crate::quad;

/// Right-continuous step CDF with jumps at `i/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepDistribution {
    jumps: Vec<f64>,
    cumulative: Vec<f64>,
}

impl StepDistribution {
    /// Builds the CDF of `count / n` from a probability vector over
    /// counts `0..=2M`; works for exact and empirical vectors alike.
    pub fn from_probabilities(n: u32, p: &ProbabilityVector) -> Self {
        let mut cumulative = Vec::with_capacity(p.len());
        let mut acc = 0.0;
        for i in 0..p.len() {
            acc += p.get(i);
            cumulative.push(acc);
        }
        let jumps = (0..p.len()).map(|i| i as f64 / n as f64).collect();
        Self { jumps, cumulative }
    }

    pub fn jump_points(&self) -> &[f64] {
        &self.jumps
    }

    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// F(xi): 0 below the first jump, exactly 1 at and beyond the last.
    pub fn eval(&self, xi: f64) -> f64 {
        if xi < self.jumps[0] {
            return 0.0;
        }
        if xi >= *self.jumps.last().unwrap() {
            return 1.0;
        }
        let idx = self.jumps.partition_point(|&j| j <= xi) - 1;
        self.cumulative[idx]
    }

    /// Left limit F(xi-).
    pub fn eval_left(&self, xi: f64) -> f64 {
        if xi <= self.jumps[0] {
            return 0.0;
        }
        if xi > *self.jumps.last().unwrap() {
            return 1.0;
        }
        let idx = self.jumps.partition_point(|&j| j < xi);
        if idx == 0 {
            0.0
        } else {
            self.cumulative[idx - 1]
        }
    }
}

/// Step CDF of the relative count for odd `n`, from the exact law.
pub fn finite_cdf(config: &ThrowConfig, alpha: f64) -> Result<StepDistribution> {
    let p = intersection_probabilities(config, alpha)?;
    Ok(StepDistribution::from_probabilities(config.star.n, &p))
}

/// Which line family a marginal refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    A,
    B,
}

/// Marginal law of one family's count: the exact law with the other
/// family's density set to zero. Entries beyond `M` vanish and the result
/// does not depend on the angle.
pub fn marginal_probabilities(
    config: &ThrowConfig,
    alpha: f64,
    family: Family,
) -> Result<ProbabilityVector> {
    config.validate()?;
    let fold = fold_angle(config.star, alpha)?;
    let (lambda, mu) = match family {
        Family::A => (config.lambda(), 0.0),
        Family::B => (0.0, config.mu()),
    };
    Ok(ProbabilityVector::new(probabilities_from_params(
        config.star.n,
        lambda,
        mu,
        fold.effective,
        N3MiddleFormula::default(),
    )))
}

/// Discrete convolution of the two marginals: the law the counts would
/// follow if the two families were independent. Differs from the true
/// joint law at finite `n`.
pub fn independent_convolution(config: &ThrowConfig, alpha: f64) -> Result<ProbabilityVector> {
    let pa = marginal_probabilities(config, alpha, Family::A)?;
    let pb = marginal_probabilities(config, alpha, Family::B)?;
    let len = pa.len();
    let mut out = vec![0.0; len];
    for (i, slot) in out.iter_mut().enumerate() {
        for k in 0..=i {
            *slot += pa.get(k) * pb.get(i - k);
        }
    }
    Ok(ProbabilityVector::new(out))
}

/// Densities of the limit law as the needle count grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitParams {
    pub lambda: f64,
    pub mu: f64,
}

impl LimitParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite())
            || !(mu >= 0.0 && mu.is_finite())
            || 2.0 * lambda.max(mu) > 1.0
        {
            return Err(Error::LimitParams { lambda, mu });
        }
        Ok(Self { lambda, mu })
    }
}

/// Limit CDF of one family's relative count: an atom of mass
/// `1 - 2*density` at zero, then `1 - 2*density*cos(pi*xi)` up to 1/2.
pub fn limit_marginal_cdf(params: LimitParams, family: Family, xi: f64) -> f64 {
    let density = match family {
        Family::A => params.lambda,
        Family::B => params.mu,
    };
    marginal_piece(density, xi)
}

fn marginal_piece(density: f64, xi: f64) -> f64 {
    if xi < 0.0 {
        0.0
    } else if xi < 0.5 {
        1.0 - 2.0 * density * (PI * xi).cos()
    } else {
        1.0
    }
}

/// Closed-form limit CDF of the total relative count; independent of the
/// lattice angle.
pub fn limit_cdf(params: LimitParams, xi: f64) -> f64 {
    let (l, m) = (params.lambda, params.mu);
    if xi < 0.0 {
        0.0
    } else if xi < 0.5 {
        let c = (PI * xi).cos();
        1.0 - 2.0 * (l + m) * c - 2.0 * l * m * (PI * xi * (PI * xi).sin() - 2.0 * c)
    } else if xi < 1.0 {
        1.0 - 2.0 * l * m * PI * (1.0 - xi) * (PI * xi).sin()
    } else {
        1.0
    }
}

fn limit_cdf_left(params: LimitParams, xi: f64) -> f64 {
    if xi <= 0.0 {
        0.0
    } else {
        limit_cdf(params, xi)
    }
}

/// Limit CDF recomputed as the Stieltjes convolution of the two marginal
/// limit laws. The B-family measure is an atom of mass `1 - 2*mu` at zero
/// plus the density `2*pi*mu*sin(pi*eta)` on `(0, 1/2)`; the atom is added
/// explicitly and the density part is integrated adaptively, split where
/// the A marginal kinks.
pub fn limit_cdf_convolution(params: LimitParams, xi: f64, tol: f64) -> Result<f64> {
    let (l, m) = (params.lambda, params.mu);
    let atom = (1.0 - 2.0 * m) * marginal_piece(l, xi);
    let mut cuts = vec![0.0, 0.5];
    for c in [xi - 0.5, xi] {
        if c > 1e-12 && c < 0.5 - 1e-12 {
            cuts.push(c);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let integrand = |eta: f64| marginal_piece(l, xi - eta) * 2.0 * PI * m * (PI * eta).sin();
    let mut total = atom;
    for w in cuts.windows(2) {
        // the A marginal jumps where its argument hits zero, i.e. exactly
        // at a cut; pull the endpoints inside the piece so the quadrature
        // only ever samples one smooth branch (the skipped slivers carry
        // O(1e-12) mass, far below any tolerance used here)
        let nudge = 1e-13 * (w[1] - w[0]);
        total += quad::integrate(
            &integrand,
            w[0] + nudge,
            w[1] - nudge,
            tol / cuts.len() as f64,
        )?;
    }
    Ok(total)
}

/// Largest deviation between a finite step law and the limit law over a
/// uniform grid on [-0.1, 1.1] plus both one-sided values at every jump.
pub fn sup_distance(finite: &StepDistribution, params: LimitParams, grid: usize) -> f64 {
    assert!(
        grid >= 1_000,
        "sup_distance needs at least 10^3 grid points"
    );
    let (lo, hi) = (-0.1, 1.1);
    let mut best: f64 = 0.0;
    for i in 0..grid {
        let xi = lo + (hi - lo) * i as f64 / (grid - 1) as f64;
        best = best.max((finite.eval(xi) - limit_cdf(params, xi)).abs());
    }
    for &xi in finite.jump_points() {
        best = best.max((finite.eval(xi) - limit_cdf(params, xi)).abs());
        best = best.max((finite.eval_left(xi) - limit_cdf_left(params, xi)).abs());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{LatticeSpec, StarSpec};
    use approx::assert_abs_diff_eq;

    fn config(n: u32, lambda: f64, mu: f64) -> ThrowConfig {
        ThrowConfig::new(
            StarSpec::new(n, 1.0).unwrap(),
            LatticeSpec::new(1.0 / lambda, 1.0 / mu, PI / 2.0).unwrap(),
        )
        .unwrap()
    }

    fn params() -> LimitParams {
        LimitParams::new(1.0 / 3.0, 0.25).unwrap()
    }

    #[test]
    fn finite_cdf_boundaries() {
        let cfg = config(5, 1.0 / 3.0, 0.25);
        let alpha = PI / 10.0;
        let cdf = finite_cdf(&cfg, alpha).unwrap();
        let p = intersection_probabilities(&cfg, alpha).unwrap();
        assert_eq!(cdf.eval(-0.1), 0.0);
        assert_eq!(cdf.eval(6.0 / 5.0), 1.0);
        assert_eq!(cdf.eval(2.0), 1.0);
        assert_abs_diff_eq!(cdf.eval(0.0), p.get(0), epsilon = 1e-16);
        // floor(5 * 0.3) = 1
        assert_abs_diff_eq!(cdf.eval(0.3), p.get(0) + p.get(1), epsilon = 1e-15);
        // step heights are the probabilities
        for i in 1..p.len() {
            assert_abs_diff_eq!(
                cdf.cumulative()[i] - cdf.cumulative()[i - 1],
                p.get(i),
                epsilon = 1e-16
            );
        }
    }

    #[test]
    fn step_left_limits() {
        let cfg = config(5, 1.0 / 3.0, 0.25);
        let cdf = finite_cdf(&cfg, PI / 10.0).unwrap();
        let p = intersection_probabilities(&cfg, PI / 10.0).unwrap();
        assert_eq!(cdf.eval_left(0.0), 0.0);
        assert_abs_diff_eq!(cdf.eval_left(0.2), p.get(0), epsilon = 1e-15);
        assert_abs_diff_eq!(cdf.eval_left(1.2), 1.0 - p.get(6), epsilon = 1e-15);
    }

    #[test]
    fn marginals_are_single_family_laws() {
        let cfg = config(5, 1.0 / 3.0, 0.25);
        let pa = marginal_probabilities(&cfg, 0.3, Family::A).unwrap();
        assert_abs_diff_eq!(pa.sum(), 1.0, epsilon = 1e-13);
        for i in 4..pa.len() {
            assert_eq!(pa.get(i), 0.0);
        }
        assert_abs_diff_eq!(
            pa.mean_index(),
            2.0 * 5.0 * (1.0 / 3.0) / PI,
            epsilon = 1e-10
        );
        // no angle dependence
        let pa2 = marginal_probabilities(&cfg, 1.2, Family::A).unwrap();
        for i in 0..pa.len() {
            assert_abs_diff_eq!(pa.get(i), pa2.get(i), epsilon = 1e-15);
        }
        let pb = marginal_probabilities(&cfg, 0.3, Family::B).unwrap();
        assert_abs_diff_eq!(pb.mean_index(), 2.0 * 5.0 * 0.25 / PI, epsilon = 1e-10);
    }

    #[test]
    fn joint_row_sums_are_single_family_marginals() {
        // summing the joint law over one family's count leaves the other
        // family's single-lattice law
        let cfg = config(7, 0.2, 0.15);
        let alpha = PI / 30.0;
        let jm = crate::exact::joint_matrix_at(&cfg, alpha).unwrap();
        let pa = marginal_probabilities(&cfg, alpha, Family::A).unwrap();
        let pb = marginal_probabilities(&cfg, alpha, Family::B).unwrap();
        for k in 0..=jm.m_max() {
            let row: f64 = (0..=jm.m_max()).map(|m| jm.get(k, m)).sum();
            let col: f64 = (0..=jm.m_max()).map(|m| jm.get(m, k)).sum();
            assert_abs_diff_eq!(row, pa.get(k as usize), epsilon = 1e-12);
            assert_abs_diff_eq!(col, pb.get(k as usize), epsilon = 1e-12);
        }
    }

    #[test]
    fn convolution_properties() {
        let cfg = config(5, 1.0 / 3.0, 0.25);
        let alpha = PI / 10.0;
        let conv = independent_convolution(&cfg, alpha).unwrap();
        let pa = marginal_probabilities(&cfg, alpha, Family::A).unwrap();
        let pb = marginal_probabilities(&cfg, alpha, Family::B).unwrap();
        assert_abs_diff_eq!(conv.sum(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(conv.get(0), pa.get(0) * pb.get(0), epsilon = 1e-15);
        // dependence at finite n: the convolution misses the true law
        let p = intersection_probabilities(&cfg, alpha).unwrap();
        let gap = (0..p.len())
            .map(|i| (conv.get(i) - p.get(i)).abs())
            .fold(0.0f64, f64::max);
        assert!(gap > 1e-6, "expected visible dependence, gap = {gap}");
    }

    #[test]
    fn limit_marginal_pieces() {
        let p = params();
        assert_abs_diff_eq!(
            limit_marginal_cdf(p, Family::A, 0.0),
            1.0 - 2.0 / 3.0,
            epsilon = 1e-15
        );
        assert_eq!(limit_marginal_cdf(p, Family::A, -1.0), 0.0);
        assert_eq!(limit_marginal_cdf(p, Family::A, 0.5), 1.0);
        // continuous at 1/2: cos(pi/2) = 0
        assert_abs_diff_eq!(
            limit_marginal_cdf(p, Family::A, 0.5 - 1e-9),
            1.0,
            epsilon = 1e-8
        );
    }

    #[test]
    fn limit_cdf_identities() {
        let p = params();
        assert_abs_diff_eq!(
            limit_cdf(p, 0.0),
            (1.0 - 2.0 * p.lambda) * (1.0 - 2.0 * p.mu),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            limit_cdf(p, 0.5),
            1.0 - PI * p.lambda * p.mu,
            epsilon = 1e-15
        );
        // both middle branches meet at 1/2
        let below = limit_cdf(p, 0.5 - 1e-12);
        assert_abs_diff_eq!(below, limit_cdf(p, 0.5), epsilon = 1e-10);
        assert_abs_diff_eq!(limit_cdf(p, 1.0 - 1e-12), 1.0, epsilon = 1e-10);
        assert_eq!(limit_cdf(p, 1.0), 1.0);
        assert_eq!(limit_cdf(p, -0.2), 0.0);
    }

    #[test]
    fn limit_cdf_is_nondecreasing() {
        let p = params();
        let mut last = -1.0;
        for i in 0..2000 {
            let v = limit_cdf(p, -0.1 + 1.2 * i as f64 / 1999.0);
            assert!(v >= last - 1e-15);
            last = v;
        }
    }

    #[test]
    fn limit_cdf_matches_convolution() {
        let p = params();
        for i in 0..=30 {
            let xi = -0.05 + 1.1 * i as f64 / 30.0;
            let conv = limit_cdf_convolution(p, xi, 1e-9).unwrap();
            assert_abs_diff_eq!(limit_cdf(p, xi), conv, epsilon = 1e-6);
        }
    }

    #[test]
    fn limit_params_validation() {
        assert!(LimitParams::new(0.6, 0.1).is_err());
        assert!(LimitParams::new(0.0, 0.1).is_err());
        assert!(LimitParams::new(0.3, -0.1).is_err());
        assert!(LimitParams::new(0.5, 0.5).is_ok());
    }

    #[test]
    fn sup_distance_decreases_quickly() {
        let p = params();
        let d5 = sup_distance(
            &finite_cdf(&config(5, p.lambda, p.mu), PI / 20.0).unwrap(),
            p,
            2000,
        );
        let d9 = sup_distance(
            &finite_cdf(&config(9, p.lambda, p.mu), PI / 20.0).unwrap(),
            p,
            2000,
        );
        assert!(d9 < d5, "d9 = {d9}, d5 = {d5}");
        // frozen from an independent evaluation
        assert_abs_diff_eq!(d5, 0.165_25, epsilon = 2e-4);
        assert_abs_diff_eq!(d9, 0.098_70, epsilon = 2e-4);
    }
}
