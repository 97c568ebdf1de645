//! Closed-form intersection law for odd stars: the joint matrix
//! `P(E_{k,m})` of per-family counts, the total-count probabilities
//! `p(i, alpha)`, the angle folding that reduces any lattice angle to
//! `[0, pi/2n]`, and a quadrature oracle that recomputes the joint matrix
//! from the breadth functions without touching the closed forms.

use std::f64::consts::PI;

use crate::breadth::{breadth_value, width_value};
use crate::error::{Error, Result};
use crate::geometry::{max_intersections, StarSpec, ThrowConfig};
use crate::quad;

/// `sin x + alpha * cos x`; one of the two kernels every angle
/// coefficient is assembled from.
pub fn kernel_plus(x: f64, alpha: f64) -> f64 {
    x.sin() + alpha * x.cos()
}

/// `sin x - alpha * cos x`.
pub fn kernel_minus(x: f64, alpha: f64) -> f64 {
    x.sin() - alpha * x.cos()
}

/// A lattice angle folded into the fundamental domain `[0, pi/2n]` using
/// the `pi/n` periodicity and the mirror symmetry about `pi/2n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldedAngle {
    /// Angle as given.
    pub raw: f64,
    /// Folded value in `[0, pi/2n]`.
    pub effective: f64,
    /// Subtracted multiple of `pi/n`.
    pub shift: f64,
    /// Whether the `pi/n - x` reflection was applied after shifting.
    pub mirrored: bool,
}

/// Relative slack when deciding that an angle is an exact multiple of
/// `pi/n` (or sits exactly on the `pi/2n` mirror line). Tight enough that
/// only floating-point images of exact multiples snap.
const FOLD_SNAP: f64 = 1e-12;

/// Folds `alpha` into `[0, pi/2n]`. Any finite angle is accepted; values
/// outside `(0, pi/2]` fold by periodicity. Odd `n` only.
pub fn fold_angle(star: StarSpec, alpha: f64) -> Result<FoldedAngle> {
    ensure_odd(star)?;
    if !alpha.is_finite() {
        return Err(Error::NonFiniteAngle(alpha));
    }
    let n = star.n as f64;
    let period = PI / n;
    let half = period / 2.0;
    let turns = n * alpha / PI;
    let nearest = turns.round();
    let whole = if (turns - nearest).abs() <= FOLD_SNAP * nearest.abs().max(1.0) {
        nearest
    } else {
        turns.floor()
    };
    let shift = whole * period;
    let rem = (alpha - shift).max(0.0);
    if rem <= half * (1.0 + FOLD_SNAP) {
        Ok(FoldedAngle {
            raw: alpha,
            effective: rem.min(half),
            shift,
            mirrored: false,
        })
    } else {
        Ok(FoldedAngle {
            raw: alpha,
            effective: period - rem,
            shift,
            mirrored: true,
        })
    }
}

fn ensure_odd(star: StarSpec) -> Result<u32> {
    if star.n.is_multiple_of(2) || star.n < 3 {
        return Err(Error::UnsupportedNeedleCount(star.n));
    }
    Ok(max_intersections(star))
}

fn ensure_effective(star: StarSpec, alpha_eff: f64) -> Result<()> {
    let half = PI / (2.0 * star.n as f64);
    if !alpha_eff.is_finite() || alpha_eff < 0.0 || alpha_eff > half * (1.0 + 1e-9) {
        return Err(Error::EffectiveAngleRange(alpha_eff));
    }
    Ok(())
}

/// The ten angle coefficients weighting the `lambda*mu` coupling terms,
/// indexed 0..=9. `alpha_eff` must already be folded into `[0, pi/2n]`.
pub fn coupling_coeff(index: usize, alpha_eff: f64, star: StarSpec) -> Result<f64> {
    ensure_odd(star)?;
    ensure_effective(star, alpha_eff)?;
    if index > 9 {
        return Err(Error::CoefficientIndex(index));
    }
    Ok(coupling_coeffs(star, alpha_eff)[index])
}

/// All ten coefficients at once; callers have validated the inputs.
fn coupling_coeffs(star: StarSpec, a: f64) -> [f64; 10] {
    let n = star.n as f64;
    let t = PI / n;
    let half = t / 2.0;
    let gp = |x: f64| kernel_plus(x, a);
    let hm = |x: f64| kernel_minus(x, a);
    let cos_a = a.cos();
    // the three bracket combinations every coefficient reuses
    let base = t * cos_a + gp(t - a) + hm(a);
    let border = 2.0 * t * half.cos() * cos_a + gp(3.0 * half - a) - gp(half - a) + hm(half + a);
    let tip = gp(half - a);
    let sin_t = t.sin();
    let sin2_half = half.sin() * half.sin();
    let cos2_half = half.cos() * half.cos();
    [
        2.0 * base * cos2_half,
        base * sin_t,
        border * sin_t,
        tip * sin_t,
        base * sin2_half,
        border * sin2_half,
        tip * sin2_half,
        t * (3.0 - 2.0 * (2.0 * t).cos()) * cos_a - gp(3.0 * t - a) + 3.0 * gp(2.0 * t - a)
            - gp(t - a)
            + 7.0 * hm(a)
            - hm(t + a)
            - hm(2.0 * t + a),
        -t * cos_a - gp(2.0 * t - a) + 2.0 * gp(t - a) - 4.0 * hm(a) + hm(t + a),
        t * cos_a - gp(t - a) + 3.0 * hm(a),
    ]
}

/// Exact joint law of the two per-family intersection counts,
/// `(M+1) x (M+1)` entries `P(E_{k,m})`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointMatrix {
    entries: Vec<f64>,
    dim: usize,
    pub config: ThrowConfig,
    /// Angle the entries were evaluated at (folded for the closed forms;
    /// raw for empirical matrices from the simulator).
    pub alpha_eff: f64,
}

impl JointMatrix {
    pub(crate) fn from_entries(
        entries: Vec<f64>,
        dim: usize,
        config: ThrowConfig,
        alpha_eff: f64,
    ) -> Self {
        debug_assert_eq!(entries.len(), dim * dim);
        Self {
            entries,
            dim,
            config,
            alpha_eff,
        }
    }

    /// Highest per-family count represented, `M`.
    pub fn m_max(&self) -> u32 {
        (self.dim - 1) as u32
    }

    pub fn get(&self, k: u32, m: u32) -> f64 {
        self.entries[k as usize * self.dim + m as usize]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().sum()
    }

    /// Total-count probabilities by summing anti-diagonals,
    /// `p(i) = sum_k P(E_{k, i-k})`.
    pub fn diagonal_sums(&self) -> ProbabilityVector {
        let m = self.dim - 1;
        let mut p = vec![0.0; 2 * m + 1];
        for (i, slot) in p.iter_mut().enumerate() {
            let lo = i.saturating_sub(m);
            let hi = i.min(m);
            for k in lo..=hi {
                *slot += self.entries[k * self.dim + (i - k)];
            }
        }
        ProbabilityVector { values: p }
    }

    pub fn transposed(&self) -> JointMatrix {
        let mut entries = vec![0.0; self.dim * self.dim];
        for k in 0..self.dim {
            for m in 0..self.dim {
                entries[m * self.dim + k] = self.entries[k * self.dim + m];
            }
        }
        JointMatrix {
            entries,
            dim: self.dim,
            config: self.config,
            alpha_eff: self.alpha_eff,
        }
    }

    /// Largest absolute entry difference against another matrix of the
    /// same shape.
    pub fn max_abs_diff(&self, other: &JointMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Closed-form joint matrix at a folded angle `alpha_eff` in `[0, pi/2n]`.
pub fn joint_matrix(config: &ThrowConfig, alpha_eff: f64) -> Result<JointMatrix> {
    joint_matrix_perturbed(config, alpha_eff, 1.0)
}

/// Closed-form joint matrix with a multiplicative perturbation on the
/// seventh coupling coefficient. Verification hook: `f7_scale = 1.0` is
/// the honest matrix, anything else must make the oracle comparison fail.
pub(crate) fn joint_matrix_perturbed(
    config: &ThrowConfig,
    alpha_eff: f64,
    f7_scale: f64,
) -> Result<JointMatrix> {
    config.validate()?;
    let star = config.star;
    let m_max = ensure_odd(star)?;
    ensure_effective(star, alpha_eff)?;

    let n = star.n as f64;
    let t = PI / n;
    let half = t / 2.0;
    let lambda = config.lambda();
    let mu = config.mu();
    let lm = lambda * mu;
    let mut f = coupling_coeffs(star, alpha_eff);
    f[7] *= f7_scale;

    // measure of offsets with >= 1 intersection against one family,
    // divided by that family's spacing
    let hit = |density: f64| 2.0 * n * density / PI * t.sin();
    // same for the two boundary multiplicities
    let near_max_lin =
        |density: f64| 4.0 * n * density / PI * (half.cos() - (0.75 * t).cos().powi(2));
    let max_lin = |density: f64| 4.0 * n * density / PI * (t / 4.0).sin().powi(2);
    let mid_lin =
        |density: f64, i: u32| 8.0 * n * density / PI * half.sin().powi(2) * (i as f64 * t).sin();

    let dim = m_max as usize + 1;
    let mut entries = vec![0.0; dim * dim];
    for k in 0..=m_max {
        for m in 0..=m_max {
            let v = match (role(k, m_max), role(m, m_max)) {
                (Role::Zero, Role::Zero) => 1.0 - (hit(lambda) + hit(mu) - n * lm / PI * f[0]),
                (Role::Zero, Role::Mid) => {
                    mid_lin(mu, m) - 2.0 * n * lm / PI * (m as f64 * t).sin() * f[1]
                }
                (Role::Mid, Role::Zero) => {
                    mid_lin(lambda, k) - 2.0 * n * lm / PI * (k as f64 * t).sin() * f[1]
                }
                (Role::Zero, Role::NearMax) => near_max_lin(mu) - n * lm / PI * f[2],
                (Role::NearMax, Role::Zero) => near_max_lin(lambda) - n * lm / PI * f[2],
                (Role::Zero, Role::Max) => max_lin(mu) - n * lm / PI * f[3],
                (Role::Max, Role::Zero) => max_lin(lambda) - n * lm / PI * f[3],
                (Role::Mid, Role::Mid) => {
                    8.0 * n * lm / PI * (k as f64 * t).sin() * (m as f64 * t).sin() * f[4]
                }
                (Role::Mid, Role::NearMax) => 4.0 * n * lm / PI * (k as f64 * t).sin() * f[5],
                (Role::NearMax, Role::Mid) => 4.0 * n * lm / PI * (m as f64 * t).sin() * f[5],
                (Role::Mid, Role::Max) => 4.0 * n * lm / PI * (k as f64 * t).sin() * f[6],
                (Role::Max, Role::Mid) => 4.0 * n * lm / PI * (m as f64 * t).sin() * f[6],
                (Role::NearMax, Role::NearMax) => n * lm / (2.0 * PI) * f[7],
                (Role::NearMax, Role::Max) | (Role::Max, Role::NearMax) => {
                    n * lm / (2.0 * PI) * f[8]
                }
                (Role::Max, Role::Max) => n * lm / (2.0 * PI) * f[9],
            };
            entries[k as usize * dim + m as usize] = v;
        }
    }
    Ok(JointMatrix::from_entries(entries, dim, *config, alpha_eff))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Role {
    Zero,
    Mid,
    NearMax,
    Max,
}

fn role(i: u32, m_max: u32) -> Role {
    if i == 0 {
        Role::Zero
    } else if i == m_max {
        Role::Max
    } else if i == m_max - 1 {
        Role::NearMax
    } else {
        Role::Mid
    }
}

/// Closed-form joint matrix at an arbitrary finite angle.
///
/// Every breadth function is even about the star's half-rotation axis, so
/// each entry is invariant under the mirror `alpha -> pi/n - alpha`; the
/// folded angle alone determines the matrix. (Swapping the two families
/// transposes the matrix together with the densities; the zero-borders
/// carry the densities, so a bare transpose is not an identity.)
pub fn joint_matrix_at(config: &ThrowConfig, alpha: f64) -> Result<JointMatrix> {
    let fold = fold_angle(config.star, alpha)?;
    joint_matrix(config, fold.effective)
}

/// Joint matrix by direct numerical integration of the breadth products
/// over one rotation period, split at the branch breakpoints. Accepts any
/// finite angle (reduced mod `pi/n`); entry-wise error stays below
/// `quadrature_tol`.
pub fn joint_matrix_oracle(
    config: &ThrowConfig,
    alpha: f64,
    quadrature_tol: f64,
) -> Result<JointMatrix> {
    config.validate()?;
    let star = config.star;
    let m_max = ensure_odd(star)?;
    if !alpha.is_finite() {
        return Err(Error::NonFiniteAngle(alpha));
    }

    let n = star.n as f64;
    let period = PI / n;
    let half = period / 2.0;
    let alpha_r = alpha.rem_euclid(period);
    let (a, b) = (config.lattice.a, config.lattice.b);

    // breakpoints: where phi or phi + alpha crosses a multiple of pi/2n
    let mut cuts = vec![0.0, period];
    cuts.push(half);
    for j in 0..4 {
        let c = (j as f64 * half - alpha_r).rem_euclid(period);
        if c > 1e-14 && c < period - 1e-14 {
            cuts.push(c);
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() < 1e-14);

    let pieces = cuts.len() - 1;
    let scale = n / (PI * a * b);
    let raw_tol = quadrature_tol / (scale * pieces as f64);

    let along_a = |k: u32, phi: f64| {
        if k == 0 {
            a - width_value(star, phi)
        } else {
            breadth_value(star, k, phi)
        }
    };
    let along_b = |m: u32, phi: f64| {
        if m == 0 {
            b - width_value(star, phi)
        } else {
            breadth_value(star, m, phi)
        }
    };

    let dim = m_max as usize + 1;
    let mut entries = vec![0.0; dim * dim];
    for k in 0..=m_max {
        for m in 0..=m_max {
            let integrand = |phi: f64| along_a(k, phi) * along_b(m, phi + alpha_r);
            let mut total = 0.0;
            for w in cuts.windows(2) {
                total += quad::integrate(&integrand, w[0], w[1], raw_tol)?;
            }
            entries[k as usize * dim + m as usize] = total * scale;
        }
    }
    Ok(JointMatrix::from_entries(entries, dim, *config, alpha_r))
}

/// Probabilities of exactly `i` total intersections, `i = 0..=2M`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    values: Vec<f64>,
}

impl ProbabilityVector {
    pub(crate) fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// Expected total count, `sum_i i * p(i)`.
    pub fn mean_index(&self) -> f64 {
        self.values
            .iter()
            .enumerate()
            .map(|(i, p)| i as f64 * p)
            .sum()
    }
}

/// The two published candidates for the probability of exactly `M` total
/// intersections when `n = 3`; they disagree by a `sin(pi/n)` weight on
/// the seventh coupling coefficient. `Bracketed` is the one the
/// quadrature oracle endorses (see the `verify` report); `SinWeighted` is
/// kept so the verification can demonstrate the rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum N3MiddleFormula {
    #[default]
    Bracketed,
    SinWeighted,
}

/// Total-count law at any finite angle (folds internally). Odd `n` only;
/// even `n` is the simulator's job.
pub fn intersection_probabilities(config: &ThrowConfig, alpha: f64) -> Result<ProbabilityVector> {
    intersection_probabilities_with(config, alpha, N3MiddleFormula::default())
}

/// Same, with an explicit choice of the contested `n = 3` branch.
pub fn intersection_probabilities_with(
    config: &ThrowConfig,
    alpha: f64,
    formula: N3MiddleFormula,
) -> Result<ProbabilityVector> {
    config.validate()?;
    let fold = fold_angle(config.star, alpha)?;
    Ok(ProbabilityVector::new(probabilities_from_params(
        config.star.n,
        config.lambda(),
        config.mu(),
        fold.effective,
        formula,
    )))
}

/// Branch evaluation with explicit densities; `distributions` reuses this
/// with one family switched off. `alpha_eff` must be folded already.
pub(crate) fn probabilities_from_params(
    n_needles: u32,
    lambda: f64,
    mu: f64,
    alpha_eff: f64,
    formula: N3MiddleFormula,
) -> Vec<f64> {
    let star = StarSpec {
        n: n_needles,
        ell: 1.0,
    };
    let m_max = max_intersections(star) as usize;
    let n = n_needles as f64;
    let t = PI / n;
    let f = coupling_coeffs(star, alpha_eff);
    let lm = lambda * mu;
    let both = lambda + mu;

    // the partial sine-product sum that closes the interior branches
    let comb = |i: usize| {
        let x = i as f64 * t;
        t.cos() / t.sin() * x.sin() - i as f64 * x.cos()
    };

    let mut p = vec![0.0; 2 * m_max + 1];
    for (i, slot) in p.iter_mut().enumerate() {
        *slot = if i == 0 {
            1.0 - (2.0 * n * both / PI * t.sin() - n * lm / PI * f[0])
        } else if n_needles == 3 {
            match i {
                1 => near_max_total(n, both, lm, t, &f, comb(1)),
                2 => {
                    let linear = 4.0 * n * both / PI * (t / 4.0).sin().powi(2);
                    match formula {
                        N3MiddleFormula::Bracketed => {
                            linear - n * lm / (2.0 * PI) * (4.0 * f[3] - f[7])
                        }
                        N3MiddleFormula::SinWeighted => {
                            linear - 2.0 * n * lm / PI * f[3] + n * lm / (2.0 * PI) * f[7] * t.sin()
                        }
                    }
                }
                3 => n * lm / PI * f[8],
                _ => n * lm / (2.0 * PI) * f[9],
            }
        } else if i <= m_max - 2 {
            8.0 * n * both / PI * (t / 2.0).sin().powi(2) * (i as f64 * t).sin()
                - 4.0 * n * lm / PI * (f[1] * (i as f64 * t).sin() - f[4] * comb(i))
        } else if i == m_max - 1 {
            near_max_total(n, both, lm, t, &f, comb(i))
        } else if i == m_max {
            let brace = (n - 5.0) * (t / 2.0).sin() + 2.0 / t.sin() * (2.5 * t).cos();
            4.0 * n * both / PI * (t / 4.0).sin().powi(2)
                - 2.0 * n * lm / PI * (f[3] - 4.0 * f[5] * t.sin() - f[4] * brace)
        } else if i == 2 * m_max {
            n * lm / (2.0 * PI) * f[9]
        } else if i == 2 * m_max - 1 {
            n * lm / PI * f[8]
        } else if i == 2 * m_max - 2 {
            n * lm / (2.0 * PI) * (16.0 * f[6] * (1.5 * t).cos() + f[7])
        } else {
            // M+1 ..= 2M-3
            let away = (2 * m_max - i - 3) as f64;
            4.0 * n * lm / PI
                * (2.0 * f[6] * ((i - m_max) as f64 * t).sin()
                    + 2.0 * f[5] * ((i + 1 - m_max) as f64 * t).sin()
                    - f[4] * (away * (i as f64 * t).cos() - (away * t).sin() / t.sin()))
        };
    }
    p
}

fn near_max_total(n: f64, both: f64, lm: f64, t: f64, f: &[f64; 10], comb: f64) -> f64 {
    4.0 * n * both / PI * ((t / 2.0).cos() - (0.75 * t).cos().powi(2))
        - 2.0 * n * lm / PI * (f[2] - 2.0 * f[4] * comb)
}

/// Probability of at least one intersection; complements `p(0)` exactly.
pub fn at_least_one_probability(config: &ThrowConfig, alpha: f64) -> Result<f64> {
    config.validate()?;
    let fold = fold_angle(config.star, alpha)?;
    let star = config.star;
    let n = star.n as f64;
    let t = PI / n;
    let f0 = coupling_coeffs(star, fold.effective)[0];
    Ok(2.0 * n * (config.lambda() + config.mu()) / PI * t.sin()
        - n * config.lambda() * config.mu() / PI * f0)
}

/// Expected total number of intersections, `2n(lambda+mu)/pi`;
/// independent of the lattice angle.
pub fn expected_intersections(config: &ThrowConfig) -> f64 {
    2.0 * config.star.n as f64 * (config.lambda() + config.mu()) / PI
}
